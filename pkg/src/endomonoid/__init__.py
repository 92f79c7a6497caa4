"""Exact computer algebra for realizing affine monoids as endomorphism monoids."""

from .algebras import AlgebraHandle, GammaVector, LinMap, build_D, build_truncated, is_endo
from .errors import (
    CapacityError,
    ContractViolation,
    EndomonoidError,
    InputError,
    NotInNormalizer,
    ParseError,
    QuotientActionUndefined,
)
from .fields import GF, QQ, Fp, PrimeField, RationalField
from .linalg import LabeledSpace, Mat, Subspace
from .multipoly import GroebnerBasis, Poly, buchberger, normal_form, parse_poly
from .pipeline import MonoidPresentation, Realization, VerificationReport, realize, verify
from .tensorspace import TruncationSpec

__version__ = "0.1.0"
