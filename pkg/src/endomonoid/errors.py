"""Exception hierarchy shared by the library and the CLI."""


class EndomonoidError(Exception):
    """Base class for all library errors."""


class InputError(EndomonoidError):
    """Malformed or inconsistent user input (CLI exit code 2)."""


class ParseError(InputError):
    def __init__(self, message: str, pos: int | None = None, line: int | None = None):
        self.message = message
        self.pos = pos
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if pos is not None:
            where.append(f"position {pos}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class ContractViolation(InputError):
    """The monoid presentation does not satisfy its input contract."""


class CapacityError(EndomonoidError):
    """An exhaustive search would exceed the configured capacity (exit code 3)."""


class QuotientActionUndefined(EndomonoidError):
    """g^{(x)r} does not preserve S, so the action on the degree-r quotient is not defined."""


class NotInNormalizer(QuotientActionUndefined):
    """The matrix does not lie in the normalizer L(U)_S."""
