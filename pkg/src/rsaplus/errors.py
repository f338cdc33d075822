"""Exception hierarchy.

Every domain failure derives from :class:`RsaPlusError` so callers (and the
CLI) can tell a mathematical/protocol failure apart from a programming bug.
"""


class RsaPlusError(Exception):
    """Base class for all domain errors raised by this package."""


class NotInvertible(RsaPlusError):
    def __init__(self, a, modulus, gcd):
        super().__init__(f"{a} is not invertible modulo {modulus} (gcd={gcd})")
        self.a = a
        self.modulus = modulus
        self.gcd = gcd


class InvalidModulus(RsaPlusError):
    pass


class NotAResidue(RsaPlusError):
    pass


class WrongResidueClass(RsaPlusError):
    pass


class NotCoprime(RsaPlusError):
    pass


class Exhausted(RsaPlusError):
    pass


class RangeEmpty(RsaPlusError):
    pass


class NoInvertibleRoot(RsaPlusError):
    pass


class WrongKeyShape(RsaPlusError):
    pass


class InvalidKey(RsaPlusError):
    pass


class ParseError(RsaPlusError):
    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field


class DuplicatePrime(RsaPlusError):
    pass


class FactoringIncomplete(RsaPlusError):
    pass


class TrivialPair(RsaPlusError):
    pass


class BudgetExceeded(RsaPlusError):
    pass


class BadWitness(RsaPlusError):
    pass


class OracleFailure(RsaPlusError):
    pass


class RoundTripFailure(RsaPlusError):
    pass
