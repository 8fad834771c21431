"""Exception types raised across the package.

Everything derives from :class:`EiscongError` so the CLI can map any library
failure to the input/format exit code with a single ``except`` clause.
"""


class EiscongError(Exception):
    """Base class for all package errors."""


class NotAUnit(EiscongError, ArithmeticError):
    def __init__(self, value, modulus):
        self.value = value
        self.modulus = modulus
        super().__init__(f"{value} is not a unit modulo {modulus}")


class RingMismatch(EiscongError, TypeError):
    pass


class SupportViolation(EiscongError):
    """A coefficient sits at an exponent not divisible by the extraction step."""

    def __init__(self, n, step):
        self.n = n
        self.step = step
        super().__init__(f"nonzero coefficient at exponent {n}, not divisible by {step}")


class DenominatorNotInvertible(EiscongError, ArithmeticError):
    def __init__(self, n, den, modulus):
        self.n = n
        self.den = den
        self.modulus = modulus
        super().__init__(
            f"coefficient {n} has denominator {den}, not invertible modulo {modulus}"
        )


class PrecisionTooSmall(EiscongError):
    pass


class InvalidDeltaChoice(EiscongError, ValueError):
    pass


class CurveError(EiscongError, ValueError):
    """Inconsistent or unsupported Weierstrass model."""


class AdditiveReduction(CurveError):
    def __init__(self, p):
        self.p = p
        super().__init__(f"additive reduction at {p}: the curve is not semistable there")


class MissingPrime(EiscongError, KeyError):
    def __init__(self, ell):
        self.ell = ell
        super().__init__(ell)

    def __str__(self):
        return f"no coefficient for the prime {self.ell}"


class Inconclusive(EiscongError):
    pass


class PrimeNotMinusOne(EiscongError, ValueError):
    def __init__(self, p, r):
        self.p = p
        self.r = r
        super().__init__(f"prime {p} is not congruent to -1 modulo {r}")


class NoMinusSign(EiscongError):
    """Every Atkin-Lehner sign is +1, so no Eisenstein slot with U_p = 1 exists."""


class UnknownLevel(EiscongError, KeyError):
    def __init__(self, level):
        self.level = level
        super().__init__(level)

    def __str__(self):
        return f"no cuspidal order known for composite level {self.level}"


class FormatError(EiscongError, ValueError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
