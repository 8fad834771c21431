"""Special mod-r forms and the level-lowering step.

A series g over Z/r is special at level M when, for every n >= 1,

    a_n(g) = sigma(core(n)) * prod_{p | M} (-1)^{ord_p(n)}   (mod r)

Two readings of ``core`` are supported. Variant "A" takes ``n / gcd(n, M)``
literally; variant "B" takes the part of n prime to M. They agree unless p^2
divides n for some p | M. Variant B is the default: it is the reading under
which a U_p-eigenform with a_p = -1 is special and under which lowering
preserves specialness exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd

from .eisenstein import DeltaChoice, build_eisenstein, claim_formula_coeff, eis_coeff
from .errors import DenominatorNotInvertible, PrimeNotMinusOne, RingMismatch
from .exactnum import (
    Residue,
    is_prime,
    is_squarefree,
    mod_inverse,
    ord_p,
    prime_factors,
    prime_to_part,
    reduce_rational,
    sigma,
)
from .qseries import QExpansion, extract, reduce_mod, scale, sub

VARIANTS = ("A", "B")


def special_coeff(n: int, M: int, variant: str = "B") -> int:
    """The integer whose residue a special form must carry at index n >= 1."""
    primes = prime_factors(M)
    core = n // gcd(n, M) if variant == "A" else prime_to_part(n, primes)
    sign = (-1) ** sum(ord_p(n, p) for p in primes)
    return sign * sigma(core)


@dataclass(frozen=True)
class SpecialReport:
    level: int
    modulus: int
    variant: str
    checked_range: int
    failures: tuple[tuple[int, int, int], ...] = field(default=())

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "modulus": self.modulus,
            "variant": self.variant,
            "range": self.checked_range,
            "pass": self.passed,
            "failures": [{"n": n, "found": a, "expected": b} for n, a, b in self.failures],
        }


def _check_variant(variant: str) -> str:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    return variant


def is_special(g: QExpansion, M: int, variant: str = "B", check_range: int | None = None) -> SpecialReport:
    if g.modulus is None:
        raise RingMismatch("is_special expects a series over Z/r")
    if M < 1 or not is_squarefree(M):
        raise ValueError(f"level {M} is not square-free")
    _check_variant(variant)
    if check_range is None:
        check_range = g.prec
    if check_range > g.prec:
        raise ValueError(f"range {check_range} exceeds series precision {g.prec}")
    r = g.modulus
    failures = []
    for n in range(1, check_range + 1):
        expected = special_coeff(n, M, variant) % r
        if g.coeffs[n] != expected:
            failures.append((n, g.coeffs[n], expected))
    return SpecialReport(M, r, variant, check_range, tuple(failures))


def _check_minus_one(M: int, r: int) -> None:
    for p in prime_factors(M):
        if (p + 1) % r:
            raise PrimeNotMinusOne(p, r)


def synth_special(M: int, r: int, prec: int, variant: str = "B") -> QExpansion:
    """Canonical special series at level M: coefficients given by the formula itself."""
    if not is_prime(r):
        raise ValueError(f"{r} is not prime")
    if M < 1 or not is_squarefree(M):
        raise ValueError(f"level {M} is not square-free")
    _check_variant(variant)
    _check_minus_one(M, r)
    return QExpansion((0,) + tuple(special_coeff(n, M, variant) for n in range(1, prec + 1)), r)


def lowering_eisenstein(M: int, s: int, prec: int) -> QExpansion:
    """Eisenstein series with U_s-eigenvalue 1 and U_p-eigenvalue p at the other p | M."""
    dc = DeltaChoice(M, {p: (1 if p == s else p) for p in prime_factors(M)})
    return build_eisenstein(dc, prec)


def lower_level(g: QExpansion, M: int, s: int, r: int, prec: int | None = None) -> QExpansion:
    """Produce g' at level M/s from a special form g at level M.

    g' = (E - g) extracted along q^s, then halved. Raises SupportViolation when
    E - g has a nonzero coefficient at an exponent prime to s, which means g
    was not special (or the primes of M/s are not -1 mod r).
    """
    if g.modulus != r:
        raise RingMismatch(f"series is over {g.ring}, expected mod {r}")
    if M % s or not is_prime(s):
        raise ValueError(f"{s} is not a prime dividing {M}")
    if prec is None:
        prec = g.prec
    if prec > g.prec:
        raise ValueError(f"requested precision {prec} exceeds series precision {g.prec}")
    if gcd(24, r) != 1:
        raise DenominatorNotInvertible(0, 24, r)
    E = reduce_mod(lowering_eisenstein(M, s, prec), r)
    h = extract(sub(E, g.truncate(prec)), s)
    return scale(h, mod_inverse(Residue(2, r)))


def claim_formula_differences(M: int, s: int, r: int, prec: int) -> list[tuple[int, int, int]]:
    """Indices n <= prec where the literal lowering formula differs mod r.

    Each entry is ``(n, eigenform coefficient mod r, literal formula mod r)``.
    """
    dc = DeltaChoice(M, {p: (1 if p == s else p) for p in prime_factors(M)})
    out = []
    for n in range(1, prec + 1):
        eig = reduce_rational(eis_coeff(dc, n), r)
        lit = claim_formula_coeff(M, s, n) % r
        if eig != lit:
            out.append((n, eig, lit))
    return out


def variant_divergence(g: QExpansion, M: int, check_range: int | None = None) -> dict:
    """Run both variants on g and localize where their verdicts differ."""
    rep_a = is_special(g, M, "A", check_range)
    rep_b = is_special(g, M, "B", check_range)
    fail_a = {n for n, _, _ in rep_a.failures}
    fail_b = {n for n, _, _ in rep_b.failures}
    primes = prime_factors(M)
    disagree = sorted(fail_a ^ fail_b)
    return {
        "A": rep_a,
        "B": rep_b,
        "disagreements": disagree,
        "all_at_higher_powers": all(
            any(n % (p * p) == 0 for p in primes) for n in disagree
        ),
    }


class R3Branch(str, Enum):
    UNIT_CONSTANT_TERM = "UnitConstantTerm"
    ZERO_CONSTANT_TERM = "ZeroConstantTerm"
    MOD9_CONSTRUCTION = "Mod9Construction"


@dataclass(frozen=True)
class R3Classification:
    p: int
    branch: R3Branch
    constant_term: Fraction
    modulus: int
    residue: int
    level: int | None = None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "branch": self.branch.value,
            "constant_term": f"{self.constant_term.numerator}/{self.constant_term.denominator}",
            "modulus": self.modulus,
            "residue": self.residue,
            "level": self.level,
        }


def classify_r3(p: int, level: int | None = None) -> R3Classification:
    """Which contradiction the residue-characteristic-3 argument reaches at prime level p.

    p = 1 mod 3 uses the constant term (p - 1)/24 modulo 3 (a unit unless
    p = 1 mod 9); p = 2 mod 3 uses (1 - p)/8 modulo 9.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 3:
        raise ValueError("p = 3 is excluded: the residue characteristic cannot divide the level")
    if p % 3 == 1:
        value = Fraction(p - 1, 24)
        residue = reduce_rational(value, 3)
        branch = R3Branch.UNIT_CONSTANT_TERM if p % 9 != 1 else R3Branch.ZERO_CONSTANT_TERM
        return R3Classification(p, branch, value, 3, residue, level)
    value = Fraction(1 - p, 8)
    return R3Classification(p, R3Branch.MOD9_CONSTRUCTION, value, 9, reduce_rational(value, 9), level)
