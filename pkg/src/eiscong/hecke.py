"""Weight-2 Hecke operators acting on truncated q-expansions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, prod

from .errors import PrecisionTooSmall
from .exactnum import Residue, is_prime, prime_factors
from .qseries import QExpansion


@dataclass(frozen=True)
class HeckeOp:
    """T(ell) for ell not dividing the level, U(p) for p dividing it."""

    kind: str
    prime: int
    level: int

    def __post_init__(self):
        if self.kind not in ("T", "U"):
            raise ValueError(f"unknown Hecke operator kind {self.kind!r}")
        if not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        divides = self.level % self.prime == 0
        if self.kind == "T" and divides:
            raise ValueError(f"T_{self.prime} needs {self.prime} coprime to level {self.level}")
        if self.kind == "U" and not divides:
            raise ValueError(f"U_{self.prime} needs {self.prime} dividing level {self.level}")

    @classmethod
    def T(cls, ell: int, level: int) -> "HeckeOp":
        return cls("T", ell, level)

    @classmethod
    def U(cls, p: int, level: int) -> "HeckeOp":
        return cls("U", p, level)

    @classmethod
    def at(cls, ell: int, level: int) -> "HeckeOp":
        """T or U at ``ell``, whichever the level calls for."""
        return cls("U" if level % ell == 0 else "T", ell, level)

    def __str__(self):
        return f"{self.kind}_{self.prime}"


def apply(op: HeckeOp, g: QExpansion) -> QExpansion:
    ell = op.prime
    if g.prec < ell:
        raise PrecisionTooSmall(f"{op} needs precision >= {ell}, series has {g.prec}")
    out_prec = g.prec // ell
    a = g.coeffs
    if op.kind == "U":
        return QExpansion(tuple(a[n * ell] for n in range(out_prec + 1)), g.modulus)
    coeffs = [(1 + ell) * a[0]]
    for n in range(1, out_prec + 1):
        c = a[n * ell]
        if n % ell == 0:
            c = c + ell * a[n // ell]
        coeffs.append(c)
    return QExpansion(tuple(coeffs), g.modulus)


def check_eigen(op: HeckeOp, g: QExpansion, eigenvalue) -> tuple[bool, int | None]:
    """Compare ``op(g)`` against ``eigenvalue * g`` on the precision ``op(g)`` keeps.

    Positive indices are scanned before the constant term, so when a mismatch
    exists among them the reported index is the first such one. Returns
    ``(True, None)`` on success and ``(False, n)`` otherwise.
    """
    image = apply(op, g)
    if g.modulus is None:
        lam = Fraction(eigenvalue)
    else:
        lam = Residue.of(eigenvalue, g.modulus).value
    m = g.modulus
    for n in list(range(1, image.prec + 1)) + [0]:
        expected = lam * g.coeffs[n]
        if m is not None:
            expected %= m
        if image.coeffs[n] != expected:
            return False, n
    return True, None


def sturm_bound(N: int) -> int:
    """Weight-2 Sturm bound ``ceil((N/6) * prod_{p | N} (1 + 1/p))`` for Gamma_0(N)."""
    if N < 1:
        raise ValueError("level must be positive")
    index = N * prod(Fraction(p + 1, p) for p in prime_factors(N))
    return ceil(index * 2 / 12)
