"""Truncated q-expansions with exact coefficients.

A :class:`QExpansion` knows its coefficients for exponents ``0..prec``
inclusive. Coefficients are either all :class:`~fractions.Fraction` (rational
ring) or all plain ints in ``[0, m)`` (ring ``Z/m``). Binary operations
truncate to the smaller precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from pathlib import Path

from .errors import DenominatorNotInvertible, FormatError, RingMismatch, SupportViolation
from .exactnum import Residue, format_rational


@dataclass(frozen=True, slots=True)
class QExpansion:
    coeffs: tuple
    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is None:
            coeffs = tuple(Fraction(c) for c in self.coeffs)
        else:
            if self.modulus < 2:
                raise ValueError(f"modulus must be >= 2, got {self.modulus}")
            coeffs = tuple(_to_residue_int(c, self.modulus) for c in self.coeffs)
        if not coeffs:
            raise ValueError("a q-expansion needs at least the constant term")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, prec: int, modulus: int | None = None) -> "QExpansion":
        return cls((0,) * (prec + 1), modulus)

    @classmethod
    def from_dict(cls, terms: dict[int, object], prec: int, modulus=None) -> "QExpansion":
        coeffs = [0] * (prec + 1)
        for n, c in terms.items():
            if n <= prec:
                coeffs[n] = c
        return cls(tuple(coeffs), modulus)

    @property
    def prec(self) -> int:
        return len(self.coeffs) - 1

    @property
    def ring(self) -> str:
        return "rational" if self.modulus is None else f"mod {self.modulus}"

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, prec: int) -> "QExpansion":
        if prec >= self.prec:
            return self
        return QExpansion(self.coeffs[: prec + 1], self.modulus)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support(self) -> list[int]:
        return [n for n, c in enumerate(self.coeffs) if c]

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __neg__(self):
        return scale(self, -1)

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if self.prec > 5 else ""
        return f"QExpansion(prec={self.prec}, ring={self.ring}, [{head}{more}])"


def _to_residue_int(c, m: int) -> int:
    if isinstance(c, Residue):
        if c.modulus != m:
            raise RingMismatch(f"residue mod {c.modulus} in a series mod {m}")
        return c.value
    if isinstance(c, Fraction) and c.denominator != 1:
        return Residue.of(c, m).value
    return int(c) % m


def _check_same_ring(g1: QExpansion, g2: QExpansion) -> None:
    if g1.modulus != g2.modulus:
        raise RingMismatch(f"cannot combine series over {g1.ring} and {g2.ring}")


def add(g1: QExpansion, g2: QExpansion) -> QExpansion:
    _check_same_ring(g1, g2)
    return QExpansion(tuple(a + b for a, b in zip(g1.coeffs, g2.coeffs)), g1.modulus)


def sub(g1: QExpansion, g2: QExpansion) -> QExpansion:
    _check_same_ring(g1, g2)
    return QExpansion(tuple(a - b for a, b in zip(g1.coeffs, g2.coeffs)), g1.modulus)


def scale(g: QExpansion, c) -> QExpansion:
    """Multiply every coefficient by ``c`` (int, Fraction, or Residue)."""
    if g.modulus is None:
        if isinstance(c, Residue):
            raise RingMismatch("cannot scale a rational series by a residue")
        c = Fraction(c)
        return QExpansion(tuple(a * c for a in g.coeffs))
    m = g.modulus
    c = Residue.of(c, m).value
    return QExpansion(tuple(a * c % m for a in g.coeffs), m)


def dilate(g: QExpansion, s: int) -> QExpansion:
    """Return ``g(q^s)`` at the same precision."""
    if s < 2:
        raise ValueError(f"dilation factor must be >= 2, got {s}")
    coeffs = [0] * (g.prec + 1)
    for k in range(g.prec // s + 1):
        coeffs[k * s] = g.coeffs[k]
    return QExpansion(tuple(coeffs), g.modulus)


def extract(d: QExpansion, s: int) -> QExpansion:
    """Return ``h`` with ``h(q^s) = d(q)``, at precision ``prec // s``.

    Raises SupportViolation at the smallest positive exponent not divisible by
    ``s`` that carries a nonzero coefficient.
    """
    if s < 2:
        raise ValueError(f"extraction step must be >= 2, got {s}")
    for n in range(1, d.prec + 1):
        if n % s and d.coeffs[n]:
            raise SupportViolation(n, s)
    return QExpansion(d.coeffs[::s], d.modulus)


def reduce_mod(g: QExpansion, r: int) -> QExpansion:
    if g.modulus is not None:
        raise RingMismatch(f"reduce_mod expects a rational series, got {g.ring}")
    out = []
    for n, c in enumerate(g.coeffs):
        if gcd(c.denominator, r) != 1:
            raise DenominatorNotInvertible(n, c.denominator, r)
        out.append(c.numerator * pow(c.denominator, -1, r) % r)
    return QExpansion(tuple(out), r)


# -- text dump format ---------------------------------------------------------


def dumps(g: QExpansion, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {line}" for line in comment.splitlines())
    lines.append(f"prec={g.prec}")
    if g.modulus is None:
        lines.append("ring=rational")
        lines.extend(f"{n} {c.numerator}/{c.denominator}" for n, c in enumerate(g.coeffs))
    else:
        lines.append(f"ring=mod {g.modulus}")
        lines.extend(f"{n} {c}" for n, c in enumerate(g.coeffs))
    return "\n".join(lines) + "\n"


def loads(text: str, path=None) -> QExpansion:
    prec = None
    modulus = None
    ring_seen = False
    coeffs: dict[int, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("prec="):
            try:
                prec = int(line[5:])
            except ValueError:
                raise FormatError(f"bad precision {line[5:]!r}", lineno, path) from None
            if prec < 0:
                raise FormatError("precision must be non-negative", lineno, path)
            continue
        if line.startswith("ring="):
            spec = line[5:].split()
            if spec == ["rational"]:
                modulus = None
            elif len(spec) == 2 and spec[0] == "mod" and spec[1].isdigit() and int(spec[1]) >= 2:
                modulus = int(spec[1])
            else:
                raise FormatError(f"unknown ring {line[5:]!r}", lineno, path)
            ring_seen = True
            continue
        if prec is None or not ring_seen:
            raise FormatError("coefficient line before prec=/ring= header", lineno, path)
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"expected '<n> <coefficient>', got {line!r}", lineno, path)
        try:
            n = int(parts[0])
            value = Fraction(parts[1]) if modulus is None else int(parts[1])
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"unparsable coefficient line {line!r}", lineno, path) from None
        if not 0 <= n <= prec:
            raise FormatError(f"exponent {n} outside 0..{prec}", lineno, path)
        if n in coeffs:
            raise FormatError(f"duplicate exponent {n}", lineno, path)
        if modulus is not None and not 0 <= value < modulus:
            raise FormatError(f"residue {value} outside [0, {modulus})", lineno, path)
        coeffs[n] = value
    if prec is None or not ring_seen:
        raise FormatError("missing prec= or ring= header", None, path)
    missing = [n for n in range(prec + 1) if n not in coeffs]
    if missing:
        raise FormatError(f"missing coefficient for exponent {missing[0]}", None, path)
    return QExpansion(tuple(coeffs[n] for n in range(prec + 1)), modulus)


def save(g: QExpansion, path, comment: str | None = None) -> None:
    Path(path).write_text(dumps(g, comment))


def load(path) -> QExpansion:
    return loads(Path(path).read_text(), path=str(path))


def format_coeff(c) -> str:
    return format_rational(c) if isinstance(c, Fraction) else str(c)
