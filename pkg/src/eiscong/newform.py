"""Newform coefficient data and the elliptic-curve oracle that produces it.

Coefficients either come from a newform file or are generated from an integral
Weierstrass model by counting points over F_ell. Point counting includes the
singular point at bad primes, which gives ``a_p = p + 1 - #E(F_p) = +-1``
directly for multiplicative reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from pathlib import Path

from .errors import AdditiveReduction, CurveError, FormatError, Inconclusive, MissingPrime
from .exactnum import factorize, is_prime, is_squarefree, prime_factors, primes_up_to
from .qseries import QExpansion

ORACLE_BOUND = 10_000

# Integral minimal models; coefficient tables are always regenerated from these.
FIXTURE_CURVES = {
    "11a1": ((0, -1, 1, -10, -20), 11),
    "14a1": ((1, 0, 1, 4, -6), 14),
    "15a1": ((1, 1, 1, -10, -10), 15),
    "26a1": ((1, 0, 1, -5, -8), 26),
    "26b1": ((1, -1, 1, -3, 3), 26),
    "99d1": ((1, -1, 1, -59, 186), 99),
}


@dataclass(frozen=True)
class WeierstrassCurve:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    conductor: int
    label: str = ""
    flagged_primes: tuple[int, ...] = field(default=(), init=False)

    def __post_init__(self):
        if self.conductor < 1:
            raise CurveError(f"conductor must be positive, got {self.conductor}")
        disc = self.discriminant
        if disc == 0:
            raise CurveError(f"curve {self.ainvs} is singular (discriminant 0)")
        for p in prime_factors(self.conductor):
            if disc % p:
                raise CurveError(
                    f"declared conductor {self.conductor} has {p}, "
                    f"but the model has good reduction there"
                )
        flagged = tuple(p for p in prime_factors(abs(disc)) if self.conductor % p)
        object.__setattr__(self, "flagged_primes", flagged)

    @classmethod
    def from_ainvs(cls, ainvs, conductor: int, label: str = "") -> "WeierstrassCurve":
        ainvs = tuple(int(a) for a in ainvs)
        if len(ainvs) != 5:
            raise CurveError(f"expected 5 a-invariants, got {len(ainvs)}")
        return cls(*ainvs, conductor=conductor, label=label)

    @classmethod
    def fixture(cls, label: str) -> "WeierstrassCurve":
        ainvs, N = FIXTURE_CURVES[label]
        return cls.from_ainvs(ainvs, N, label)

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def c_invariants(self) -> tuple[int, int]:
        b2, b4, b6, _ = self.b_invariants
        return b2 * b2 - 24 * b4, -(b2**3) + 36 * b2 * b4 - 216 * b6

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def is_good(self, ell: int) -> bool:
        return self.discriminant % ell != 0

    def ainvs_str(self) -> str:
        return ",".join(str(a) for a in self.ainvs)


def count_points(c: WeierstrassCurve, ell: int) -> int:
    """Projective points of the reduction mod ``ell``, singular point included."""
    a1, a2, a3, a4, a6 = (a % ell for a in c.ainvs)
    if ell == 2:
        total = 1
        for x in range(2):
            rhs = (x**3 + a2 * x * x + a4 * x + a6) % 2
            total += sum((y * y + a1 * x * y + a3 * y - rhs) % 2 == 0 for y in range(2))
        return total
    # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    b2, b4, b6, _ = c.b_invariants
    b2, b4, b6 = b2 % ell, (2 * b4) % ell, b6 % ell
    is_square = bytearray(ell)
    for t in range(1, (ell + 1) // 2):
        is_square[t * t % ell] = 1
    total = 1
    for x in range(ell):
        v = (((4 * x + b2) * x + b4) * x + b6) % ell
        total += 1 if v == 0 else (2 if is_square[v] else 0)
    return total


def ap_from_curve(c: WeierstrassCurve, ell: int, oracle_bound: int = ORACLE_BOUND) -> int:
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if ell > oracle_bound:
        raise ValueError(f"{ell} exceeds the point-counting bound {oracle_bound}")
    if ell in c.flagged_primes:
        raise CurveError(
            f"model is singular at {ell}, which does not divide the declared conductor; "
            "supply a minimal model"
        )
    a = ell + 1 - count_points(c, ell)
    if c.conductor % ell == 0 and a not in (1, -1):
        raise AdditiveReduction(ell)
    return a


@dataclass(frozen=True)
class NewformData:
    """Prime-indexed coefficients and Atkin-Lehner signs of a rational newform.

    ``al_signs`` holds w_p for primes exactly dividing the level. Primes whose
    square divides the level carry a coefficient but no sign.
    """

    level: int
    label: str
    coeffs: dict[int, int] = field(hash=False)
    al_signs: dict[int, int] = field(hash=False)
    bound: int
    source: str = "file"
    optimal: bool | None = None

    def __post_init__(self):
        N = self.level
        if N < 1:
            raise ValueError(f"level must be positive, got {N}")
        bad = prime_factors(N)
        for p in bad:
            if p not in self.coeffs:
                raise MissingPrime(p)
        for p, e in factorize(N):
            if e == 1:
                a, w = self.coeffs[p], self.al_signs.get(p)
                if a not in (1, -1):
                    raise ValueError(f"a_{p} = {a} must be +-1 at a prime exactly dividing {N}")
                if w != -a:
                    raise ValueError(f"w_{p} = {w} must equal -a_{p} = {-a}")
            elif p in self.al_signs:
                raise ValueError(f"no sign rule at {p}, whose square divides {N}")
        for ell in primes_up_to(self.bound):
            if ell not in self.coeffs:
                raise MissingPrime(ell)
        object.__setattr__(self, "coeffs", dict(sorted(self.coeffs.items())))
        object.__setattr__(self, "al_signs", dict(sorted(self.al_signs.items())))

    @property
    def bad_primes(self) -> tuple[int, ...]:
        return prime_factors(self.level)

    @property
    def semistable(self) -> bool:
        return is_squarefree(self.level)

    def a(self, ell: int) -> int:
        try:
            return self.coeffs[ell]
        except KeyError:
            raise MissingPrime(ell) from None


def newform_from_curve(
    c: WeierstrassCurve, bound: int, allow_additive: bool = False, optimal: bool | None = None
) -> NewformData:
    """Point-count every prime up to ``bound`` and at the bad primes.

    With ``allow_additive`` a non-square-free conductor is accepted; primes of
    additive reduction then get ``a_p = 0`` and no Atkin-Lehner sign.
    """
    N = c.conductor
    if not allow_additive and not is_squarefree(N):
        raise CurveError(f"conductor {N} is not square-free; the curve is not semistable")
    coeffs, signs = {}, {}
    for ell in sorted(set(primes_up_to(bound)) | set(prime_factors(N))):
        if N % (ell * ell) == 0:
            a = ell + 1 - count_points(c, ell)
            if a != 0:
                raise CurveError(f"{ell}^2 divides {N} but a_{ell} = {a} is not 0")
            coeffs[ell] = 0
            continue
        coeffs[ell] = ap_from_curve(c, ell, oracle_bound=max(ORACLE_BOUND, bound))
        if N % ell == 0:
            signs[ell] = -coeffs[ell]
    return NewformData(
        level=N,
        label=c.label,
        coeffs=coeffs,
        al_signs=signs,
        bound=bound,
        source=f"curve:{c.ainvs_str()}",
        optimal=optimal,
    )


def extend_coeffs(f: NewformData, prec: int) -> QExpansion:
    """All a_n for n <= prec from the prime coefficients, with a_0 = 0."""
    a = [0] * (prec + 1)
    if prec >= 1:
        a[1] = 1
    spf = list(range(prec + 1))
    for p in range(2, isqrt(prec) + 1):
        if spf[p] == p:
            for m in range(p * p, prec + 1, p):
                if spf[m] == m:
                    spf[m] = p
    for n in range(2, prec + 1):
        p = spf[n]
        pk, m = 1, n
        while m % p == 0:
            m //= p
            pk *= p
        if m > 1:
            a[n] = a[pk] * a[m]
        elif pk == p:
            a[n] = f.a(p)
        elif f.level % p == 0:
            a[n] = f.a(p) * a[pk // p]
        else:
            a[n] = f.a(p) * a[pk // p] - p * a[pk // (p * p)]
    return QExpansion(tuple(a))


# -- rational torsion ---------------------------------------------------------


@dataclass(frozen=True)
class TorsionData:
    order: int
    count_gcd: int
    primes_used: tuple[int, ...]
    points: tuple[tuple[int, int], ...]


def _integer_roots_depressed_cubic(A: int, C: int) -> list[int]:
    """Integer roots of ``x^3 + A x + C``, without floating point."""

    def f(x):
        return x * x * x + A * x + C

    def search_increasing(lo, hi):
        # f increasing on [lo, hi]
        if f(lo) > 0 or f(hi) < 0:
            return []
        while lo < hi:
            mid = (lo + hi) // 2
            if f(mid) < 0:
                lo = mid + 1
            else:
                hi = mid
        return [lo] if f(lo) == 0 else []

    bound = 1 + max(abs(A), abs(C))
    if A >= 0:
        return search_increasing(-bound, bound)
    t = isqrt(-A // 3) + 1
    roots = search_increasing(-bound, -t - 1) + search_increasing(t + 1, bound)
    roots += [x for x in range(-t, t + 1) if f(x) == 0]
    return sorted(set(roots))


def _short_model(c: WeierstrassCurve) -> tuple[int, int]:
    c4, c6 = c.c_invariants
    return -27 * c4, -54 * c6


def _point_order(P, A: int, max_order: int = 12) -> int | None:
    """Order of an affine point on y^2 = x^3 + A x + B, or None if above max_order."""

    def add(P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        (x1, y1), (x2, y2) = P, Q
        if x1 == x2 and y1 == -y2:
            return None
        if P == Q:
            lam = (3 * x1 * x1 + A) / (2 * y1)
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam - x1 - x2
        return (x3, lam * (x1 - x3) - y1)

    P = (Fraction(P[0]), Fraction(P[1]))
    Q = P
    for n in range(1, max_order + 1):
        if Q is None:
            return n
        if Q[0].denominator != 1 or Q[1].denominator != 1:
            return None
        if n == max_order:
            return None
        Q = add(Q, P)
    return None


def lutz_nagell_points(c: WeierstrassCurve) -> list[tuple[int, int]]:
    """Affine torsion points on the short model ``y^2 = x^3 - 27 c4 x - 54 c6``."""
    A, B = _short_model(c)
    D = 4 * A**3 + 27 * B**2
    ys = {0}
    for d in _square_divisors(abs(D)):
        ys.add(isqrt(d))
    points = []
    for y in sorted(ys):
        for x in _integer_roots_depressed_cubic(A, B - y * y):
            for yy in {y, -y}:
                if _point_order((x, yy), A) is not None:
                    points.append((x, yy))
    return sorted(points)


def _square_divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p ** (2 * k) for d in divs for k in range(e // 2 + 1)]
    return divs


def torsion_data(c: WeierstrassCurve, n_primes: int = 20) -> TorsionData:
    """Torsion order from a Lutz-Nagell search, cross-checked by point counts.

    The torsion subgroup injects into E(F_ell) for odd good ell, so its order
    must divide the gcd of those counts. The gcd can exceed the true order (an
    isogenous curve may carry more torsion); it can never be a non-multiple.
    """
    used = []
    g = 0
    for ell in primes_up_to(1000):
        if ell == 2 or not c.is_good(ell):
            continue
        g = gcd(g, count_points(c, ell))
        used.append(ell)
        if len(used) == n_primes:
            break
    points = lutz_nagell_points(c)
    order = len(points) + 1
    if g % order:
        raise Inconclusive(
            f"point search finds {order} torsion points, which does not divide "
            f"the point-count gcd {g}"
        )
    return TorsionData(order, g, tuple(used), tuple(points))


def torsion_order(c: WeierstrassCurve) -> int:
    return torsion_data(c).order


# -- newform file format ------------------------------------------------------


def _parse_int(token: str, what: str, lineno: int, path) -> int:
    try:
        return int(token)
    except ValueError:
        pass
    try:
        Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise FormatError(
            f"{what} {token!r} is not an integer; only newforms with rational "
            "integer coefficients are supported",
            lineno,
            path,
        ) from None
    raise FormatError(f"{what} {token!r} is not an integer", lineno, path)


def loads_newform(text: str, path=None) -> NewformData:
    header: dict[str, str] = {}
    coeffs: dict[int, int] = {}
    signs: dict[int, int] = {}
    rows: list[tuple[str, int, int, int | None, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" in line and line.split("=", 1)[0] in ("level", "label", "source", "bound", "optimal"):
            key, value = line.split("=", 1)
            if key in header:
                raise FormatError(f"duplicate header {key}", lineno, path)
            header[key] = value.strip()
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "P" and len(parts) == 4:
            p = _parse_int(parts[1], "prime", lineno, path)
            a = _parse_int(parts[2], "coefficient", lineno, path)
            w = None if parts[3] == "?" else _parse_int(parts[3], "sign", lineno, path)
            if w not in (1, -1, None):
                raise FormatError(f"Atkin-Lehner sign must be +1 or -1, got {parts[3]}", lineno, path)
            rows.append(("P", p, a, w, lineno))
        elif kind == "L" and len(parts) == 3:
            p = _parse_int(parts[1], "prime", lineno, path)
            a = _parse_int(parts[2], "coefficient", lineno, path)
            rows.append(("L", p, a, None, lineno))
        else:
            raise FormatError(f"unrecognized line {line!r}", lineno, path)
    if "level" not in header:
        raise FormatError("missing level= header", None, path)
    level = _parse_int(header["level"], "level", 0, path)
    if level < 1:
        raise FormatError(f"level must be positive, got {level}", None, path)
    for kind, p, a, w, lineno in rows:
        if not is_prime(p):
            raise FormatError(f"{p} is not prime", lineno, path)
        if p in coeffs:
            raise FormatError(f"duplicate prime {p}", lineno, path)
        if kind == "P":
            if level % p:
                raise FormatError(f"P row for {p}, which does not divide level {level}", lineno, path)
            if level % (p * p):
                if w is None:
                    raise FormatError(f"missing Atkin-Lehner sign at {p}", lineno, path)
                if w != -a:
                    raise FormatError(f"w_{p} = {w} but a_{p} = {a}; need w_p = -a_p", lineno, path)
                signs[p] = w
            elif w is not None:
                raise FormatError(f"{p}^2 divides the level; its sign must be '?'", lineno, path)
        elif level % p == 0:
            raise FormatError(f"L row for bad prime {p}; use a P row", lineno, path)
        coeffs[p] = a
    for p in prime_factors(level):
        if p not in coeffs:
            raise FormatError(f"missing bad prime {p}", None, path)
    good = sorted(p for p in coeffs if level % p)
    if "bound" in header:
        bound = _parse_int(header["bound"], "bound", 0, path)
    else:
        bound = good[-1] if good else 1
    for ell in primes_up_to(bound):
        if ell not in coeffs:
            raise FormatError(f"missing coefficient for prime {ell} <= bound {bound}", None, path)
    optimal = {"yes": True, "no": False, None: None}.get(header.get("optimal"), "bad")
    if optimal == "bad":
        raise FormatError("optimal= must be yes or no", None, path)
    try:
        return NewformData(
            level=level,
            label=header.get("label", ""),
            coeffs=coeffs,
            al_signs=signs,
            bound=bound,
            source=header.get("source", "file"),
            optimal=optimal,
        )
    except (ValueError, MissingPrime) as exc:
        raise FormatError(str(exc), None, path) from None


def dumps_newform(f: NewformData) -> str:
    lines = [f"level={f.level}", f"label={f.label}", f"source={f.source}", f"bound={f.bound}"]
    if f.optimal is not None:
        lines.append(f"optimal={'yes' if f.optimal else 'no'}")
    for p in f.bad_primes:
        w = f.al_signs.get(p)
        lines.append(f"P {p} {f.coeffs[p]} {'?' if w is None else f'{w:+d}'}")
    for ell, a in f.coeffs.items():
        if f.level % ell:
            lines.append(f"L {ell} {a}")
    return "\n".join(lines) + "\n"


def load_newform(path) -> NewformData:
    return loads_newform(Path(path).read_text(), path=str(path))


def save_newform(f: NewformData, path) -> None:
    Path(path).write_text(dumps_newform(f))


def curve_from_source(f: NewformData) -> WeierstrassCurve | None:
    """Recover the curve model recorded in a ``source=curve:...`` header."""
    if not f.source.startswith("curve:"):
        return None
    try:
        ainvs = [int(t) for t in f.source[len("curve:") :].split(",")]
    except ValueError:
        raise FormatError(f"bad curve in source header {f.source!r}") from None
    return WeierstrassCurve.from_ainvs(ainvs, f.level, f.label)


def diff_against_oracle(f: NewformData, c: WeierstrassCurve) -> list[tuple[int, int, int]]:
    """Primes where the stored a_ell differs from point counting: (ell, stored, oracle)."""
    fresh = newform_from_curve(c, f.bound, allow_additive=not f.semistable)
    return [
        (ell, a, fresh.coeffs.get(ell))
        for ell, a in f.coeffs.items()
        if fresh.coeffs.get(ell) != a
    ]
