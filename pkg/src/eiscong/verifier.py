"""Certificate pipeline: hypothesis gates, lemma-level checks, congruence, conclusions.

The report never claims that a residual representation is reducible. It
records which necessary congruences hold up to an explicit coefficient range
and whether the divisibility conclusions hold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .eisenstein import DeltaChoice, eis_coeff
from .errors import FormatError, NoMinusSign, UnknownLevel
from .exactnum import factorize, is_prime, is_squarefree, primes_up_to, reduce_rational
from .hecke import sturm_bound
from .newform import NewformData, WeierstrassCurve, diff_against_oracle, extend_coeffs, torsion_data

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
VIOLATION = "hypothesis-violation"

GLYPHS = {PASS: "✓", FAIL: "✗", SKIPPED: "·", VIOLATION: "!"}


@dataclass
class Check:
    name: str
    status: str
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "witness": self.witness}


@dataclass(frozen=True)
class CuspidalOrder:
    level: int
    order: int
    provenance: str


@dataclass
class CertificateRequest:
    newform: NewformData
    r: int
    check_range: int | None = None
    mode: str = "theorem"
    curve: WeierstrassCurve | None = None
    cusp_table: str | Path | None = None
    verify_oracle: bool = False

    def __post_init__(self):
        if not is_prime(self.r):
            raise ValueError(f"r = {self.r} is not prime")
        if self.mode not in ("theorem", "vatsal"):
            raise ValueError(f"mode must be theorem or vatsal, got {self.mode!r}")
        N = self.newform.level
        if self.check_range is None:
            self.check_range = max(100, sturm_bound(N))
        if self.mode == "theorem" and self.check_range < sturm_bound(N):
            raise ValueError(
                f"range {self.check_range} is below the Sturm bound {sturm_bound(N)} for level {N}"
            )
        if self.check_range > self.newform.bound:
            raise ValueError(
                f"range {self.check_range} exceeds the newform's coefficient bound {self.newform.bound}"
            )
        if self.mode == "vatsal" and self.curve is None:
            raise ValueError("vatsal mode needs a curve")
        if self.curve is not None and self.curve.conductor != N:
            raise ValueError(f"curve conductor {self.curve.conductor} differs from level {N}")

    def to_dict(self) -> dict:
        return {
            "label": self.newform.label,
            "level": self.newform.level,
            "r": self.r,
            "mode": self.mode,
            "range": self.check_range,
            "curve": list(self.curve.ainvs) if self.curve else None,
            "cusp_source": str(self.cusp_table) if self.cusp_table else "builtin",
            "optimal": self.newform.optimal,
            "source": self.newform.source,
        }


@dataclass
class CertificateReport:
    request: dict
    checks: list[Check]
    ranges: dict
    timestamp: str | None = None

    @property
    def verdict(self) -> str:
        statuses = {c.status for c in self.checks}
        if VIOLATION in statuses:
            return VIOLATION
        if FAIL in statuses:
            return FAIL
        return PASS

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        out = {
            "request": self.request,
            "checks": [c.to_dict() for c in self.checks],
            "verdict": self.verdict,
            "ranges": self.ranges,
        }
        if self.timestamp is not None:
            out["timestamp"] = self.timestamp
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        req = self.request
        lines = [
            f"certificate {req['label'] or '?'} level={req['level']} r={req['r']} "
            f"mode={req['mode']} range={req['range']}"
        ]
        for c in self.checks:
            detail = ", ".join(f"{k}={_short(v)}" for k, v in c.witness.items())
            lines.append(f"  {GLYPHS[c.status]} {c.name:<24} {c.status:<20} {detail}".rstrip())
        lines.append(f"verdict: {self.verdict}")
        if self.timestamp is not None:
            lines.append(f"generated: {self.timestamp}")
        return "\n".join(lines) + "\n"


def _short(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v)


# -- individual checks --------------------------------------------------------


def check_hypotheses(N: int, r: int) -> list[Check]:
    sq = is_squarefree(N)
    square_free = Check(
        "hyp_square_free",
        PASS if sq else VIOLATION,
        {"level": N, "factorization": [[p, e] for p, e in factorize(N)]},
    )
    bad = (6 * N) % r == 0
    coprime = Check("hyp_r_coprime_6N", VIOLATION if bad else PASS, {"r": r, "6N": 6 * N})
    return [square_free, coprime]


def check_prime_congruences(f: NewformData, r: int, check_range: int | None = None) -> list[Check]:
    """Necessary conditions on prime coefficients and Atkin-Lehner signs.

    (i) a_l = 1 + l mod r at good primes l <= range; (ii) a_p = -w_p at p | N;
    (iii) p = -1 mod r wherever w_p = +1; (iv) w_r = -1 when r | N.
    """
    B = f.bound if check_range is None else check_range
    return [
        _check_eisenstein_primes(f, r, B),
        _check_sign_rule(f),
        _check_plus_sign_primes(f, r),
        _check_w_r(f, r),
    ]


def _check_eisenstein_primes(f: NewformData, r: int, B: int) -> Check:
    checked = 0
    for ell in primes_up_to(B):
        if f.level % ell == 0:
            continue
        checked += 1
        a = f.a(ell)
        if (a - 1 - ell) % r:
            return Check(
                "eisenstein_primes",
                FAIL,
                {"range": B, "ell": ell, "a_ell": a, "expected_mod_r": (1 + ell) % r,
                 "found_mod_r": a % r},
            )
    return Check("eisenstein_primes", PASS, {"range": B, "primes_checked": checked})


def _check_sign_rule(f: NewformData) -> Check:
    bad = [p for p, w in f.al_signs.items() if f.a(p) != -w]
    if bad:
        return Check("al_sign_rule", FAIL, {"primes": bad})
    return Check("al_sign_rule", PASS, {"signs": {str(p): w for p, w in f.al_signs.items()}})


def _check_plus_sign_primes(f: NewformData, r: int) -> Check:
    plus = [p for p, w in f.al_signs.items() if w == 1 and p != r]
    bad = [p for p in plus if (p + 1) % r]
    if bad:
        return Check("plus_sign_primes", FAIL, {"plus_primes": plus, "not_minus_one_mod_r": bad})
    return Check("plus_sign_primes", PASS, {"plus_primes": plus})


def _check_w_r(f: NewformData, r: int) -> Check:
    if f.level % r:
        return Check("w_r", SKIPPED, {"reason": "r does not divide N"})
    w = f.al_signs.get(r)
    return Check("w_r", PASS if w == -1 else FAIL, {"w_r": w})


def choose_delta(f: NewformData, r: int) -> DeltaChoice:
    """delta_p = 1 where w_p = -1 and delta_p = p where w_p = +1."""
    delta = {p: (1 if w == -1 else p) for p, w in f.al_signs.items()}
    if not any(v == 1 for v in delta.values()):
        raise NoMinusSign(
            f"every Atkin-Lehner sign of {f.label or 'the newform'} at level {f.level} is +1"
        )
    return DeltaChoice(f.level, delta)


def check_delta_consistency(f: NewformData, dc: DeltaChoice, r: int) -> Check:
    bad = {str(p): [f.a(p), v] for p, v in dc.delta.items() if (f.a(p) - v) % r}
    if bad:
        return Check("delta_consistency", FAIL, {"a_p_vs_delta": bad})
    return Check("delta_consistency", PASS, {"delta": {str(p): v for p, v in dc.delta.items()}})


def verify_congruence(f: NewformData, dc: DeltaChoice, r: int, B: int) -> Check:
    """a_n(f) = a_n(E) mod r for all 1 <= n <= B."""
    fq = extend_coeffs(f, B)
    for n in range(1, B + 1):
        e = reduce_rational(eis_coeff(dc, n), r)
        if (fq[n].numerator - e) % r:
            return Check(
                "eisenstein_congruence",
                FAIL,
                {"range": B, "sturm_bound": sturm_bound(f.level), "n": n,
                 "a_n_f_mod_r": fq[n].numerator % r, "a_n_E_mod_r": e},
            )
    return Check(
        "eisenstein_congruence",
        PASS,
        {"range": B, "sturm_bound": sturm_bound(f.level), "delta": dc.label()},
    )


def check_ordinary(f: NewformData, r: int) -> Check:
    a = f.a(r)
    if f.level % r:
        ok = a % r != 0
        return Check("ordinary", PASS if ok else FAIL, {"a_r": a, "a_r_mod_r": a % r})
    return Check("ordinary", PASS if a == 1 else FAIL, {"a_r": a, "r_divides_N": True})


# -- cuspidal orders ----------------------------------------------------------


def parse_cusp_table(text: str, path=None) -> dict[int, int]:
    table = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            N, order = (int(x) for x in parts)
        except ValueError:
            raise FormatError(f"expected '<N> <order>', got {raw.strip()!r}", lineno, path) from None
        if N in table:
            raise FormatError(f"duplicate level {N}", lineno, path)
        if order < 1:
            raise FormatError(f"order must be positive, got {order}", lineno, path)
        table[N] = order
    return table


def shipped_cusp_table() -> dict[int, int]:
    text = resources.files("eiscong").joinpath("data/cusp_table.txt").read_text()
    return parse_cusp_table(text, "cusp_table.txt")


def cusp_order(N: int, table_path=None) -> CuspidalOrder:
    """Order of the cuspidal subgroup of J_0(N) for square-free N.

    A user table wins, then the prime-level value numerator((N-1)/12), then the
    shipped table.
    """
    if N < 1 or not is_squarefree(N):
        raise ValueError(f"level {N} is not square-free")
    if table_path is not None:
        user = parse_cusp_table(Path(table_path).read_text(), str(table_path))
        if N in user:
            return CuspidalOrder(N, user[N], "user-file")
    if is_prime(N):
        return CuspidalOrder(N, Fraction(N - 1, 12).numerator, "prime-formula")
    table = shipped_cusp_table()
    if N in table:
        return CuspidalOrder(N, table[N], "table")
    raise UnknownLevel(N)


# -- pipeline -----------------------------------------------------------------


def conclusions(req: CertificateRequest) -> list[Check]:
    f, r = req.newform, req.r
    out = []
    if req.mode == "theorem":
        try:
            C = cusp_order(f.level, req.cusp_table)
        except UnknownLevel as exc:
            out.append(Check("cusp_divisibility", SKIPPED, {"reason": str(exc)}))
        else:
            out.append(
                Check(
                    "cusp_divisibility",
                    PASS if C.order % r == 0 else FAIL,
                    {"cusp_order": C.order, "provenance": C.provenance},
                )
            )
    if req.curve is None:
        out.append(Check("torsion_divisibility", SKIPPED, {"reason": "no curve attached"}))
    else:
        t = torsion_data(req.curve)
        out.append(
            Check(
                "torsion_divisibility",
                PASS if t.order % r == 0 else FAIL,
                {"torsion_order": t.order, "count_gcd": t.count_gcd,
                 "lutz_nagell_points": len(t.points)},
            )
        )
    return out


def _theorem_steps(req: CertificateRequest):
    """Yield thunks producing check lists, in pipeline order."""
    f, r, B = req.newform, req.r, req.check_range
    state = {}

    yield lambda: check_prime_congruences(f, r, B)

    def delta():
        try:
            state["dc"] = choose_delta(f, r)
        except NoMinusSign as exc:
            return [Check("delta_choice", FAIL, {"error": "NoMinusSign", "detail": str(exc)})]
        return [Check("delta_choice", PASS, {"delta": state["dc"].label()})]

    yield delta
    yield lambda: [check_delta_consistency(f, state["dc"], r)]
    yield lambda: [verify_congruence(f, state["dc"], r, B)]
    yield lambda: [check_ordinary(f, r)]
    yield lambda: conclusions(req)


_THEOREM_NAMES = [
    "eisenstein_primes", "al_sign_rule", "plus_sign_primes", "w_r", "delta_choice",
    "delta_consistency", "eisenstein_congruence", "ordinary", "cusp_divisibility",
    "torsion_divisibility",
]
_VATSAL_NAMES = ["eisenstein_primes", "torsion_divisibility"]


def certify(req: CertificateRequest, deterministic: bool = True) -> CertificateReport:
    f, r = req.newform, req.r
    checks: list[Check] = []
    if req.mode == "theorem":
        checks += check_hypotheses(f.level, r)
        names, steps = _THEOREM_NAMES, _theorem_steps(req)
    else:
        sq = is_squarefree(f.level)
        status = PASS if (sq or r == 2) else VIOLATION
        witness = {"level": f.level, "square_free": sq}
        if r == 2:
            witness["note"] = "not required for r = 2"
        checks.append(Check("hyp_semistable", status, witness))
        names = _VATSAL_NAMES
        steps = iter([
            lambda: [_check_eisenstein_primes(f, r, req.check_range)],
            lambda: conclusions(req),
        ])

    if req.verify_oracle and req.curve is not None and not _blocked(checks):
        diffs = diff_against_oracle(f, req.curve)
        checks.append(
            Check(
                "oracle_agreement",
                FAIL if diffs else PASS,
                {"differences": [list(d) for d in diffs[:10]], "bound": f.bound},
            )
        )

    for step in steps:
        if _blocked(checks):
            break
        checks += step()
    done = {c.name for c in checks}
    reason = "hypothesis violated" if VIOLATION in {c.status for c in checks} else "earlier check failed"
    for name in names:
        if name not in done:
            checks.append(Check(name, SKIPPED, {"reason": reason}))

    ranges = {"congruence": req.check_range}
    stamp = None if deterministic else datetime.now(timezone.utc).isoformat(timespec="seconds")
    return CertificateReport(req.to_dict(), checks, ranges, stamp)


def _blocked(checks: list[Check]) -> bool:
    return any(c.status in (FAIL, VIOLATION) for c in checks)
