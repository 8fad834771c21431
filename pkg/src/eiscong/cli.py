"""Command-line front end.

Exit codes: 0 verdict pass, 1 verdict fail, 2 hypothesis violation,
3 input or format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import qseries
from .eisenstein import build_eisenstein, eis_coeff, parse_delta
from .errors import EiscongError, SupportViolation
from .exactnum import format_rational
from .lowering import classify_r3, claim_formula_differences, is_special, lower_level
from .newform import (
    WeierstrassCurve,
    curve_from_source,
    diff_against_oracle,
    dumps_newform,
    load_newform,
    newform_from_curve,
)
from .verifier import FAIL, PASS, VIOLATION, CertificateRequest, certify, cusp_order

EXIT_PASS, EXIT_FAIL, EXIT_HYPOTHESIS, EXIT_INPUT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _yes_no(text: str) -> bool:
    if text not in ("yes", "no"):
        raise argparse.ArgumentTypeError("expected yes or no")
    return text == "yes"


def _common(p: argparse.ArgumentParser, out: bool = False) -> None:
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("--deterministic", action="store_true", help="suppress timestamps")
    if out:
        p.add_argument("--out", type=Path, help="write the result to this file")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="eiscong", description="Eisenstein congruence certificates for weight-2 newforms.")
    sub = ap.add_subparsers(dest="command", required=True)

    eis = sub.add_parser("eis", help="Eisenstein series with prescribed U_p eigenvalues")
    eis_sub = eis.add_subparsers(dest="eis_command", required=True)
    p = eis_sub.add_parser("build")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--delta", required=True, help="p=v,... with v in {1, p}")
    p.add_argument("--prec", type=int, required=True)
    _common(p, out=True)
    p = eis_sub.add_parser("coeff")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--n", type=int, required=True)
    _common(p)

    nf = sub.add_parser("newform", help="newform coefficient files")
    nf_sub = nf.add_subparsers(dest="newform_command", required=True)
    p = nf_sub.add_parser("from-curve")
    p.add_argument("--a-invariants", type=_ints, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--label", default="")
    p.add_argument("--prec", type=int, required=True, help="coefficient bound")
    p.add_argument("--allow-additive", action="store_true")
    p.add_argument("--optimal", type=_yes_no)
    _common(p, out=True)
    p = nf_sub.add_parser("verify-oracle")
    p.add_argument("--in", dest="infile", type=Path, required=True)
    _common(p)

    p = sub.add_parser("certify", help="run the certificate pipeline")
    p.add_argument("--newform", type=Path, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--curve", type=_ints, help="a1,a2,a3,a4,a6")
    p.add_argument("--mode", choices=("theorem", "vatsal"), default="theorem")
    p.add_argument("--cusp-table", type=Path)
    p.add_argument("--range", dest="check_range", type=int)
    p.add_argument("--verify-oracle", action="store_true")
    _common(p, out=True)

    p = sub.add_parser("special", help="test the special-at-level-M pattern")
    p.add_argument("--in", dest="infile", type=Path, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--variant", choices=("A", "B"), default="B")
    p.add_argument("--range", dest="check_range", type=int)
    _common(p)

    p = sub.add_parser("lower", help="lower a special form from level M to M/s")
    p.add_argument("--in", dest="infile", type=Path, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--compare-claim-formula", action="store_true")
    _common(p, out=True)

    p = sub.add_parser("cusp", help="cuspidal subgroup order")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--table", type=Path)
    _common(p)

    p = sub.add_parser("classify-r3", help="residue characteristic 3 branch at prime level p")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--level", type=int)
    _common(p)
    return ap


def _emit(args, text: str, payload: dict, out: Path | None = None) -> None:
    body = json.dumps(payload, indent=2, sort_keys=True) + "\n" if args.json else text
    if out is not None:
        out.write_text(body)
    else:
        sys.stdout.write(body)


def _series_payload(g: qseries.QExpansion) -> dict:
    return {
        "prec": g.prec,
        "ring": g.ring,
        "coefficients": [qseries.format_coeff(c) for c in g.coeffs],
    }


def _load_mod_series(path: Path, r: int) -> qseries.QExpansion:
    g = qseries.load(path)
    if g.modulus is None:
        return qseries.reduce_mod(g, r)
    if g.modulus != r:
        raise UsageError(f"{path}: series is over {g.ring}, but --mod {r} was given")
    return g


def cmd_eis(args) -> int:
    dc = parse_delta(args.delta, args.level)
    if args.eis_command == "build":
        g = build_eisenstein(dc, args.prec)
        payload = {"command": "eis build", "level": dc.level, "delta": dc.label(), **_series_payload(g)}
        comment = f"Eisenstein series level={dc.level} delta={dc.label()}"
        _emit(args, qseries.dumps(g, comment), payload, args.out)
        return EXIT_PASS
    value = eis_coeff(dc, args.n)
    payload = {"command": "eis coeff", "level": dc.level, "delta": dc.label(), "n": args.n,
               "value": format_rational(value)}
    _emit(args, format_rational(value) + "\n", payload)
    return EXIT_PASS


def cmd_newform(args) -> int:
    if args.newform_command == "from-curve":
        c = WeierstrassCurve.from_ainvs(args.a_invariants, args.level, args.label)
        f = newform_from_curve(c, args.prec, allow_additive=args.allow_additive, optimal=args.optimal)
        payload = {
            "command": "newform from-curve",
            "label": f.label,
            "level": f.level,
            "bound": f.bound,
            "source": f.source,
            "al_signs": {str(p): w for p, w in f.al_signs.items()},
            "coefficients": {str(p): a for p, a in f.coeffs.items()},
        }
        _emit(args, dumps_newform(f), payload, args.out)
        return EXIT_PASS
    f = load_newform(args.infile)
    c = curve_from_source(f)
    if c is None:
        raise UsageError(f"{args.infile}: source={f.source!r} does not record a curve model")
    diffs = diff_against_oracle(f, c)
    payload = {
        "command": "newform verify-oracle",
        "label": f.label,
        "bound": f.bound,
        "pass": not diffs,
        "differences": [{"prime": p, "stored": a, "oracle": b} for p, a, b in diffs],
    }
    if diffs:
        text = "".join(f"prime {p}: stored {a}, oracle {b}\n" for p, a, b in diffs)
        text += f"{len(diffs)} differences\n"
    else:
        text = f"{f.label}: all {len(f.coeffs)} coefficients agree with point counting\n"
    _emit(args, text, payload)
    return EXIT_FAIL if diffs else EXIT_PASS


def cmd_certify(args) -> int:
    f = load_newform(args.newform)
    curve = None
    if args.curve is not None:
        curve = WeierstrassCurve.from_ainvs(args.curve, f.level, f.label)
    req = CertificateRequest(
        newform=f,
        r=args.r,
        check_range=args.check_range,
        mode=args.mode,
        curve=curve,
        cusp_table=args.cusp_table,
        verify_oracle=args.verify_oracle,
    )
    report = certify(req, deterministic=args.deterministic)
    body = report.to_json() if args.json else report.to_text()
    if args.out is not None:
        args.out.write_text(body)
    else:
        sys.stdout.write(body)
    return {PASS: EXIT_PASS, FAIL: EXIT_FAIL, VIOLATION: EXIT_HYPOTHESIS}[report.verdict]


def cmd_special(args) -> int:
    g = _load_mod_series(args.infile, args.mod)
    rep = is_special(g, args.level, args.variant, args.check_range)
    payload = {"command": "special", **rep.to_dict()}
    head = (f"special level={rep.level} mod={rep.modulus} variant={rep.variant} "
            f"range={rep.checked_range}: {'pass' if rep.passed else 'fail'}\n")
    text = head + "".join(
        f"  n={n}: found {a}, expected {b}\n" for n, a, b in rep.failures[:20]
    )
    if len(rep.failures) > 20:
        text += f"  ... {len(rep.failures) - 20} more\n"
    _emit(args, text, payload)
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_lower(args) -> int:
    g = _load_mod_series(args.infile, args.mod)
    payload = {"command": "lower", "level": args.level, "s": args.s, "modulus": args.mod}
    try:
        gp = lower_level(g, args.level, args.s, args.mod)
    except SupportViolation as exc:
        payload.update(ok=False, support_violation=exc.n)
        _emit(args, f"lowering failed: {exc}\n", payload)
        return EXIT_FAIL
    payload.update(ok=True, new_level=args.level // args.s, **_series_payload(gp))
    text = qseries.dumps(gp, f"lowered from level {args.level} by s={args.s} mod {args.mod}")
    extra = ""
    if args.compare_claim_formula:
        diffs = claim_formula_differences(args.level, args.s, args.mod, g.prec)
        payload["claim_formula_differences"] = [
            {"n": n, "eigenform": a, "literal": b} for n, a, b in diffs
        ]
        extra = f"claim formula differs mod {args.mod} at {len(diffs)} indices"
        extra += (": " + ", ".join(str(n) for n, _, _ in diffs)) if diffs else ""
    if args.out is not None:
        args.out.write_text(text)
        summary = f"wrote level {args.level // args.s} series (prec {gp.prec}) to {args.out}\n"
        if extra:
            summary += extra + "\n"
        if args.json:
            sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        else:
            sys.stdout.write(summary)
    else:
        if extra and not args.json:
            text = "\n".join(f"# {line}" for line in extra.splitlines()) + "\n" + text
        _emit(args, text, payload)
    return EXIT_PASS


def cmd_cusp(args) -> int:
    C = cusp_order(args.level, args.table)
    payload = {"command": "cusp", "level": C.level, "order": C.order, "provenance": C.provenance}
    _emit(args, f"{C.order} ({C.provenance})\n", payload)
    return EXIT_PASS


def cmd_classify_r3(args) -> int:
    res = classify_r3(args.p, args.level)
    payload = {"command": "classify-r3", **res.to_dict()}
    value = format_rational(res.constant_term)
    text = f"{res.branch.value}: {value} = {res.residue} mod {res.modulus}\n"
    _emit(args, text, payload)
    return EXIT_PASS


COMMANDS = {
    "eis": cmd_eis,
    "newform": cmd_newform,
    "certify": cmd_certify,
    "special": cmd_special,
    "lower": cmd_lower,
    "cusp": cmd_cusp,
    "classify-r3": cmd_classify_r3,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (EiscongError, UsageError, ValueError, OSError) as exc:
        print(f"eiscong {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
