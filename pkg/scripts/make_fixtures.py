"""Regenerate fixtures/<label>.nf from the curve models by point counting.

    python scripts/make_fixtures.py [--bound 200] [--dir fixtures]
"""

import argparse
from pathlib import Path

from eiscong.exactnum import is_squarefree
from eiscong.newform import FIXTURE_CURVES, WeierstrassCurve, newform_from_curve, save_newform


def make_fixtures(directory, bound=200):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {}
    for label, (_, N) in FIXTURE_CURVES.items():
        c = WeierstrassCurve.fixture(label)
        # Cremona's "1" curves are the optimal ones; recorded as declared, not verified
        f = newform_from_curve(c, bound, allow_additive=not is_squarefree(N), optimal=True)
        paths[label] = directory / f"{label}.nf"
        save_newform(f, paths[label])
    return paths


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bound", type=int, default=200)
    ap.add_argument("--dir", default=Path(__file__).resolve().parents[1] / "fixtures")
    args = ap.parse_args()
    for label, path in make_fixtures(args.dir, args.bound).items():
        print(f"{label}: {path}")


if __name__ == "__main__":
    main()
