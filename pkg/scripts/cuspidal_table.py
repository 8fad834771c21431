"""Compute cuspidal subgroup orders of J_0(N) for square-free N from eta quotients.

For square-free N every cusp of X_0(N) is rational and the modular units are
eta quotients prod_{d | N} eta(d z)^{r_d}. Such a quotient is a function on
X_0(N) when

    sum r_d = 0,  sum d r_d = 0 (24),  sum (N/d) r_d = 0 (24),
    prod d^{r_d} is a rational square,

and its order at the cusp 1/c is (1/24) sum_d N gcd(c, d)^2 r_d / (c d). The
cuspidal group is the degree-zero cusp divisors modulo those of units; its
order is the index of the unit-divisor lattice.

Usage:
    python scripts/cuspidal_table.py                 # print the shipped levels
    python scripts/cuspidal_table.py --write         # regenerate the data file
    python scripts/cuspidal_table.py --levels 30 42  # ad hoc levels
"""

import argparse
from fractions import Fraction
from math import gcd, lcm
from pathlib import Path

from eiscong.exactnum import divisors, is_squarefree, prime_factors

SHIPPED_LEVELS = (14, 15, 21, 26, 33, 35)
DATA_FILE = Path(__file__).resolve().parents[1] / "src" / "eiscong" / "data" / "cusp_table.txt"


def _egcd(a, b):
    if b == 0:
        return abs(a), (1 if a >= 0 else -1), 0
    g, s, t = _egcd(b, a % b)
    return g, t, s - (a // b) * t


def integer_kernel(rows, ncols):
    """Z-basis of {x in Z^ncols : rows . x = 0}, by unimodular column reduction."""
    m = [list(r) for r in rows]
    U = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def colop(j, k, a, b, c, d):
        for M in (m, U):
            for row in M:
                x, y = row[j], row[k]
                row[j], row[k] = a * x + b * y, c * x + d * y

    piv = 0
    for i in range(len(m)):
        if piv >= ncols:
            break
        for k in range(piv + 1, ncols):
            x, y = m[i][piv], m[i][k]
            if y == 0:
                continue
            g, s, t = _egcd(x, y)
            colop(piv, k, s, t, -y // g, x // g)
        if m[i][piv] != 0:
            piv += 1
    return [[U[r][j] for r in range(ncols)] for j in range(piv, ncols)]


def lattice_index(gens, dim):
    """Index in Z^dim of the lattice spanned by ``gens`` (0 if not full rank)."""
    rows = [list(g) for g in gens if any(g)]
    det = 1
    for col in range(dim):
        pivot_rows = [r for r in rows if r[col] != 0]
        if not pivot_rows:
            return 0
        # gcd-combine all rows with a nonzero entry in this column into one pivot
        while len(pivot_rows) > 1:
            pivot_rows.sort(key=lambda r: abs(r[col]))
            p = pivot_rows[0]
            for r in pivot_rows[1:]:
                q = r[col] // p[col]
                for j in range(dim):
                    r[j] -= q * p[j]
            pivot_rows = [r for r in pivot_rows if r[col] != 0]
        p = pivot_rows[0]
        det *= abs(p[col])
        rows = [r for r in rows if r is not p]
    return det


def cuspidal_order(N: int) -> int:
    if not is_squarefree(N) or N < 2:
        raise ValueError(f"{N} is not a square-free level > 1")
    D = divisors(N)
    k = len(D)
    orders = [[Fraction(N * gcd(c, d) ** 2, c * d * 24) for d in D] for c in D]
    forms = [([1] * k, 0), (list(D), 24), ([N // d for d in D], 24)]
    for p in prime_factors(N):
        forms.append(([1 if d % p == 0 else 0 for d in D], 2))
    for row in orders:
        den = lcm(*(x.denominator for x in row))
        forms.append(([int(x * den) for x in row], den))
    nf = len(forms)
    rows = [f + [m if j == i else 0 for j in range(nf)] for i, (f, m) in enumerate(forms)]
    units = [v[:k] for v in integer_kernel(rows, k + nf)]
    image = []
    for r in units:
        div = [sum(orders[i][j] * r[j] for j in range(k)) for i in range(k)]
        assert all(x.denominator == 1 for x in div) and sum(div) == 0
        # coordinates in the degree-zero lattice with basis e_i - e_last
        image.append([int(x) for x in div[:-1]])
    return lattice_index(image, k - 1)


def table_text(levels) -> str:
    lines = [
        "# Cuspidal subgroup orders of J_0(N), square-free composite N.",
        "# Generated by scripts/cuspidal_table.py (eta-quotient unit lattice).",
    ]
    lines += [f"{N} {cuspidal_order(N)}" for N in levels]
    return "\n".join(lines) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, nargs="*", default=list(SHIPPED_LEVELS))
    ap.add_argument("--write", action="store_true", help=f"write {DATA_FILE.name}")
    args = ap.parse_args()
    text = table_text(args.levels)
    if args.write:
        DATA_FILE.write_text(text)
        print(f"wrote {DATA_FILE}")
    else:
        print(text, end="")


if __name__ == "__main__":
    main()
