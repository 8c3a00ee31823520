"""Reference computations that share no code with the engine.

Plain Gaussian elimination over Q and F_p, determinantal divisors for small
integer matrices, and Betti-number bookkeeping.  Used to cross-check values
the engine derives through Smith normal forms.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd


def rank_over(rows: list[list[int]], p: int | None = None) -> int:
    """Rank over Q (``p is None``) or over F_p by row reduction."""
    if not rows or not rows[0]:
        return 0
    if p is None:
        m = [[Fraction(x) for x in r] for r in rows]
    else:
        m = [[x % p for x in r] for r in rows]
    r = 0
    ncols = len(m[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = (1 / m[r][c]) if p is None else pow(m[r][c], -1, p)
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [(a - f * b) if p is None else (a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
    return r


def betti_numbers(ranks: list[int], boundaries: list[list[list[int]]], p: int | None = None) -> list[int]:
    """``dim H_n`` over a field from chain ranks and boundary matrices (``boundaries[n-1] = d_n``)."""
    rk = [0] + [rank_over(d, p) if ranks[n] and ranks[n - 1] else 0 for n, d in enumerate(boundaries, start=1)] + [0]
    return [ranks[n] - rk[n] - rk[n + 1] for n in range(len(ranks))]


def determinantal_divisors(a: list[list[int]]) -> list[int]:
    """``d_k`` = gcd of all ``k x k`` minors; the invariant factors are ``d_k / d_{k-1}``."""
    rows, cols = len(a), len(a[0]) if a else 0
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, _det([[a[i][j] for j in cs] for i in rs]))
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors_by_minors(a: list[list[int]]) -> list[int]:
    d = determinantal_divisors(a)
    return [d[0]] + [d[k] // d[k - 1] for k in range(1, len(d))] if d else []


def _det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([r[:j] + r[j + 1:] for r in m[1:]]) for j in range(n) if m[0][j])


def torsion_count(orders, p: int) -> int:
    """Number of cyclic torsion summands whose order is divisible by ``p``."""
    return sum(1 for t in orders if t and t % p == 0)
