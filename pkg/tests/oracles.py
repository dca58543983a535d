"""Independent reference implementations used by the test-suite.

None of these call into the closed-form code paths they check.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

import sympy

from frescalc.ncalg import NcElement


def swap_normalize(word: str) -> dict[tuple[int, int], Fraction]:
    """Normal order of a word over {a, b} by repeated single swaps ba -> ab - bb.

    Rounds rewrite the leftmost ``ba`` of every pending word at once, so equal
    words produced along different branches merge before the next round.
    """
    pending: dict[str, Fraction] = {word: Fraction(1)}
    done: dict[tuple[int, int], Fraction] = {}
    while pending:
        nxt: dict[str, Fraction] = {}
        for w, c in pending.items():
            pos = w.find("ba")
            if pos < 0:
                key = (w.count("a"), w.count("b"))
                done[key] = done.get(key, Fraction(0)) + c
                continue
            for repl, sign in (("ab", 1), ("bb", -1)):
                nw = w[:pos] + repl + w[pos + 2 :]
                nxt[nw] = nxt.get(nw, Fraction(0)) + sign * c
        pending = {w: c for w, c in nxt.items() if c}
    return {k: v for k, v in done.items() if v}


def element_from_bpoly_by_substitution(coeffs: Sequence[Fraction], k: int) -> NcElement:
    """(-b)^k B(u) with u = -b^-1 a, multiplied out in Laurent mode."""
    mb = -NcElement.b().as_laurent()
    u = -(NcElement.b_inv() * NcElement.a().as_laurent())
    acc = NcElement.const(0, laurent=True)
    upow = NcElement.const(1, laurent=True)
    for c in coeffs:
        acc = acc + c * upow
        upow = upow * u
    return NcElement((mb**k * acc).terms)


def sympy_roots(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """Rational roots with multiplicity via sympy's factorisation."""
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x)
    out = []
    for root, mult in sympy.roots(poly, filter="Q").items():
        out.extend([Fraction(int(root.p), int(root.q))] * mult)
    return sorted(out)


def closure_bruteforce(rows: Sequence[Sequence[int]], mu: Sequence[int], bound: int) -> tuple[int, tuple[int, ...]] | None:
    """Smallest N with N mu = sum_i p_i rows[i], p_i >= 0, by enumeration.

    The first n - 1 entries of p are enumerated; the last is read off the
    residual, which must be a nonnegative multiple of the last row.
    """
    n = len(rows)
    last = rows[-1]
    for big_n in range(1, bound + 1):
        target = [big_n * m for m in mu]
        caps = [min((target[v] // rows[i][v] for v in range(n) if rows[i][v]), default=0) for i in range(n - 1)]
        for head in itertools.product(*(range(c + 1) for c in caps)):
            resid = [target[v] - sum(head[i] * rows[i][v] for i in range(n - 1)) for v in range(n)]
            if any(r < 0 for r in resid):
                continue
            ratios = {Fraction(r, e) for r, e in zip(resid, last) if e}
            if any(r and not e for r, e in zip(resid, last)) or len(ratios) > 1:
                continue
            t = ratios.pop() if ratios else Fraction(0)
            if t.denominator == 1:
                return big_n, (*head, int(t))
    return None


def random_rational(rng: random.Random, bound: int = 50) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
