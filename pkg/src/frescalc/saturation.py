"""Saturation of an (a,b)-module by b^-1 a and the Bernstein data it carries.

Vectors are coordinate columns over the Laurent series field in b, each entry
known modulo an absolute power of b.  Lattices are kept as lower-triangular
bases over C[[b]] whose diagonal entries are exact powers of b.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import LaurentWindowExceeded, NotStabilized, PrecisionExhausted
from .fresco import AbModulePresentation
from .ncalg import TruncatedSeries
from .poly import QPoly, charpoly, minpoly


class Laurent:
    """A finite sum of c_n b^n (n may be negative), known modulo b^prec (absolute)."""

    __slots__ = ("terms", "prec")

    def __init__(self, terms: dict[int, Fraction], prec: int):
        self.terms = {n: c for n, c in terms.items() if c and n < prec}
        self.prec = prec

    @classmethod
    def from_series(cls, s: TruncatedSeries) -> Laurent:
        return cls({n: c for n, c in enumerate(s.coeffs)}, s.precision)

    @classmethod
    def monomial(cls, n: int, prec: int, c: Fraction = Fraction(1)) -> Laurent:
        return cls({n: c}, prec)

    def valuation(self) -> int:
        return min(self.terms, default=self.prec)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, n: int) -> Fraction:
        if n >= self.prec:
            raise PrecisionExhausted(f"coefficient of b^{n} unknown modulo b^{self.prec}")
        return self.terms.get(n, Fraction(0))

    def __add__(self, other: Laurent) -> Laurent:
        out = dict(self.terms)
        for n, c in other.terms.items():
            out[n] = out.get(n, 0) + c
        return Laurent(out, min(self.prec, other.prec))

    def __neg__(self) -> Laurent:
        return Laurent({n: -c for n, c in self.terms.items()}, self.prec)

    def __sub__(self, other: Laurent) -> Laurent:
        return self + (-other)

    def __mul__(self, other: Laurent) -> Laurent:
        prec = min(self.prec + other.valuation(), other.prec + self.valuation())
        out: dict[int, Fraction] = {}
        for n, c in self.terms.items():
            for m, d in other.terms.items():
                if n + m < prec:
                    out[n + m] = out.get(n + m, 0) + c * d
        return Laurent(out, prec)

    def shift(self, k: int) -> Laurent:
        return Laurent({n + k: c for n, c in self.terms.items()}, self.prec + k)

    def derivative(self) -> Laurent:
        return Laurent({n - 1: n * c for n, c in self.terms.items()}, self.prec - 1)

    def inverse(self) -> Laurent:
        v = self.valuation()
        if v >= self.prec:
            raise PrecisionExhausted("cannot invert an element that is zero at the known precision")
        rel = self.prec - v
        unit = [self.terms.get(v + n, Fraction(0)) for n in range(rel)]
        inv = [1 / unit[0]]
        for n in range(1, rel):
            acc = sum((unit[t] * inv[n - t] for t in range(1, n + 1)), Fraction(0))
            inv.append(-acc / unit[0])
        return Laurent({n - v: c for n, c in enumerate(inv)}, rel - v)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*b^{n}" for n, c in sorted(self.terms.items())) or "0"
        return f"Laurent({body} + O(b^{self.prec}))"


Vector = list  # list[Laurent]


@dataclass(frozen=True)
class SaturationResult:
    char_poly: QPoly
    min_poly: QPoly
    iterations: int
    residue_matrix: tuple[tuple[Fraction, ...], ...]
    lattice_valuations: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "char_poly": str(self.char_poly),
            "min_poly": str(self.min_poly),
            "iterations": self.iterations,
            "residue_matrix": [[str(v) for v in row] for row in self.residue_matrix],
            "lattice_valuations": list(self.lattice_valuations),
        }


def _apply_t(matrix: Sequence[Sequence[Laurent]], v: Vector) -> Vector:
    # b^-1 a acting on sum_j v_j e_j:  b^-1 M v + b v'
    out = []
    for i, row in enumerate(matrix):
        acc = v[i].derivative().shift(1)
        for m_ij, v_j in zip(row, v):
            acc = acc + (m_ij * v_j).shift(-1)
        out.append(acc)
    return out


def _check_window(v: Vector, window: int) -> None:
    for x in v:
        if x.terms and x.valuation() < -window:
            raise LaurentWindowExceeded(f"b-valuation {x.valuation()} outside window {window}")


def lattice_basis(gens: Sequence[Vector], rank: int, window: int) -> list[Vector]:
    """Lower-triangular C[[b]]-basis of the span of ``gens``; diagonal b^v_i."""
    pool = [list(g) for g in gens]
    basis: list[Vector] = []
    for row in range(rank):
        best = None
        for idx, g in enumerate(pool):
            x = g[row]
            if x.terms and (best is None or x.valuation() < pool[best][row].valuation()):
                best = idx
        if best is None:
            raise PrecisionExhausted(f"no certified pivot in coordinate {row}; lattice rank not certified")
        piv = pool.pop(best)
        v = piv[row].valuation()
        if v < -window:
            raise LaurentWindowExceeded(f"pivot valuation {v} outside window {window}")
        # normalise the pivot entry to b^v by a unit of C[[b]]
        unit_inv = piv[row].shift(-v).inverse()
        piv = [x * unit_inv for x in piv]
        piv[row] = Laurent.monomial(v, piv[row].prec)
        new_pool = []
        for g in pool:
            x = g[row]
            if x.terms:
                q = x.shift(-v)
                g = [y - q * p for y, p in zip(g, piv)]
            g[row] = Laurent({}, g[row].prec)
            new_pool.append(g)
        pool = new_pool
        basis.append(piv)
    return basis


def _solve_lower(basis: Sequence[Vector], w: Vector) -> list[Laurent]:
    # coordinates c with sum_j c_j basis[j] = w, forward substitution down the rows
    r = len(basis)
    coords: list[Laurent] = []
    for i in range(r):
        acc = w[i]
        for j in range(i):
            acc = acc - coords[j] * basis[j][i]
        coords.append(acc * basis[i][i].inverse())
    return coords


def saturate_bernstein(
    module: AbModulePresentation,
    max_iter: int = 64,
    laurent_window: int = 16,
    precision: int = 32,
) -> SaturationResult:
    """Saturate by b^-1 a and return char/min polynomials of -b^-1 a on F#/bF#.

    Each round adds the images of the current basis under b^-1 a and
    re-triangularises; the lattice is stable once every image has coordinates
    in C[[b]].  ``iterations`` counts the enlargement rounds.
    """
    r = module.rank
    p = min(precision, module.precision)
    matrix = [[Laurent.from_series(e.truncate(p)) for e in row] for row in module.a_matrix]
    basis = [[Laurent.monomial(0, p) if i == j else Laurent({}, p) for i in range(r)] for j in range(r)]
    iterations = 0
    while True:
        images = [_apply_t(matrix, v) for v in basis]
        for img in images:
            _check_window(img, laurent_window)
        coords = [_solve_lower(basis, img) for img in images]
        if not any(n < 0 for col in coords for c in col for n in c.terms):
            if any(c.prec < 1 for col in coords for c in col):
                raise PrecisionExhausted("stability of the lattice not certified; raise the precision")
            break
        if iterations >= max_iter:
            raise NotStabilized(f"lattice not stable after {max_iter} saturation steps")
        basis = lattice_basis(basis + images, r, laurent_window)
        iterations += 1
    residue = []
    for i in range(r):
        residue.append(tuple(-coords[j][i].coeff(0) for j in range(r)))
    return SaturationResult(
        char_poly=charpoly(residue),
        min_poly=minpoly(residue),
        iterations=iterations,
        residue_matrix=tuple(residue),
        lattice_valuations=tuple(v[i].valuation() for i, v in enumerate(basis)),
    )
