"""Bernstein elements and Bernstein polynomials of frescos.

A rank k fresco is presented as the quotient of the b-completed algebra by
the left ideal generated by

    Pi = (a - l_1 b) S_1^-1 (a - l_2 b) S_2^-1 ... S_(k-1)^-1 (a - l_k b)

whose initial form P = (a - l_1 b) ... (a - l_k b) is the Bernstein element.
The Bernstein polynomial B is tied to P by (-b)^k B(-b^-1 a) = P in A[b^-1].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import (
    NotDivisible,
    NotHomogeneous,
    NotMonic,
    PrecisionExhausted,
)
from .ncalg import (
    NcElement,
    NcSeriesElement,
    Scalar,
    TruncatedSeries,
    as_rational,
    initial_form,
    series_inverse,
)
from .poly import QPoly, rational_roots


class HomogeneousElement:
    """sum_j c_j a^(k-j) b^j, homogeneous of total degree k."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, coeffs: Sequence[Scalar]):
        cs = tuple(as_rational(c) for c in coeffs)
        if not cs:
            raise ValueError("a homogeneous element needs at least one coefficient")
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "degree", len(cs) - 1)

    def __setattr__(self, name, value):
        raise AttributeError("HomogeneousElement is immutable")

    @classmethod
    def one(cls) -> HomogeneousElement:
        return cls([1])

    @classmethod
    def from_element(cls, x: NcElement, degree: int | None = None) -> HomogeneousElement:
        if x.is_zero():
            if degree is None:
                raise NotHomogeneous("zero has no degree")
            return cls([0] * (degree + 1))
        k = x.degree()
        if k is None or (degree is not None and k != degree) or any(j < 0 for _, j in x.terms):
            raise NotHomogeneous(f"{x} is not homogeneous in (a, b)")
        return cls([x.coefficient(k - j, j) for j in range(k + 1)])

    def to_element(self) -> NcElement:
        k = self.degree
        return NcElement({(k - j, j): c for j, c in enumerate(self.coeffs)})

    @property
    def monic(self) -> bool:
        return self.coeffs[0] == 1

    def __mul__(self, other: HomogeneousElement) -> HomogeneousElement:
        if not isinstance(other, HomogeneousElement):
            return NotImplemented
        return HomogeneousElement.from_element(
            self.to_element() * other.to_element(), self.degree + other.degree
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, NcElement):
            return self.to_element() == other
        if not isinstance(other, HomogeneousElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __str__(self) -> str:
        return str(self.to_element())

    def __repr__(self) -> str:
        return f"HomogeneousElement({self})"


class BernsteinPoly(QPoly):
    """A monic polynomial in x over Q."""

    __slots__ = ()

    def __init__(self, coeffs=()):
        super().__init__(coeffs)
        if not self.coeffs or self.coeffs[-1] != 1:
            raise NotMonic(f"Bernstein polynomials are monic, got {QPoly(self.coeffs).expanded()}")

    @classmethod
    def from_poly(cls, p: QPoly) -> BernsteinPoly:
        return cls(p.coeffs)

    @classmethod
    def from_roots(cls, roots) -> BernsteinPoly:
        return cls(QPoly.from_roots(roots).coeffs)


@dataclass(frozen=True)
class FrescoPresentation:
    """Lambdas l_1..l_k and unit polynomials S_1..S_(k-1) in b with S_j(0) = 1.

    ``series`` holds coefficient tuples from b^0 upward.
    """

    lambdas: tuple[Fraction, ...]
    series: tuple[tuple[Fraction, ...], ...] = field(default=())

    def __post_init__(self):
        lambdas = tuple(as_rational(l) for l in self.lambdas)
        if not lambdas:
            raise ValueError("a fresco has rank at least 1")
        series = tuple(tuple(as_rational(c) for c in s) for s in self.series)
        if not series:
            series = tuple((Fraction(1),) for _ in range(len(lambdas) - 1))
        if len(series) != len(lambdas) - 1:
            raise ValueError(f"rank {len(lambdas)} needs {len(lambdas) - 1} series, got {len(series)}")
        for s in series:
            if not s or s[0] != 1:
                raise ValueError("every series must have constant term 1")
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "series", series)

    @property
    def rank(self) -> int:
        return len(self.lambdas)

    def series_at(self, j: int, precision: int) -> TruncatedSeries:
        """S_(j+1) as a series known modulo b^precision."""
        return TruncatedSeries(self.series[j], precision)

    @classmethod
    def from_json(cls, data: dict) -> FrescoPresentation:
        return cls(tuple(data["lambdas"]), tuple(tuple(s) for s in data.get("series", ())))

    def to_json(self) -> dict:
        return {
            "lambdas": [str(l) for l in self.lambdas],
            "series": [[str(c) for c in s] for s in self.series],
        }


@dataclass(frozen=True)
class AbModulePresentation:
    """The a-action on a C[[b]]-basis: a e_j = sum_i a_matrix[i][j] e_i."""

    rank: int
    a_matrix: tuple[tuple[TruncatedSeries, ...], ...]
    basis_note: str = ""

    def __post_init__(self):
        m = self.a_matrix
        if len(m) != self.rank or any(len(row) != self.rank for row in m):
            raise ValueError(f"a_matrix must be {self.rank}x{self.rank}")
        precisions = {entry.precision for row in m for entry in row}
        if len(precisions) > 1:
            p = min(precisions)
            object.__setattr__(self, "a_matrix", tuple(tuple(e.truncate(p) for e in row) for row in m))

    @property
    def precision(self) -> int:
        return self.a_matrix[0][0].precision

    @classmethod
    def from_json(cls, data: dict) -> AbModulePresentation:
        r = int(data["rank"])
        p = int(data["precision"])
        rows = tuple(tuple(TruncatedSeries(entry, p) for entry in row) for row in data["a_matrix"])
        return cls(r, rows, data.get("basis_note", "json input"))

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "precision": self.precision,
            "a_matrix": [[[str(c) for c in e.coeffs] for e in row] for row in self.a_matrix],
        }


@dataclass(frozen=True)
class GeometricVerdict:
    status: str  # "geometric" | "not_geometric" | "unknown"
    rational_roots: tuple[Fraction, ...]
    unfactored_part: QPoly

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "rational_roots": [str(r) for r in self.rational_roots],
            "unfactored_part": self.unfactored_part.expanded(),
        }


def bernstein_element(lambdas: Sequence[Scalar]) -> HomogeneousElement:
    """(a - l_1 b)(a - l_2 b)...(a - l_k b), multiplied left to right."""
    a, b = NcElement.a(), NcElement.b()
    out = NcElement.const(1)
    for lam in lambdas:
        out = out * (a - as_rational(lam) * b)
    return HomogeneousElement.from_element(out, len(lambdas))


@lru_cache(maxsize=64)
def _sharp_basis(k: int) -> tuple[HomogeneousElement, ...]:
    # E_j = (-b)^k (-b^-1 a)^j, j = 0..k; E_j has a-degree j with top weight (-1)^(k+j)
    minus_b = -NcElement.b().as_laurent(window=max(64, 2 * k))
    u = -(NcElement.b_inv(window=max(64, 2 * k)) * NcElement.a())
    left = minus_b ** k
    out = []
    power = NcElement.const(1, laurent=True)
    for _ in range(k + 1):
        out.append(HomogeneousElement.from_element(NcElement((left * power).terms), k))
        power = power * u
    return tuple(out)


def element_to_bpoly(p: HomogeneousElement | NcElement) -> BernsteinPoly:
    """The monic B with (-b)^k B(-b^-1 a) = p."""
    if isinstance(p, NcElement):
        p = HomogeneousElement.from_element(p)
    if not p.monic:
        raise NotMonic(f"{p} is not monic in a")
    k = p.degree
    basis = _sharp_basis(k)
    # coefficient of a^(k-j) b^j sits at index j; E_i reaches a-degree i only
    coeffs = [Fraction(0)] * (k + 1)
    for i in range(k, -1, -1):
        idx = k - i
        residual = p.coeffs[idx] - sum(coeffs[t] * basis[t].coeffs[idx] for t in range(i + 1, k + 1))
        coeffs[i] = residual / basis[i].coeffs[idx]
    return BernsteinPoly(coeffs)


def bpoly_to_element(bp: QPoly, k: int | None = None) -> HomogeneousElement:
    """(-b)^k B(-b^-1 a) written in normal order."""
    if k is None:
        k = bp.degree
    if bp.degree != k or bp.leading() != 1:
        raise NotMonic(f"expected a monic polynomial of degree {k}, got {bp.expanded()}")
    basis = _sharp_basis(k)
    out = [Fraction(0)] * (k + 1)
    for t, c in enumerate(bp.coeffs):
        for idx, e in enumerate(basis[t].coeffs):
            out[idx] += c * e
    return HomogeneousElement(out)


def roots_from_factors(lambdas: Sequence[Scalar]) -> list[Fraction]:
    """-(l_j + j - k) for j = 1..k, counted from the left of the product."""
    k = len(lambdas)
    return [-(as_rational(lam) + j - k) for j, lam in enumerate(lambdas, start=1)]


def divide_right(q: HomogeneousElement, p: HomogeneousElement) -> HomogeneousElement:
    """The monic W with q = W p, by peeling off the top a-power each round."""
    if not q.monic or not p.monic:
        raise NotMonic("both operands must be monic in a")
    d = q.degree - p.degree
    if d < 0:
        raise NotDivisible(f"degree {q.degree} is below divisor degree {p.degree}")
    rem = q.to_element()
    pe = p.to_element()
    w = []
    for j in range(d + 1):
        c = rem.coefficient(q.degree - j, j)
        w.append(c)
        if c:
            rem = rem - NcElement({(d - j, j): c}) * pe
    if not rem.is_zero():
        raise NotDivisible(f"{p} does not divide {q} on the right", remainder=rem)
    return HomogeneousElement(w)


def cofactor_poly(w: HomogeneousElement, q: int, k: int) -> QPoly:
    """C with B_Q = C B_P when Q = W P, deg Q = q, deg P = k.

    C(-b^-1 a) = (-b)^-q W (-b)^k, computed as the Bernstein polynomial of the
    conjugate (-b)^-k W (-b)^k, which is homogeneous of degree q - k.
    """
    if w.degree != q - k:
        raise ValueError(f"W must have degree q - k = {q - k}, got {w.degree}")
    if not w.monic:
        raise NotMonic(f"{w} is not monic in a")
    window = max(64, 2 * q + 2)
    mb = -NcElement.b().as_laurent(window=window)
    mb_inv = -NcElement.b_inv(window=window)
    conj = (mb_inv ** k) * w.to_element().as_laurent(window=window) * (mb ** k)
    return QPoly(element_to_bpoly(HomogeneousElement.from_element(NcElement(conj.terms), q - k)).coeffs)


def exact_sequence_bpoly(b_f: QPoly, b_h: QPoly, rank_h: int | None = None) -> BernsteinPoly:
    """B_G for 0 -> F -> G -> H -> 0, through P_G = P_F P_H."""
    if rank_h is None:
        rank_h = b_h.degree
    if rank_h != b_h.degree:
        raise ValueError(f"rank {rank_h} disagrees with deg B_H = {b_h.degree}")
    p_f = bpoly_to_element(b_f)
    p_h = bpoly_to_element(b_h, rank_h)
    return element_to_bpoly(p_f * p_h)


def expand_presentation(p: FrescoPresentation, precision: int) -> NcSeriesElement:
    """Pi in normal order, known modulo b^precision."""
    a, b = NcElement.a(), NcElement.b()
    out = NcSeriesElement.from_element(a - p.lambdas[0] * b, precision)
    for j in range(1, p.rank):
        inv = series_inverse(p.series_at(j - 1, precision))
        out = out * NcSeriesElement.from_series(inv)
        out = out * NcSeriesElement.from_element(a - p.lambdas[j] * b, precision)
    return out


def reduce_mod_pi(x: NcSeriesElement | NcElement, p: FrescoPresentation, precision: int) -> tuple[TruncatedSeries, ...]:
    """Class of x modulo the left ideal generated by Pi, as (T_0, ..., T_(k-1)).

    The class is sum_j T_j(b) a^j applied to the generator, i.e. b-left
    coordinates on the basis (e, a e, ..., a^(k-1) e).
    """
    if precision < 1:
        raise ValueError("precision must be at least 1")
    if isinstance(x, NcElement):
        x = NcSeriesElement.from_element(x, precision)
    k = p.rank
    pi = expand_presentation(p, precision).to_b_left()
    lead = pi.get(k)
    if lead is None or not lead[0]:
        raise PrecisionExhausted("leading coefficient of Pi is not a unit at this precision")
    lead_inv = series_inverse(lead)
    # a^k == -sum_{i<k} R_i(b) a^i modulo the ideal
    rule = {i: -(lead_inv * s) for i, s in pi.items() if i < k}
    work_p = min(x.precision, min((s.precision for s in rule.values()), default=precision), lead_inv.precision)
    cols = {i: s.truncate(work_p) for i, s in x.to_b_left().items()}
    while cols and max(cols) >= k:
        m = max(cols)
        t = cols.pop(m)
        # T(b) a^(m-k) R_i(b) a^i, reordered into b-left columns
        head = NcSeriesElement.from_b_left({m - k: t}, work_p)
        tail = NcSeriesElement.from_b_left(rule, work_p) if rule else NcSeriesElement({}, work_p)
        for i, s in (head * tail).to_b_left().items():
            cols[i] = cols[i] + s if i in cols else s
        work_p = min([work_p] + [s.precision for s in cols.values()])
        cols = {i: s.truncate(work_p) for i, s in cols.items() if not s.truncate(work_p).is_zero()}
    if work_p < precision:
        raise PrecisionExhausted(f"reduction certified only modulo b^{work_p}, requested b^{precision}")
    zero = TruncatedSeries((), precision)
    return tuple(cols[j].truncate(precision) if j in cols else zero for j in range(k))


def a_matrix_from_presentation(p: FrescoPresentation, precision: int) -> AbModulePresentation:
    """Companion-style a-action on (e, a e, ..., a^(k-1) e)."""
    k = p.rank
    zero = TruncatedSeries((), precision)
    one = TruncatedSeries([1], precision)
    rows = [[zero] * k for _ in range(k)]
    for j in range(k - 1):
        rows[j + 1][j] = one
    last = reduce_mod_pi(NcElement.monomial(k, 0), p, precision)
    for i in range(k):
        rows[i][k - 1] = last[i]
    return AbModulePresentation(k, tuple(tuple(r) for r in rows), "basis (e, a.e, ..., a^(k-1).e)")


def is_geometric(bp: QPoly) -> GeometricVerdict:
    roots, rest = rational_roots(bp)
    if any(r >= 0 for r in roots):
        status = "not_geometric"
    elif rest.degree > 0:
        status = "unknown"
    else:
        status = "geometric"
    return GeometricVerdict(status, tuple(roots), rest)
