"""Candidate Bernstein divisors for polynomials with n+2 monomials.

For f = sum_i c_i m_i + m with m the distinguished (lambda-inclusive) monomial
and a monomial form w = x^beta dx, each m_i is traded for an Euler-type
combination sum_j u_j x_j df/dx_j.  That yields the one-step recurrence

    (a - sigma(k) b)[m^k w] = rhs * [m^(k+1) w]

and, once m^N is a product of the other monomials, the candidate annihilator
initial form prod_{k=N-1..0} (a - sigma(k) b).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import DegenerateExponents, DegenerateRecurrence, NoClosure
from .fresco import (
    BernsteinPoly,
    HomogeneousElement,
    bernstein_element,
    element_to_bpoly,
    roots_from_factors,
)
from .ncalg import as_rational
from .poly import solve_linear_columns

DEFAULT_CLOSURE_BOUND = 256


@dataclass(frozen=True)
class MonomialInput:
    monomials: tuple[tuple[int, ...], ...]
    coefficients: tuple[Fraction, ...] = ()
    distinguished: tuple[int, ...] = ()
    form_exponents: tuple[int, ...] = ()

    def __post_init__(self):
        rows = tuple(tuple(int(e) for e in row) for row in self.monomials)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise DegenerateExponents("need n+1 monomials in n+1 variables (a square exponent matrix)")
        if any(e < 0 for row in rows for e in row):
            raise DegenerateExponents("exponents must be nonnegative")
        coeffs = tuple(as_rational(c) for c in self.coefficients) or (Fraction(1),) * n
        mu = tuple(int(e) for e in self.distinguished) or (1,) * n
        beta = tuple(int(e) for e in self.form_exponents) or (0,) * n
        if len(coeffs) != n or len(mu) != n or len(beta) != n:
            raise DegenerateExponents("coefficients, distinguished and form need one entry per variable")
        if any(c == 0 for c in coeffs):
            raise DegenerateExponents("monomial coefficients must be nonzero")
        if any(e < 1 for e in mu):
            raise DegenerateExponents("the distinguished monomial must involve every variable")
        if any(e < 0 for e in beta):
            raise DegenerateExponents("form exponents must be nonnegative")
        object.__setattr__(self, "monomials", rows)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "distinguished", mu)
        object.__setattr__(self, "form_exponents", beta)

    @property
    def num_vars(self) -> int:
        return len(self.monomials)

    @classmethod
    def from_json(cls, data: dict) -> MonomialInput:
        return cls(
            tuple(tuple(row) for row in data["monomials"]),
            tuple(data.get("coefficients", ())),
            tuple(data.get("distinguished", ())),
            tuple(data.get("form", ())),
        )

    def to_json(self) -> dict:
        return {
            "monomials": [list(r) for r in self.monomials],
            "coefficients": [str(c) for c in self.coefficients],
            "distinguished": list(self.distinguished),
            "form": list(self.form_exponents),
        }


@dataclass(frozen=True)
class Recurrence:
    """sigma(k) = slope * k + intercept."""

    slope: Fraction
    intercept: Fraction
    rhs: Fraction

    def sigma(self, k: int) -> Fraction:
        return self.slope * k + self.intercept


@dataclass(frozen=True)
class RecurrenceResult:
    weights: tuple[tuple[Fraction, ...], ...]
    alpha: tuple[Fraction, ...]
    recurrence: Recurrence
    closure_degree: int
    closure_exponents: tuple[int, ...]
    product: HomogeneousElement
    lambdas: tuple[Fraction, ...]
    divisor: BernsteinPoly
    warnings: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        rec = self.recurrence
        return {
            "weights": [[str(u) for u in w] for w in self.weights],
            "alpha": [str(a) for a in self.alpha],
            "b_coeff": {"slope": str(rec.slope), "intercept": str(rec.intercept)},
            "rhs_coeff": str(rec.rhs),
            "closure_degree": self.closure_degree,
            "closure_exponents": list(self.closure_exponents),
            "lambdas": [str(l) for l in self.lambdas],
            "product": str(self.product),
            "divisor": str(self.divisor),
            "divisor_roots": [str(r) for r in roots_from_factors(self.lambdas)],
            "warnings": list(self.warnings),
        }


def _scaled_matrix(inp: MonomialInput) -> list[list[Fraction]]:
    return [[c * e for e in row] for c, row in zip(inp.coefficients, inp.monomials)]


def solve_weights(inp: MonomialInput, i: int) -> tuple[Fraction, ...]:
    """u with sum_j u_j c_i' A[i'][j] = delta(i, i') for every monomial i' (0-based i)."""
    n = inp.num_vars
    if not 0 <= i < n:
        raise IndexError(f"monomial index {i} out of range")
    ca = _scaled_matrix(inp)
    cols = [[ca[r][j] for r in range(n)] for j in range(n)]
    target = [Fraction(int(r == i)) for r in range(n)]
    sol = solve_linear_columns(cols, target)
    if sol is None or _rank(cols) < n:
        raise DegenerateExponents("exponent matrix is singular")
    return tuple(sol)


def _rank(cols: Sequence[Sequence[Fraction]]) -> int:
    rows = [list(r) for r in zip(*cols)]
    rank = 0
    ncols = len(cols)
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def alphas(inp: MonomialInput) -> tuple[Fraction, ...]:
    return tuple(sum(u * mu for u, mu in zip(solve_weights(inp, i), inp.distinguished)) for i in range(inp.num_vars))


def recurrence(inp: MonomialInput) -> Recurrence:
    n = inp.num_vars
    slope = Fraction(0)
    intercept = Fraction(0)
    total_alpha = Fraction(0)
    for i in range(n):
        u = solve_weights(inp, i)
        c = inp.coefficients[i]
        slope += c * sum(uj * mu for uj, mu in zip(u, inp.distinguished))
        intercept += c * sum(uj * (bj + 1) for uj, bj in zip(u, inp.form_exponents))
        total_alpha += c * sum(uj * mu for uj, mu in zip(u, inp.distinguished))
    rhs = 1 - total_alpha
    if rhs == 0:
        raise DegenerateRecurrence("the recurrence does not advance (rhs coefficient is 0)")
    return Recurrence(slope, intercept, rhs)


def closure_degree(inp: MonomialInput, bound: int = DEFAULT_CLOSURE_BOUND) -> tuple[int, tuple[int, ...]]:
    """Least N >= 1 with sum_i p_i m_i-exponents = N mu for nonnegative integers p."""
    n = inp.num_vars
    rows = inp.monomials
    # p^T A = mu^T, i.e. columns of the system are the monomial rows
    cols = [[Fraction(rows[i][j]) for j in range(n)] for i in range(n)]
    if _rank(cols) == n:
        unit = solve_linear_columns(cols, [Fraction(m) for m in inp.distinguished])
        if any(x < 0 for x in unit):
            raise NoClosure("the distinguished monomial is not a nonnegative combination of the others")
        big_n = lcm(*(x.denominator for x in unit))
        if big_n > bound:
            raise NoClosure(f"closure degree {big_n} exceeds the search bound {bound}")
        return big_n, tuple(int(x * big_n) for x in unit)
    return _closure_search(inp, bound)


def _closure_search(inp: MonomialInput, bound: int) -> tuple[int, tuple[int, ...]]:
    # singular exponent matrix: enumerate p by increasing N
    n = inp.num_vars
    rows = inp.monomials
    for big_n in range(1, bound + 1):
        target = [big_n * m for m in inp.distinguished]
        found = _enumerate(rows, target, 0, [0] * n)
        if found is not None:
            return big_n, tuple(found)
    raise NoClosure(f"no closure with N <= {bound}")


def _enumerate(rows, target, i, p):
    if i == len(rows):
        return list(p) if all(t == 0 for t in target) else None
    row = rows[i]
    cap = min((t // e for t, e in zip(target, row) if e), default=0)
    for k in range(cap, -1, -1):
        rest = [t - k * e for t, e in zip(target, row)]
        p[i] = k
        hit = _enumerate(rows, rest, i + 1, p)
        if hit is not None:
            return hit
    p[i] = 0
    return None


def annihilator_lambdas(inp: MonomialInput, bound: int = DEFAULT_CLOSURE_BOUND) -> tuple[Fraction, ...]:
    rec = recurrence(inp)
    big_n, _ = closure_degree(inp, bound)
    return tuple(rec.sigma(k) for k in range(big_n - 1, -1, -1))


def annihilator_product(inp: MonomialInput, bound: int = DEFAULT_CLOSURE_BOUND) -> HomogeneousElement:
    """prod_{k=N-1 down to 0} (a - sigma(k) b), leftmost factor k = N-1."""
    return bernstein_element(annihilator_lambdas(inp, bound))


def bernstein_divisor(inp: MonomialInput, bound: int = DEFAULT_CLOSURE_BOUND) -> tuple[BernsteinPoly, tuple[str, ...]]:
    lambdas = annihilator_lambdas(inp, bound)
    divisor = element_to_bpoly(bernstein_element(lambdas))
    warnings = []
    if any(r >= 0 for r in roots_from_factors(lambdas)):
        warnings.append("NonNegativeRoot")
    return divisor, tuple(warnings)


def analyze(inp: MonomialInput, bound: int = DEFAULT_CLOSURE_BOUND) -> RecurrenceResult:
    """Full pipeline: weights, recurrence, closure, product and divisor."""
    weights = tuple(solve_weights(inp, i) for i in range(inp.num_vars))
    alpha = tuple(sum(u * m for u, m in zip(w, inp.distinguished)) for w in weights)
    rec = recurrence(inp)
    big_n, exps = closure_degree(inp, bound)
    lambdas = tuple(rec.sigma(k) for k in range(big_n - 1, -1, -1))
    product = bernstein_element(lambdas)
    divisor, warnings = bernstein_divisor(inp, bound)
    return RecurrenceResult(weights, alpha, rec, big_n, exps, product, lambdas, divisor, warnings)


def _var_names(n: int) -> list[str]:
    if n <= 4:
        return ["x", "y", "z", "t"][:n]
    return [f"x{j}" for j in range(n)]


def _monomial_text(exps: Sequence[int], names: Sequence[str]) -> str:
    parts = [v if e == 1 else f"{v}^{e}" for v, e in zip(names, exps) if e]
    return "*".join(parts) or "1"


def _affine_text(slope: Fraction, intercept: Fraction) -> str:
    if slope and intercept == slope:
        return f"{slope}*(k+1)" if slope != 1 else "(k+1)"
    if not slope:
        return str(intercept)
    body = f"{slope}*k" if slope != 1 else "k"
    if intercept:
        body += f" + {intercept}" if intercept > 0 else f" - {-intercept}"
    return f"({body})"


def report(inp: MonomialInput, result: RecurrenceResult) -> str:
    """Human-readable derivation, one line per step."""
    names = _var_names(inp.num_vars)
    lines = []
    terms = [
        (f"{c}*" if c != 1 else "") + _monomial_text(row, names)
        for c, row in zip(inp.coefficients, inp.monomials)
    ]
    lines.append(f"f = {' + '.join(terms)} + lambda*{_monomial_text(inp.distinguished, names)}")
    volume = "^".join(f"d{v}" for v in names)
    prefix = _monomial_text(inp.form_exponents, names)
    lines.append(f"omega = {volume}" if prefix == "1" else f"omega = {prefix}.{volume}")
    lines.append(f"m = lambda*{_monomial_text(inp.distinguished, names)}")
    for i, (w, al) in enumerate(zip(result.weights, result.alpha), start=1):
        sig_i_slope = sum(u * m for u, m in zip(w, inp.distinguished))
        sig_i_int = sum(u * (b + 1) for u, b in zip(w, inp.form_exponents))
        lines.append(
            f"m_{i}.m^k = {_affine_text(sig_i_slope, sig_i_int)}.b[m^k] - {al}.m^(k+1)"
            f"    weights u = ({', '.join(str(u) for u in w)})"
        )
    lines.append(f"alpha = ({', '.join(str(a) for a in result.alpha)})")
    rec = result.recurrence
    lines.append(f"(a - {_affine_text(rec.slope, rec.intercept)}.b)[m^k] = {rec.rhs}.m^(k+1)")
    lines.append(
        f"closure: N = {result.closure_degree}, p = ({', '.join(str(p) for p in result.closure_exponents)})"
    )
    lines.append(
        "initial form: " + "".join(f"(a - {l}*b)" for l in result.lambdas)
    )
    lines.append(f"candidate divisor: B(x) | {result.divisor}")
    for w in result.warnings:
        lines.append(f"warning: {w}")
    return "\n".join(lines)
