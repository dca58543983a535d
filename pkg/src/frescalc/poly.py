"""Univariate polynomials over Q and small exact linear algebra helpers."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from sympy import divisors

from .ncalg import Scalar, as_rational


class QPoly:
    """Dense polynomial in x with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("QPoly is immutable")

    @classmethod
    def x(cls) -> QPoly:
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> QPoly:
        out = cls([1])
        for r in roots:
            out = out * cls([-as_rational(r), 1])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_monic(self) -> bool:
        return self.leading() == 1

    def monic(self) -> QPoly:
        lc = self.leading()
        return QPoly(c / lc for c in self.coeffs)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other) -> QPoly:
        other = _poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return QPoly(
            (self.coeffs[i] if i < len(self.coeffs) else 0) + (other.coeffs[i] if i < len(other.coeffs) else 0)
            for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> QPoly:
        return QPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> QPoly:
        return self + (-_poly(other))

    def __rsub__(self, other) -> QPoly:
        return _poly(other) - self

    def __mul__(self, other) -> QPoly:
        other = _poly(other)
        if not self.coeffs or not other.coeffs:
            return QPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, c in enumerate(self.coeffs):
            if c:
                for j, d in enumerate(other.coeffs):
                    out[i + j] += c * d
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> QPoly:
        out = QPoly([1])
        for _ in range(n):
            out = out * self
        return out

    def __divmod__(self, other) -> tuple[QPoly, QPoly]:
        other = _poly(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        lc = other.coeffs[-1]
        for k in range(len(quo) - 1, -1, -1):
            q = rem[k + len(other.coeffs) - 1] / lc
            quo[k] = q
            if q:
                for j, d in enumerate(other.coeffs):
                    rem[k + j] -= q * d
        return QPoly(quo), QPoly(rem[: len(other.coeffs) - 1])

    def __floordiv__(self, other) -> QPoly:
        return divmod(self, other)[0]

    def __mod__(self, other) -> QPoly:
        return divmod(self, other)[1]

    def divides(self, other: QPoly) -> bool:
        return not (other % self).coeffs

    def shift(self, c: Scalar) -> QPoly:
        """The polynomial x -> p(x + c)."""
        c = as_rational(c)
        out = QPoly()
        for coeff in reversed(self.coeffs):
            out = out * QPoly([c, 1]) + QPoly([coeff])
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QPoly([other])
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def expanded(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        pieces = []
        for n in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[n]
            if not c:
                continue
            mono = "" if n == 0 else (var if n == 1 else f"{var}^{n}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            if not pieces:
                pieces.append(body if c > 0 else "-" + body)
            else:
                pieces.append((" + " if c > 0 else " - ") + body)
        return "".join(pieces)

    def render(self, var: str = "x") -> str:
        """Factored form when every root is rational, expanded form otherwise."""
        roots, rest = rational_roots(self)
        if rest.degree > 0 or not roots:
            return self.expanded(var)
        counts: dict[Fraction, int] = {}
        for r in roots:
            counts[r] = counts.get(r, 0) + 1
        factors = []
        for r in sorted(counts, reverse=True):
            if r == 0:
                f = var
            else:
                f = f"({var} + {-r})" if r < 0 else f"({var} - {r})"
            factors.append(f if counts[r] == 1 else f"{f}^{counts[r]}")
        lc = rest.leading()
        if lc != 1:
            factors.insert(0, str(lc))
        elif len(factors) == 1 and factors[0].startswith("(") and factors[0].endswith(")"):
            return factors[0][1:-1]
        return "*".join(factors)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"QPoly({self.expanded()})"


def _poly(x) -> QPoly:
    if isinstance(x, QPoly):
        return x
    return QPoly([x])


def _integer_coefficients(p: QPoly) -> list[int]:
    den = lcm(*(c.denominator for c in p.coeffs)) if p.coeffs else 1
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints] if g else ints


def _eval_int(cs: Sequence[int], p: int, q: int) -> int:
    # q^deg * P(p/q), exact in integers
    n = len(cs) - 1
    acc = 0
    for k in range(n, -1, -1):
        acc = acc * p + cs[k] * q ** (n - k)
    return acc


def rational_roots(p: QPoly) -> tuple[list[Fraction], QPoly]:
    """All rational roots with multiplicity, and the cofactor without rational roots.

    Denominators are cleared first; a root p/q in lowest terms then has q
    dividing the leading and p dividing the constant coefficient.  Each hit is
    deflated immediately so the candidate sets shrink as roots are found.
    """
    if not p.coeffs:
        raise ValueError("the zero polynomial has no finite root set")
    roots: list[Fraction] = []
    rest = p
    while rest.degree > 0 and rest.coeffs[0] == 0:
        roots.append(Fraction(0))
        rest = QPoly(rest.coeffs[1:])
    while rest.degree > 0:
        root = _find_rational_root(rest)
        if root is None:
            break
        while rest.degree > 0 and rest(root) == 0:
            roots.append(root)
            rest = rest // QPoly([-root, 1])
    return sorted(roots), rest


def _root_bound(cs: Sequence[int]) -> float:
    # Fujiwara's bound on the modulus of complex roots
    n = len(cs) - 1
    lead = abs(cs[-1])
    terms = [(abs(cs[n - i]) / lead) ** (1.0 / i) for i in range(1, n)]
    terms.append((abs(cs[0]) / (2 * lead)) ** (1.0 / n))
    return 2 * max(terms) * (1 + 1e-9) + 1e-9


def _find_rational_root(poly: QPoly) -> Fraction | None:
    cs = _integer_coefficients(poly)
    lead, const = abs(cs[-1]), abs(cs[0])
    bound = _root_bound(cs)
    at_one = sum(cs)
    at_minus_one = sum(c if k % 2 == 0 else -c for k, c in enumerate(cs))
    nums = divisors(const)
    for q in divisors(lead):
        limit = bound * q
        for num in nums:
            if num > limit:
                break
            if gcd(num, q) != 1:
                continue
            for pnum in (-num, num):
                # (q x - p) | P forces (q - p) | P(1) and (q + p) | P(-1)
                if at_one and (q - pnum) and at_one % (q - pnum):
                    continue
                if at_minus_one and (q + pnum) and at_minus_one % (q + pnum):
                    continue
                if _eval_int(cs, pnum, q) == 0:
                    return Fraction(pnum, q)
    return None


def charpoly(matrix: Sequence[Sequence[Fraction]]) -> QPoly:
    """det(x I - M) by the Faddeev-LeVerrier recursion."""
    n = len(matrix)
    if n == 0:
        return QPoly([1])
    m = [[Fraction(v) for v in row] for row in matrix]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    aux = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # aux <- M (aux + c_{n-k+1} I)
        for i in range(n):
            aux[i][i] += coeffs[n - k + 1]
        aux = _matmul(m, aux)
        trace = sum(aux[i][i] for i in range(n))
        coeffs[n - k] = -trace / k
    return QPoly(coeffs)


def minpoly(matrix: Sequence[Sequence[Fraction]]) -> QPoly:
    """Monic generator of the annihilating ideal, by detecting the first linear
    dependency among I, M, M^2, ..."""
    n = len(matrix)
    if n == 0:
        return QPoly([1])
    m = [[Fraction(v) for v in row] for row in matrix]
    powers = [[[Fraction(int(i == j)) for j in range(n)] for i in range(n)]]
    for d in range(1, n + 1):
        powers.append(_matmul(m, powers[-1]))
        cols = [[v for row in pw for v in row] for pw in powers[:-1]]
        target = [v for row in powers[-1] for v in row]
        sol = solve_linear_columns(cols, target)
        if sol is not None:
            return QPoly([-c for c in sol] + [1])
    raise AssertionError("Cayley-Hamilton violated")


def _matmul(x, y):
    n, k, m = len(x), len(y), len(y[0]) if y else 0
    return [[sum((x[i][t] * y[t][j] for t in range(k)), Fraction(0)) for j in range(m)] for i in range(n)]


def solve_linear_columns(cols: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> list[Fraction] | None:
    """Coefficients c with sum_i c_i cols[i] = target, or None if inconsistent.

    The columns are assumed linearly independent.
    """
    nvar = len(cols)
    rows = len(target)
    aug = [[Fraction(cols[j][i]) for j in range(nvar)] + [Fraction(target[i])] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(nvar):
        piv = next((i for i in range(r, rows) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [vi - f * vr for vi, vr in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][nvar] for i in range(r, rows)):
        return None
    sol = [Fraction(0)] * nvar
    for i, c in enumerate(pivots):
        sol[c] = aug[i][nvar]
    return sol
