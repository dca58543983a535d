"""Normal-ordered arithmetic in the algebra generated by a, b with ab - ba = b^2.

Three flavours of element live here:

* :class:`NcElement` -- finite sums of monomials a^i b^j, i >= 0.  With the
  ``laurent`` flag set, negative powers of b are allowed (the localisation
  A[b^-1]).
* :class:`TruncatedSeries` -- commutative power series in b known modulo b^O.
* :class:`NcSeriesElement` -- sums of a^i S_i(b) with S_i truncated series,
  i.e. elements of the b-completion known modulo b^O.

Normal order puts a-powers to the left of b-powers.  All reordering goes
through the single identity

    b^j a^k = sum_m (-1)^m C(k, m) rising(j, m) a^(k-m) b^(j+m)

valid for every integer j, where rising(j, m) = j (j+1) ... (j+m-1).  Its
mirror image a^k b^j = sum_m C(k, m) rising(j, m) b^(j+m) a^(k-m) converts to
the b-left order used for module coordinates.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    LaurentNotAllowed,
    LaurentWindowExceeded,
    NotAUnit,
    PrecisionTooLow,
    ZeroElement,
)

Rational = Fraction
Scalar = Union[int, Fraction]

DEFAULT_WINDOW = 64


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


@lru_cache(maxsize=None)
def _rising(j: int, m: int) -> int:
    out = 1
    for t in range(m):
        out *= j + t
    return out


@lru_cache(maxsize=None)
def reorder_coefficients(j: int, k: int) -> tuple[int, ...]:
    """Integer weights w_m with b^j a^k = sum_m w_m a^(k-m) b^(j+m)."""
    return tuple((-1) ** m * comb(k, m) * _rising(j, m) for m in range(k + 1))


@lru_cache(maxsize=None)
def _commute_coefficients(j: int, k: int) -> tuple[int, ...]:
    # a^k b^j = sum_m w_m b^(j+m) a^(k-m)
    return tuple(comb(k, m) * _rising(j, m) for m in range(k + 1))


def _format_monomial(i: int, j: int) -> str:
    parts = []
    if i == 1:
        parts.append("a")
    elif i:
        parts.append(f"a^{i}")
    if j == 1:
        parts.append("b")
    elif j:
        parts.append(f"b^{j}")
    return "*".join(parts)


def render_terms(terms: Iterable[tuple[tuple[int, int], Fraction]]) -> str:
    """Bit-exact text form: descending a-power, then ascending b-power."""
    ordered = sorted(terms, key=lambda t: (-t[0][0], t[0][1]))
    if not ordered:
        return "0"
    pieces = []
    for n, ((i, j), c) in enumerate(ordered):
        mono = _format_monomial(i, j)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if n == 0:
            pieces.append(body if c > 0 else "-" + body)
        else:
            pieces.append((" + " if c > 0 else " - ") + body)
    return "".join(pieces)


class NcElement:
    """A finite sum of normal-ordered monomials a^i b^j with rational weights.

    Immutable.  ``laurent`` marks elements of A[b^-1]; only those may carry
    negative b-exponents, and their |b-exponent| is bounded by ``window``.
    """

    __slots__ = ("_terms", "laurent", "window")

    def __init__(
        self,
        terms: Mapping[tuple[int, int], Scalar] | Iterable[tuple[tuple[int, int], Scalar]] = (),
        laurent: bool = False,
        window: int = DEFAULT_WINDOW,
    ):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in items:
            if i < 0:
                raise ValueError("a-exponents must be nonnegative")
            acc[(i, j)] = acc.get((i, j), Fraction(0)) + as_rational(c)
        clean = {}
        for (i, j), c in acc.items():
            if not c:
                continue
            if j < 0 and not laurent:
                raise LaurentNotAllowed(f"b^{j} requires Laurent mode")
            if laurent and abs(j) > window:
                raise LaurentWindowExceeded(f"b-exponent {j} outside window |b_exp| <= {window}")
            clean[(i, j)] = c
        object.__setattr__(self, "_terms", MappingProxyType(clean))
        object.__setattr__(self, "laurent", laurent)
        object.__setattr__(self, "window", window)

    def __setattr__(self, name, value):
        raise AttributeError("NcElement is immutable")

    # constructors
    @classmethod
    def const(cls, c: Scalar, laurent: bool = False) -> NcElement:
        return cls({(0, 0): c}, laurent=laurent)

    @classmethod
    def monomial(cls, i: int, j: int, c: Scalar = 1, laurent: bool = False) -> NcElement:
        return cls({(i, j): c}, laurent=laurent or j < 0)

    @classmethod
    def a(cls) -> NcElement:
        return cls({(1, 0): 1})

    @classmethod
    def b(cls) -> NcElement:
        return cls({(0, 1): 1})

    @classmethod
    def b_inv(cls, window: int = DEFAULT_WINDOW) -> NcElement:
        return cls({(0, -1): 1}, laurent=True, window=window)

    @property
    def terms(self) -> Mapping[tuple[int, int], Fraction]:
        return self._terms

    def coefficient(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def a_degree(self) -> int:
        return max((i for i, _ in self._terms), default=-1)

    def degree(self) -> int | None:
        """Total (a, b)-degree when homogeneous, else None.  Zero has no degree."""
        degrees = {i + j for i, j in self._terms}
        return degrees.pop() if len(degrees) == 1 else None

    def as_laurent(self, window: int | None = None) -> NcElement:
        return NcElement(self._terms, laurent=True, window=self.window if window is None else window)

    def _combine(self, other: NcElement) -> tuple[bool, int]:
        return self.laurent or other.laurent, min(self.window, other.window)

    # arithmetic
    def __add__(self, other) -> NcElement:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        laurent, window = self._combine(other)
        acc = dict(self._terms)
        for key, c in other._terms.items():
            acc[key] = acc.get(key, 0) + c
        return NcElement(acc, laurent=laurent, window=window)

    __radd__ = __add__

    def __neg__(self) -> NcElement:
        return NcElement({k: -c for k, c in self._terms.items()}, self.laurent, self.window)

    def __sub__(self, other) -> NcElement:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> NcElement:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> NcElement:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return NcElement({k: c * other for k, c in self._terms.items()}, self.laurent, self.window)
        if not isinstance(other, NcElement):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other) -> NcElement:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> NcElement:
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = NcElement.const(1, laurent=self.laurent)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return dict(self._terms) == dict(other._terms)

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        return render_terms(self._terms.items())

    def __repr__(self) -> str:
        return f"NcElement({self})"


def _coerce(x) -> NcElement | None:
    if isinstance(x, NcElement):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return NcElement.const(x)
    return None


def multiply(x: NcElement, y: NcElement) -> NcElement:
    """Product in A (or A[b^-1]), each monomial pair reordered in closed form."""
    laurent = x.laurent or y.laurent
    window = min(x.window, y.window)
    acc: dict[tuple[int, int], Fraction] = {}
    for (i, j), c in x.terms.items():
        for (k, l), d in y.terms.items():
            cd = c * d
            for m, w in enumerate(reorder_coefficients(j, k)):
                if w:
                    key = (i + k - m, j + m + l)
                    acc[key] = acc.get(key, 0) + cd * w
    return NcElement(acc, laurent=laurent, window=window)


_GENERATORS = {"a": (1, 0), "b": (0, 1), "b^-1": (0, -1), "binv": (0, -1)}


def normal_order(word: Sequence, laurent: bool = False, window: int = DEFAULT_WINDOW) -> NcElement:
    """Normal form of a word over {a, b, b^-1} with interspersed rational scalars."""
    out = NcElement.const(1, laurent=laurent)
    if laurent:
        out = NcElement({(0, 0): 1}, laurent=True, window=window)
    for letter in word:
        if isinstance(letter, str):
            if letter not in _GENERATORS:
                raise ValueError(f"unknown generator {letter!r}")
            i, j = _GENERATORS[letter]
            if j < 0 and not laurent:
                raise LaurentNotAllowed("b^-1 used outside Laurent mode")
            out = multiply(out, NcElement({(i, j): 1}, laurent=laurent, window=window))
        else:
            out = out * as_rational(letter)
    return out


class TruncatedSeries:
    """A power series in b known modulo b^precision."""

    __slots__ = ("coeffs", "precision")

    def __init__(self, coeffs: Sequence[Scalar] = (), precision: int = 1):
        if precision < 1:
            raise ValueError("precision must be at least 1")
        cs = [as_rational(c) for c in list(coeffs)[:precision]]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "precision", precision)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @classmethod
    def one(cls, precision: int) -> TruncatedSeries:
        return cls([1], precision)

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n >= self.precision:
            raise PrecisionTooLow(f"coefficient of b^{n} unknown at precision {self.precision}")
        return self.coeffs[n] if n < len(self.coeffs) else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> int:
        """Index of the first nonzero coefficient; ``precision`` when zero."""
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return self.precision

    def truncate(self, precision: int) -> TruncatedSeries:
        return TruncatedSeries(self.coeffs, min(precision, self.precision))

    def shift(self, n: int) -> TruncatedSeries:
        """Multiply by b^n, n >= 0."""
        return TruncatedSeries((0,) * n + self.coeffs, self.precision + n)

    def derivative(self) -> TruncatedSeries:
        if self.precision < 2:
            raise PrecisionTooLow("derivative needs precision >= 2")
        return TruncatedSeries([n * c for n, c in enumerate(self.coeffs)][1:], self.precision - 1)

    def __add__(self, other) -> TruncatedSeries:
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries([other], self.precision)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        p = min(self.precision, other.precision)
        n = max(len(self.coeffs), len(other.coeffs))
        cs = [
            (self.coeffs[i] if i < len(self.coeffs) else 0) + (other.coeffs[i] if i < len(other.coeffs) else 0)
            for i in range(min(n, p))
        ]
        return TruncatedSeries(cs, p)

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries([-c for c in self.coeffs], self.precision)

    def __sub__(self, other) -> TruncatedSeries:
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries([other], self.precision)
        return self + (-other)

    def __rsub__(self, other) -> TruncatedSeries:
        return (-self) + other

    def __mul__(self, other) -> TruncatedSeries:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return TruncatedSeries([c * other for c in self.coeffs], self.precision)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        p = min(self.precision + other.valuation(), other.precision + self.valuation())
        return TruncatedSeries(_convolve(self.coeffs, other.coeffs, p), p)

    __rmul__ = __mul__

    def inverse(self) -> TruncatedSeries:
        return series_inverse(self)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries([other], self.precision)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.coeffs == other.coeffs and self.precision == other.precision

    def same_up_to(self, other: TruncatedSeries) -> bool:
        """Equality of the coefficients both sides know."""
        p = min(self.precision, other.precision)
        return self.truncate(p).coeffs == other.truncate(p).coeffs

    def __hash__(self) -> int:
        return hash((self.coeffs, self.precision))

    def __str__(self) -> str:
        body = render_terms(((0, n), c) for n, c in enumerate(self.coeffs) if c)
        return f"{body} + O(b^{self.precision})"

    def __repr__(self) -> str:
        return f"TruncatedSeries({self})"


def _convolve(xs: Sequence[Fraction], ys: Sequence[Fraction], limit: int) -> list[Fraction]:
    out = [Fraction(0)] * max(0, min(limit, len(xs) + len(ys) - 1))
    for i, x in enumerate(xs):
        if not x or i >= limit:
            continue
        for j, y in enumerate(ys):
            if i + j >= limit:
                break
            if y:
                out[i + j] += x * y
    return out


def series_inverse(s: TruncatedSeries) -> TruncatedSeries:
    """Inverse of a unit series, to the same precision."""
    c0 = s[0]
    if not c0:
        raise NotAUnit("series with zero constant term is not invertible")
    p = s.precision
    inv = [1 / c0]
    for n in range(1, p):
        acc = sum((s.coeffs[k] * inv[n - k] for k in range(1, min(n, len(s.coeffs) - 1) + 1)), Fraction(0))
        inv.append(-acc / c0)
    return TruncatedSeries(inv, p)


class NcSeriesElement:
    """sum_i a^i S_i(b) with every S_i known modulo b^precision."""

    __slots__ = ("_columns", "precision")

    def __init__(self, columns: Mapping[int, TruncatedSeries | Sequence[Scalar]], precision: int):
        if precision < 1:
            raise ValueError("precision must be at least 1")
        cols = {}
        for i, s in columns.items():
            if i < 0:
                raise ValueError("a-exponents must be nonnegative")
            if not isinstance(s, TruncatedSeries):
                s = TruncatedSeries(s, precision)
            precision = min(precision, s.precision)
            cols[i] = s
        clean = {}
        for i, s in cols.items():
            s = s.truncate(precision)
            if not s.is_zero():
                clean[i] = s
        object.__setattr__(self, "_columns", MappingProxyType(clean))
        object.__setattr__(self, "precision", precision)

    def __setattr__(self, name, value):
        raise AttributeError("NcSeriesElement is immutable")

    @classmethod
    def from_element(cls, x: NcElement, precision: int) -> NcSeriesElement:
        cols: dict[int, list[Fraction]] = {}
        for (i, j), c in x.terms.items():
            if j < 0:
                raise LaurentNotAllowed("negative b-powers do not embed in the b-completion")
            if j < precision:
                col = cols.setdefault(i, [Fraction(0)] * precision)
                col[j] += c
        return cls({i: TruncatedSeries(cs, precision) for i, cs in cols.items()}, precision)

    @classmethod
    def from_series(cls, s: TruncatedSeries) -> NcSeriesElement:
        return cls({0: s}, s.precision)

    @property
    def columns(self) -> Mapping[int, TruncatedSeries]:
        return self._columns

    def is_zero(self) -> bool:
        return not self._columns

    def valuation(self) -> int:
        """Minimal b-valuation over all columns (``precision`` for zero)."""
        return min((s.valuation() for s in self._columns.values()), default=self.precision)

    def truncate(self, precision: int) -> NcSeriesElement:
        return NcSeriesElement(dict(self._columns), min(precision, self.precision))

    def to_element(self) -> NcElement:
        """The known part as a polynomial (drops the O(b^precision) tail)."""
        return NcElement({(i, j): c for i, s in self._columns.items() for j, c in enumerate(s.coeffs)})

    def __add__(self, other) -> NcSeriesElement:
        if isinstance(other, NcElement):
            other = NcSeriesElement.from_element(other, self.precision)
        if not isinstance(other, NcSeriesElement):
            return NotImplemented
        p = min(self.precision, other.precision)
        cols = {}
        for i in set(self._columns) | set(other._columns):
            x = self._columns.get(i)
            y = other._columns.get(i)
            cols[i] = (x + y) if x is not None and y is not None else (x if x is not None else y)
        return NcSeriesElement(cols, p)

    def __neg__(self) -> NcSeriesElement:
        return NcSeriesElement({i: -s for i, s in self._columns.items()}, self.precision)

    def __sub__(self, other) -> NcSeriesElement:
        if isinstance(other, NcElement):
            other = NcSeriesElement.from_element(other, self.precision)
        return self + (-other)

    def __mul__(self, other) -> NcSeriesElement:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return NcSeriesElement({i: s * other for i, s in self._columns.items()}, self.precision)
        if isinstance(other, NcElement):
            other = NcSeriesElement.from_element(other, self.precision)
        if not isinstance(other, NcSeriesElement):
            return NotImplemented
        p = min(self.precision + other.valuation(), other.precision + self.valuation())
        acc: dict[int, list[Fraction]] = {}
        for i, s in self._columns.items():
            for k, t in other._columns.items():
                for m in range(k + 1):
                    # S(b) a^k contributes a^(k-m) R_m(b), R_m = sum_j s_j w_m(j,k) b^(j+m)
                    r = [Fraction(0)] * min(p, len(s.coeffs) + m)
                    nonzero = False
                    for j, c in enumerate(s.coeffs):
                        if j + m >= p:
                            break
                        if c:
                            w = reorder_coefficients(j, k)[m]
                            if w:
                                r[j + m] += c * w
                                nonzero = True
                    if not nonzero:
                        continue
                    col = acc.setdefault(i + k - m, [Fraction(0)] * p)
                    for n, v in enumerate(_convolve(r, t.coeffs, p)):
                        col[n] += v
        return NcSeriesElement({i: TruncatedSeries(cs, p) for i, cs in acc.items()}, p)

    def __rmul__(self, other) -> NcSeriesElement:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * other
        if isinstance(other, NcElement):
            return NcSeriesElement.from_element(other, self.precision) * self
        return NotImplemented

    def to_b_left(self) -> dict[int, TruncatedSeries]:
        """Columns T_i with self = sum_i T_i(b) a^i."""
        return _reorder_columns(self._columns, self.precision, _commute_coefficients)

    @classmethod
    def from_b_left(cls, columns: Mapping[int, TruncatedSeries], precision: int) -> NcSeriesElement:
        """Inverse of :meth:`to_b_left`."""
        for s in columns.values():
            precision = min(precision, s.precision)
        return cls(_reorder_columns(columns, precision, reorder_coefficients), precision)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NcSeriesElement):
            return NotImplemented
        return self.precision == other.precision and dict(self._columns) == dict(other._columns)

    def __hash__(self) -> int:
        return hash((frozenset(self._columns.items()), self.precision))

    def __str__(self) -> str:
        body = render_terms(((i, j), c) for i, s in self._columns.items() for j, c in enumerate(s.coeffs) if c)
        return f"{body} + O(b^{self.precision})"

    def __repr__(self) -> str:
        return f"NcSeriesElement({self})"


def _reorder_columns(columns, precision, weights) -> dict[int, TruncatedSeries]:
    acc: dict[int, list[Fraction]] = {}
    for k, s in columns.items():
        for j, c in enumerate(s.coeffs[:precision]):
            if not c:
                continue
            for m, w in enumerate(weights(j, k)):
                if j + m >= precision:
                    break
                if w:
                    col = acc.setdefault(k - m, [Fraction(0)] * precision)
                    col[j + m] += c * w
    return {i: TruncatedSeries(cs, precision) for i, cs in acc.items()}


def initial_form(x: NcSeriesElement) -> NcElement:
    """Homogeneous part of minimal total (a, b)-degree.

    Unknown terms of column a^i start in degree i + precision >= precision, so
    the answer is certified only when the minimal degree is below the
    precision.
    """
    if x.is_zero():
        raise ZeroElement(f"element is zero modulo b^{x.precision}")
    degree = min(i + s.valuation() for i, s in x.columns.items())
    if degree >= x.precision:
        raise PrecisionTooLow(
            f"initial degree {degree} not certified at precision {x.precision}"
        )
    return NcElement(
        {(i, degree - i): s[degree - i] for i, s in x.columns.items() if 0 <= degree - i < s.precision}
    )
