"""Pole ledgers: finite models of classes of meromorphic functions.

A ledger records, for one twist index h, the poles (location, order) of a
meromorphic function whose poles lie in Re < 0, modulo functions with poles
of order < q on the class xi + Z.  Signs and residues are not tracked; an
``exact`` flag separates known orders from upper bounds.

Generator actions on the twisted family h -> Phi_h:

    Phi_h[a w]            = Sh(lambda Phi_(h-1)[w])
    Phi_h[b w]            = -Sh(Phi_(h-1)[w])
    Phi_h[(a - l0 b) w]   = Sh((lambda + l0) Phi_(h-1)[w])

where Sh moves every pole by -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

from .errors import InconsistentLedger, LedgerError
from .fresco import FrescoPresentation, roots_from_factors
from .ncalg import Scalar, TruncatedSeries, as_rational, series_inverse


@dataclass(frozen=True)
class PoleEntry:
    order: int
    exact: bool = True


@dataclass(frozen=True)
class MaximalPole:
    location: Fraction
    order: int
    h: int


class PoleLedger:
    """Poles of one class in P^{xi,q}_{cap}, keyed by (negative) location."""

    __slots__ = ("_entries", "cap", "xi_class", "q")

    def __init__(
        self,
        entries: Mapping[Scalar, PoleEntry | int] | Iterable[tuple[Scalar, PoleEntry | int]] = (),
        cap: int = 4,
        xi_class: Scalar = 0,
        q: int = 1,
    ):
        if q < 1:
            raise LedgerError("q must be a positive integer")
        if cap < 1:
            raise LedgerError("cap must be positive")
        xi = as_rational(xi_class)
        items = entries.items() if isinstance(entries, Mapping) else entries
        clean: dict[Fraction, PoleEntry] = {}
        for loc, entry in items:
            loc = as_rational(loc)
            if not isinstance(entry, PoleEntry):
                entry = PoleEntry(int(entry))
            if loc >= 0:
                raise LedgerError(f"pole location {loc} is not in Re < 0")
            if entry.order > cap:
                raise LedgerError(f"order {entry.order} at {loc} exceeds cap {cap}")
            if entry.order <= 0:
                continue
            if (loc - xi).denominator == 1 and entry.order < q:
                continue  # zero in the quotient
            clean[loc] = entry
        object.__setattr__(self, "_entries", MappingProxyType(dict(sorted(clean.items(), reverse=True))))
        object.__setattr__(self, "cap", cap)
        object.__setattr__(self, "xi_class", xi)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("PoleLedger is immutable")

    @property
    def entries(self) -> Mapping[Fraction, PoleEntry]:
        return self._entries

    def _like(self, entries) -> PoleLedger:
        return PoleLedger(entries, self.cap, self.xi_class, self.q)

    def in_class(self, loc: Scalar) -> bool:
        return (as_rational(loc) - self.xi_class).denominator == 1

    def order_at(self, loc: Scalar) -> int:
        entry = self._entries.get(as_rational(loc))
        return entry.order if entry else 0

    def is_empty(self) -> bool:
        return not self._entries

    def shift(self) -> PoleLedger:
        return self._like({loc - 1: e for loc, e in self._entries.items()})

    def times_linear(self, lambda0: Scalar) -> PoleLedger:
        """Multiply by (lambda + lambda0): one order less at -lambda0."""
        zero = -as_rational(lambda0)
        out = dict(self._entries)
        if zero in out:
            e = out.pop(zero)
            if e.order > 1:
                out[zero] = PoleEntry(e.order - 1, e.exact)
        return self._like(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PoleLedger):
            return NotImplemented
        return (dict(self._entries), self.cap, self.xi_class, self.q) == (
            dict(other._entries), other.cap, other.xi_class, other.q)

    def __hash__(self) -> int:
        return hash((frozenset(self._entries.items()), self.cap, self.xi_class, self.q))

    def __repr__(self) -> str:
        body = ", ".join(
            f"{loc}: {e.order}" + ("" if e.exact else " (bound)") for loc, e in self._entries.items()
        )
        return f"PoleLedger({{{body}}})"

    def to_json(self) -> list:
        return [{"loc": str(loc), "ord": e.order, "exact": e.exact} for loc, e in self._entries.items()]


def shift(ledger: PoleLedger) -> PoleLedger:
    return ledger.shift()


class LedgerFamily:
    """Ledgers indexed by the twist integer h, sharing (cap, xi_class, q)."""

    __slots__ = ("_window", "cap", "xi_class", "q")

    def __init__(self, window: Mapping[int, PoleLedger | Mapping], cap: int = 4, xi_class: Scalar = 0, q: int = 1):
        xi = as_rational(xi_class)
        clean = {}
        for h, led in window.items():
            if not isinstance(led, PoleLedger):
                led = PoleLedger(led, cap, xi, q)
            if (led.cap, led.xi_class, led.q) != (cap, xi, q):
                raise LedgerError("all ledgers of a family share cap, xi_class and q")
            clean[int(h)] = led
        object.__setattr__(self, "_window", MappingProxyType(dict(sorted(clean.items()))))
        object.__setattr__(self, "cap", cap)
        object.__setattr__(self, "xi_class", xi)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("LedgerFamily is immutable")

    @property
    def window(self) -> Mapping[int, PoleLedger]:
        return self._window

    def ledger(self, h: int) -> PoleLedger:
        led = self._window.get(h)
        return led if led is not None else PoleLedger((), self.cap, self.xi_class, self.q)

    def _like(self, window: Mapping[int, PoleLedger]) -> LedgerFamily:
        return LedgerFamily(window, self.cap, self.xi_class, self.q)

    def nonempty(self) -> dict[int, PoleLedger]:
        return {h: led for h, led in self._window.items() if not led.is_empty()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, LedgerFamily):
            return NotImplemented
        return (self.nonempty(), self.cap, self.xi_class, self.q) == (
            other.nonempty(), other.cap, other.xi_class, other.q)

    def __repr__(self) -> str:
        return f"LedgerFamily({dict(self._window)})"

    @classmethod
    def from_json(cls, data: dict) -> LedgerFamily:
        q = int(data.get("q", 1))
        cap = int(data.get("cap", 4))
        xi = as_rational(data.get("xi_class", "0"))
        window = {}
        for h, entries in data.get("family", {}).items():
            window[int(h)] = PoleLedger(
                [(e["loc"], PoleEntry(int(e["ord"]), bool(e.get("exact", True)))) for e in entries], cap, xi, q
            )
        return cls(window, cap, xi, q)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "cap": self.cap,
            "xi_class": str(self.xi_class),
            "family": {str(h): led.to_json() for h, led in self._window.items() if not led.is_empty()},
        }


Generator = Union[str, tuple]


def linear(lambda0: Scalar) -> tuple:
    """The generator a - lambda0 b."""
    return ("linear", as_rational(lambda0))


def apply_generator(family: LedgerFamily, g: Generator) -> LedgerFamily:
    """Ledgers of Phi_h[g w] built from Phi_(h-1)[w]."""
    out = {}
    for h, led in family.window.items():
        if g == "a" or g == "b":
            # lambda has no zero in Re < 0, so orders survive the a-action
            new = led.shift()
        elif isinstance(g, tuple) and len(g) == 2 and g[0] == "linear":
            new = led.times_linear(g[1]).shift()
        else:
            raise LedgerError(f"unknown generator {g!r}")
        out[h + 1] = new
    return family._like(out)


def maximal_pole(family: LedgerFamily, min_order: int | None = None) -> MaximalPole | None:
    """Largest class location with order >= min_order (default q) over all h."""
    threshold = family.q if min_order is None else min_order
    best: MaximalPole | None = None
    for h, led in family.window.items():
        for loc, e in led.entries.items():
            if not led.in_class(loc) or e.order < threshold:
                continue
            if (
                best is None
                or loc > best.location
                or (loc == best.location and e.order > best.order)
            ):
                best = MaximalPole(loc, e.order, h)
    return best


def apply_series(family: LedgerFamily, s: TruncatedSeries | Sequence[Scalar]) -> LedgerFamily:
    """Ledgers of Phi_h[S(b) w] for a unit series S with S(0) = 1.

    Phi_h[S w] = Phi_h[w] + sum_k s_k (-1)^k Sh^k Phi_(h-k)[w]; orders are
    max-merged.  Only the maximal class location keeps exactness (the b^k
    terms cannot reach it); every other location becomes an upper bound.
    """
    coeffs = list(s.coeffs) if isinstance(s, TruncatedSeries) else [as_rational(c) for c in s]
    if not coeffs or coeffs[0] != 1:
        raise LedgerError("series must have constant term 1")
    support = [k for k, c in enumerate(coeffs) if k > 0 and c]
    if not support:
        return family
    top = maximal_pole(family)
    top_loc = top.location if top else None
    shifted_cache: dict[tuple[int, int], PoleLedger] = {}

    def shifted(h: int, k: int) -> PoleLedger:
        key = (h, k)
        if key not in shifted_cache:
            led = family.ledger(h)
            for _ in range(k):
                led = led.shift()
            shifted_cache[key] = led
        return shifted_cache[key]

    targets = sorted({h + k for h in family.window for k in [0] + support})
    out = {}
    for h in targets:
        ident = family.ledger(h)
        merged: dict[Fraction, PoleEntry] = {}
        locs = set(ident.entries)
        others: dict[Fraction, int] = {}
        for k in support:
            for loc, e in shifted(h - k, k).entries.items():
                others[loc] = max(others.get(loc, 0), e.order)
                locs.add(loc)
        for loc in locs:
            base = ident.entries.get(loc)
            order = max(base.order if base else 0, others.get(loc, 0))
            exact = (
                loc == top_loc
                and base is not None
                and base.exact
                and base.order > others.get(loc, 0)
            )
            merged[loc] = PoleEntry(order, exact)
        out[h] = ident._like(merged)
    return family._like(out)


@dataclass(frozen=True)
class RootCountResult:
    holds: bool
    witnesses: tuple[int, ...]
    maximal: MaximalPole
    final: LedgerFamily


def check_fond3(
    family: LedgerFamily,
    presentation: FrescoPresentation,
    d: int,
    series_precision: int = 8,
) -> RootCountResult:
    """Push the family through Pi factor by factor, right to left.

    Witnesses are the factor indices j whose root -(l_j + j - k) is the
    maximal pole location; Pi annihilates the generator, so no exact class
    pole of order >= q may survive the simulation.
    """
    top = maximal_pole(family)
    if top is None:
        raise LedgerError("family carries no pole of order >= q in its class")
    k = presentation.rank
    roots = roots_from_factors(presentation.lambdas)
    witnesses = tuple(j for j in range(1, k + 1) if roots[j - 1] == top.location)
    cur = family
    for j in range(k, 0, -1):
        cur = apply_generator(cur, linear(presentation.lambdas[j - 1]))
        if j > 1:
            inv = series_inverse(presentation.series_at(j - 2, series_precision))
            cur = apply_series(cur, inv)
    survivors = [
        (h, loc, e.order)
        for h, led in cur.window.items()
        for loc, e in led.entries.items()
        if e.exact and led.in_class(loc) and e.order >= cur.q
    ]
    if survivors:
        h, loc, order = survivors[0]
        raise InconsistentLedger(
            f"Pi leaves an exact pole of order {order} at {loc} (h = {h}); the ledger cannot describe an annihilated class"
        )
    return RootCountResult(len(witnesses) >= d, witnesses, top, cur)


def run_script(family: LedgerFamily, script: Sequence[Mapping]) -> LedgerFamily:
    """Apply a JSON operation script: {"op": "a"|"b"|"linear"|"series", ...}."""
    for step in script:
        op = step.get("op")
        if op in ("a", "b"):
            family = apply_generator(family, op)
        elif op == "linear":
            family = apply_generator(family, linear(step["lambda0"]))
        elif op == "series":
            family = apply_series(family, [as_rational(c) for c in step["coeffs"]])
        else:
            raise LedgerError(f"unknown script op {op!r}")
    return family
