"""Acceptance criteria, one check per criterion.

Run under pytest (``pytest tests/test_acceptance.py -s`` shows the summary
lines) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable

sys.path.insert(0, str(Path(__file__).resolve().parent))

from frescalc.fresco import (  # noqa: E402
    FrescoPresentation,
    HomogeneousElement,
    a_matrix_from_presentation,
    bernstein_element,
    bpoly_to_element,
    cofactor_poly,
    divide_right,
    element_to_bpoly,
    expand_presentation,
    is_geometric,
    roots_from_factors,
)
from frescalc.gaussmanin import MonomialInput, analyze, report  # noqa: E402
from frescalc.ncalg import initial_form, normal_order  # noqa: E402
from frescalc.parser import parse_polynomial  # noqa: E402
from frescalc.poly import QPoly  # noqa: E402
from frescalc.reference import ALL_TABLES, FOUR_VARIABLE_DIVISOR, FOUR_VARIABLE_INPUT  # noqa: E402
from frescalc.saturation import saturate_bernstein  # noqa: E402
from oracles import random_rational, swap_normalize  # noqa: E402

import test_poles  # noqa: E402

X = QPoly.x()


def _timed(name: str, limit: float | None, body: Callable[[], str]) -> None:
    start = time.perf_counter()
    try:
        detail = body()
    except AssertionError as exc:
        elapsed = time.perf_counter() - start
        print(f"FAIL  {name}  ({elapsed:.2f}s) {exc}")
        raise
    elapsed = time.perf_counter() - start
    ok = limit is None or elapsed < limit
    budget = f" / {limit:g}s" if limit is not None else ""
    print(f"{'PASS' if ok else 'FAIL'}  {name}  ({elapsed:.2f}s{budget}) {detail}")
    assert ok, f"{name} took {elapsed:.2f}s, limit {limit}s"


def _check_four_variable() -> str:
    inp = MonomialInput.from_json(FOUR_VARIABLE_INPUT)
    res = analyze(inp)
    assert res.alpha == (Fraction(1, 3), Fraction(1, 3), Fraction(1, 4), Fraction(1, 4))
    rec = res.recurrence
    assert (rec.slope, rec.intercept, rec.rhs) == (Fraction(7, 6), Fraction(7, 6), Fraction(-1, 6))
    assert (res.closure_degree, res.closure_exponents) == (12, (4, 4, 3, 3))
    expect = QPoly.from_roots(-Fraction(k + 7, 6) for k in range(12))
    assert res.divisor == expect
    assert parse_polynomial(FOUR_VARIABLE_DIVISOR) == expect
    text = report(inp, res)
    assert "(a - 7/6*(k+1).b)[m^k] = -1/6.m^(k+1)" in text
    return "alpha, recurrence, N = 12, p = (4,4,3,3), degree-12 divisor"


def test_criterion_1_four_variable_pipeline():
    _timed("1 four-variable Gauss-Manin pipeline", 1.0, _check_four_variable)


def _check_tables() -> str:
    count = 0
    for table in ALL_TABLES.values():
        for label, text in table.items():
            verdict = is_geometric(parse_polynomial(text))
            assert verdict.status == "geometric", (label, text, verdict.status)
            count += 1
    assert is_geometric(parse_polynomial(FOUR_VARIABLE_DIVISOR)).status == "geometric"
    return f"{count + 1} divisors geometric"


def test_criterion_2_reference_tables():
    _timed("2 reference divisor tables", 1.0, _check_tables)


def _check_sharp_round_trip() -> str:
    rng = random.Random(2024)
    for _ in range(200):
        k = rng.randint(1, 8)
        lambdas = [random_rational(rng) for _ in range(k)]
        p = bernstein_element(lambdas)
        bp = element_to_bpoly(p)
        assert bpoly_to_element(bp, k) == p
        assert bp == QPoly.from_roots(roots_from_factors(lambdas))
    return "200 lambda-lists, k <= 8"


def test_criterion_3_sharp_round_trip():
    _timed("3 (a,b) <-> B round trip", 5.0, _check_sharp_round_trip)


def _random_monic(rng: random.Random, degree: int) -> HomogeneousElement:
    return HomogeneousElement([1] + [random_rational(rng, 9) for _ in range(degree)])


def _check_division() -> str:
    rng = random.Random(7)
    for _ in range(200):
        w = _random_monic(rng, rng.randint(0, 6))
        p = _random_monic(rng, rng.randint(1, 6))
        q = w * p
        assert divide_right(q, p) == w
        assert element_to_bpoly(q) == cofactor_poly(w, q.degree, p.degree) * element_to_bpoly(p)
    return "200 monic pairs, deg W, deg P <= 6"


def test_criterion_4_right_division():
    _timed("4 right division and cofactor", 5.0, _check_division)


def _check_saturation() -> str:
    rng = random.Random(99)
    for _ in range(50):
        k = rng.randint(1, 4)
        if rng.random() < 0.4:
            lambdas = [Fraction(rng.randint(-3, 3)) for _ in range(k)]
        else:
            lambdas = [Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(k)]
        series = [[1] + [random_rational(rng, 5) for _ in range(rng.randint(0, 3))] for _ in range(k - 1)]
        pres = FrescoPresentation(lambdas, series)
        res = saturate_bernstein(a_matrix_from_presentation(pres, 32), precision=32)
        expect = element_to_bpoly(initial_form(expand_presentation(pres, 32)))
        assert res.char_poly == expect, (lambdas, series)
        assert res.min_poly.divides(res.char_poly)
    return "50 presentations, rank <= 4, series degree <= 3"


def test_criterion_5_saturation_cross_validation():
    _timed("5 saturation cross-validation", 30.0, _check_saturation)


def _random_bpoly(rng: random.Random, degree: int) -> QPoly:
    return QPoly([random_rational(rng, 20) for _ in range(degree)] + [1])


def _check_exact_sequence() -> str:
    p_g = bpoly_to_element(X + 2) * bpoly_to_element(X + 1)
    assert element_to_bpoly(p_g) == (X + 1) ** 2
    rng = random.Random(5)
    for _ in range(100):
        b_f = _random_bpoly(rng, rng.randint(1, 2))
        rk_h = rng.randint(1, 2)
        b_h = _random_bpoly(rng, rk_h)
        lhs = element_to_bpoly(bpoly_to_element(b_f) * bpoly_to_element(b_h))
        assert lhs == b_f.shift(-rk_h) * b_h
    return "worked case (x+1)^2 and 100 random pairs"


def test_criterion_6_exact_sequence():
    _timed("6 exact-sequence oracle", None, _check_exact_sequence)


def _check_confluence() -> str:
    rng = random.Random(17)
    for _ in range(500):
        word = "".join(rng.choice("ab") for _ in range(rng.randint(0, 10)))
        assert dict(normal_order(list(word)).terms) == swap_normalize(word), word
    return "500 words, length <= 10"


def test_criterion_7_normal_order_confluence():
    _timed("7 normal-order confluence", 5.0, _check_confluence)


POLE_SCENARIOS = [
    test_poles.test_shift_examples,
    test_poles.test_generator_a_keeps_orders,
    test_poles.test_generator_b_shifts,
    test_poles.test_linear_at_matched_root_drops_order,
    test_poles.test_linear_at_other_point_keeps_order,
    test_poles.test_shift_is_injective,
    test_poles.test_shift_generators_preserve_order_multiset,
    test_poles.test_series_identity,
    test_poles.test_series_one_plus_b,
    test_poles.test_series_b_squared_keeps_maximal_entry,
    test_poles.test_maximal_pole_examples,
    test_poles.test_maximality_after_unmatched_linear,
    test_poles.test_maximality_after_matched_linear,
    test_poles.test_root_count_matched,
    test_poles.test_root_count_unmatched_is_inconsistent,
    test_poles.test_root_count_monotone_in_d,
    test_poles.test_root_count_four_variable_presentation,
]


def _check_poles() -> str:
    for scenario in POLE_SCENARIOS:
        scenario()
    return f"{len(POLE_SCENARIOS)} scenarios, witnesses = (12,) on the degree-12 presentation"


def test_criterion_8_pole_calculus():
    _timed("8 pole calculus conformance", None, _check_poles)


CRITERIA = [
    test_criterion_1_four_variable_pipeline,
    test_criterion_2_reference_tables,
    test_criterion_3_sharp_round_trip,
    test_criterion_4_right_division,
    test_criterion_5_saturation_cross_validation,
    test_criterion_6_exact_sequence,
    test_criterion_7_normal_order_confluence,
    test_criterion_8_pole_calculus,
]


if __name__ == "__main__":
    failed = 0
    for check in CRITERIA:
        try:
            check()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
