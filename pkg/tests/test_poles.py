from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frescalc.errors import InconsistentLedger, LedgerError
from frescalc.fresco import FrescoPresentation
from frescalc.gaussmanin import MonomialInput, annihilator_lambdas
from frescalc.poles import (
    LedgerFamily,
    PoleEntry,
    PoleLedger,
    apply_generator,
    apply_series,
    check_fond3,
    linear,
    maximal_pole,
    run_script,
    shift,
)
from frescalc.reference import FOUR_VARIABLE_INPUT

F = Fraction
XI = F(-7, 10)


def fam(window, q=1, cap=4, xi=XI):
    return LedgerFamily(window, cap, xi, q)


def test_shift_examples():
    assert shift(PoleLedger({XI: 2}, xi_class=XI)) == PoleLedger({F(-17, 10): 2}, xi_class=XI)
    assert shift(PoleLedger()) == PoleLedger()
    led = PoleLedger({F(-1, 2): 3, F(-3, 2): 1}, xi_class=F(1, 2))
    assert shift(led) == PoleLedger({F(-3, 2): 3, F(-5, 2): 1}, xi_class=F(1, 2))


def test_ledger_invariants():
    with pytest.raises(LedgerError):
        PoleLedger({F(1, 2): 1})
    with pytest.raises(LedgerError):
        PoleLedger({F(-1, 2): 5}, cap=4)
    # quotient: class entries below q read as zero, others are kept
    led = PoleLedger({XI: 1, F(-1, 3): 1}, xi_class=XI, q=2)
    assert led.order_at(XI) == 0 and led.order_at(F(-1, 3)) == 1


def test_generator_b_shifts():
    out = apply_generator(fam({0: {XI: 2}}), "b")
    assert out == fam({1: {F(-17, 10): 2}})


def test_generator_a_keeps_orders():
    src = fam({0: {XI: 2, F(-1, 3): 3}})
    out = apply_generator(src, "a")
    assert out == fam({1: {F(-17, 10): 2, F(-4, 3): 3}})


def test_linear_at_matched_root_drops_order():
    out = apply_generator(fam({0: {XI: 2}}), linear(F(7, 10)))
    assert out == fam({1: {F(-17, 10): 1}})


def test_linear_at_other_point_keeps_order():
    out = apply_generator(fam({0: {XI: 2}}), linear(F(1, 2)))
    assert out == fam({1: {F(-17, 10): 2}})


def test_linear_removes_simple_pole():
    out = apply_generator(fam({0: {XI: 1}}), linear(F(7, 10)))
    assert out.ledger(1).is_empty()


def test_series_identity():
    src = fam({0: {XI: 2}})
    assert apply_series(src, [1]) is src
    assert apply_series(src, [1, 0, 0]) is src


def test_series_one_plus_b():
    src = fam({-1: {XI: 2}, 0: {XI: 2}})
    led = apply_series(src, [1, 1]).ledger(0)
    assert led.entries == {XI: PoleEntry(2, True), F(-17, 10): PoleEntry(2, False)}


def test_series_b_squared_keeps_maximal_entry():
    out = apply_series(fam({0: {XI: 3}}), [1, 0, 1])
    assert out.ledger(0).entries[XI] == PoleEntry(3, True)
    assert out.ledger(2).entries[F(-27, 10)] == PoleEntry(3, False)


def test_series_requires_unit():
    with pytest.raises(LedgerError):
        apply_series(fam({0: {XI: 1}}), [2, 1])


def test_maximal_pole_examples():
    f2 = fam({0: {XI: 2}, 1: {F(-17, 10): 3}}, q=2)
    top = maximal_pole(f2)
    assert (top.location, top.order, top.h) == (XI, 2, 0)
    f3 = fam({0: {XI: 2}, 1: {F(-17, 10): 3}}, q=3)
    top = maximal_pole(f3)
    assert (top.location, top.order, top.h) == (F(-17, 10), 3, 1)
    assert maximal_pole(fam({})) is None


def test_maximality_after_unmatched_linear():
    # image of the maximal point moves to xi0 - 1 with the same order and stays maximal
    src = fam({0: {XI: 3, F(-27, 10): 2}}, q=2)
    out = apply_generator(src, linear(F(1, 5)))
    top = maximal_pole(out)
    assert (top.location, top.order) == (XI - 1, 3)


def test_maximality_after_matched_linear():
    q, d = 2, 2
    src = fam({0: {XI: q + d}}, q=q)
    out = apply_generator(src, linear(-XI))
    top = maximal_pole(out)
    assert (top.location, top.order) == (XI - 1, q + d - 1)


@settings(max_examples=60, deadline=None)
@given(
    st.dictionaries(st.integers(1, 6), st.integers(1, 4), max_size=4),
    st.sampled_from(["a", "b"]),
)
def test_shift_generators_preserve_order_multiset(poles, g):
    src = fam({0: {XI - n: k for n, k in poles.items()}})
    out = apply_generator(src, g)
    before = sorted(e.order for e in src.ledger(0).entries.values())
    after = sorted(e.order for e in out.ledger(1).entries.values())
    assert before == after


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.integers(0, 6), st.integers(1, 4), max_size=4))
def test_shift_is_injective(poles):
    led = PoleLedger({XI - n: k for n, k in poles.items()}, xi_class=XI)
    back = PoleLedger({loc + 1: e for loc, e in shift(led).entries.items()}, xi_class=XI)
    assert back == led


def test_root_count_matched():
    res = check_fond3(fam({0: {XI: 1}}), FrescoPresentation([-XI]), 1)
    assert res.holds and res.witnesses == (1,)


def test_root_count_unmatched_is_inconsistent():
    with pytest.raises(InconsistentLedger):
        check_fond3(fam({0: {XI: 1}}), FrescoPresentation([F(1, 2)]), 1)


def test_root_count_four_variable_presentation():
    lambdas = annihilator_lambdas(MonomialInput.from_json(FOUR_VARIABLE_INPUT))
    xi0 = F(-7, 6)
    family = LedgerFamily({0: {xi0: 1}}, cap=5, xi_class=xi0, q=1)
    res = check_fond3(family, FrescoPresentation(lambdas), 1)
    assert res.witnesses == (12,)
    assert res.holds


def test_root_count_monotone_in_d():
    family = fam({0: {XI: 1}})
    pres = FrescoPresentation([-XI])
    results = [check_fond3(family, pres, d).holds for d in range(1, 4)]
    assert results == sorted(results, reverse=True)


def test_root_count_needs_a_pole():
    with pytest.raises(LedgerError):
        check_fond3(fam({}), FrescoPresentation([1]), 1)


def test_json_and_script():
    data = {
        "q": 1,
        "cap": 4,
        "xi_class": "-7/10",
        "family": {"0": [{"loc": "-7/10", "ord": 2, "exact": True}]},
    }
    family = LedgerFamily.from_json(data)
    assert LedgerFamily.from_json(family.to_json()) == family
    out = run_script(family, [{"op": "linear", "lambda0": "7/10"}, {"op": "b"}])
    assert out == fam({2: {F(-27, 10): 1}})
    with pytest.raises(LedgerError):
        run_script(family, [{"op": "c"}])
