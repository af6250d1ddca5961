import json
from itertools import permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphord.errors import ArityError, BudgetExceeded, DomainError
from sphord.order import (
    FiniteSphericalOrder,
    are_isomorphic,
    cardinality_formula,
    check_axioms,
    derive,
    enumerate_all_orders,
    is_identification,
    membership,
    pattern_parity,
    relation_size,
)

from _oracles import cycle_parity, in_k, reference_relation


def _rot(t):
    return t[1:] + t[:1]


# -- derive / membership ------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("extra", [0, 1, 2, 3])
def test_derive_matches_reference_relation(n, extra):
    m = n + extra
    assert derive(n, range(1, m + 1)).tuples == reference_relation(n, m)


def test_derive_4_generators():
    k = derive(4, [1, 2, 3, 4])
    assert k.representatives() == [(1, 2, 3, 4), (1, 3, 4, 2), (1, 4, 2, 3)]


def test_derive_2_is_linear_order():
    k = derive(2, [1, 2])
    assert k.tuples == {(1, 2)}
    assert relation_size(k) == 3


def test_derive_3_is_circular_order():
    k = derive(3, [1, 2, 3])
    assert k.tuples == {(1, 2, 3), (2, 3, 1), (3, 1, 2)}


def test_derive_small_domain_is_empty():
    k = derive(4, ["a", "b"])
    assert k.tuples == frozenset()
    assert relation_size(k) == 16


def test_derive_rejects_bad_input():
    with pytest.raises(ArityError):
        derive(1, [1, 2])
    with pytest.raises(DomainError):
        derive(3, [1, 1, 2])


def test_membership_examples():
    k4 = derive(4, [1, 2, 3, 4])
    assert membership(k4, (1, 2, 3, 4))
    assert not membership(k4, (2, 1, 3, 4))
    assert membership(derive(3, [1, 2, 3]), (1, 1, 2))
    # a cyclic shift of an even 4-pattern is odd
    assert not membership(k4, (2, 3, 4, 1))


def test_membership_errors():
    k = derive(3, [1, 2, 3])
    with pytest.raises(ArityError):
        membership(k, (1, 2))
    with pytest.raises(DomainError):
        membership(k, (1, 2, 9))


@given(st.lists(st.integers(-50, 50), min_size=2, max_size=7, unique=True))
def test_pattern_parity_agrees_with_cycle_parity(vals):
    assert pattern_parity(vals) == cycle_parity(vals)


# -- counting ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "n, m, size",
    [(4, 4, 244), (4, 7, 1981), (2, 5, 15), (5, 5, 3065), (3, 4, 52), (2, 2, 3)],
)
def test_cardinality_formula(n, m, size):
    assert cardinality_formula(n, m) == size


def test_cardinality_formula_needs_m_ge_n():
    with pytest.raises(DomainError):
        cardinality_formula(4, 3)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_relation_size_equals_formula(n):
    for m in range(n, n + 4):
        k = derive(n, range(m))
        assert relation_size(k) == cardinality_formula(n, m)
        # independent count over all m**n tuples
        assert relation_size(k) == sum(in_k(t) for t in product(range(m), repeat=n))


def test_is_identification():
    assert is_identification((1, 2, 1, 3))
    assert not is_identification((1, 2, 3, 4))
    k = derive(3, range(4))
    for t in product(range(4), repeat=3):
        if is_identification(t):
            assert membership(k, t)


# -- axioms -----------------------------------------------------------------------------


@pytest.mark.parametrize("m", [3, 4, 5])
def test_check_axioms_odd_arity(m):
    assert check_axioms(derive(3, range(1, m + 1))).ok
    assert check_axioms(derive(5, range(1, 6))).ok


@pytest.mark.parametrize("n, m", [(2, 2), (2, 4), (4, 4), (4, 6)])
def test_even_arity_fails_literal_rotation_but_passes_signed(n, m):
    k = derive(n, range(1, m + 1))
    rep = check_axioms(k)
    assert rep.failed() == ["nso1"]
    t, rot = rep["nso1"].counterexample
    assert membership(k, t) and not membership(k, rot)
    assert check_axioms(k, signed_rotation=True).ok


def test_check_axioms_reports_rotation_witness():
    k = FiniteSphericalOrder(3, (1, 2, 3), {(1, 2, 3)})
    rep = check_axioms(k)
    assert not rep["nso1"].passed
    assert rep["nso1"].counterexample[0] == (1, 2, 3)


def test_check_axioms_reports_swap_pair():
    k = FiniteSphericalOrder(3, (1, 2, 3), {(1, 2, 3), (2, 1, 3)})
    assert not check_axioms(k)["nso2"].passed


def test_check_axioms_budget():
    with pytest.raises(BudgetExceeded):
        check_axioms(derive(3, range(10)), budget=1000)


def test_check_axioms_budget_from_environment(monkeypatch):
    monkeypatch.setenv("SPHORD_BUDGET", "10")
    with pytest.raises(BudgetExceeded):
        check_axioms(derive(3, range(4)))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_substructures_pass_axioms(n):
    k = derive(n, range(1, 6))
    for sub in ([1, 3, 4], [2, 3, 4, 5], list(range(1, n + 1))):
        rep = check_axioms(k.restrict(sub), signed_rotation=True)
        assert rep.ok


def test_report_to_dict_is_json():
    rep = check_axioms(derive(4, range(4)))
    data = json.loads(json.dumps(rep.to_dict()))
    assert data["axioms"]["nso1"]["passed"] is False
    assert data["rotation_law"] == "literal"


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 5), st.data())
def test_swap_exclusivity_property(n, data):
    k = derive(n, range(n + 2))
    t = tuple(data.draw(st.permutations(range(n + 2)))[:n])
    i, j = sorted(data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True)))
    s = list(t)
    s[i], s[j] = s[j], s[i]
    assert membership(k, t) != membership(k, tuple(s))


# -- isomorphism ---------------------------------------------------------------------


def test_iso_relabelled_copy():
    a = derive(3, [1, 2, 3, 4])
    b = derive(3, ["w", "x", "y", "z"])
    f = are_isomorphic(a, b)
    assert f is not None
    assert {tuple(f[x] for x in t) for t in a.tuples} == b.tuples


def test_iso_reversed_order():
    a = derive(4, range(1, 7))
    b = derive(4, list(range(6, 0, -1)))
    f = are_isomorphic(a, b)
    assert f is not None
    assert {tuple(f[x] for x in t) for t in a.tuples} == b.tuples


def test_iso_different_sizes():
    assert are_isomorphic(derive(3, range(4)), derive(3, range(5))) is None


def test_iso_detects_non_isomorphic():
    a = derive(3, range(4))
    b = FiniteSphericalOrder(3, tuple(range(4)), set(a.tuples) - {(0, 1, 2)})
    assert are_isomorphic(a, b) is None


def test_iso_arity_mismatch():
    with pytest.raises(ArityError):
        are_isomorphic(derive(3, range(4)), derive(4, range(4)))


@pytest.mark.parametrize("n, m", [(3, 4), (3, 6), (4, 5), (5, 6)])
def test_uniqueness_over_random_relabelling(n, m):
    import random

    rng = random.Random(n * 10 + m)
    labels = list(range(m))
    rng.shuffle(labels)
    assert are_isomorphic(derive(n, range(m)), derive(n, labels)) is not None


# -- enumeration ---------------------------------------------------------------------------

# class counts are frozen from an independent exhaustive search over all relations
@pytest.mark.parametrize(
    "n, m, signed, classes",
    [
        (2, 3, False, 0),
        (2, 3, True, 1),
        (2, 4, False, 0),
        (2, 4, True, 1),
        (3, 4, False, 2),
        (4, 5, False, 0),
        (4, 5, True, 2),
    ],
)
def test_enumerate_all_orders_class_counts(n, m, signed, classes):
    assert len(enumerate_all_orders(n, m, signed_rotation=signed)) == classes


def test_enumerate_3_4_contains_circular_order():
    classes = enumerate_all_orders(3, 4)
    sizes = sorted(len(c) for c in classes)
    assert sizes == [6, 8]
    k = derive(3, range(1, 5))
    hits = [c for c in classes if any(o.tuples == k.tuples for o in c)]
    assert len(hits) == 1 and len(hits[0]) == 6
    for c in classes:
        for o in c:
            assert check_axioms(o).ok


def test_enumerate_3_4_brute_force_agrees():
    """Every relation on 4 points that passes check_axioms appears in the enumeration."""
    tuples = list(permutations(range(1, 5), 3))
    reps = [t for t in tuples if t[0] == min(t)]
    found = set()
    # literal nso1 forces rotation orbits to be all-in or all-out
    for bits in product((0, 1), repeat=len(reps)):
        chosen = set()
        for keep, t in zip(bits, reps):
            if keep:
                chosen |= {t, _rot(t), _rot(_rot(t))}
        order = FiniteSphericalOrder(3, (1, 2, 3, 4), chosen)
        if check_axioms(order).ok:
            found.add(order.tuples)
    enumerated = {o.tuples for c in enumerate_all_orders(3, 4) for o in c}
    assert found == enumerated


@pytest.mark.slow
def test_enumerate_3_5_six_classes():
    classes = enumerate_all_orders(3, 5)
    assert sorted(len(c) for c in classes) == [24, 40, 120, 120, 120, 120]


def test_enumerate_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_all_orders(3, 6, budget=10)


# -- serialization ---------------------------------------------------------------------


def test_json_round_trip():
    k = derive(4, ["a", "b", "c", "d", "e"])
    back = FiniteSphericalOrder.from_json(k.to_json())
    assert back.tuples == k.tuples
    assert back.domain == k.domain


def test_json_read_rejects_repeated_entries():
    text = json.dumps({"n": 3, "elements": ["1", "2", "3"], "tuples": [["1", "1", "2"]]})
    with pytest.raises(DomainError):
        FiniteSphericalOrder.from_json(text)


def test_json_read_takes_tuples_verbatim():
    text = json.dumps({"n": 3, "elements": ["1", "2", "3"], "tuples": [["2", "3", "1"]]})
    k = FiniteSphericalOrder.from_json(text)
    assert k.tuples == {("2", "3", "1")}
    assert not check_axioms(k)["nso1"].passed


def test_json_read_malformed():
    with pytest.raises(DomainError):
        FiniteSphericalOrder.from_json("{not json")
    with pytest.raises(DomainError):
        FiniteSphericalOrder.from_json('{"n": 3}')
