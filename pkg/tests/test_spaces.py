from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftshadow.graphshift import ProductPoint, base_point, loop_switch_point
from shiftshadow.seqspace import (
    AGREE_ALL_BACKWARD,
    AGREE_ALL_FORWARD,
    UNIT,
    constant_seq,
    periodic_seq,
    with_values,
)
from shiftshadow.spaces import (
    ShiftSpace,
    SpliceError,
    distance_curve,
    point_agreement,
    point_dist,
    point_from_json,
    point_shift,
    point_to_json,
    splice_point,
    tail_certificate_bound,
)

FULL3 = ShiftSpace("full", alphabet=3)
G23 = ShiftSpace("graph", p=2, q=3)
CUBE = ShiftSpace("cube")
PROD = ShiftSpace("product", primes=(2, 3, 5), n_factors=2)


def test_space_validation():
    with pytest.raises(ValueError):
        ShiftSpace("full", alphabet=1)
    with pytest.raises(ValueError):
        ShiftSpace("graph", p=0, q=3)
    with pytest.raises(ValueError):
        ShiftSpace("product", primes=(2, 3), n_factors=2)
    with pytest.raises(ValueError):
        ShiftSpace("banana")


def test_space_json_round_trip():
    for sp in (FULL3, G23, CUBE, PROD):
        assert ShiftSpace.from_json(sp.to_json()) == sp


def test_contains_dispatch():
    assert FULL3.contains(constant_seq(FULL3.value_space(), 2))
    assert not FULL3.contains(constant_seq(UNIT, Fraction(1, 2)))
    walk = periodic_seq(G23.graph.space, G23.graph.p_loop)
    assert G23.contains(walk)
    assert not G23.contains(with_values(walk, {0: 1, 1: 1}))
    assert PROD.contains(base_point((2, 3, 5), 2))
    assert not PROD.contains(base_point((2, 3), 1))


def test_point_round_trip_discriminates_kinds():
    seq = constant_seq(UNIT, Fraction(1, 3))
    prod = base_point((2, 3, 5), 2)
    assert point_from_json(point_to_json(seq)) == seq
    assert point_from_json(point_to_json(prod)) == prod


def test_point_agreement_on_products():
    x = base_point((2, 3, 5), 2)
    assert point_agreement(x, x, "forward") == AGREE_ALL_FORWARD
    assert point_agreement(x, x, "backward") == AGREE_ALL_BACKWARD
    z = loop_switch_point(x, 1, 2)  # detour in factor 1 only
    assert point_agreement(x, z, "forward") == 2 * 2 + 6
    # phase-shifted period-3 factor never agrees with the original
    y = ProductPoint(x.primes, (x.factors[0], point_shift(x.factors[1], 1)))
    assert point_agreement(x, y, "forward") is None


ks_strategy = st.lists(st.integers(-20, 20), min_size=1, max_size=6)


@given(st.integers(-4, 4), ks_strategy)
@settings(max_examples=40)
def test_distance_curve_matches_direct_evaluation_seq(anchor, ks):
    u = constant_seq(UNIT, Fraction(1, 2))
    v = with_values(u, {anchor: Fraction(1, 3), anchor + 2: Fraction(3, 4)})
    curve = distance_curve(u, v, ks)
    for k in ks:
        assert curve[k] == point_dist(point_shift(u, k), point_shift(v, k)).value


@given(st.integers(1, 5), ks_strategy)
@settings(max_examples=25)
def test_distance_curve_matches_direct_evaluation_product(i, ks):
    x = base_point((2, 3, 5), 2)
    z = loop_switch_point(x, 1, i)
    curve = distance_curve(x, z, ks)
    for k in ks:
        assert curve[k] == point_dist(point_shift(x, k), point_shift(z, k)).value


def test_tail_certificate_bound_dominates_true_distance():
    u = constant_seq(UNIT, Fraction(1, 2))
    v = with_values(u, {-3: Fraction(1, 4)})
    j = point_agreement(u, v, "forward")
    assert j == -2
    for k in range(0, 10):
        bound = tail_certificate_bound(j, k, "forward")
        assert point_dist(point_shift(u, k), point_shift(v, k)).value <= bound
    assert tail_certificate_bound(AGREE_ALL_FORWARD, 5, "forward") == 0
    assert tail_certificate_bound(AGREE_ALL_BACKWARD, -5, "backward") == 0
    with pytest.raises(ValueError):
        tail_certificate_bound(None, 0, "forward")


def test_splice_point_full_shift():
    x = constant_seq(FULL3.value_space(), 0)
    y = with_values(x, {-2: 1})
    z = splice_point(FULL3, x, y)
    jf = point_agreement(z, x, "forward")
    assert jf is not None and jf <= 0
    assert point_agreement(z, y, "backward") is not None


def test_splice_point_product_needs_connectors():
    x = base_point((2, 3, 5), 2)
    y = ProductPoint(x.primes, tuple(point_shift(f, 1) for f in x.factors))
    z = splice_point(PROD, x, y, window=4)
    assert PROD.contains(z)
    assert point_agreement(z, x, "forward") is not None
    assert point_agreement(z, y, "backward") is not None


def test_splice_point_cube_requires_radius():
    x = constant_seq(UNIT, Fraction(1, 2))
    with pytest.raises(ValueError):
        splice_point(CUBE, x, x)
    assert splice_point(CUBE, x, x, eps=Fraction(1, 8)) == x


def test_splice_point_reports_failure(monkeypatch):
    import shiftshadow.spaces as spaces_mod

    monkeypatch.setattr(spaces_mod, "splice_walks", lambda *a, **k: None)
    w = periodic_seq(G23.graph.space, G23.graph.p_loop)
    with pytest.raises(SpliceError):
        splice_point(G23, w, w)
    x = base_point((2, 3, 5), 2)
    with pytest.raises(SpliceError):
        splice_point(PROD, x, x)
