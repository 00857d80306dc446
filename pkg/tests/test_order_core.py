from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings, strategies as st

from orderlab.order_core import (
    CircularOrder,
    Incompatibility,
    NonDistinct,
    TotalOrder,
    UnresolvedKernelElement,
    circle_order,
    circle_orient,
    circular_from_triples,
    cut_at,
    cuts_agree,
    ses_extend_co,
    ses_extend_lo,
    validate_circular,
    validate_total,
)

F = Fraction


def test_orient_anticlockwise_thirds():
    assert circle_orient(F(0), F(1, 3), F(2, 3)) == 1
    assert circle_orient(F(0), F(2, 3), F(1, 3)) == -1


def test_orient_repeated_point():
    co = circle_order([F(0), F(1, 4)] + [F(1, 2)])
    with pytest.raises(NonDistinct):
        co.orient(0, 0, 1)


def test_four_points_valid():
    co = circular_from_triples(range(4), circle_order([F(k, 4) for k in range(4)]).orient)
    assert isinstance(co, CircularOrder)


def test_single_flip_names_quadruple():
    base = circle_order([F(k, 4) for k in range(4)])
    table = {}
    for t in permutations(range(4), 3):
        table[t] = base.orient(*t)
    for t in permutations((0, 1, 2)):
        table[t] = -table[t]
    res = circular_from_triples(range(4), table)
    assert isinstance(res, Incompatibility)
    assert res.subset == (0, 1, 2, 3)


def test_flipped_quadruple_has_no_extension():
    # brute force: no arrangement of four points gives the flipped signs
    base = circle_order([F(k, 4) for k in range(4)])
    flipped = {t: base.orient(*t) for t in combinations(range(4), 3)}
    flipped[(0, 1, 2)] *= -1
    for arr in permutations(range(4)):
        pos = {x: F(i, 4) for i, x in enumerate(arr)}
        signs = {t: circle_orient(*(pos[x] for x in t)) for t in flipped}
        assert signs != flipped


def test_three_element_carrier():
    table = {t: (1 if "".join(t) in "xyzxy" else -1) for t in permutations("xyz")}
    co = circular_from_triples("xyz", table)
    assert isinstance(co, CircularOrder)
    assert co.orient("y", "z", "x") == 1


def test_cut_quarter_points():
    co = circle_order([F(k, 4) for k in range(4)])
    assert cut_at(co, 0).carrier == [1, 2, 3]
    assert cut_at(co, 2).carrier == [3, 0, 1]


def test_cut_three_elements():
    co = circle_order([F(0), F(1, 3), F(2, 3)])
    assert len(cut_at(co, 1)) == 2


def _z2_phi(g):
    return g[1]


def _z2_diff(g1, g2):
    # g2^-1 g1 in the kernel Z x 0, identified by its first coordinate
    return g1[0] - g2[0]


def test_ses_lo_rules():
    elems = [(5, 0), (0, 1), (3, 2), (5, 2)]
    nat = TotalOrder(list(range(-10, 11)))
    order = ses_extend_lo(elems, nat, nat, _z2_phi, _z2_diff, 0)
    assert order.less((5, 0), (0, 1))
    assert order.less((3, 2), (5, 2))


def test_ses_lo_unresolved():
    nat = TotalOrder(list(range(-3, 4)))
    with pytest.raises(UnresolvedKernelElement):
        ses_extend_lo([(0, 0), (1, 0)], nat, nat, _z2_phi, lambda a, b: None, 0)


def _z_mod3_extension(elements, literal=False):
    """Z acting on itself with quotient Z/3 circularly ordered by rotation."""
    quotient = circle_order([F(0), F(1, 3), F(2, 3)])
    kernel = TotalOrder(list(range(-40, 41)))
    return ses_extend_co(elements, kernel, quotient, lambda g: g % 3,
                         lambda a, b: (a - b) // 3, 0, literal_fiber_sign=literal)


def test_ses_co_is_circular_order():
    elems = list(range(-4, 5))
    co = _z_mod3_extension(elems)
    assert validate_circular(co).ok


def test_ses_co_literal_sign_fails():
    co = _z_mod3_extension(list(range(-4, 5)), literal=True)
    assert not validate_circular(co).ok


def test_ses_co_left_invariant():
    elems = list(range(-6, 7))
    co = _z_mod3_extension(elems)
    for x, y, z in combinations(range(-3, 4), 3):
        for g in (-3, -1, 2):
            assert co.orient(x, y, z) == co.orient(x + g, y + g, z + g)


def test_validate_total_detects_disagreement():
    order = TotalOrder([1, 2, 3])
    assert validate_total(order, lambda a, b: a < b).ok
    assert not validate_total(order, lambda a, b: a > b).ok


def test_json_shapes():
    co = circle_order([F(0), F(1, 2), F(3, 4)])
    assert co.to_json() == {"carrier": [0, 1, 2], "triples": [[0, 1, 2, 1]]}
    assert TotalOrder(["a", "b"]).to_json() == {"carrier": ["a", "b"], "ranks": {"a": 0, "b": 1}}


distinct_points = st.lists(st.fractions(min_value=0, max_value=1, max_denominator=64).filter(lambda x: x < 1),
                           min_size=3, max_size=7, unique=True)


@given(distinct_points)
@settings(max_examples=60, deadline=None)
def test_geometric_round_trip(points):
    geo = circle_order(points)
    co = circular_from_triples(geo.carrier, geo.orient)
    assert isinstance(co, CircularOrder)
    for t in permutations(geo.carrier, 3):
        assert co.orient(*t) == circle_orient(*(points[i] for i in t))


@given(distinct_points)
@settings(max_examples=60, deadline=None)
def test_cuts_are_total_and_agree(points):
    co = circle_order(points)
    for p in co.carrier:
        order = cut_at(co, p)
        assert validate_total(order, lambda x, y: co.orient(p, x, y) == 1).ok
        for q in co.carrier:
            assert cuts_agree(co, p, q)


@given(distinct_points, st.data())
@settings(max_examples=60, deadline=None)
def test_alternation_and_cyclicity(points, data):
    co = circle_order(points)
    x, y, z = data.draw(st.permutations(co.carrier))[:3]
    v = co.orient(x, y, z)
    assert co.orient(y, z, x) == v == co.orient(z, x, y)
    assert co.orient(y, x, z) == -v
