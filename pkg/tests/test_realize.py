import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from orderlab.order_core import TotalOrder, circle_order, validate_circular
from orderlab.realize import (
    IndistinguishableElements,
    PLAction,
    PLHomeo,
    blow_up,
    dynamical_realization,
    order_from_action,
)

F = Fraction


def test_rotation_three_midpoints():
    co = circle_order([F(0), F(1, 3), F(2, 3)])
    emb = dynamical_realization(co)
    assert emb.points == {0: F(0), 1: F(1, 2), 2: F(3, 4)}


def test_four_points_any_enumeration():
    co = circle_order([F(0), F(1, 5), F(1, 2), F(4, 5)])
    for enum in permutations(range(4)):
        emb = dynamical_realization(co, enum)
        for t in permutations(range(4), 3):
            assert emb.orient(*t) == co.orient(*t)


def test_two_points_rejected():
    co = circle_order([F(0), F(1, 2), F(3, 4)])
    with pytest.raises(ValueError):
        dynamical_realization(co, [0, 1])


def test_identity_blow_up():
    action = PLAction({"id": PLHomeo.identity()})
    new, data = blow_up(action, 0, [F(1, 2)])
    assert new.gens["id"](F(2, 7)) == F(2, 7)
    assert data.intervals[F(0)] == (F(0), F(1, 3))
    for t in (F(0), F(1, 6), F(1, 3)):
        assert data.pi(t) == 0


def test_half_rotation_blow_up():
    action = PLAction({"r": PLHomeo.rotation(F(1, 2))})
    new, data = blow_up(action, 0, [F(1, 4), F(1, 4)])
    h, g = new.gens["r"], action.gens["r"]
    a, b = data.intervals[F(0)], data.intervals[F(1, 2)]
    assert (h.circle(a[0]), h.circle(a[1])) == b
    assert (h.circle(b[0]), h.circle(b[1])) == a
    rng = random.Random(3)
    for _ in range(20):
        u = F(rng.randrange(1000), 997)
        assert data.pi(h(u)) == g(data.pi(u))


def test_blow_up_weight_count():
    action = PLAction({"r": PLHomeo.rotation(F(1, 2))})
    with pytest.raises(ValueError):
        blow_up(action, 0, [F(1, 4)])


def _rotations():
    return PLAction({"a": PLHomeo.rotation(F(1, 3)), "b": PLHomeo.rotation(F(1, 5))})


def _z2_word(m, n):
    return ((0, 1 if m > 0 else -1),) * abs(m) + ((1, 1 if n > 0 else -1),) * abs(n)


def test_order_from_rotations():
    co = order_from_action(_rotations(), [(), _z2_word(1, 0), _z2_word(0, 1)], [F(0)])
    assert co.orient((), ((0, 1),), ((1, 1),)) == -1


def test_natural_kernel_order_on_a_cyclic_kernel():
    ball = [_z2_word(m, 0) for m in range(-4, 5)]
    key = lambda k: sum(s for g, s in k if g == 0) // 3
    co = order_from_action(_rotations(), ball, [F(0)], kernel_order=TotalOrder(list(range(-3, 4))), kernel_key=key)
    assert validate_circular(co).ok


def test_kernel_needs_an_order():
    with pytest.raises(IndistinguishableElements):
        order_from_action(_rotations(), [(), _z2_word(3, -5)], [F(0)])


def test_kernel_order_gives_circular_order():
    ball = [_z2_word(m, n) for m in range(-4, 5) for n in range(-4, 5) if abs(m) + abs(n) <= 4]

    # the kernel is 3Z x 5Z; order it lexicographically
    def kernel_sign(k):
        m, n = (sum(s for g, s in k if g == i) for i in (0, 1))
        return (m > 0) - (m < 0) if m else (n > 0) - (n < 0)

    co = order_from_action(_rotations(), ball, [F(0)], kernel_order=kernel_sign)
    assert validate_circular(co).ok


points = st.lists(st.fractions(min_value=0, max_value=1, max_denominator=50).filter(lambda x: x < 1),
                  min_size=3, max_size=8, unique=True)


@given(points, st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_realization_is_faithful(pts, rnd):
    co = circle_order(pts)
    enum = list(co.carrier)
    rnd.shuffle(enum)
    emb = dynamical_realization(co, enum)
    assert all(p.denominator & (p.denominator - 1) == 0 for p in emb.points.values())
    assert validate_circular(circle_order([emb.points[i] for i in co.carrier])).ok
    for t in permutations(co.carrier, 3):
        assert emb.orient(*t) == co.orient(*t)


inner = st.lists(st.fractions(min_value=F(1, 20), max_value=F(19, 20), max_denominator=20),
                 min_size=2, max_size=4, unique=True)


@given(inner, inner, st.fractions(min_value=F(1, 9), max_value=2, max_denominator=9))
@settings(max_examples=30, deadline=None)
def test_blow_up_semiconjugacy(xs, ys, weight):
    # a half turn after a PL map fixing 0 and 1/2, so the orbit of 0 is {0, 1/2}
    k = min(len(xs), len(ys))
    xs, ys = sorted(xs)[:k], sorted(ys)[:k]
    half = [(F(0), F(1, 2))] + [(x / 2, y / 2 + F(1, 2)) for x, y in zip(xs, ys)]
    half += [(F(1, 2), F(1))] + [(x / 2 + F(1, 2), y / 2 + 1) for x, y in zip(xs, ys)]
    g = PLHomeo(half)
    action = PLAction({"g": g})
    new, data = blow_up(action, 0, [F(1, 3), weight])
    h = new.gens["g"]
    for u in list(h.xs) + [F(k, 37) for k in range(-5, 42)]:
        assert data.pi(h(u)) == g(data.pi(u))
