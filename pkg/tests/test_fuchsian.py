import math
import random
from itertools import combinations

import pytest

from orderlab.braid import BraidWord
from orderlab.fuchsian import (
    INFINITY,
    DegenerateTriple,
    NotHyperbolic,
    apply,
    axis_endpoints,
    braid_to_free_auto,
    crosses,
    madj,
    mcg_circular_compare,
    mmul,
    mobius,
    orient,
    point_float,
    puncture_representation,
    same_point,
    word_matrix,
)
from orderlab.order_core import CircularOrder, validate_circular
from orderlab.words import free_reduce


def random_hyperbolic(rng):
    while True:
        m = mobius([[rng.randint(-9, 9) for _ in range(2)] for _ in range(2)])
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if det > 0 and (m[0][0] + m[1][1]) ** 2 > 4 * det:
            return m


def random_braid(rng, n, length):
    return BraidWord(n, tuple((rng.randrange(1, n), rng.choice((1, -1))) for _ in range(length)))


def random_word(rng, rank, length):
    while True:
        w = free_reduce(tuple((rng.randrange(rank), rng.choice((1, -1))) for _ in range(length)))
        if w:
            return w


def test_golden_axis():
    e = axis_endpoints([[2, 1], [1, 1]])
    phi = (1 + math.sqrt(5)) / 2
    assert point_float(e.attracting) == pytest.approx(phi)
    assert point_float(e.repelling) == pytest.approx(1 - phi)


def test_diagonal_axis():
    e = axis_endpoints([[2, 0], [0, "1/2"]])
    assert same_point(e.attracting, INFINITY)
    assert point_float(e.repelling) == 0


def test_parabolic_rejected():
    with pytest.raises(NotHyperbolic):
        axis_endpoints([[1, 1], [0, 1]])


def test_fixed_points_are_exact():
    rng = random.Random(17)
    for _ in range(100):
        m = random_hyperbolic(rng)
        e = axis_endpoints(m)
        for p in (e.attracting, e.repelling):
            q = apply(m, p)
            # identically zero residual: the cross product vanishes exactly
            residual = q[0] * p[1] - q[1] * p[0]
            assert residual.is_zero()


def test_conjugacy_equivariance():
    rng = random.Random(4)
    for _ in range(30):
        m, g = random_hyperbolic(rng), random_hyperbolic(rng)
        e = axis_endpoints(m)
        c = axis_endpoints(mmul(mmul(g, m), madj(g)))
        assert same_point(c.attracting, apply(g, e.attracting))
        assert same_point(c.repelling, apply(g, e.repelling))


def test_crossing_preserved_by_braids():
    rng = random.Random(8)
    rep = puncture_representation(3)
    pairs = [(random_word(rng, 3, 3), random_word(rng, 3, 3)) for _ in range(30)]
    axes = lambda w: axis_endpoints(word_matrix(rep, w))
    assert {crosses(axes(a), axes(b)) for a, b in pairs} == {True, False}
    for _ in range(50):
        phi = braid_to_free_auto(random_braid(rng, 3, 4))
        for a, b in pairs:
            assert crosses(axes(a), axes(b)) == crosses(axes(phi(a)), axes(phi(b)))


def test_endpoint_order_is_circular():
    rng = random.Random(9)
    rep = puncture_representation(3)
    words = list({random_word(rng, 3, 4) for _ in range(40)})
    pts = {}
    for w in words:
        p = axis_endpoints(word_matrix(rep, w)).attracting
        if not any(same_point(p, q) for q in pts.values()):
            pts[w] = p
    ids = list(pts)
    co = CircularOrder(ids, lambda x, y, z: orient(pts[x], pts[y], pts[z]))
    for quad in rng.sample(list(combinations(ids, 4)), 50):
        assert validate_circular(CircularOrder(list(quad), co.orient)).ok


def test_mcg_alternating_and_invariant():
    rng = random.Random(12)
    for _ in range(25):
        fs = [braid_to_free_auto(random_braid(rng, 3, rng.randrange(1, 4))) for _ in range(3)]
        if len(set(fs)) < 3:
            continue
        s = mcg_circular_compare(*fs)
        assert mcg_circular_compare(fs[1], fs[0], fs[2]) == -s
        psi = braid_to_free_auto(random_braid(rng, 3, 3))
        # left multiplication: psi after each phi
        assert mcg_circular_compare(*(psi * f for f in fs)) == s


def test_mcg_degenerate():
    f = braid_to_free_auto(BraidWord.parse(3, "s1"))
    with pytest.raises(DegenerateTriple):
        mcg_circular_compare(f, f, braid_to_free_auto(BraidWord.parse(3, "s2")))
