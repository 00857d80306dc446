"""Total orders, circular orders, cuts, and orders built from short exact sequences.

Circular orders use the anticlockwise convention: ``orient(x, y, z) == +1``
means the three points are met in that order when travelling anticlockwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import combinations
from typing import Callable, Hashable, Iterable, Optional, Sequence

Id = Hashable
OrientFn = Callable[[Id, Id, Id], int]


class OrderError(Exception):
    pass


class NonDistinct(OrderError):
    pass


class UnknownId(OrderError):
    pass


class UnresolvedKernelElement(OrderError):
    pass


class Incompatibility(OrderError):
    """Raised (or returned) when a triple function is not a circular order.

    ``subset`` is the offending 3- or 4-element subset and ``chain`` is the
    failed transitivity chain ``(p, x, y, z)``: ``x <_p y`` and ``y <_p z``
    but not ``x <_p z``.
    """

    def __init__(self, subset: tuple, chain: tuple, reason: str = "transitivity"):
        self.subset = tuple(subset)
        self.chain = tuple(chain)
        self.reason = reason
        super().__init__(f"incompatible {reason} on {self.subset}: chain {self.chain}")


@dataclass(frozen=True)
class OrderReport:
    verdict: str
    counterexample: Optional[tuple] = None

    def __post_init__(self):
        if self.verdict not in ("pass", "fail"):
            raise ValueError(self.verdict)
        if (self.verdict == "fail") != (self.counterexample is not None):
            raise ValueError("counterexample present iff verdict is fail")

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"


class TotalOrder:
    """A finite total order given by ranks."""

    def __init__(self, carrier: Sequence[Id]):
        self.carrier = list(carrier)
        self.rank = {x: i for i, x in enumerate(self.carrier)}
        if len(self.rank) != len(self.carrier):
            raise NonDistinct("carrier has repeated ids")

    @classmethod
    def from_ranks(cls, ranks: dict) -> "TotalOrder":
        items = sorted(ranks.items(), key=lambda kv: kv[1])
        if [r for _, r in items] != list(range(len(items))):
            raise ValueError("ranks must be a bijection onto 0..n-1")
        return cls([x for x, _ in items])

    def less(self, x: Id, y: Id) -> bool:
        try:
            return self.rank[x] < self.rank[y]
        except KeyError as exc:
            raise UnknownId(exc.args[0]) from None

    def compare(self, x: Id, y: Id) -> int:
        if x == y:
            return 0
        return -1 if self.less(x, y) else 1

    def __len__(self):
        return len(self.carrier)

    def __eq__(self, other):
        return isinstance(other, TotalOrder) and self.carrier == other.carrier

    def __repr__(self):
        return f"TotalOrder({self.carrier!r})"

    def to_json(self) -> dict:
        return {"carrier": list(self.carrier), "ranks": {str(x): r for x, r in self.rank.items()}}


class CircularOrder:
    """A circular order on a finite carrier, stored as a memoized orientation function.

    Construct through :func:`circular_from_triples` to get validation; the
    bare constructor trusts its input.
    """

    def __init__(self, carrier: Sequence[Id], orient: OrientFn):
        self.carrier = list(carrier)
        self._members = set(self.carrier)
        if len(self._members) != len(self.carrier):
            raise NonDistinct("carrier has repeated ids")
        self._orient = orient
        self._memo: dict = {}

    def _raw(self, x, y, z) -> int:
        key = (x, y, z)
        v = self._memo.get(key)
        if v is None:
            v = int(self._orient(x, y, z))
            if v not in (-1, 1):
                raise ValueError(f"orientation of {key} is {v}, expected +-1")
            self._memo[key] = v
        return v

    def orient(self, x: Id, y: Id, z: Id) -> int:
        for i in (x, y, z):
            if i not in self._members:
                raise UnknownId(i)
        if x == y or y == z or x == z:
            raise NonDistinct((x, y, z))
        return self._raw(x, y, z)

    __call__ = orient

    def triples(self) -> list:
        return [[x, y, z, self._raw(x, y, z)] for x, y, z in combinations(self.carrier, 3)]

    def to_json(self, with_triples: bool = True) -> dict:
        out: dict = {"carrier": list(self.carrier)}
        if with_triples:
            out["triples"] = self.triples()
        return out

    def __repr__(self):
        return f"CircularOrder(n={len(self.carrier)})"


def orient_triple(co: CircularOrder, x: Id, y: Id, z: Id) -> int:
    return co.orient(x, y, z)


def _check_alternating(carrier, orient) -> None:
    for x, y, z in combinations(carrier, 3):
        v = orient(x, y, z)
        if v not in (-1, 1):
            raise Incompatibility((x, y, z), (x, y, z), "value")
        for perm, sign in (((y, z, x), 1), ((z, x, y), 1), ((y, x, z), -1), ((x, z, y), -1), ((z, y, x), -1)):
            if orient(*perm) != sign * v:
                raise Incompatibility((x, y, z), perm, "alternation")


def circular_from_triples(carrier: Sequence[Id], orient: OrientFn | dict, raise_on_fail: bool = False):
    """Validate ``orient`` and wrap it as a :class:`CircularOrder`.

    Returns an :class:`Incompatibility` (or raises, if asked) naming the
    lexicographically least bad subset.
    """
    carrier = list(carrier)
    if isinstance(orient, dict):
        table = orient
        orient = lambda x, y, z: table[(x, y, z)]
    if len(set(carrier)) != len(carrier):
        raise NonDistinct("carrier has repeated ids")
    if len(carrier) < 3:
        raise ValueError("a circular order needs at least 3 elements")

    def fail(exc: Incompatibility):
        if raise_on_fail:
            raise exc
        return exc

    try:
        _check_alternating(carrier, orient)
    except Incompatibility as exc:
        return fail(exc)

    if len(carrier) == 3:
        x, y, z = carrier
        # y <_x z  iff  z <_y x
        if (orient(x, y, z) == 1) != (orient(y, z, x) == 1):
            return fail(Incompatibility((x, y, z), (x, y, z), "three-element condition"))
    else:
        for quad in combinations(carrier, 4):
            for p in quad:
                a, b, c = (q for q in quad if q != p)
                # <_p on {a,b,c} is transitive iff it is not a 3-cycle
                s1, s2, s3 = orient(p, a, b), orient(p, b, c), orient(p, c, a)
                if s1 == s2 == s3:
                    chain = (p, a, b, c) if s1 == 1 else (p, a, c, b)
                    return fail(Incompatibility(quad, chain))
    return CircularOrder(carrier, orient)


def cut_at(co: CircularOrder, p: Id) -> TotalOrder:
    if p not in co._members:
        raise UnknownId(p)
    rest = [x for x in co.carrier if x != p]

    def cmp(x, y):
        if x == y:
            return 0
        return -1 if co.orient(p, x, y) == 1 else 1

    return TotalOrder(sorted(rest, key=cmp_to_key(cmp)))


def cuts_agree(co: CircularOrder, p: Id, q: Id) -> bool:
    """True when the cuts at ``p`` and ``q`` differ by cutting one list at ``q``.

    Cutting at ``q`` is the same as taking the cut at ``p`` with ``q``
    inserted at the front, and rotating so the list starts just after ``q``.
    """
    if p == q:
        return True
    lp = [p] + cut_at(co, p).carrier
    lq = cut_at(co, q).carrier
    i = lp.index(q)
    return lp[i + 1:] + lp[:i] == lq


def ses_extend_lo(
    elements: Iterable[Id],
    kernel_order: TotalOrder,
    quotient_order: TotalOrder,
    phi: Callable[[Id], Id],
    kernel_diff: Callable[[Id, Id], Optional[Id]],
    kernel_identity: Id,
) -> TotalOrder:
    """Order a finite subset of G from orders on K and on H = G/K.

    ``kernel_diff(g1, g2)`` must return the K-id of ``g2^-1 g1`` (or None when
    it cannot be identified) whenever ``phi(g1) == phi(g2)``.
    """
    elements = list(elements)

    def cmp(g1, g2):
        if g1 == g2:
            return 0
        h1, h2 = phi(g1), phi(g2)
        if h1 != h2:
            return quotient_order.compare(h1, h2)
        k = kernel_diff(g1, g2)
        if k is None:
            raise UnresolvedKernelElement((g1, g2))
        c = kernel_order.compare(k, kernel_identity)
        if c == 0:
            raise NonDistinct((g1, g2))
        return c

    return TotalOrder(sorted(elements, key=cmp_to_key(cmp)))


def ses_extend_co(
    elements: Iterable[Id],
    kernel_order: TotalOrder,
    quotient_order: CircularOrder,
    phi: Callable[[Id], Id],
    kernel_diff: Callable[[Id, Id], Optional[Id]],
    kernel_identity: Id,
    literal_fiber_sign: bool = False,
) -> CircularOrder:
    """Circularly order a finite subset of G from a left order on K and a circular order on H.

    Three distinct images: use H. Two equal images: put the equal pair first
    by a cyclic rotation; ``(g1, g2, g3)`` is positive iff ``g1 < g2`` in the
    fiber. Three equal images: positive iff the fiber order is cyclically
    increasing. ``literal_fiber_sign=True`` flips the last case, which is
    kept only to show that choice is not a circular order.
    """
    elements = list(elements)

    def fiber_less(g1, g2) -> bool:
        k = kernel_diff(g1, g2)
        if k is None:
            raise UnresolvedKernelElement((g1, g2))
        return kernel_order.less(k, kernel_identity)

    def orient(g1, g2, g3) -> int:
        h = (phi(g1), phi(g2), phi(g3))
        if len(set(h)) == 3:
            return quotient_order.orient(*h)
        if len(set(h)) == 2:
            t = (g1, g2, g3)
            for r in range(3):
                a, b, c = t[r:] + t[:r]
                if phi(a) == phi(b):
                    return 1 if fiber_less(a, b) else -1
        ranked = sorted((g1, g2, g3), key=cmp_to_key(lambda x, y: 0 if x == y else (-1 if fiber_less(x, y) else 1)))
        i = ranked.index(g1)
        increasing = ranked[i:] + ranked[:i] == [g1, g2, g3]
        sign = 1 if increasing else -1
        return -sign if literal_fiber_sign else sign

    return CircularOrder(elements, orient)


def validate_circular(co: CircularOrder) -> OrderReport:
    res = circular_from_triples(co.carrier, co.orient)
    if isinstance(res, Incompatibility):
        return OrderReport("fail", res.subset)
    return OrderReport("pass")


def validate_total(order: TotalOrder, less: Callable[[Id, Id], bool]) -> OrderReport:
    """Check that ``less`` agrees with the ranked list on every pair."""
    for x, y in combinations(order.carrier, 2):
        if less(x, y) == less(y, x) or less(x, y) != order.less(x, y):
            return OrderReport("fail", (x, y))
    return OrderReport("pass")


def circle_orient(a, b, c) -> int:
    """Orientation of three points on R/Z given by their coordinates in turns."""
    da, db = (b - a) % 1, (c - a) % 1
    if da == 0 or db == 0 or da == db:
        raise NonDistinct((a, b, c))
    return 1 if da < db else -1


def circle_order(points: Sequence) -> CircularOrder:
    """Circular order on distinct points of R/Z (coordinates in turns)."""
    return CircularOrder(list(range(len(points))), lambda i, j, k: circle_orient(points[i], points[j], points[k]))
