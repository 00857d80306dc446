"""Circle actions with exact lifts, dynamical realization, Denjoy blow-up, and orders from actions.

Circle points of a PL action are rationals in [0, 1) (turns); points of a
projective action are canonical pairs ``(x, 1)`` or ``(1, 0)`` on RP^1.
Group elements are words over the action's generators.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .order_core import CircularOrder, NonDistinct, TotalOrder, circle_orient
from .words import Word, free_reduce, inverse


class OrbitNotClosed(Exception):
    pass


class IndistinguishableElements(Exception):
    pass


def frac(x) -> Fraction:
    if isinstance(x, str) and "/" in x:
        n, d = x.split("/")
        return Fraction(int(n), int(d))
    return Fraction(x)


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# piecewise-linear lifts


class PLHomeo:
    """A PL lift R -> R commuting with x -> x+1, stored over one period.

    ``xs[0] = 0 < xs[1] < ... < 1`` with values ``ys`` strictly increasing
    and ``ys[-1] < ys[0] + 1``.
    """

    __slots__ = ("xs", "ys")

    def __init__(self, breakpoints: Sequence[tuple]):
        pts = sorted((frac(x), frac(y)) for x, y in breakpoints)
        if not pts:
            raise ValueError("need at least one breakpoint")
        # normalize the table to start at x = 0
        shifted = []
        for x, y in pts:
            n = math.floor(x)
            shifted.append((x - n, y - n))
        # a closing point one period on repeats the first one
        shifted = sorted(set(shifted))
        if shifted[0][0] != 0:
            x0, y0 = shifted[-1]
            x1, y1 = shifted[0]
            # interpolate the value at 0 from the wrap-around segment
            xa, ya = x0 - 1, y0 - 1
            y_at0 = ya + (y1 - ya) * (0 - xa) / (x1 - xa)
            shifted.insert(0, (Fraction(0), y_at0))
        xs = [x for x, _ in shifted]
        ys = [y for _, y in shifted]
        for i in range(len(xs) - 1):
            if not (xs[i] < xs[i + 1] and ys[i] < ys[i + 1]):
                raise ValueError("breakpoints must be strictly increasing")
        if not ys[-1] < ys[0] + 1:
            raise ValueError("lift must have degree one")
        self.xs, self.ys = xs, ys

    @classmethod
    def rotation(cls, r) -> "PLHomeo":
        return cls([(0, frac(r))])

    @classmethod
    def identity(cls) -> "PLHomeo":
        return cls([(0, 0)])

    def __call__(self, X) -> Fraction:
        X = Fraction(X)
        n = math.floor(X)
        t = X - n
        i = bisect_right(self.xs, t) - 1
        x0, y0 = self.xs[i], self.ys[i]
        if i + 1 < len(self.xs):
            x1, y1 = self.xs[i + 1], self.ys[i + 1]
        else:
            x1, y1 = Fraction(1), self.ys[0] + 1
        return y0 + (y1 - y0) * (t - x0) / (x1 - x0) + n

    def inverse(self) -> "PLHomeo":
        return PLHomeo([(y, x) for x, y in zip(self.xs, self.ys)])

    def breakpoints_mod1(self) -> list:
        return list(self.xs)

    def compose(self, other: "PLHomeo") -> "PLHomeo":
        """``self`` after ``other``."""
        inv = other.inverse()
        ts = set(other.xs)
        for x in self.xs:
            u = inv(x)
            ts.add(u - math.floor(u))
        ts = sorted(ts)
        return PLHomeo([(t, self(other(t))) for t in ts])

    def shift(self, n: int) -> "PLHomeo":
        out = PLHomeo.__new__(PLHomeo)
        out.xs = list(self.xs)
        out.ys = [y + n for y in self.ys]
        return out

    def simplified(self) -> "PLHomeo":
        """Drop breakpoints (other than 0) where the slope does not change."""
        n = len(self.xs)
        xs = self.xs + [Fraction(1)]
        ys = self.ys + [self.ys[0] + 1]
        keep = [0]
        for i in range(1, n):
            s_in = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1])
            s_out = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
            if s_in != s_out:
                keep.append(i)
        out = PLHomeo.__new__(PLHomeo)
        out.xs = [self.xs[i] for i in keep]
        out.ys = [self.ys[i] for i in keep]
        return out

    def circle(self, x) -> Fraction:
        return self(x) % 1

    def table(self) -> list:
        return [[frac_str(x), frac_str(y)] for x, y in zip(self.xs, self.ys)]

    def __eq__(self, other):
        if not isinstance(other, PLHomeo):
            return NotImplemented
        ts = sorted(set(self.xs) | set(other.xs))
        return all(self(t) == other(t) for t in ts)

    def __hash__(self):
        return hash(tuple(self(t) for t in self.xs[:1]))

    def __repr__(self):
        return f"PLHomeo({self.table()})"


class CircleAction:
    """Common interface: generator-word elements acting on circle points.

    Subclasses provide ``act``, ``orient``, ``section`` (the lift of ``g``
    whose value at the base cover point lies in the first fundamental
    domain), ``section_inverse`` and cover-point bookkeeping.
    """

    generators: tuple = ()

    def act(self, g: Word, x):
        raise NotImplementedError

    def orient(self, x, y, z) -> int:
        raise NotImplementedError

    def base_cover(self):
        raise NotImplementedError

    def section(self, g: Word, X):
        raise NotImplementedError

    def section_inverse(self, g: Word, X):
        raise NotImplementedError

    def cover_offset(self, X, Y) -> int:
        """The integer n with Y = X + n, for two lifts of the same circle point."""
        raise NotImplementedError

    def translation_at_base(self, g: Word) -> int:
        """For ``g`` acting trivially near the basepoint, the integer its section translates by."""
        X = self.base_cover()
        return self.cover_offset(X, self.section(g, X))

    def same(self, g: Word, h: Word, points) -> bool:
        return all(self.act(g, p) == self.act(h, p) for p in points)


class PLAction(CircleAction):
    """Action generated by PL lifts; points are rationals in [0, 1)."""

    def __init__(self, generators: dict):
        self.gens = {name: (h if isinstance(h, PLHomeo) else PLHomeo(h)) for name, h in generators.items()}
        self.generators = tuple(self.gens)
        self._inv = {name: h.inverse() for name, h in self.gens.items()}
        self._cache: dict = {}

    def lift(self, g: Word) -> PLHomeo:
        """Composite of the generator lifts (rightmost letter applied first)."""
        g = free_reduce(g)
        hit = self._cache.get(g)
        if hit is not None:
            return hit
        out = PLHomeo.identity()
        for gen, s in reversed(g):
            name = self.generators[gen]
            h = self.gens[name] if s > 0 else self._inv[name]
            out = h.compose(out)
        self._cache[g] = out
        return out

    def lift_apply(self, g: Word, X) -> Fraction:
        X = Fraction(X)
        for gen, s in reversed(free_reduce(g)):
            name = self.generators[gen]
            X = (self.gens[name] if s > 0 else self._inv[name])(X)
        return X

    def lift_apply_inverse(self, g: Word, X) -> Fraction:
        return self.lift_apply(inverse(g), X)

    def act(self, g: Word, x) -> Fraction:
        return self.lift_apply(g, x) % 1

    def orient(self, x, y, z) -> int:
        return circle_orient(x, y, z)

    def base_cover(self) -> Fraction:
        return Fraction(0)

    def _shift(self, g: Word) -> int:
        return math.floor(self.lift_apply(g, 0))

    def section(self, g: Word, X) -> Fraction:
        return self.lift_apply(g, X) - self._shift(g)

    def section_inverse(self, g: Word, X) -> Fraction:
        return self.lift_apply_inverse(g, Fraction(X) + self._shift(g))

    def cover_offset(self, X, Y) -> int:
        d = Fraction(Y) - Fraction(X)
        if d.denominator != 1:
            raise ValueError("points are not lifts of the same circle point")
        return int(d)

    def rotation_number_of_lift(self, g: Word, iterations: int = 64) -> Fraction:
        """Crude rotation number estimate of the section of ``g`` (exact for rotations)."""
        X = Fraction(0)
        for _ in range(iterations):
            X = self.section(g, X)
        return X / iterations


# ---------------------------------------------------------------------------
# projective actions on RP^1


def proj_point(x) -> tuple:
    """Canonical projective point: ``(x, 1)`` for finite x, ``(1, 0)`` for infinity."""
    if isinstance(x, tuple):
        p, q = Fraction(x[0]), Fraction(x[1])
        if q == 0:
            if p == 0:
                raise ValueError("(0:0) is not a point")
            return (Fraction(1), Fraction(0))
        return (p / q, Fraction(1))
    if x == "inf" or x == math.inf:
        return (Fraction(1), Fraction(0))
    return (Fraction(x), Fraction(1))


def proj_orient(u: tuple, v: tuple, w: tuple) -> int:
    """Orientation on RP^1 with (0, 1, infinity) positive."""
    def det(a, b):
        return a[0] * b[1] - a[1] * b[0]

    d = det(u, v) * det(u, w) * det(v, w)
    if d == 0:
        raise NonDistinct((u, v, w))
    return -1 if d > 0 else 1


def mat_apply(m, x: tuple) -> tuple:
    (a, b), (c, d) = m
    return proj_point((a * x[0] + b * x[1], c * x[0] + d * x[1]))


def mat_mul(m, n):
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def mat_adj(m):
    (a, b), (c, d) = m
    return ((d, -b), (-c, a))


def mat_det(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def mat(rows) -> tuple:
    return tuple(tuple(frac(x) for x in row) for row in rows)


class MobiusAction(CircleAction):
    """Projective action of matrices with positive determinant on RP^1.

    Cover points are pairs ``(point, sheet)`` relative to ``basepoint``:
    sheet n holds the arc that starts at the basepoint and runs once
    anticlockwise, shifted n times.
    """

    def __init__(self, generators: dict, basepoint=(0, 1)):
        self.gens = {name: mat(m) for name, m in generators.items()}
        for name, m in self.gens.items():
            if mat_det(m) <= 0:
                raise ValueError(f"generator {name} must have positive determinant")
        self.generators = tuple(self.gens)
        self.base = proj_point(basepoint)

    def matrix(self, g: Word):
        out = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
        for gen, s in free_reduce(g):
            m = self.gens[self.generators[gen]]
            out = mat_mul(out, m if s > 0 else mat_adj(m))
        return out

    def act(self, g: Word, x) -> tuple:
        return mat_apply(self.matrix(g), proj_point(x))

    def orient(self, x, y, z) -> int:
        return proj_orient(proj_point(x), proj_point(y), proj_point(z))

    def _before(self, u: tuple, v: tuple) -> bool:
        """Angle of u from the basepoint is smaller than that of v."""
        b = self.base
        if u == v:
            return False
        if u == b:
            return True
        if v == b:
            return False
        return proj_orient(b, u, v) == 1

    def base_cover(self):
        return (self.base, 0)

    def section(self, g: Word, X):
        x, n = X
        m = self.matrix(g)
        gx, gb = mat_apply(m, x), mat_apply(m, self.base)
        return (gx, n + (1 if self._before(gx, gb) else 0))

    def section_inverse(self, g: Word, X):
        y, n = X
        m = self.matrix(g)
        gb = mat_apply(m, self.base)
        return (mat_apply(mat_adj(m), y), n - (1 if self._before(y, gb) else 0))

    def cover_offset(self, X, Y) -> int:
        if X[0] != Y[0]:
            raise ValueError("points are not lifts of the same circle point")
        return Y[1] - X[1]


# ---------------------------------------------------------------------------
# dynamical realization


@dataclass
class Embedding:
    points: dict  # element id -> Fraction in [0, 1)

    def orient(self, x, y, z) -> int:
        return circle_orient(self.points[x], self.points[y], self.points[z])


def dynamical_realization(co: CircularOrder, enumeration: Optional[Sequence] = None) -> Embedding:
    """Embed a circularly ordered set in the circle by the midpoint rule."""
    order = list(enumeration) if enumeration is not None else list(co.carrier)
    if len(order) < 3:
        raise ValueError("dynamical realization needs at least 3 elements")
    if set(order) != set(co.carrier) or len(order) != len(co.carrier):
        raise ValueError("enumeration must list the carrier exactly once")
    pts = {order[0]: Fraction(0), order[1]: Fraction(1, 2)}
    ring = [order[0], order[1]]  # placed ids sorted by angle
    for x in order[2:]:
        k = len(ring)
        for i in range(k):
            a, b = ring[i], ring[(i + 1) % k]
            if co.orient(a, x, b) == 1:
                lo, hi = pts[a], pts[b]
                if hi <= lo:
                    hi += 1
                pts[x] = ((lo + hi) / 2) % 1
                ring.insert(i + 1, x)
                break
        else:  # pragma: no cover - impossible for a valid circular order
            raise ValueError(f"no complementary arc for {x!r}")
    return Embedding(pts)


# ---------------------------------------------------------------------------
# blow-up


@dataclass
class BlowUpData:
    orbit: list  # sorted orbit points in [0, 1)
    weights: dict  # orbit point -> share of the inserted length, total 1
    inserted_length: Fraction
    intervals: dict  # orbit point -> (left, right) in the new circle
    collapse: PLHomeo  # not a homeomorphism; evaluated through ``pi``
    scale: Fraction

    def pi(self, u) -> Fraction:
        """The monotone degree-one collapse map, as a lift R -> R."""
        u = Fraction(u)
        n = math.floor(u)
        t = u - n
        below = Fraction(0)
        for o in self.orbit:
            left, right = self.intervals[o]
            if t < left:
                break
            if t <= right:
                return o + n
            below += self.weights[o] * self.inserted_length * self.scale
        return t * self.scale - below + n

    def pi_inverse_left(self, X) -> Fraction:
        return self._pi_inverse(X, 0)

    def pi_inverse_right(self, X) -> Fraction:
        return self._pi_inverse(X, 1)

    def _pi_inverse(self, X, side: int) -> Fraction:
        X = Fraction(X)
        n = math.floor(X)
        t = X - n
        if t in self.intervals:
            return self.intervals[t][side] + n
        below = sum((self.weights[o] * self.inserted_length * self.scale for o in self.orbit if o < t), Fraction(0))
        return (t + below) / self.scale + n


def orbit_closure(action: PLAction, p, limit: int = 10_000) -> list:
    p = Fraction(p) % 1
    seen = {p}
    todo = [p]
    while todo:
        x = todo.pop()
        for i in range(len(action.generators)):
            for s in (1, -1):
                y = action.act(((i, s),), x)
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
                    if len(seen) > limit:
                        raise OrbitNotClosed("orbit exceeds the limit")
    return sorted(seen)


def blow_up(
    action: PLAction,
    p,
    weights: Sequence,
    orbit: Optional[Sequence] = None,
    insertion: Optional[Callable] = None,
):
    """Replace each orbit point of ``p`` by an interval and return the new action.

    ``weights[i]`` is the length given to ``orbit[i]`` before the circle is
    rescaled back to length 1. ``insertion(name, source, target)`` may return
    breakpoints of a homeomorphism of [0, 1] used instead of the affine map
    between inserted intervals.
    """
    if orbit is None:
        orbit = orbit_closure(action, p)
    orbit = [Fraction(o) % 1 for o in orbit]
    if Fraction(p) % 1 not in orbit:
        raise OrbitNotClosed("p must belong to the orbit")
    if len(weights) != len(orbit):
        raise ValueError("one weight per orbit point")
    weights = [frac(w) for w in weights]
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be positive")
    oset = set(orbit)
    for name in action.generators:
        i = action.generators.index(name)
        for o in orbit:
            for s in (1, -1):
                if action.act(((i, s),), o) not in oset:
                    raise OrbitNotClosed(f"{name}^{s} moves {o} outside the orbit")

    pairs = sorted(zip(orbit, weights))
    total = sum(weights)
    scale = 1 + total
    intervals = {}
    acc = Fraction(0)
    for o, w in pairs:
        intervals[o] = ((o + acc) / scale, (o + acc + w) / scale)
        acc += w
    data = BlowUpData(
        orbit=[o for o, _ in pairs],
        weights={o: w / total for o, w in pairs},
        inserted_length=total / scale,
        intervals=intervals,
        collapse=PLHomeo.identity(),
        scale=scale,
    )

    new_gens = {}
    for name, h in action.gens.items():
        pts = []
        for o in data.orbit:
            target = h(o)
            left, right = intervals[o]
            tl, tr = data.pi_inverse_left(target), data.pi_inverse_right(target)
            pts.append((left, tl))
            pts.append((right, tr))
            if insertion is not None:
                inner = insertion(name, o, target % 1) or []
                for s, v in inner:
                    s, v = frac(s), frac(v)
                    if 0 < s < 1:
                        pts.append((left + s * (right - left), tl + v * (tr - tl)))
        for b in h.xs:
            if b not in oset:
                u = data.pi_inverse_left(b)
                pts.append((u, data.pi_inverse_left(h(b))))
        dedup = {}
        for x, y in pts:
            dedup[x] = y
        new_gens[name] = PLHomeo(sorted(dedup.items()))
    return PLAction(new_gens), data


# ---------------------------------------------------------------------------
# orders from actions


def order_from_action(
    action: CircleAction,
    elements: Sequence[Word],
    basepoints: Sequence,
    kernel_order=None,
    kernel_key: Optional[Callable[[Word], object]] = None,
) -> CircularOrder:
    """Circular order on ``elements`` read off from an action.

    The orbit of the first basepoint orders cosets of its stabilizer. Two
    elements with the same image there are compared by ``k = g2^-1 g1`` in the
    stabilizer: ``k`` is positive when it moves the first later basepoint it
    does not fix forward (in the line obtained by cutting at the first
    basepoint). Elements fixing all basepoints fall back on ``kernel_order``
    (a :class:`TotalOrder` on ``kernel_key`` values, or a callable returning
    the sign of ``k``).
    """
    if not basepoints:
        raise ValueError("need at least one basepoint")
    elements = [free_reduce(g) for g in elements]
    p0 = basepoints[0]
    rest = list(basepoints[1:])
    img0 = {g: action.act(g, p0) for g in elements}

    def kernel_sign(k: Word) -> int:
        for q in rest:
            kq = action.act(k, q)
            if kq != q:
                if q == p0 or kq == p0:
                    continue
                return action.orient(p0, q, kq)
        if kernel_order is None:
            raise IndistinguishableElements(k)
        if isinstance(kernel_order, TotalOrder):
            key = kernel_key(k) if kernel_key is not None else k
            ident = kernel_key(()) if kernel_key is not None else ()
            c = kernel_order.compare(key, ident)
        else:
            c = int(kernel_order(k))
        if c == 0:
            raise IndistinguishableElements(k)
        return c

    def fiber_less(g1, g2) -> bool:
        return kernel_sign(free_reduce(inverse(g2) + g1)) < 0

    for i, g in enumerate(elements):
        for h in elements[i + 1:]:
            if img0[g] == img0[h]:
                kernel_sign(free_reduce(inverse(h) + g))

    def orient(g1, g2, g3) -> int:
        h = (img0[g1], img0[g2], img0[g3])
        if len(set(h)) == 3:
            return action.orient(*h)
        t = (g1, g2, g3)
        if len(set(h)) == 2:
            for r in range(3):
                a, b, c = t[r:] + t[:r]
                if img0[a] == img0[b]:
                    return 1 if fiber_less(a, b) else -1
        lows = sum(1 for x, y in ((g1, g2), (g2, g3), (g3, g1)) if fiber_less(x, y))
        return 1 if lows == 2 else -1

    return CircularOrder(elements, orient)
