"""Plane homeomorphisms, polyline arcs, and Euler numbers of plane actions.

Maps are expression trees over a few primitives (translation, dilation and
radial rotations that twist an annulus).  Arcs are polylines with exact
rational vertices.  Vertex images under translations and dilations are exact;
inside a twisted annulus they are evaluated with mpmath and rounded to dyadic
rationals, so every downstream predicate (crossing signs, turning numbers) is
computed exactly on the resulting polylines.

Sign conventions used throughout:

* a positive twist rotates anticlockwise by ``2*pi*psi(t)``, ``t`` increasing
  outward across the annulus;
* the fundamental class of a surface group with generators
  ``a1, b1, ..., ag, bg`` is the one of the boundary word
  ``[a1, b1] ... [ag, bg]``;
* the crossing sign of arc ``a`` over arc ``b`` is ``sign det(b', a')``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import mpmath

from .realize import frac, frac_str

Point = tuple  # (Fraction, Fraction)
Matrix = tuple  # ((a, b), (c, d)) of Fractions

DEFAULT_TOL = Fraction(1, 1000)
ANGLE_CAP = math.pi / 32
MAX_DEPTH = 40
MAX_PIECES = 400_000
DYADIC_BITS = 64

EXCLUDE_ENDPOINTS = "exclude-endpoints"
INCLUDE_WITH_SIGN = "include-with-sign"

CONJUGATE_THEN_APPLY = "conjugate-then-apply"
LEFT_TO_RIGHT = "left-to-right"

_MP = mpmath.MPContext()
_MP.prec = 160
_ZERO = Fraction(0)
_ONE = Fraction(1)
IDENTITY_MATRIX: Matrix = ((_ONE, _ZERO), (_ZERO, _ONE))


class PlanarError(Exception):
    pass


class RefinementLimit(PlanarError):
    pass


class NonTransverse(PlanarError):
    pass


class DegenerateCorner(PlanarError):
    pass


class InconsistentEdgePairing(PlanarError):
    pass


class NotProper(PlanarError):
    pass


class OrbitNotProper(PlanarError):
    pass


class TangencyAtZero(PlanarError):
    pass


class TangentMismatch(PlanarError):
    pass


class CertificationFailed(PlanarError):
    """Raised when an integer output changes under a finer refinement."""


# ---------------------------------------------------------------------------
# small exact vector helpers


def point(x, y) -> Point:
    return (frac(x), frac(y))


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def _add(p, q):
    return (p[0] + q[0], p[1] + q[1])


def _scale(c, p):
    return (c * p[0], c * p[1])


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _neg(u):
    return (-u[0], -u[1])


def _same_ray(u, v) -> bool:
    return _cross(u, v) == 0 and _dot(u, v) > 0


def _opposite_ray(u, v) -> bool:
    return _cross(u, v) == 0 and _dot(u, v) < 0


def _matvec(m: Matrix, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _left_normal(u):
    return (-u[1], u[0])


def _to_dyadic(x) -> Fraction:
    return Fraction(int(_MP.nint(x * (1 << DYADIC_BITS))), 1 << DYADIC_BITS)


def _mpf(x: Fraction):
    return _MP.mpf(x.numerator) / x.denominator


def _fl(p) -> tuple:
    return (float(p[0]), float(p[1]))


def _quarter_turn(w, k: int):
    k %= 4
    for _ in range(k):
        w = (-w[1], w[0])
    return w


def _segment_dist_sq(c, u, v) -> tuple:
    """Exact (min, max) squared distance from ``c`` to the segment ``u v``."""
    d = _sub(v, u)
    dd = _dot(d, d)
    s = _dot(_sub(c, u), d) / dd
    s = min(max(s, _ZERO), _ONE)
    near = _add(u, _scale(s, d))
    w = _sub(near, c)
    far = max(_dot(_sub(u, c), _sub(u, c)), _dot(_sub(v, c), _sub(v, c)))
    return _dot(w, w), far


def _on_segment(q, u, v) -> bool:
    if _cross(_sub(v, u), _sub(q, u)) != 0:
        return False
    return min(u[0], v[0]) <= q[0] <= max(u[0], v[0]) and min(u[1], v[1]) <= q[1] <= max(u[1], v[1])


# ---------------------------------------------------------------------------
# twist profile


def default_profile_values() -> tuple:
    """Eight PL steps of the bump ``(1 - cos(pi t)) / 2``, rounded to 2^-16."""
    vals = [Fraction(round((1 - math.cos(math.pi * k / 8)) / 2 * 65536), 65536) for k in range(9)]
    vals[0], vals[-1] = _ZERO, _ONE
    return tuple(vals)


@dataclass(frozen=True)
class Profile:
    """Monotone PL map [0,1] -> [0,1] with equally spaced breakpoints."""

    values: tuple = field(default_factory=default_profile_values)

    def __post_init__(self):
        vals = tuple(frac(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 2 or vals[0] != 0 or vals[-1] != 1:
            raise ValueError("profile must start at 0 and end at 1")
        if any(b < a for a, b in zip(vals, vals[1:])):
            raise ValueError("profile must be monotone")

    @property
    def pieces(self) -> int:
        return len(self.values) - 1

    def __call__(self, t):
        n = self.pieces
        if t <= 0:
            return _MP.mpf(0)
        if t >= 1:
            return _MP.mpf(1)
        k = min(int(_MP.floor(t * n)), n - 1)
        a, b = _mpf(self.values[k]), _mpf(self.values[k + 1])
        return a + (b - a) * (t * n - k)

    def slope(self, t):
        n = self.pieces
        if t < 0 or t >= 1:
            return _MP.mpf(0)
        k = min(int(_MP.floor(t * n)), n - 1)
        return (_mpf(self.values[k + 1]) - _mpf(self.values[k])) * n

    def spread(self, t0: float, t1: float) -> float:
        """psi(t1) - psi(t0) for 0 <= t0 <= t1 <= 1, in floats."""
        return float(self(_MP.mpf(t1)) - self(_MP.mpf(t0)))

    def has_break(self, t0: float, t1: float) -> bool:
        """Whether the slope of the profile jumps somewhere in [t0, t1]."""
        n = self.pieces
        slopes = [0.0] + [float(b - a) * n for a, b in zip(self.values, self.values[1:])] + [0.0]
        return any(t0 <= k / n <= t1 and slopes[k] != slopes[k + 1] for k in range(n + 1))

    def max_slope(self) -> float:
        n = self.pieces
        return max(float(b - a) * n for a, b in zip(self.values, self.values[1:]))


DEFAULT_PROFILE = Profile()


# ---------------------------------------------------------------------------
# maps


class PlanarMap:
    """An orientation-preserving homeomorphism of the plane."""

    def primitives(self) -> list:
        raise NotImplementedError

    def fused(self) -> list:
        """Primitives in application order with adjacent compatible ones merged."""
        out: list = []
        for m in self.primitives():
            merged = out[-1].merge(m) if out else None
            if merged is None:
                out.append(m)
                continue
            out.pop()
            if merged is not _DROP:
                out.append(merged)
        return out

    def __call__(self, p: Point) -> Point:
        p = (frac(p[0]), frac(p[1]))
        for m in self.fused():
            p = m.apply(p)
        return p

    def jacobian(self, p: Point) -> Matrix:
        p = (frac(p[0]), frac(p[1]))
        jac = IDENTITY_MATRIX
        for m in self.fused():
            jac = _matmul(m.local_jacobian(p), jac)
            p = m.apply(p)
        return jac

    def inverse(self) -> "PlanarMap":
        return Inverse(self)

    def __mul__(self, other: "PlanarMap") -> "PlanarMap":
        return Compose(self, other)

    def __pow__(self, n: int) -> "PlanarMap":
        return Power(self, n)

    def to_json(self) -> dict:
        raise NotImplementedError


class Compose(PlanarMap):
    """``Compose(f, g, h)`` is f o g o h (h is applied first)."""

    def __init__(self, *maps: PlanarMap):
        self.maps = tuple(maps)

    def primitives(self) -> list:
        out = []
        for m in reversed(self.maps):
            out.extend(m.primitives())
        return out

    def to_json(self) -> dict:
        return {"compose": [m.to_json() for m in self.maps]}


IDENTITY_MAP = Compose()


class Inverse(PlanarMap):
    def __init__(self, inner: PlanarMap):
        self.inner = inner

    def primitives(self) -> list:
        return [m.inverse() for m in reversed(self.inner.primitives())]

    def inverse(self) -> PlanarMap:
        return self.inner

    def to_json(self) -> dict:
        return {"inverse": self.inner.to_json()}


class Power(PlanarMap):
    def __init__(self, inner: PlanarMap, n: int):
        self.inner, self.n = inner, int(n)

    def primitives(self) -> list:
        base = self.inner.primitives() if self.n >= 0 else self.inner.inverse().primitives()
        return base * abs(self.n)

    def to_json(self) -> dict:
        return {"power": self.inner.to_json(), "n": self.n}


_DROP = object()


class Primitive(PlanarMap):
    def primitives(self) -> list:
        return [self]

    def merge(self, after: "Primitive"):
        """A single primitive equal to ``after`` o ``self``, ``_DROP`` for the identity, or None."""
        return None

    def apply(self, p: Point) -> Point:
        raise NotImplementedError

    def local_jacobian(self, p: Point) -> Matrix:
        raise NotImplementedError

    def rotation_spread(self, u: Point, v: Point) -> float:
        """Bound on how much the rotation angle varies along segment ``u v``."""
        return 0.0

    def kink_between(self, u: Point, v: Point) -> bool:
        """Whether the derivative may jump somewhere along segment ``u v``."""
        return False


class Translation(Primitive):
    def __init__(self, dx, dy):
        self.vector = (frac(dx), frac(dy))

    def apply(self, p):
        return _add(p, self.vector)

    def local_jacobian(self, p):
        return IDENTITY_MATRIX

    def inverse(self):
        return Translation(-self.vector[0], -self.vector[1])

    def merge(self, after):
        if not isinstance(after, Translation):
            return None
        v = _add(self.vector, after.vector)
        return _DROP if v == (0, 0) else Translation(*v)

    def to_json(self):
        return {"translation": [frac_str(c) for c in self.vector]}


class Dilation(Primitive):
    def __init__(self, factor=2, center=(0, 0)):
        self.factor = frac(factor)
        if self.factor <= 0:
            raise ValueError("dilation factor must be positive")
        self.center = (frac(center[0]), frac(center[1]))

    def apply(self, p):
        return _add(self.center, _scale(self.factor, _sub(p, self.center)))

    def local_jacobian(self, p):
        f = self.factor
        return ((f, _ZERO), (_ZERO, f))

    def inverse(self):
        return Dilation(1 / self.factor, self.center)

    def merge(self, after):
        if not isinstance(after, Dilation) or after.center != self.center:
            return None
        f = self.factor * after.factor
        return _DROP if f == 1 else Dilation(f, self.center)

    def to_json(self):
        return {"dilation": frac_str(self.factor), "center": [frac_str(c) for c in self.center]}


def _segment_dist_sq_f(c, u, v) -> tuple:
    """Float (min, max) squared distance from ``c`` to the segment ``u v``."""
    dx, dy = v[0] - u[0], v[1] - u[1]
    wx, wy = c[0] - u[0], c[1] - u[1]
    dd = dx * dx + dy * dy
    s = min(max((wx * dx + wy * dy) / dd, 0.0), 1.0) if dd > 0 else 0.0
    nx, ny = wx - s * dx, wy - s * dy
    ex, ey = wx - dx, wy - dy
    return nx * nx + ny * ny, max(wx * wx + wy * wy, ex * ex + ey * ey)


@dataclass(frozen=True)
class Annulus:
    center: Point
    inner: Fraction
    outer: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", (frac(self.center[0]), frac(self.center[1])))
        object.__setattr__(self, "inner", frac(self.inner))
        object.__setattr__(self, "outer", frac(self.outer))
        if not 0 <= self.inner < self.outer:
            raise ValueError("annulus radii must satisfy 0 <= inner < outer")
        object.__setattr__(self, "_fc", _fl(self.center))
        object.__setattr__(self, "_r0", float(self.inner))
        object.__setattr__(self, "_r1", float(self.outer))

    def zone(self, p: Point) -> int:
        """-1 inside the inner circle, 0 in the open annulus, +1 outside."""
        fx, fy = float(p[0]) - self._fc[0], float(p[1]) - self._fc[1]
        rr = fx * fx + fy * fy
        lo, hi = self._r0 * self._r0, self._r1 * self._r1
        slack = 1e-9 * (hi + rr)
        if rr < lo - slack:
            return -1
        if rr > hi + slack:
            return 1
        if lo + slack < rr < hi - slack:
            return 0
        w = _sub(p, self.center)
        rr = _dot(w, w)
        if rr <= self.inner * self.inner:
            return -1
        if rr >= self.outer * self.outer:
            return 1
        return 0

    def meets(self, u: Point, v: Point) -> bool:
        lo, hi = _segment_dist_sq_f(self._fc, _fl(u), _fl(v))
        pad = 1e-9 * (hi + self._r1 * self._r1)
        return lo < self._r1 * self._r1 + pad and hi > self._r0 * self._r0 - pad

    def t_range(self, u: Point, v: Point) -> tuple:
        lo, hi = _segment_dist_sq_f(self._fc, _fl(u), _fl(v))
        r0, r1 = self._r0, self._r1
        a = (math.sqrt(lo) - r0) / (r1 - r0)
        b = (math.sqrt(hi) - r0) / (r1 - r0)
        return min(max(a, 0.0), 1.0), min(max(b, 0.0), 1.0)


def _rotate_in(ann: Annulus, p: Point, inner_turns: Fraction, outer_turns: Fraction, profile: Profile) -> Point:
    zone = ann.zone(p)
    w = _sub(p, ann.center)
    if zone != 0:
        turns = inner_turns if zone < 0 else outer_turns
        return _add(ann.center, _quarter_turn(w, int(turns * 4)))
    wx, wy = _mpf(w[0]), _mpf(w[1])
    r = _MP.sqrt(wx * wx + wy * wy)
    t = (r - _mpf(ann.inner)) / (_mpf(ann.outer) - _mpf(ann.inner))
    theta = 2 * _MP.pi * (_mpf(inner_turns) + _mpf(outer_turns - inner_turns) * profile(t))
    c, s = _MP.cos(theta), _MP.sin(theta)
    return (
        ann.center[0] + _to_dyadic(c * wx - s * wy),
        ann.center[1] + _to_dyadic(s * wx + c * wy),
    )


def _jacobian_in(ann: Annulus, p: Point, inner_turns: Fraction, outer_turns: Fraction, profile: Profile) -> Matrix:
    zone = ann.zone(p)
    if zone != 0:
        k = int((inner_turns if zone < 0 else outer_turns) * 4) % 4
        return (IDENTITY_MATRIX, ((_ZERO, -_ONE), (_ONE, _ZERO)),
                ((-_ONE, _ZERO), (_ZERO, -_ONE)), ((_ZERO, _ONE), (-_ONE, _ZERO)))[k]
    w = _sub(p, ann.center)
    wx, wy = _mpf(w[0]), _mpf(w[1])
    r = _MP.sqrt(wx * wx + wy * wy)
    width = _mpf(ann.outer) - _mpf(ann.inner)
    t = (r - _mpf(ann.inner)) / width
    delta = _mpf(outer_turns - inner_turns)
    theta = 2 * _MP.pi * (_mpf(inner_turns) + delta * profile(t))
    dtheta = 2 * _MP.pi * delta * profile.slope(t) / width
    c, s = _MP.cos(theta), _MP.sin(theta)
    # d/dz of R(theta(|w|)) w = R(theta) + (R(theta) J w) (theta' w / r)^T
    jw = (c * (-wy) - s * wx, s * (-wy) + c * wx)
    g = (dtheta * wx / r, dtheta * wy / r)
    m = ((c + jw[0] * g[0], -s + jw[0] * g[1]), (s + jw[1] * g[0], c + jw[1] * g[1]))
    return tuple(tuple(_to_dyadic(x) for x in row) for row in m)


class RadialRotation(Primitive):
    """Rotation about ``center`` by an angle that depends on the radius.

    Inside the inner circle the rotation is rigid by ``inner_turns``, outside
    the outer circle by ``outer_turns``; across the annulus the angle moves
    between them along ``profile``.  Both rigid angles must be quarter turns.
    """

    def __init__(self, center, inner, outer, inner_turns=0, outer_turns=1, profile: Profile = DEFAULT_PROFILE):
        self.annulus = Annulus(center, inner, outer)
        self.inner_turns, self.outer_turns = frac(inner_turns), frac(outer_turns)
        for t in (self.inner_turns, self.outer_turns):
            if (t * 4).denominator != 1:
                raise ValueError("rigid parts must rotate by quarter turns")
        self.profile = profile

    def apply(self, p):
        return _rotate_in(self.annulus, p, self.inner_turns, self.outer_turns, self.profile)

    def local_jacobian(self, p):
        return _jacobian_in(self.annulus, p, self.inner_turns, self.outer_turns, self.profile)

    def inverse(self):
        a = self.annulus
        return RadialRotation(a.center, a.inner, a.outer, -self.inner_turns, -self.outer_turns, self.profile)

    def merge(self, after):
        if not isinstance(after, RadialRotation) or after.annulus != self.annulus or after.profile != self.profile:
            return None
        i, o = self.inner_turns + after.inner_turns, self.outer_turns + after.outer_turns
        if i == 0 and o == 0:
            return _DROP
        a = self.annulus
        return RadialRotation(a.center, a.inner, a.outer, i, o, self.profile)

    def rotation_spread(self, u, v):
        if not self.annulus.meets(u, v):
            return 0.0
        t0, t1 = self.annulus.t_range(u, v)
        return 2 * math.pi * abs(float(self.outer_turns - self.inner_turns)) * self.profile.spread(t0, t1)

    def kink_between(self, u, v):
        return self.inner_turns != self.outer_turns and self.annulus.meets(u, v) and \
            self.profile.has_break(*self.annulus.t_range(u, v))

    def to_json(self):
        a = self.annulus
        return {
            "radial_rotation": {
                "center": [frac_str(c) for c in a.center],
                "inner": frac_str(a.inner),
                "outer": frac_str(a.outer),
                "inner_turns": frac_str(self.inner_turns),
                "outer_turns": frac_str(self.outer_turns),
            }
        }


def annulus_twist(center, inner, outer, turns: int = 1, profile: Profile = DEFAULT_PROFILE) -> RadialRotation:
    """``turns`` positive Dehn twists supported in one annulus."""
    return RadialRotation(center, inner, outer, 0, turns, profile)


def bump_rotation(center, radius, turns=Fraction(1, 4), core=None, profile: Profile = DEFAULT_PROFILE) -> RadialRotation:
    """Rigid rotation by ``turns`` on the disk of radius ``core`` (default radius/4), identity outside ``radius``."""
    radius = frac(radius)
    core = radius / 4 if core is None else frac(core)
    return RadialRotation(center, core, radius, turns, 0, profile)


class TwistFamily(Primitive):
    """Simultaneous twists in a family of pairwise disjoint annuli.

    Only the annuli near a query point or segment are ever instantiated.
    """

    def __init__(self, turns: int = 1, profile: Profile = DEFAULT_PROFILE):
        self.turns = int(turns)
        self.profile = profile
        self._cache: dict = {}

    def annuli_near_point(self, p: Point) -> Iterable[Annulus]:
        raise NotImplementedError

    def annuli_meeting(self, u: Point, v: Point) -> Iterable[Annulus]:
        raise NotImplementedError

    def with_turns(self, turns: int) -> "TwistFamily":
        raise NotImplementedError

    def _hit(self, p):
        for ann in self.annuli_near_point(p):
            if ann.zone(p) == 0:
                return ann
        return None

    def apply(self, p):
        ann = self._hit(p)
        if ann is None or self.turns == 0:
            return p
        return _rotate_in(ann, p, _ZERO, Fraction(self.turns), self.profile)

    def local_jacobian(self, p):
        ann = self._hit(p)
        if ann is None or self.turns == 0:
            return IDENTITY_MATRIX
        return _jacobian_in(ann, p, _ZERO, Fraction(self.turns), self.profile)

    def inverse(self):
        return self.with_turns(-self.turns)

    def geometry(self) -> tuple:
        raise NotImplementedError

    def merge(self, after):
        if type(after) is not type(self) or after.geometry() != self.geometry():
            return None
        n = self.turns + after.turns
        return _DROP if n == 0 else self.with_turns(n)

    def rotation_spread(self, u, v):
        total = 0.0
        for ann in self.annuli_meeting(u, v):
            if ann.meets(u, v):
                t0, t1 = ann.t_range(u, v)
                total += 2 * math.pi * abs(self.turns) * self.profile.spread(t0, t1)
        return total

    def kink_between(self, u, v):
        return self.turns != 0 and any(
            ann.meets(u, v) and self.profile.has_break(*ann.t_range(u, v)) for ann in self.annuli_meeting(u, v))


class ConcentricTwists(TwistFamily):
    """Twists in the annuli ``[inner*ratio^j, outer*ratio^j]`` about one center, j in a range."""

    def __init__(self, center=(0, 0), ratio=2, inner=Fraction(99, 100), outer=Fraction(101, 100),
                 j_min: Optional[int] = None, j_max: Optional[int] = None, turns: int = 1,
                 profile: Profile = DEFAULT_PROFILE):
        super().__init__(turns, profile)
        self.center = (frac(center[0]), frac(center[1]))
        self.ratio, self.inner, self.outer = frac(ratio), frac(inner), frac(outer)
        if not (self.ratio > 1 and 0 < self.inner < self.outer < self.inner * self.ratio):
            raise ValueError("annuli must be disjoint and nested")
        self.j_min, self.j_max = j_min, j_max

    def geometry(self):
        return (self.center, self.ratio, self.inner, self.outer, self.j_min, self.j_max, self.profile)

    def with_turns(self, turns):
        return ConcentricTwists(self.center, self.ratio, self.inner, self.outer, self.j_min, self.j_max, turns, self.profile)

    def annulus(self, j: int) -> Annulus:
        ann = self._cache.get(j)
        if ann is None:
            s = self.ratio ** j
            ann = self._cache[j] = Annulus(self.center, self.inner * s, self.outer * s)
        return ann

    def _clip(self, lo: int, hi: int) -> range:
        if self.j_min is not None:
            lo = max(lo, self.j_min)
        if self.j_max is not None:
            hi = min(hi, self.j_max)
        return range(lo, hi + 1)

    def _index_range(self, rr_lo: float, rr_hi: float) -> range:
        base = math.log(float(self.ratio))
        if rr_lo <= 0:
            if self.j_min is None:
                raise RefinementLimit("segment meets infinitely many annuli")
            lo = self.j_min
        else:
            lo = math.floor((0.5 * math.log(float(rr_lo)) - math.log(float(self.outer))) / base) - 1
        hi = math.ceil((0.5 * math.log(float(rr_hi)) - math.log(float(self.inner))) / base) + 1 if rr_hi > 0 else lo
        return self._clip(lo, hi)

    def annuli_near_point(self, p):
        if p == self.center:
            return []
        fx, fy = float(p[0] - self.center[0]), float(p[1] - self.center[1])
        rr = fx * fx + fy * fy
        return [self.annulus(j) for j in self._index_range(rr, rr)]

    def annuli_meeting(self, u, v):
        lo, hi = _segment_dist_sq_f(_fl(self.center), _fl(u), _fl(v))
        if lo <= 0 and _on_segment(self.center, u, v):
            lo = 0.0
        elif lo <= 0:
            lo = 1e-300
        return [self.annulus(j) for j in self._index_range(lo, hi)]

    def to_json(self):
        return {
            "concentric_twists": {
                "center": [frac_str(c) for c in self.center],
                "ratio": frac_str(self.ratio),
                "inner": frac_str(self.inner),
                "outer": frac_str(self.outer),
                "j_min": self.j_min,
                "j_max": self.j_max,
                "turns": self.turns,
            }
        }


class RowTwists(TwistFamily):
    """Twists in equal annuli centered at ``origin + j*step``, j in a range."""

    def __init__(self, origin=(0, 0), step=(3, 0), inner=Fraction(99, 100), outer=Fraction(101, 100),
                 j_min: Optional[int] = None, j_max: Optional[int] = None, turns: int = 1,
                 profile: Profile = DEFAULT_PROFILE):
        super().__init__(turns, profile)
        self.origin = (frac(origin[0]), frac(origin[1]))
        self.step = (frac(step[0]), frac(step[1]))
        self.inner, self.outer = frac(inner), frac(outer)
        if 4 * self.outer * self.outer >= _dot(self.step, self.step):
            raise ValueError("row annuli must be disjoint")
        self.j_min, self.j_max = j_min, j_max

    def geometry(self):
        return (self.origin, self.step, self.inner, self.outer, self.j_min, self.j_max, self.profile)

    def with_turns(self, turns):
        return RowTwists(self.origin, self.step, self.inner, self.outer, self.j_min, self.j_max, turns, self.profile)

    def annulus(self, j: int) -> Annulus:
        ann = self._cache.get(j)
        if ann is None:
            ann = self._cache[j] = Annulus(_add(self.origin, _scale(j, self.step)), self.inner, self.outer)
        return ann

    def _indices(self, pts) -> range:
        sx, sy = _fl(self.step)
        ox, oy = _fl(self.origin)
        ss = sx * sx + sy * sy
        ts = [((float(q[0]) - ox) * sx + (float(q[1]) - oy) * sy) / ss for q in pts]
        pad = float(self.outer) / math.sqrt(ss) + 1
        lo, hi = math.floor(min(ts) - pad), math.ceil(max(ts) + pad)
        if self.j_min is not None:
            lo = max(lo, self.j_min)
        if self.j_max is not None:
            hi = min(hi, self.j_max)
        return range(lo, hi + 1)

    def annuli_near_point(self, p):
        return [self.annulus(j) for j in self._indices([p])]

    def annuli_meeting(self, u, v):
        return [self.annulus(j) for j in self._indices([u, v])]

    def to_json(self):
        return {
            "row_twists": {
                "origin": [frac_str(c) for c in self.origin],
                "step": [frac_str(c) for c in self.step],
                "inner": frac_str(self.inner),
                "outer": frac_str(self.outer),
                "j_min": self.j_min,
                "j_max": self.j_max,
                "turns": self.turns,
            }
        }


def commutator(f: PlanarMap, g: PlanarMap) -> PlanarMap:
    """f g f^-1 g^-1."""
    return Compose(f, g, f.inverse(), g.inverse())


def max_discrepancy(f: PlanarMap, g: PlanarMap, points: Iterable[Point]) -> Fraction:
    """Largest coordinate difference between ``f`` and ``g`` over ``points``."""
    worst = _ZERO
    for p in points:
        a, b = f(p), g(p)
        worst = max(worst, abs(a[0] - b[0]), abs(a[1] - b[1]))
    return worst


# ---------------------------------------------------------------------------
# arcs


@dataclass(frozen=True)
class PolylineArc:
    """An oriented polyline with exact rational vertices; may self-intersect."""

    vertices: tuple

    def __post_init__(self):
        vs = tuple((frac(x), frac(y)) for x, y in self.vertices)
        if len(vs) < 2:
            raise ValueError("an arc needs at least two vertices")
        for a, b in zip(vs, vs[1:]):
            if a == b:
                raise ValueError("consecutive vertices must be distinct")
        object.__setattr__(self, "vertices", vs)

    @classmethod
    def through(cls, *pts) -> "PolylineArc":
        return cls(tuple(pts))

    @property
    def start(self) -> Point:
        return self.vertices[0]

    @property
    def end(self) -> Point:
        return self.vertices[-1]

    @property
    def closed(self) -> bool:
        return self.start == self.end

    @property
    def start_tangent(self):
        return _sub(self.vertices[1], self.vertices[0])

    @property
    def end_tangent(self):
        return _sub(self.vertices[-1], self.vertices[-2])

    def directions(self) -> list:
        return [_sub(b, a) for a, b in zip(self.vertices, self.vertices[1:])]

    def segments(self) -> list:
        return list(zip(self.vertices, self.vertices[1:]))

    def reversed(self) -> "PolylineArc":
        return PolylineArc(self.vertices[::-1])

    def then(self, other: "PolylineArc") -> "PolylineArc":
        if self.end != other.start:
            raise ValueError("arcs do not join")
        return PolylineArc(self.vertices + other.vertices[1:])

    def bbox(self) -> tuple:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))

    def __len__(self):
        return len(self.vertices) - 1

    def to_json(self) -> dict:
        return {"vertices": [[frac_str(x), frac_str(y)] for x, y in self.vertices]}

    @classmethod
    def from_json(cls, data: dict) -> "PolylineArc":
        return cls(tuple((frac(x), frac(y)) for x, y in data["vertices"]))


@dataclass(frozen=True)
class DegenerateEdge:
    """A zero-length polygon edge, drawn as a short step in ``direction``."""

    direction: tuple

    def __post_init__(self):
        d = (frac(self.direction[0]), frac(self.direction[1]))
        if d == (0, 0):
            raise ValueError("direction must be nonzero")
        object.__setattr__(self, "direction", d)


def _dedupe(vs: list) -> list:
    out = [vs[0]]
    for v in vs[1:]:
        if v != out[-1]:
            out.append(v)
    return out


def _push_primitive(prim: Primitive, vertices: Sequence[Point], tol: float, cap: float, budget: list) -> list:
    out = [prim.apply(vertices[0])]
    for u, v in zip(vertices, vertices[1:]):
        fu, fv = out[-1], prim.apply(v)
        if prim.rotation_spread(u, v) == 0.0:
            out.append(fv)
            continue
        # depth-first bisection, emitting pieces left to right
        stack = [(u, fu, v, fv, 0)]
        while stack:
            a, fa, b, fb, depth = stack.pop()
            spread = prim.rotation_spread(a, b)
            m = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
            fm = prim.apply(m) if spread > 0 else None
            ok = spread <= cap
            if ok and fm is not None:
                ex = float(fm[0]) - (float(fa[0]) + float(fb[0])) / 2
                ey = float(fm[1]) - (float(fa[1]) + float(fb[1])) / 2
                ok = math.hypot(ex, ey) <= tol
            if ok:
                out.append(fb)
                budget[0] -= 1
                if budget[0] < 0:
                    raise RefinementLimit("too many pieces")
                continue
            if depth >= MAX_DEPTH:
                raise RefinementLimit("bisection depth exceeded")
            stack.append((m, fm, b, fb, depth + 1))
            stack.append((a, fa, m, fm, depth + 1))
    return _dedupe(out)


def push_arc(m: PlanarMap, arc: PolylineArc, tol=DEFAULT_TOL, angle_cap: float = ANGLE_CAP) -> PolylineArc:
    """Image of ``arc`` under ``m``, refined primitive by primitive.

    A piece is accepted once the rotation angle varies by at most
    ``angle_cap`` along it and its midpoint image lies within ``tol`` of the
    image chord.  Translations and dilations map vertices exactly.
    """
    tol = float(frac(tol))
    if tol <= 0:
        raise ValueError("tol must be positive")
    verts = list(arc.vertices)
    budget = [MAX_PIECES]
    for prim in m.fused():
        verts = _push_primitive(prim, verts, tol, angle_cap, budget)
    if len(verts) < 2:
        raise RefinementLimit("image collapsed to a point")
    return PolylineArc(tuple(verts))


# ---------------------------------------------------------------------------
# intersections


def _crossing_sign(ta, tb) -> int:
    """Sign of a crossing of an arc moving along ``ta`` over one moving along ``tb``."""
    return _sgn(_cross(tb, ta))


def _orient_poly(p, sp, q, sq, r, sr, v) -> int:
    """Sign of orient(p + e sp v, q + e sq v, r + e sr v) for infinitesimal e > 0."""
    qp, rp = _sub(q, p), _sub(r, p)
    c0 = _cross(qp, rp)
    if c0 != 0:
        return _sgn(c0)
    c1 = (sr - sp) * _cross(qp, v) + (sq - sp) * _cross(v, rp)
    return _sgn(c1)


def _perturbation(arcs: Sequence[PolylineArc]):
    dirs = [d for arc in arcs for d in arc.directions()]
    k = 2
    while True:
        v = (_ONE, Fraction(k, 1) + Fraction(1, 2 * k + 1))
        if all(_cross(v, d) != 0 for d in dirs):
            return v
        k += 1


class _Grid:
    def __init__(self, segments: list, cell: float):
        self.cell = cell
        self.cells: dict = {}
        for idx, (u, v) in enumerate(segments):
            for key in self._keys(u, v):
                self.cells.setdefault(key, []).append(idx)

    def _keys(self, u, v):
        h = self.cell
        x0, x1 = sorted((float(u[0]), float(v[0])))
        y0, y1 = sorted((float(u[1]), float(v[1])))
        for i in range(math.floor((x0 - 1e-9) / h), math.floor((x1 + 1e-9) / h) + 1):
            for j in range(math.floor((y0 - 1e-9) / h), math.floor((y1 + 1e-9) / h) + 1):
                yield (i, j)

    def candidates(self, u, v) -> set:
        out = set()
        for key in self._keys(u, v):
            out.update(self.cells.get(key, ()))
        return out


def _grid_cell(*arcs: PolylineArc) -> float:
    lengths = sorted(math.hypot(*_fl(d)) for a in arcs for d in a.directions())
    boxes = [a.bbox() for a in arcs]
    diag = math.hypot(float(max(b[2] for b in boxes) - min(b[0] for b in boxes)),
                      float(max(b[3] for b in boxes) - min(b[1] for b in boxes)))
    return max(lengths[len(lengths) // 2], diag / 2048, 1e-6)


def _on_arc(q, arc: PolylineArc) -> int:
    """Number of segments of ``arc`` containing ``q``."""
    return sum(1 for u, v in arc.segments() if _on_segment(q, u, v))


def _emanating(arc: PolylineArc, q) -> list:
    out = []
    if arc.start == q:
        out.append(arc.start_tangent)
    if arc.end == q:
        out.append(_neg(arc.end_tangent))
    return out


def _forward(arc: PolylineArc, q) -> list:
    out = []
    if arc.start == q:
        out.append(arc.start_tangent)
    if arc.end == q:
        out.append(arc.end_tangent)
    return out


def intersection_number(a: PolylineArc, b: PolylineArc, policy: str = EXCLUDE_ENDPOINTS) -> int:
    """Algebraic intersection number ``a . b`` of two immersed arcs.

    Points where an endpoint of ``a`` coincides with an endpoint of ``b`` are
    shared endpoints: they are skipped, or, under ``include-with-sign``,
    contribute their crossing sign.  All other contacts are resolved by
    pushing the interior of ``a`` off by an infinitesimal generic vector.
    """
    if policy not in (EXCLUDE_ENDPOINTS, INCLUDE_WITH_SIGN):
        raise ValueError(f"unknown endpoint policy {policy!r}")
    shared = {q for q in (a.start, a.end) if q in (b.start, b.end)}
    for arc, other in ((a, b), (b, a)):
        for q in (arc.start, arc.end):
            hits = _on_arc(q, other)
            if q in shared:
                expected = (other.start == q) + (other.end == q)
                if hits > expected:
                    raise NonTransverse(f"shared endpoint {q} also lies inside the other arc")
            elif hits:
                raise NonTransverse(f"endpoint {q} lies on the other arc")

    total = 0
    for q in shared:
        for ta in _emanating(a, q):
            for tb in _emanating(b, q):
                if _same_ray(ta, tb):
                    raise NonTransverse(f"arcs are tangent at shared endpoint {q}")
        if policy == INCLUDE_WITH_SIGN:
            for ta in _forward(a, q):
                for tb in _forward(b, q):
                    total += _crossing_sign(ta, tb)

    v = _perturbation((a, b))
    av = a.vertices
    fixed = [0] * len(av)
    if av[0] in shared:
        fixed[0] = 1
    if av[-1] in shared:
        fixed[-1] = 1
    bsegs = b.segments()
    grid = _Grid(bsegs, _grid_cell(a, b))
    for i in range(len(av) - 1):
        p, q = av[i], av[i + 1]
        sp, sq = 1 - fixed[i], 1 - fixed[i + 1]
        for j in grid.candidates(p, q):
            r, s = bsegs[j]
            if (not sp and p in (r, s)) or (not sq and q in (r, s)):
                continue  # touching at a shared endpoint
            o1 = _orient_poly(p, sp, q, sq, r, 0, v)
            o2 = _orient_poly(p, sp, q, sq, s, 0, v)
            o3 = _orient_poly(r, 0, s, 0, p, sp, v)
            o4 = _orient_poly(r, 0, s, 0, q, sq, v)
            if o1 == o2 != 0 or o3 == o4 != 0:
                continue  # one segment lies strictly on one side of the other's line
            if 0 in (o1, o2, o3, o4):
                if o3 == 0 and not sp and not _on_segment(p, r, s):
                    continue
                if o4 == 0 and not sq and not _on_segment(q, r, s):
                    continue
                raise NonTransverse("degenerate contact between segments")
            if o1 != o2 and o3 != o4:
                total += _crossing_sign(_sub(q, p), _sub(s, r))
    return total


# ---------------------------------------------------------------------------
# turning numbers


def _direction_winding(dirs: Sequence) -> int:
    """Winding of a cyclic sequence of directions joined by their short rotations."""
    n = len(dirs)
    if n == 0:
        raise ValueError("no directions")
    for k in range(n):
        a, b = dirs[k], dirs[(k + 1) % n]
        if a == (0, 0) or b == (0, 0):
            raise DegenerateCorner("zero direction")
        if _opposite_ray(a, b):
            raise DegenerateCorner(f"cusp between directions {a} and {b}")
    wn = 0
    for k in range(n):
        a, b = dirs[k], dirs[(k + 1) % n]
        left = _cross(_sub(b, a), _neg(a))
        if a[1] <= 0:
            if b[1] > 0 and left > 0:
                wn += 1
        elif b[1] <= 0 and left < 0:
            wn -= 1
    return wn


def turning_index(closed: PolylineArc) -> int:
    """Tangent winding number of a closed polyline with corners rounded off."""
    if not closed.closed:
        raise ValueError("curve is not closed")
    return _direction_winding(closed.directions())


def relative_writhe(t1: PolylineArc, t2: PolylineArc) -> int:
    """(total turning of t1 - total turning of t2) / 2 pi for arcs with common ends."""
    if t1.start != t2.start or t1.end != t2.end:
        raise TangentMismatch("arcs must share both endpoints")
    if not _same_ray(t1.start_tangent, t2.start_tangent) or not _same_ray(t1.end_tangent, t2.end_tangent):
        raise TangentMismatch("endpoint tangents differ")
    return _direction_winding(t1.directions() + t2.directions()[::-1])


@dataclass(frozen=True)
class WritheClass:
    """A point of the affine Z-space of writhe classes: ``reference + offset``."""

    reference: str
    offset: int

    def __add__(self, n: int) -> "WritheClass":
        return WritheClass(self.reference, self.offset + int(n))

    def __sub__(self, other: "WritheClass") -> int:
        if other.reference != self.reference:
            raise ValueError("classes measured from different references")
        return self.offset - other.offset


def writhe_class(arc: PolylineArc, reference: PolylineArc, name: str = "reference") -> WritheClass:
    return WritheClass(name, relative_writhe(arc, reference))


_FIGURE8 = (
    (Fraction(-1, 4), _ZERO), (Fraction(-1, 4), _ONE), (Fraction(-1, 2), _ONE), (Fraction(-1, 2), Fraction(3, 2)),
    (Fraction(1, 2), Fraction(5, 2)), (Fraction(1, 2), Fraction(3)), (Fraction(-1, 2), Fraction(3)),
    (Fraction(-1, 2), Fraction(5, 2)), (Fraction(1, 2), Fraction(3, 2)), (Fraction(1, 2), _ONE),
    (Fraction(1, 4), _ONE), (Fraction(1, 4), _ZERO),
)


def connect_sum_figure8(arc: PolylineArc, side: str = "positive", segment: Optional[int] = None,
                        size=Fraction(1, 8)) -> PolylineArc:
    """Connect sum of ``arc`` with a small figure 8 beside one of its segments.

    The positive side is to the right of the arc; a figure 8 there lowers
    the total turning by one full turn, so ``relative_writhe(arc, result)``
    is +1.
    """
    if side not in ("positive", "negative"):
        raise ValueError("side must be 'positive' or 'negative'")
    dirs = arc.directions()
    if segment is None:
        lengths = [_dot(d, d) for d in dirs]
        segment = lengths.index(max(lengths))
    u, w = arc.vertices[segment], arc.vertices[segment + 1]
    d = _sub(w, u)
    n = _left_normal(d) if side == "negative" else _neg(_left_normal(d))
    mid = ((u[0] + w[0]) / 2, (u[1] + w[1]) / 2)
    h = frac(size)
    inserted = tuple(_add(mid, _add(_scale(h * x, d), _scale(h * y, n))) for x, y in _FIGURE8)
    vs = arc.vertices[: segment + 1] + inserted + arc.vertices[segment + 1:]
    return PolylineArc(vs)


def spiral_points(center: Point, r_start, r_end, turns, start_angle_turns=0, steps_per_turn: int = 64) -> list:
    """Rational points along a spiral about ``center``; angle grows with ``turns`` (signed)."""
    turns = float(frac(turns))
    steps = max(2, int(math.ceil(abs(turns) * steps_per_turn)) + 1)
    a0 = 2 * math.pi * float(frac(start_angle_turns))
    r0, r1 = float(frac(r_start)), float(frac(r_end))
    out = []
    for k in range(steps + 1):
        s = k / steps
        r = r0 + (r1 - r0) * s
        ang = a0 + 2 * math.pi * turns * s
        out.append((center[0] + Fraction(round(r * math.cos(ang) * 2 ** 30), 2 ** 30),
                    center[1] + Fraction(round(r * math.sin(ang) * 2 ** 30), 2 ** 30)))
    return _dedupe(out)


# ---------------------------------------------------------------------------
# Euler number from a developing polygon


@dataclass(frozen=True)
class PolygonReport:
    euler: int
    index: int
    raw_index: int
    sector_turns: int
    genus: int
    samples: int = field(default=0, compare=False)


ANGLE_STEP = math.pi / 8
KINK_DEPTH = 34
KINK = 2


def _normalize(u):
    """Rescale a nonzero direction by a power of two and round to 60 bits."""
    x, y = frac(u[0]), frac(u[1])
    m = max(abs(x), abs(y))
    if m == 0:
        raise DegenerateCorner("tangent vanished")
    e = m.numerator.bit_length() - m.denominator.bit_length()
    scale = Fraction(2) ** (60 - e)
    return (Fraction(round(x * scale), 1 << 60), Fraction(round(y * scale), 1 << 60))


def _pseudo_angle(u) -> Fraction:
    """Exact monotone stand-in for the polar angle, valued in [0, 4)."""
    s = u[0] / (abs(u[0]) + abs(u[1]))
    return 1 - s if u[1] >= 0 else 3 + s


def _signed_winding(entries: Sequence) -> int:
    """Winding of cyclic ``(direction, sense)`` entries.

    ``sense`` fixes the rotation towards the next direction: +1 anticlockwise,
    -1 clockwise, 0 for the short rotation, which must then be less than a
    right angle.
    """
    total = _ZERO
    n = len(entries)
    for k in range(n):
        a, sense = entries[k]
        b = entries[(k + 1) % n][0]
        pa, pb = _pseudo_angle(a), _pseudo_angle(b)
        if sense == 0 or sense == KINK:
            if sense == 0 and _dot(a, b) <= 0:
                raise DegenerateCorner("tangent turned too far between samples")
            sense = _corner_sense(a, b)
            if sense == 0:
                continue
        if sense > 0:
            total += (pb - pa) % 4
        else:
            total -= (pa - pb) % 4
    if total.denominator != 1 or total % 4 != 0:
        raise InconsistentEdgePairing("tangent loop does not close")
    return int(total) // 4


def _corner_sense(u, v) -> int:
    if _opposite_ray(u, v):
        raise DegenerateCorner(f"cusp between directions {u} and {v}")
    return _sgn(_cross(u, v))


def _advance(prims, k0: int, p: Point, t) -> list:
    """Framed states (point, tangent) after each primitive from index ``k0`` on."""
    out = []
    for prim in prims[k0:]:
        t = _normalize(_matvec(prim.local_jacobian(p), t))
        p = prim.apply(p)
        out.append((p, t))
    return out


def _framed_samples(prims: list, u: Point, v: Point, step: float, cap: float, tol: float) -> list:
    """``(tangent, sense)`` samples of the image of segment ``u v`` under ``prims``.

    Intervals of the segment are split until, for every primitive, the image
    of the interval sees a rotation spread of at most ``cap`` with its
    midpoint within ``tol`` of the chord, and the three final tangents are
    pairwise within ``step``.  A profile breakpoint makes the derivative
    jump; once such an interval is tiny it is accepted with sense
    ``KINK``, meaning the short rotation of any size.  That is the rotation
    of a slightly smoothed profile, since the one-sided Jacobians differ by
    a shear.  The last sample has sense None.
    """
    d = _normalize(_sub(v, u))
    cos_step = math.cos(step)

    def state(s):
        q = _add(u, _scale(s, _sub(v, u)))
        return [(q, d)] + _advance(prims, 0, q, d)

    def close(a, b):
        fa, fb = _fl(a), _fl(b)
        return fa[0] * fb[0] + fa[1] * fb[1] >= cos_step * math.hypot(*fa) * math.hypot(*fb)

    out = []
    stack = [(_ZERO, state(_ZERO), _ONE, state(_ONE), 0)]
    while stack:
        s0, st0, s1, st1, depth = stack.pop()
        sm = (s0 + s1) / 2
        stm = state(sm)
        shape_ok = True
        for k, prim in enumerate(prims):
            a, b = st0[k][0], st1[k][0]
            spread = prim.rotation_spread(a, b)
            if spread > cap:
                shape_ok = False
                break
            if spread > 0:
                fa, fm, fb = _fl(st0[k + 1][0]), _fl(stm[k + 1][0]), _fl(st1[k + 1][0])
                if math.hypot(fm[0] - (fa[0] + fb[0]) / 2, fm[1] - (fa[1] + fb[1]) / 2) > tol:
                    shape_ok = False
                    break
        t0, tm, t1 = st0[-1][1], stm[-1][1], st1[-1][1]
        if shape_ok and close(t0, tm) and close(tm, t1) and close(t0, t1):
            out += [(t0, 0), (tm, 0)]
        elif shape_ok and depth >= KINK_DEPTH and any(
                prim.kink_between(st0[k][0], st1[k][0]) for k, prim in enumerate(prims)):
            out.append((t0, KINK))
        else:
            if depth >= MAX_DEPTH:
                raise RefinementLimit("tangent sampling depth exceeded")
            stack.append((sm, stm, s1, st1, depth + 1))
            stack.append((s0, st0, sm, stm, depth + 1))
            continue
        if len(out) > MAX_PIECES:
            raise RefinementLimit("too many tangent samples")
    out.append((state(_ONE)[-1][1], None))
    return out


def _edge_entries(prims: list, arc: PolylineArc, step, cap, tol, backwards: bool) -> list:
    """``(tangent, sense)`` entries tracing the image of ``arc`` (or its reverse)."""
    dirs = arc.directions()
    chunks = [_framed_samples(prims, u, v, step, cap, tol) for u, v in arc.segments()]
    if backwards:
        flipped = []
        for chunk in reversed(chunks):
            tans = [_neg(t) for t, _ in reversed(chunk)]
            senses = [sense if sense == KINK else -sense for _, sense in reversed(chunk[:-1])]
            flipped.append(list(zip(tans, senses + [None])))
        chunks = flipped
        dirs = [_neg(d) for d in reversed(dirs)]
    entries = []
    for i, chunk in enumerate(chunks):
        entries += chunk
        if i + 1 < len(chunks):
            entries[-1] = (entries[-1][0], _corner_sense(dirs[i], dirs[i + 1]))
    return entries


def _ccw_pseudo(u, v) -> Fraction:
    """Anticlockwise turn from ray u to ray v in quarter-turn units, in (0, 4]."""
    d = (_pseudo_angle(v) - _pseudo_angle(u)) % 4
    return d if d != 0 else Fraction(4)


def _boundary_letters(genus: int) -> list:
    letters = []
    for k in range(genus):
        a, b = 2 * k, 2 * k + 1
        letters += [(a, 1), (b, 1), (a, -1), (b, -1)]
    return letters


def _polygon_pass(gens, genus, p, edges, step, cap, tol) -> PolygonReport:
    letters = _boundary_letters(genus)
    inverses = [g.inverse() for g in gens]
    ray: dict = {}
    for x, (g, e) in enumerate(zip(gens, edges)):
        q = g(p)
        if isinstance(e, DegenerateEdge):
            if q != p:
                raise InconsistentEdgePairing(f"generator {x} moves the basepoint; it needs an arc")
            ray[(x, 1)] = _normalize(e.direction)
            ray[(x, -1)] = _normalize(_neg(_matvec(inverses[x].jacobian(p), e.direction)))
        else:
            if e.start != p or e.end != q:
                raise InconsistentEdgePairing(f"edge {x} must run from the basepoint to its image")
            ray[(x, 1)] = _normalize(e.start_tangent)
            ray[(x, -1)] = _normalize(_neg(_matvec(inverses[x].jacobian(q), e.end_tangent)))

    prefixes = [IDENTITY_MAP]
    for x, s in letters:
        prefixes.append(Compose(prefixes[-1], gens[x] if s > 0 else inverses[x]))
    if prefixes[-1](p) != p:
        raise InconsistentEdgePairing("boundary word does not return the basepoint")

    entries: list = []
    n = len(letters)
    for k, (x, s) in enumerate(letters):
        nxt = letters[(k + 1) % n]
        vertex_sense = _corner_sense(_neg(ray[(x, -s)]), ray[nxt])
        e = edges[x]
        if isinstance(e, DegenerateEdge):
            head = _advance(prefixes[k].fused(), 0, p, ray[(x, s)])
            entries.append((head[-1][1] if head else ray[(x, s)], vertex_sense))
            continue
        prims = (prefixes[k] if s > 0 else prefixes[k + 1]).fused()
        part = _edge_entries(prims, e, step, cap, tol, backwards=s < 0)
        part[-1] = (part[-1][0], vertex_sense)
        entries += part
    raw = _signed_winding(entries)

    sectors = sum((_ccw_pseudo(ray[letters[(k + 1) % n]], ray[(x, -s)]) for k, (x, s) in enumerate(letters)), _ZERO)
    for k, (x, s) in enumerate(letters):
        if _same_ray(ray[letters[(k + 1) % n]], ray[(x, -s)]):
            raise DegenerateCorner("coincident rays at the vertex")
    if sectors % 4 != 0:
        raise InconsistentEdgePairing("corner sectors do not close up")
    sectors = int(sectors) // 4
    index = raw + sectors - 1
    return PolygonReport(index + 1 - 2 * genus, index, raw, sectors, genus, len(entries))


def polygon_report(generators: Sequence[PlanarMap], genus: int, basepoint: Point,
                   edges: Sequence[Union[PolylineArc, DegenerateEdge]], tol=DEFAULT_TOL,
                   angle_step: float = ANGLE_STEP, certify: bool = True) -> PolygonReport:
    """Developing-map polygon for a surface-group action, with its smoothed index.

    ``generators`` are ``a1, b1, ..., ag, bg``; ``edges[x]`` is an arc from
    the basepoint to its image under generator ``x``, or a ``DegenerateEdge``
    when that generator fixes the basepoint.  The index is the winding of
    the tangent of the image edges, sampled through the exact Jacobians.
    Rotations at corners take the sense of the corresponding corner of the
    source data, which orientation-preserving maps never flip.  Corners at
    the polygon vertices are rounded by the short turn and corrected by how
    often the vertex sectors, pulled back to the basepoint, wind around it.
    """
    if len(generators) != 2 * genus or len(edges) != 2 * genus:
        raise ValueError("need 2g generators and 2g edges")
    p = (frac(basepoint[0]), frac(basepoint[1]))
    tol = float(frac(tol))
    rep = _polygon_pass(generators, genus, p, edges, angle_step, ANGLE_CAP, tol)
    if certify:
        fine = _polygon_pass(generators, genus, p, edges, angle_step / 2, ANGLE_CAP / 2, tol / 4)
        if fine != rep:
            raise CertificationFailed(f"index changed under refinement: {rep} vs {fine}")
    return rep


def euler_via_polygon(generators, genus, basepoint, edges, tol=DEFAULT_TOL, certify: bool = True) -> int:
    return polygon_report(generators, genus, basepoint, edges, tol, certify=certify).euler


def euler_via_rays(delta: PolylineArc, tau_plus: PolylineArc, tau_minus: PolylineArc) -> int:
    """delta . tau_plus - delta . tau_minus.

    The rays are given truncated; their far ends must lie outside the
    bounding box of ``delta`` so no crossing is lost.
    """
    x0, y0, x1, y1 = delta.bbox()
    for q in (tau_plus.end, tau_minus.start):
        if x0 <= q[0] <= x1 and y0 <= q[1] <= y1:
            raise NotProper(f"ray end {q} does not escape the box of delta")
    return intersection_number(delta, tau_plus) - intersection_number(delta, tau_minus)


# ---------------------------------------------------------------------------
# Alexander and self-intersection series


class LaurentPoly:
    """Finitely supported integer Laurent polynomial in one variable."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[dict] = None):
        self.coeffs = {int(e): int(c) for e, c in (coeffs or {}).items() if c != 0}

    def __getitem__(self, e: int) -> int:
        return self.coeffs.get(e, 0)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __call__(self, t):
        t = frac(t)
        return sum(c * t ** e for e, c in self.coeffs.items())

    def support(self) -> list:
        return sorted(self.coeffs)

    def is_antisymmetric(self) -> bool:
        return all(self[-e] == -c for e, c in self.coeffs.items())

    def to_json(self) -> dict:
        return {str(e): self.coeffs[e] for e in sorted(self.coeffs)}

    def __repr__(self):
        return f"LaurentPoly({self.to_json()})"


def euler_from_series(A: LaurentPoly, B: LaurentPoly) -> int:
    diff = A - B
    return sum(c for e, c in diff.coeffs.items() if e > 0) - sum(c for e, c in diff.coeffs.items() if e < 0)


def rescaled_euler(A: LaurentPoly, B: LaurentPoly, n: int) -> int:
    """Euler number of the index-(2n+1) subgroup predicted by the series."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    cap = 2 * n + 1
    diff = A - B
    return (sum(min(e, cap) * c for e, c in diff.coeffs.items() if e > 0)
            - sum(min(-e, cap) * c for e, c in diff.coeffs.items() if e < 0))


@dataclass
class AlexanderResult:
    A: LaurentPoly
    B: LaurentPoly
    window: int
    proper: bool
    delta: PolylineArc
    perturbed: bool = False

    @property
    def euler(self) -> int:
        return euler_from_series(self.A, self.B)


def _box_gap(box, other) -> float:
    dx = max(float(other[0] - box[2]), float(box[0] - other[2]), 0.0)
    dy = max(float(other[1] - box[3]), float(box[1] - other[3]), 0.0)
    return math.hypot(dx, dy)


def _union_box(*boxes):
    return (min(b[0] for b in boxes), min(b[1] for b in boxes), max(b[2] for b in boxes), max(b[3] for b in boxes))


def _check_escape(gaps: list, label: str):
    """Gaps must become positive and then grow strictly up to the window."""
    if not gaps or gaps[-1] <= 0:
        raise OrbitNotProper(f"{label} translates never leave the box of tau and delta")
    k = len(gaps) - 1
    while k > 0 and gaps[k - 1] > 0:
        k -= 1
    for a, b in zip(gaps[k:], gaps[k + 1:]):
        if not b > a:
            raise OrbitNotProper(f"{label} translates do not escape monotonically")


def orbit_arcs(beta: PlanarMap, tau: PolylineArc, window: int, tol=DEFAULT_TOL) -> dict:
    """beta^i(tau) for 0 < |i| <= window."""
    out = {}
    fwd, back = tau, tau
    inv = beta.inverse()
    for i in range(1, window + 1):
        fwd = push_arc(beta, fwd, tol)
        back = push_arc(inv, back, tol)
        out[i], out[-i] = fwd, back
    return out


def _map_threads(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def alexander_series(alpha: PlanarMap, beta: PlanarMap, p: Point, tau: PolylineArc, window: int = 8,
                     tol=DEFAULT_TOL, rotation=Fraction(1, 4), support=None,
                     reading: str = CONJUGATE_THEN_APPLY, threads: int = 1) -> AlexanderResult:
    """Alexander series A and self-intersection series B of ``tau``.

    ``a_i = delta . beta^i(tau)`` and ``b_i = tau . beta^i(tau)`` for
    ``i != 0``, with ``delta = alpha(tau)``; ``b_0 = 0``.  The constant term
    ``a_0`` counts interior crossings of delta with tau plus the crossing
    sign at the basepoint.  When delta leaves the basepoint tangent to tau
    it is first replaced by ``(beta phi beta^-1)(phi(delta))`` for a small
    rotation ``phi`` about the basepoint (``rotation`` turns, identity
    outside ``support``); pass ``rotation=None`` to forbid this.
    """
    p = (frac(p[0]), frac(p[1]))
    if alpha(p) != p:
        raise ValueError("alpha must fix the basepoint")
    if tau.start != p or tau.end != beta(p):
        raise ValueError("tau must run from p to beta(p)")
    if not _same_ray(_normalize(_matvec(beta.jacobian(p), tau.start_tangent)), _normalize(tau.end_tangent)):
        raise TangentMismatch("beta must carry the initial tangent of tau to its final tangent")
    delta = push_arc(alpha, tau, tol)
    arcs = orbit_arcs(beta, tau, window, tol)
    home = _union_box(tau.bbox(), delta.bbox())
    for sign, label in ((1, "forward"), (-1, "backward")):
        _check_escape([_box_gap(arcs[sign * i].bbox(), home) for i in range(1, window + 1)], label)

    def coeffs(i):
        return intersection_number(delta, arcs[i]), intersection_number(tau, arcs[i])

    idx = [i for i in range(-window, window + 1) if i != 0]
    vals = _map_threads(coeffs, idx, threads)
    a = {i: v[0] for i, v in zip(idx, vals)}
    b = {i: v[1] for i, v in zip(idx, vals)}

    perturbed = False
    start = delta
    if _same_ray(delta.start_tangent, tau.start_tangent):
        if rotation is None:
            raise TangencyAtZero("delta and tau are tangent at the basepoint")
        if support is None:
            nearest = min(math.hypot(*_fl(_sub(beta_pow_point(beta, p, i), p))) for i in (1, -1, 2, -2))
            support = Fraction(math.floor(nearest / 2 * 1024), 1024)
        phi = bump_rotation(p, support, rotation)
        if reading == CONJUGATE_THEN_APPLY:
            twist = Compose(beta, phi, beta.inverse(), phi)
        elif reading == LEFT_TO_RIGHT:
            twist = Compose(phi, beta.inverse(), phi, beta)
        else:
            raise ValueError(f"unknown reading {reading!r}")
        start = push_arc(twist, delta, tol)
        perturbed = True
        if _same_ray(start.start_tangent, tau.start_tangent):
            raise TangencyAtZero("perturbed delta is still tangent to tau")
    a[0] = intersection_number(start, tau) + _crossing_sign(start.start_tangent, tau.start_tangent)
    return AlexanderResult(LaurentPoly(a), LaurentPoly(b), window, True, delta, perturbed)


def beta_pow_point(beta: PlanarMap, p: Point, i: int) -> Point:
    m = beta if i >= 0 else beta.inverse()
    for _ in range(abs(i)):
        p = m(p)
    return p


def writhe_sum(h: PlanarMap, tau: PolylineArc, window: int = 6, tol=DEFAULT_TOL) -> int:
    """sum_{i>0} tau . h^i(tau) - sum_{i<0} tau . h^i(tau) over the window."""
    arcs = orbit_arcs(h, tau, window, tol)
    home = tau.bbox()
    for sign, label in ((1, "forward"), (-1, "backward")):
        _check_escape([_box_gap(arcs[sign * i].bbox(), home) for i in range(1, window + 1)], label)
    pos = sum(intersection_number(tau, arcs[i]) for i in range(1, window + 1))
    neg = sum(intersection_number(tau, arcs[-i]) for i in range(1, window + 1))
    return pos - neg


# ---------------------------------------------------------------------------
# example actions


@dataclass
class ActionBundle:
    """Maps, surface generators, basepoint and default polygon edges of an example."""

    kind: str
    maps: dict
    surface_generators: list
    surface_labels: list
    genus: int
    basepoint: Point
    edges: list
    fixer: Optional[str] = None
    mover: Optional[str] = None
    tau: Optional[PolylineArc] = None
    params: dict = field(default_factory=dict)

    def euler(self, tol=DEFAULT_TOL, certify: bool = True) -> int:
        return euler_via_polygon(self.surface_generators, self.genus, self.basepoint, self.edges, tol, certify)

    def report(self, tol=DEFAULT_TOL, certify: bool = True) -> PolygonReport:
        return polygon_report(self.surface_generators, self.genus, self.basepoint, self.edges, tol, certify=certify)


def segment(p, q) -> PolylineArc:
    return PolylineArc((point(*p), point(*q)))


def make_example(kind: str, i: int = 1, index: int = 1, profile: Profile = DEFAULT_PROFILE) -> ActionBundle:
    """``bestvina`` (with ``index``), ``genus2`` (with ``i``) or ``twist_row``."""
    up, down = (0, 1), (0, -1)
    if kind == "bestvina":
        if index < 1:
            raise ValueError("index must be positive")
        twists = ConcentricTwists(profile=profile)
        dilation = Dilation(2)
        p = point(Fraction(3, 2), 0)
        tau = segment(p, (Fraction(3, 2) * 2 ** index, 0))
        return ActionBundle(
            "bestvina", {"twists": twists, "dilation": dilation},
            [twists, dilation ** index], ["twists", f"dilation^{index}"], 1, p,
            [DegenerateEdge(up), tau], "twists", "dilation", segment(p, (3, 0)), {"index": index},
        )
    if kind == "genus2":
        rings = ConcentricTwists(j_min=0, profile=profile)
        dilation = Dilation(2)
        row = RowTwists(j_min=0, profile=profile)
        shift = Translation(3, 0)
        p = point(Fraction(-3, 2), 0)
        return ActionBundle(
            "genus2", {"ring_twists": rings, "dilation": dilation, "row_twists": row, "translation": shift},
            [rings ** i, dilation, shift, row ** i],
            [f"ring_twists^{i}", "dilation", "translation", f"row_twists^{i}"], 2, p,
            [DegenerateEdge(down), segment(p, (-3, 0)), segment(p, (Fraction(3, 2), 0)), DegenerateEdge(up)],
            params={"i": i},
        )
    if kind == "twist_row":
        row = RowTwists(profile=profile)
        shift = Translation(3, 0)
        p = point(Fraction(3, 2), 0)
        tau = segment(p, (Fraction(9, 2), 0))
        return ActionBundle(
            "twist_row", {"twists": row, "translation": shift}, [row, shift], ["twists", "translation"], 1, p,
            [DegenerateEdge(up), tau], "twists", "translation", tau,
        )
    raise ValueError(f"unknown example {kind!r}")


def wiggly_tau() -> PolylineArc:
    """An arc for the twist row that crosses its own translate."""
    pts = [("3/2", 0), ("5/2", 0), ("26/5", "3/5"), ("26/5", "-3/5"), ("19/5", "-1/5"), (4, 0), ("9/2", 0)]
    return PolylineArc(tuple(point(x, y) for x, y in pts))


def example_alexander(bundle: ActionBundle, tau: Optional[PolylineArc] = None, window: int = 8,
                      tol=DEFAULT_TOL, threads: int = 1) -> AlexanderResult:
    if bundle.fixer is None:
        raise ValueError(f"{bundle.kind} has no fixer/mover pair")
    tau = tau or bundle.tau
    return alexander_series(bundle.maps[bundle.fixer], bundle.maps[bundle.mover], bundle.basepoint,
                            tau, window, tol, threads=threads)
