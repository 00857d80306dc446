"""Exact hyperbolic Mobius maps, axis endpoints, free-group automorphisms,
and the circular order on mapping classes read off from axis endpoints.

Boundary points of the upper half-plane are projective pairs ``(u0, u1)``
of :class:`Quad` numbers, both coordinates sharing one radicand; the pair ``(x, 1)`` is the real point x and
``(1, 0)`` is infinity. Orientation follows the circle convention with
(0, 1, infinity) positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence

from .words import Word, free_reduce, inverse


class NotHyperbolic(Exception):
    pass


class DegenerateTriple(Exception):
    pass


class CapExceeded(Exception):
    pass


# ---------------------------------------------------------------------------
# exact arithmetic in Q(sqrt D)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class Quad:
    """x + y*sqrt(D) with rational x, y and a rational radicand D > 0.

    D is never reduced to its squarefree part (that would need factoring),
    so two values may only be combined when they share D or one is rational.
    Signs are decided exactly by comparing squares.
    """

    __slots__ = ("x", "y", "D")

    def __init__(self, x, y=0, D=1):
        self.x, self.y, self.D = Fraction(x), Fraction(y), Fraction(D)
        if self.D <= 0:
            raise ValueError("radicand must be positive")

    @classmethod
    def of(cls, v) -> "Quad":
        return v if isinstance(v, Quad) else cls(v)

    def _join(self, other) -> tuple:
        o = Quad.of(other)
        if self.y == 0:
            return o, o.D
        if o.y != 0 and o.D != self.D:
            raise ValueError("mixed radicands")
        return o, self.D

    def __add__(self, other):
        o, D = self._join(other)
        return Quad(self.x + o.x, self.y + o.y, D)

    __radd__ = __add__

    def __neg__(self):
        return Quad(-self.x, -self.y, self.D)

    def __sub__(self, other):
        return self + (-Quad.of(other))

    def __rsub__(self, other):
        return Quad.of(other) - self

    def __mul__(self, other):
        o, D = self._join(other)
        return Quad(self.x * o.x + self.y * o.y * D, self.x * o.y + self.y * o.x, D)

    __rmul__ = __mul__

    def conjugate(self) -> "Quad":
        return Quad(self.x, -self.y, self.D)

    def norm(self) -> Fraction:
        return self.x * self.x - self.y * self.y * self.D

    def sign(self) -> int:
        sx, sy = _sign(self.x), _sign(self.y)
        if sy == 0:
            return sx
        if sx == 0:
            return sy
        if sx == sy:
            return sx
        n = self.norm()
        return sx if n > 0 else (sy if n < 0 else 0)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Quad)):
            o = Quad.of(other)
            if self.y != 0 and o.y != 0 and self.D != o.D:
                return _mixed_zero(self, o)
            return (self - o).is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.x, self.y, self.D if self.y else 1))

    def __float__(self):
        return float(self.x) + float(self.y) * math.sqrt(float(self.D))

    def __repr__(self):
        if self.y == 0:
            return f"{self.x}"
        return f"{self.x} + {self.y}*sqrt({self.D})"


def sign_mixed(alpha: Quad, beta: Quad, E) -> int:
    """Exact sign of alpha + beta*sqrt(E) with alpha, beta in Q(sqrt D)."""
    sa, sb = alpha.sign(), beta.sign()
    if sb == 0:
        return sa
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    diff = alpha * alpha - beta * beta * Quad(E)
    sd = diff.sign()
    return sa if sd > 0 else (sb if sd < 0 else 0)


def _mixed_zero(u: Quad, v: Quad) -> bool:
    # u - v with different radicands: (u.x - v.x + u.y sqrt Du) - v.y sqrt Dv
    return sign_mixed(Quad(u.x - v.x, u.y, u.D), Quad(-v.y), v.D) == 0


def mixed_product_sign(u0: Quad, v1: Quad, u1: Quad, v0: Quad) -> int:
    """Exact sign of u0*v1 - u1*v0 where u* share one radicand and v* another."""
    D, E = u0.D if u0.y else u1.D, v0.D if v0.y else v1.D

    def split(u: Quad, v: Quad) -> tuple:
        # (a + b sqrt D)(c + d sqrt E) = (ac + bc sqrt D) + (ad + bd sqrt D) sqrt E
        a, b, c, d = u.x, u.y, v.x, v.y
        return Quad(a * c, b * c, D), Quad(a * d, b * d, D)

    al1, be1 = split(u0, v1)
    al2, be2 = split(u1, v0)
    return sign_mixed(al1 - al2, be1 - be2, E)


# ---------------------------------------------------------------------------
# Mobius maps and boundary points


Matrix = tuple  # ((a, b), (c, d)) with rational entries


def mobius(rows) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def mmul(m: Matrix, n: Matrix) -> Matrix:
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def madj(m: Matrix) -> Matrix:
    (a, b), (c, d) = m
    return ((d, -b), (-c, a))


def mdet(m: Matrix):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def mtrace(m: Matrix):
    return m[0][0] + m[1][1]


IDENTITY = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))


def point(x) -> tuple:
    """Boundary point from a rational, a ``(num, den)`` pair, or ``'inf'``."""
    if isinstance(x, tuple):
        return (Quad.of(x[0]), Quad.of(x[1]))
    if x == "inf":
        return (Quad(1), Quad(0))
    return (Quad.of(x), Quad(1))


INFINITY = point("inf")


def apply(m: Matrix, p: tuple) -> tuple:
    (a, b), (c, d) = m
    return (p[0] * a + p[1] * b, p[0] * c + p[1] * d)


def det_sign(u: tuple, v: tuple) -> int:
    """Sign of u0*v1 - u1*v0, exact even when u and v live in different fields."""
    return mixed_product_sign(Quad.of(u[0]), Quad.of(v[1]), Quad.of(u[1]), Quad.of(v[0]))


def same_point(u: tuple, v: tuple) -> bool:
    return det_sign(u, v) == 0


def orient(u: tuple, v: tuple, w: tuple) -> int:
    """Circular orientation of three boundary points; (0, 1, infinity) is +1."""
    s = det_sign(u, v) * det_sign(u, w) * det_sign(v, w)
    if s == 0:
        raise DegenerateTriple((u, v, w))
    return -s


def point_float(p: tuple) -> float:
    den = float(p[1])
    return math.inf if den == 0 else float(p[0]) / den


@dataclass(frozen=True)
class AxisEndpoints:
    repelling: tuple
    attracting: tuple


def is_hyperbolic(m: Matrix) -> bool:
    m = mobius(m)
    return mdet(m) > 0 and mtrace(m) ** 2 - 4 * mdet(m) > 0


def axis_endpoints(m: Matrix) -> AxisEndpoints:
    """Repelling and attracting fixed points of a hyperbolic map, exactly.

    The attracting point is the eigenvector line of the eigenvalue of larger
    absolute value, so no comparison of irrationals is needed.
    """
    (a, b), (c, d) = m = mobius(m)
    tr, det = a + d, mdet(m)
    if det <= 0:
        raise NotHyperbolic("determinant must be positive")
    disc = tr * tr - 4 * det
    if disc <= 0:
        raise NotHyperbolic(f"trace^2 - 4 det = {disc} is not positive")
    sgn = 1 if tr > 0 else -1
    if c != 0:
        two_c = Quad(2 * c, 0, disc)
        attracting = (Quad(a - d, sgn, disc), two_c)
        repelling = (Quad(a - d, -sgn, disc), two_c)
        return AxisEndpoints(repelling, attracting)
    finite = (Quad(b), Quad(d - a))
    if abs(a) > abs(d):
        return AxisEndpoints(finite, INFINITY)
    return AxisEndpoints(INFINITY, finite)


def crosses(e1: AxisEndpoints, e2: AxisEndpoints) -> bool:
    """Whether two axes cross: their endpoint pairs are linked on the circle."""
    p, q = e1.repelling, e1.attracting
    r, s = e2.repelling, e2.attracting
    if any(same_point(x, y) for x in (p, q) for y in (r, s)):
        return False
    return orient(p, q, r) != orient(p, q, s)


# ---------------------------------------------------------------------------
# free group automorphisms


class FreeAuto:
    """An endomorphism of the free group given by generator images.

    Composition ``f * g`` is ``f`` after ``g``.
    """

    __slots__ = ("images",)

    def __init__(self, images: Sequence[Word]):
        self.images = tuple(free_reduce(w) for w in images)

    @property
    def rank(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, rank: int) -> "FreeAuto":
        return cls([((i, 1),) for i in range(rank)])

    def __call__(self, w: Word) -> Word:
        out: list = []
        for g, s in w:
            out.extend(self.images[g] if s > 0 else inverse(self.images[g]))
        return free_reduce(out)

    def __mul__(self, other: "FreeAuto") -> "FreeAuto":
        return FreeAuto([self(w) for w in other.images])

    def __eq__(self, other):
        return isinstance(other, FreeAuto) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"FreeAuto({self.images!r})"


def artin_generator(rank: int, i: int, sign: int = 1) -> FreeAuto:
    """The automorphism of sigma_i (1-based) or its inverse on F_rank."""
    if not 1 <= i < rank:
        raise ValueError(f"sigma_{i} out of range for rank {rank}")
    imgs = [((k, 1),) for k in range(rank)]
    a, b = i - 1, i
    if sign > 0:
        imgs[a] = ((a, 1), (b, 1), (a, -1))
        imgs[b] = ((a, 1),)
    else:
        imgs[a] = ((b, 1),)
        imgs[b] = ((b, -1), (a, 1), (b, 1))
    return FreeAuto(imgs)


def braid_to_free_auto(b) -> FreeAuto:
    """Artin action of a braid word (anything with ``n`` and ``letters``)."""
    out = FreeAuto.identity(b.n)
    for i, s in b.letters:
        out = out * artin_generator(b.n, i, s)
    return out


def auto_inverse(b) -> FreeAuto:
    out = FreeAuto.identity(b.n)
    for i, s in reversed(b.letters):
        out = out * artin_generator(b.n, i, -s)
    return out


# ---------------------------------------------------------------------------
# representations and the circular order on automorphisms


def schottky_generator(k: int) -> Matrix:
    s = Fraction(3 + 6 * k)
    return mobius([[s, s * s - 1], [1, s]])


def puncture_representation(rank: int) -> list:
    """Integer matrices for loops around the punctures of an n-punctured disk.

    The underlying Schottky group has isometric circles of radius 1 centred
    at +-3, +-9, ...; the k-th loop is ``g_{k-2}^-1 g_{k-1}`` so the product of
    all loops is the outer boundary ``g_{n-1}``.
    """
    gs = [schottky_generator(k) for k in range(rank)]
    out = [gs[0]]
    for k in range(1, rank):
        out.append(mmul(madj(gs[k - 1]), gs[k]))
    return out


def word_matrix(rep: Sequence[Matrix], w: Word) -> Matrix:
    out = IDENTITY
    for g, s in w:
        out = mmul(out, rep[g] if s > 0 else madj(rep[g]))
    return out


def shortlex_words(rank: int, max_len: int) -> Iterable[Word]:
    letters = [(g, s) for g in range(rank) for s in (1, -1)]
    frontier: list = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1][0] == x[0] and w[-1][1] == -x[1]:
                    continue
                v = w + (x,)
                nxt.append(v)
                yield v
        frontier = nxt


def attracting_endpoint(rep: Sequence[Matrix], w: Word) -> tuple:
    return axis_endpoints(word_matrix(rep, w)).attracting


def mcg_circular_compare(
    phi1: FreeAuto,
    phi2: FreeAuto,
    phi3: FreeAuto,
    rep: Optional[Sequence[Matrix]] = None,
    search_cap: int = 2000,
) -> int:
    """Orientation of the attracting endpoints of phi_i(gamma) at the first separating gamma."""
    phis = (phi1, phi2, phi3)
    rank = phi1.rank
    if rep is None:
        rep = puncture_representation(rank)
    for i in range(3):
        for j in range(i + 1, 3):
            if phis[i] == phis[j]:
                raise DegenerateTriple((i, j))
    for count, gamma in enumerate(shortlex_words(rank, 64)):
        if count >= search_cap:
            break
        pts = [attracting_endpoint(rep, f(gamma)) for f in phis]
        if any(same_point(pts[i], pts[j]) for i, j in ((0, 1), (0, 2), (1, 2))):
            continue
        return orient(*pts)
    raise CapExceeded(f"no separating element among the first {search_cap}")
