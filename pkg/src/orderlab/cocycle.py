"""Bar chains, the Thurston and Ghys cocycles, surface cycles, and their pairings.

Group elements are words over an action's generators. Chains identify two
words when ``key`` (by default the action's ``element_key``) agrees.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Optional, Sequence

from .order_core import NonDistinct
from .realize import (
    CircleAction,
    MobiusAction,
    PLAction,
    frac,
    mat,
    mat_adj,
    mat_det,
    mat_mul,
)
from .words import Word, free_reduce, inverse


class RelationNotSatisfied(Exception):
    pass


class UnresolvableProduct(Exception):
    pass


class NonExactLift(Exception):
    pass


CLOCKWISE = "clockwise"
ANTICLOCKWISE = "anticlockwise"


def element_key(action: CircleAction, g: Word):
    """A hashable value equal for two words iff they act identically."""
    if isinstance(action, MobiusAction):
        m = action.matrix(g)
        flat = [m[0][0], m[0][1], m[1][0], m[1][1]]
        lead = next(x for x in flat if x != 0)
        return tuple(x / lead for x in flat)
    if isinstance(action, PLAction):
        h = action.lift(g).simplified()
        n = h.ys[0].numerator // h.ys[0].denominator
        return (tuple(h.xs), tuple(y - n for y in h.ys))
    raise UnresolvableProduct(f"no element key for {type(action).__name__}")


@dataclass
class BarChain1:
    terms: dict  # key -> [coefficient, representative word]

    def is_zero(self) -> bool:
        return all(c == 0 for c, _ in self.terms.values())

    def nonzero(self) -> list:
        return [(c, w) for c, w in self.terms.values() if c != 0]


@dataclass
class BarChain2:
    terms: list  # (coefficient, (g, h))

    def l1_norm(self) -> int:
        return sum(abs(c) for c, _ in self.terms)

    def __add__(self, other: "BarChain2") -> "BarChain2":
        return BarChain2(self.terms + other.terms)

    def scaled(self, k: int) -> "BarChain2":
        return BarChain2([(k * c, p) for c, p in self.terms])


@dataclass
class FundamentalCycle:
    genus: int
    chain: BarChain2
    generators: list = field(default_factory=list)


def boundary2(chain: BarChain2, key: Callable[[Word], object] = free_reduce) -> BarChain1:
    """Inhomogeneous boundary: d(f1, f2) = (f2) - (f1 f2) + (f1)."""
    acc: dict = {}

    def add(c, w):
        w = free_reduce(w)
        try:
            k = key(w)
        except Exception as exc:  # key functions may fail on unknown letters
            raise UnresolvableProduct(w) from exc
        slot = acc.setdefault(k, [0, w])
        slot[0] += c

    for c, (f1, f2) in chain.terms:
        add(c, f2)
        add(-c, tuple(f1) + tuple(f2))
        add(c, f1)
    return BarChain1(acc)


def thurston_c(action: CircleAction, p, g0: Word, g1: Word, g2: Word, convention: str = CLOCKWISE) -> int:
    """Thurston cocycle in homogeneous coordinates, 0 on degenerate triples.

    With ``convention="anticlockwise"`` the value is the anticlockwise
    orientation of ``(g0 p, g1 p, g2 p)``. The default ``"clockwise"``
    negates it; that is the sign for which 2e - c is a coboundary when e
    is computed from increasing lifts.
    """
    pts = [action.act(g, p) for g in (g0, g1, g2)]
    if pts[0] == pts[1] or pts[1] == pts[2] or pts[0] == pts[2]:
        return 0
    v = action.orient(*pts)
    if convention == ANTICLOCKWISE:
        return v
    if convention == CLOCKWISE:
        return -v
    raise ValueError(f"unknown convention {convention!r}")


def thurston_c_inhom(action: CircleAction, p, g: Word, h: Word, convention: str = CLOCKWISE) -> int:
    """c in inhomogeneous coordinates: c(g, h) = c(Id : g : gh)."""
    return thurston_c(action, p, (), g, tuple(g) + tuple(h), convention)


def _check_exact(action: CircleAction) -> None:
    if isinstance(action, PLAction):
        for h in action.gens.values():
            if not all(isinstance(x, Fraction) for x in h.xs + h.ys):
                raise NonExactLift("PL tables must be exact rationals")


def ghys_e(action: CircleAction, g0: Word, g1: Word) -> int:
    """e(g0, g1) = s(g0 g1)^-1 s(g0) s(g1) applied to the base cover point."""
    _check_exact(action)
    X0 = action.base_cover()
    X = action.section(g1, X0)
    X = action.section(g0, X)
    X = action.section_inverse(tuple(g0) + tuple(g1), X)
    return action.cover_offset(X0, X)


def pair(cochain: Callable[[Word, Word], object], cycle) -> object:
    chain = cycle.chain if isinstance(cycle, FundamentalCycle) else cycle
    return sum((c * cochain(g, h) for c, (g, h) in chain.terms), 0)


def coboundary2(cochain: Callable[[Word, Word], object], a: Word, b: Word, c: Word):
    """(d f)(a, b, c) = f(b, c) - f(ab, c) + f(a, bc) - f(a, b)."""
    ab, bc = tuple(a) + tuple(b), tuple(b) + tuple(c)
    return cochain(b, c) - cochain(ab, c) + cochain(a, bc) - cochain(a, b)


def homogeneous_coboundary(c3: Callable[[Word, Word, Word], int], g0, g1, g2, g3) -> int:
    return c3(g1, g2, g3) - c3(g0, g2, g3) + c3(g0, g1, g3) - c3(g0, g1, g2)


def surface_relator(genus: int) -> Word:
    """Product of commutators [a_1, b_1] ... [a_g, b_g] on generators a_1, b_1, a_2, ..."""
    out: list = []
    for i in range(genus):
        a, b = 2 * i, 2 * i + 1
        out += [(a, 1), (b, 1), (a, -1), (b, -1)]
    return tuple(out)


def fundamental_cycle(
    genus: int,
    generators: Optional[Sequence[Word]] = None,
    key: Optional[Callable[[Word], object]] = None,
) -> FundamentalCycle:
    """A 2-cycle representing the fundamental class of a closed genus-g surface.

    ``generators`` are the images ``a_1, b_1, ..., a_g, b_g`` as words (by
    default the letters themselves); ``key`` identifies group elements and
    is used to check the surface relation.
    """
    if genus < 1:
        raise ValueError("genus must be at least 1")
    gens = list(generators) if generators is not None else [((i, 1),) for i in range(2 * genus)]
    if len(gens) != 2 * genus:
        raise ValueError("need 2g generators")
    key = key or free_reduce
    ident = key(())

    def sub(w: Word) -> Word:
        out: tuple = ()
        for g, s in w:
            out = out + (tuple(gens[g]) if s > 0 else inverse(gens[g]))
        return free_reduce(out)

    if genus == 1:
        a, b = gens
        if key(tuple(a) + tuple(b)) != key(tuple(b) + tuple(a)):
            raise RelationNotSatisfied("generators do not commute")
        return FundamentalCycle(1, BarChain2([(1, (a, b)), (-1, (b, a))]), gens)

    letters = [sub((x,)) for x in surface_relator(genus)]
    if key(sub(surface_relator(genus))) != ident:
        raise RelationNotSatisfied("surface relation fails")
    terms = []
    prefix: tuple = ()
    for k in range(len(letters) - 1):
        prefix = free_reduce(prefix + letters[k])
        terms.append((1, (prefix, letters[k + 1])))
    for x in gens:
        terms.append((-1, (tuple(x), inverse(x))))
    terms.append((-(2 * genus - 1), ((), ())))
    return FundamentalCycle(genus, BarChain2(terms), gens)


def relator_translation(action: CircleAction, genus: int) -> int:
    """Translation number of the product of commutators of lifts.

    Independent of the cochain route: lift each generator, compose the lifted
    commutators along the relator, and read off the integer translation at
    the base cover point (the product is a lift of the identity).
    """
    X0 = action.base_cover()
    X = X0
    for g, s in reversed(surface_relator(genus)):
        w = ((g, 1),)
        X = action.section(w, X) if s > 0 else action.section_inverse(w, X)
    return action.cover_offset(X0, X)


def milnor_wood_holds(action: CircleAction, cycle: FundamentalCycle) -> bool:
    """|<e - 1/2, z>| <= |z|_1 / 2 for the named representatives."""
    val = pair(lambda g, h: Fraction(ghys_e(action, g, h)) - Fraction(1, 2), cycle)
    return abs(val) <= Fraction(cycle.chain.l1_norm(), 2)


# ---------------------------------------------------------------------------
# an exact genus-2 surface group acting on RP^1

# Rounded side pairings of a regular hyperbolic octagon; the remaining
# entries are solved exactly so the surface relation holds.
_A1 = [["-209/64", "-209/64"], ["5/32", "-5/32"]]
_B1 = [["31/64", "109/64"], ["-109/64", "-125/32"]]
_A2_PARTIAL = ("-5/32", "209/64", "-209/64")  # entries (0,1), (1,0), (1,1)
_B2_BOTTOM = ("-109/64", "31/64")


def _solve_two(eqs):
    """Solve the 2-unknown linear system given as rows (c0, c1, const) meaning c0 x + c1 y + const = 0."""
    for i in range(len(eqs)):
        for j in range(i + 1, len(eqs)):
            a0, a1, ac = eqs[i]
            b0, b1, bc = eqs[j]
            det = a0 * b1 - a1 * b0
            if det != 0:
                x = (-ac * b1 + a1 * bc) / det
                y = (-a0 * bc + ac * b0) / det
                if all(c0 * x + c1 * y + c == 0 for c0, c1, c in eqs):
                    return x, y
                raise RelationNotSatisfied("inconsistent linear system")
    raise RelationNotSatisfied("degenerate linear system")


def genus2_surface_matrices() -> dict:
    """Four rational matrices a1, b1, a2, b2 with [a1, b1][a2, b2] scalar."""
    A1, B1 = mat(_A1), mat(_B1)
    scale = mat_det(A1) * mat_det(B1)
    C = mat_mul(mat_mul(mat_mul(B1, A1), mat_adj(B1)), mat_adj(A1))
    C = tuple(tuple(x / scale for x in row) for row in C)
    b, c, d = (frac(x) for x in _A2_PARTIAL)
    # tr(adj A2) = tr(adj(A2) C) is linear in the free entry a
    a = (d * C[0][0] - b * C[1][0] - c * C[0][1] - d) / (1 - C[1][1])
    A2 = ((a, b), (c, d))
    M = mat_adj(A2)
    N = mat_mul(M, C)
    x2, x3 = (frac(v) for v in _B2_BOTTOM)
    X1 = (x2, x3)
    eqs = []
    for i in range(2):
        for j in range(2):
            c0 = (M[0][j] if i == 0 else 0) - (N[i][0] if j == 0 else 0)
            c1 = (M[1][j] if i == 0 else 0) - (N[i][0] if j == 1 else 0)
            const = (X1[0] * M[0][j] + X1[1] * M[1][j] if i == 1 else 0) - N[i][1] * X1[j]
            eqs.append((c0, c1, const))
    x0, x1 = _solve_two(eqs)
    B2 = ((x0, x1), (x2, x3))
    return {"a1": A1, "b1": B1, "a2": A2, "b2": B2}


def genus2_surface_action(basepoint=(0, 1)) -> MobiusAction:
    return MobiusAction(genus2_surface_matrices(), basepoint=basepoint)
