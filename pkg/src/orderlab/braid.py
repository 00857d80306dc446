"""Braid words, Dehornoy handle reduction, the Dehornoy order, the full twist,
and the circular order on the quotient by the centre.

Letters are ``(i, sign)`` with 1-based generator index i.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .fuchsian import FreeAuto, braid_to_free_auto
from .laurent import Laurent, identity as lk_identity, matmul

LESS, EQUAL, GREATER = "Less", "Equal", "Greater"
DEFAULT_MAX_STRANDS = 8


class StepCapExceeded(Exception):
    pass


class DegenerateTriple(Exception):
    pass


@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple((int(i), int(s)) for i, s in self.letters))
        if self.n < 2:
            raise ValueError("need at least 2 strands")
        for i, s in self.letters:
            if not 1 <= i < self.n or s not in (1, -1):
                raise ValueError(f"bad letter {(i, s)} for {self.n} strands")

    @classmethod
    def parse(cls, n: int, text: str) -> "BraidWord":
        """``s1 S2 s1`` style: lowercase positive, uppercase inverse; ``e`` is the empty word."""
        out = []
        for tok in text.replace(",", " ").split():
            if tok in ("e", "1", "id", "Id"):
                continue
            if tok[0] not in "sS" or not tok[1:].isdigit():
                raise ValueError(f"bad braid letter {tok!r}")
            out.append((int(tok[1:]), 1 if tok[0] == "s" else -1))
        return cls(n, tuple(out))

    def format(self) -> str:
        if not self.letters:
            return "e"
        return " ".join(("s" if s > 0 else "S") + str(i) for i, s in self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.n != self.n:
            raise ValueError("strand counts differ")
        return BraidWord(self.n, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n, tuple((i, -s) for i, s in reversed(self.letters)))

    def __pow__(self, k: int) -> "BraidWord":
        base = self if k >= 0 else self.inverse()
        return BraidWord(self.n, base.letters * abs(k))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class DehornoyVerdict:
    cls: str
    reduced: BraidWord


@dataclass(frozen=True)
class CentralCoordinates:
    twist_power: int
    remainder: BraidWord


def identity(n: int) -> BraidWord:
    return BraidWord(n, ())


def sigma(n: int, i: int, s: int = 1) -> BraidWord:
    return BraidWord(n, ((i, s),))


def half_twist(n: int) -> BraidWord:
    """Delta = (s1 ... s_{n-1})(s1 ... s_{n-2}) ... (s1)."""
    letters = []
    for k in range(n - 1, 0, -1):
        letters += [(i, 1) for i in range(1, k + 1)]
    return BraidWord(n, tuple(letters))


def full_twist(n: int) -> BraidWord:
    """Delta^2 = (s1 ... s_{n-1})^n, the positive generator of the centre."""
    return BraidWord(n, tuple((i, 1) for i in range(1, n)) * n)


# ---------------------------------------------------------------------------
# handle reduction


def _find_handle(letters: list) -> Optional[tuple]:
    """The handle whose right end is leftmost, as (left, right) positions."""
    last: dict = {}  # generator index -> position of its latest occurrence
    for j, (i, s) in enumerate(letters):
        k = last.get(i)
        if k is not None and letters[k][1] == -s:
            # no sigma_{i-1} letter since position k
            prev = last.get(i - 1)
            if prev is None or prev < k:
                return k, j
        last[i] = j
    return None


def handle_reduce(w: BraidWord, step_cap: int = 100_000) -> BraidWord:
    """Dehornoy handle reduction to a handle-free equivalent word."""
    letters = list(w.letters)
    steps = 0
    while True:
        h = _find_handle(letters)
        if h is None:
            return BraidWord(w.n, tuple(letters))
        steps += 1
        if steps > step_cap:
            raise StepCapExceeded(f"more than {step_cap} reductions")
        k, j = h
        i, e = letters[k]
        middle = []
        for (m, d) in letters[k + 1:j]:
            if m == i + 1:
                middle += [(i + 1, -e), (i, d), (i + 1, e)]
            else:
                middle.append((m, d))
        letters = letters[:k] + middle + letters[j + 1:]


def is_handle_free(w: BraidWord) -> bool:
    return _find_handle(list(w.letters)) is None


def sigma_sign(w: BraidWord) -> int:
    """+1 / -1 if the lowest generator of a handle-free word occurs with one sign, 0 if empty."""
    if not w.letters:
        return 0
    low = min(i for i, _ in w.letters)
    signs = {s for i, s in w.letters if i == low}
    if len(signs) != 1:
        raise ValueError("word is not handle-free at its lowest generator")
    return signs.pop()


def braid_compare(u: BraidWord, v: BraidWord, step_cap: int = 100_000) -> DehornoyVerdict:
    """Compare u and v in the Dehornoy order via the handle-free form of u^-1 v.

    ``Greater`` means v > u.
    """
    if u.n != v.n:
        raise ValueError("strand counts differ")
    r = handle_reduce(u.inverse() * v, step_cap)
    s = sigma_sign(r)
    return DehornoyVerdict(EQUAL if s == 0 else (GREATER if s > 0 else LESS), r)


def dehornoy_positive(w: BraidWord, step_cap: int = 100_000) -> bool:
    return sigma_sign(handle_reduce(w, step_cap)) > 0


def braid_less(u: BraidWord, v: BraidWord) -> bool:
    return braid_compare(u, v).cls == GREATER


# ---------------------------------------------------------------------------
# centre and the circular order on B_n / <Delta^2>


def central_normalize(w: BraidWord, step_cap: int = 100_000) -> CentralCoordinates:
    """Write w = Delta^(2k) * r with Id <= r < Delta^2."""
    D = full_twist(w.n)

    def at_least(k: int) -> bool:  # Delta^(2k) <= w
        return braid_compare(D ** k, w, step_cap).cls != LESS

    k = 0
    if at_least(0):
        while at_least(k + 1):
            k += 1
    else:
        while not at_least(k):
            k -= 1
    r = handle_reduce((D ** (-k)) * w, step_cap)
    lo = braid_compare(identity(w.n), r, step_cap).cls
    hi = braid_compare(r, D, step_cap).cls
    if lo == LESS or hi != GREATER:
        raise AssertionError("full twist bracketing failed")
    return CentralCoordinates(k, r)


def circular_compare_bn_prime(u: BraidWord, v: BraidWord, w: BraidWord, step_cap: int = 100_000) -> int:
    """Cyclic orientation of the remainders of u, v, w in [Id, Delta^2)."""
    rs = [central_normalize(x, step_cap).remainder for x in (u, v, w)]
    for a, b in ((0, 1), (0, 2), (1, 2)):
        if braid_compare(rs[a], rs[b], step_cap).cls == EQUAL:
            raise DegenerateTriple((a, b))
    lt = lambda a, b: braid_compare(rs[a], rs[b], step_cap).cls == GREATER
    increasing = sum(1 for a, b in ((0, 1), (1, 2), (2, 0)) if lt(a, b))
    return 1 if increasing == 2 else -1


# ---------------------------------------------------------------------------
# Lawrence-Krammer representation (independent word-problem oracle)


def _pairs(n: int) -> list:
    return [(j, k) for j in range(1, n + 1) for k in range(j + 1, n + 1)]


def _lk_image(n: int, i: int, j: int, k: int) -> dict:
    """sigma_i applied to the basis vector v_{j,k}, as {(j', k'): Laurent in (q, t)}."""
    q = Laurent.monomial((1, 0))
    t = Laurent.monomial((0, 1))
    one = Laurent.const(1)
    if i not in (j - 1, j, k - 1, k):
        return {(j, k): one}
    if i == j - 1:
        return {(i, k): q, (i, j): q * q - q, (j, k): one - q}
    if i == j and i != k - 1:
        return {(j + 1, k): one}
    if i == k - 1 and i != j:
        return {(j, i): q, (j, k): one - q, (i, k): -(q * q - q) * t}
    if i == k:
        return {(j, k + 1): one}
    # i == j == k - 1
    return {(j, k): -(t * q * q)}


@lru_cache(maxsize=None)
def lk_generator(n: int, i: int) -> tuple:
    basis = _pairs(n)
    idx = {p: r for r, p in enumerate(basis)}
    m = [[Laurent.const(0) for _ in basis] for _ in basis]
    for col, (j, k) in enumerate(basis):
        for p, c in _lk_image(n, i, j, k).items():
            m[idx[p]][col] = m[idx[p]][col] + c
    return tuple(tuple(row) for row in m)


def garside_flip(w: BraidWord) -> BraidWord:
    """Conjugation by Delta: s_i -> s_{n-i}."""
    return BraidWord(w.n, tuple((w.n - i, s) for i, s in w.letters))


def positive_form(w: BraidWord) -> tuple:
    """(r, P) with P positive and w = Delta^-r P."""
    n = w.n
    D = half_twist(n)
    r = 0
    P: list = []
    for i, s in w.letters:
        if s > 0:
            P.append((i, 1))
        else:
            # s_i^-1 = Delta^-1 X with X = Delta s_i^-1 positive, and P Delta^-1 = Delta^-1 flip(P)
            P = list(garside_flip(BraidWord(n, tuple(P))).letters) + list(delta_over_sigma(n, i))
            r += 1
    return r, BraidWord(n, tuple(P))


@lru_cache(maxsize=None)
def delta_over_sigma(n: int, i: int) -> tuple:
    """A positive word X with X s_i = Delta."""
    word = _delta_ending_with(n, i)
    return tuple(word[:-1])


def _delta_ending_with(n: int, i: int) -> list:
    """A reduced positive word for Delta whose last letter is s_i.

    Delta is the positive lift of the longest permutation w0. Bubble-sorting
    w0 * s_i gives a reduced word for it; appending s_i gives Delta.
    """
    perm = list(range(n, 0, -1))
    perm[i - 1], perm[i] = perm[i], perm[i - 1]
    swaps = []
    changed = True
    while changed:
        changed = False
        for k in range(n - 1):
            if perm[k] > perm[k + 1]:
                perm[k], perm[k + 1] = perm[k + 1], perm[k]
                swaps.append(k + 1)
                changed = True
    word = [(k, 1) for k in reversed(swaps)] + [(i, 1)]
    if len(word) != n * (n - 1) // 2:
        raise AssertionError("not a reduced word for Delta")
    return word


def lk_matrix_positive(w: BraidWord) -> list:
    n = w.n
    m = lk_identity(len(_pairs(n)))
    for i, s in w.letters:
        if s < 0:
            raise ValueError("positive words only")
        m = matmul(m, [list(r) for r in lk_generator(n, i)])
    return m


@lru_cache(maxsize=None)
def full_twist_scalar(n: int) -> Laurent:
    """The Lawrence-Krammer image of Delta^2 is a scalar monomial; return it."""
    m = lk_matrix_positive(full_twist(n))
    c = m[0][0]
    for a in range(len(m)):
        for b in range(len(m)):
            if (a == b and m[a][b] != c) or (a != b and not m[a][b].is_zero()):
                raise AssertionError("full twist is not scalar in this representation")
    if not c.is_monomial():
        raise AssertionError("full twist scalar is not a monomial")
    return c


def lk_key(w: BraidWord) -> tuple:
    """Canonical exact Lawrence-Krammer image of w (hashable)."""
    r, P = positive_form(w)
    if r % 2:
        P = half_twist(w.n) * P  # Delta^-r P = Delta^-(r+1) Delta P
        r += 1
    m = lk_matrix_positive(P)
    (exps, coef), = full_twist_scalar(w.n).terms.items()
    if coef not in (1, -1):
        raise AssertionError("unexpected scalar coefficient")
    shift = tuple(-e * (r // 2) for e in exps)
    sign = coef ** (r // 2)
    return tuple(tuple((x.shift(shift) * sign).key() for x in row) for row in m)


def lk_equal(u: BraidWord, v: BraidWord) -> bool:
    return lk_key(u) == lk_key(v)


def artin_key(w: BraidWord) -> tuple:
    return braid_to_free_auto(w).images


# ---------------------------------------------------------------------------
# a word oracle for braid groups, usable by the cone checks


class BraidOracle:
    """Group oracle for B_n on words over generators s1..s_{n-1} (indices 0-based in words)."""

    complete = True

    def __init__(self, n: int):
        self.n = n

    def to_braid(self, w) -> BraidWord:
        return BraidWord(self.n, tuple((g + 1, s) for g, s in w))

    def key(self, w):
        return artin_key(self.to_braid(w))

    def is_identity(self, w) -> str:
        return "yes" if not handle_reduce(self.to_braid(w)).letters else "no"

    def multiply(self, u, v):
        return tuple(u) + tuple(v)

    def positive(self, w) -> bool:
        return dehornoy_positive(self.to_braid(w))
