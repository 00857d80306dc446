"""Free-group words, presentations, bounded Knuth-Bendix completion, and word oracles."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Protocol, Sequence

Letter = tuple  # (generator index, +1 or -1)
Word = tuple  # tuple of letters

YES, NO, UNKNOWN = "yes", "no", "unknown"


def word(*letters) -> Word:
    return tuple((int(g), int(s)) for g, s in letters)


def inverse(w: Sequence[Letter]) -> Word:
    return tuple((g, -s) for g, s in reversed(w))


def free_reduce(w: Iterable[Letter]) -> Word:
    out: list = []
    for g, s in w:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


def cyclic_reduce(w: Sequence[Letter]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i][0] == w[j - 1][0] and w[i][1] == -w[j - 1][1]:
        i += 1
        j -= 1
    return tuple(w[i:j])


def power(w: Sequence[Letter], n: int) -> Word:
    base = tuple(w) if n >= 0 else inverse(w)
    return free_reduce(base * abs(n))


def multiply(*ws: Sequence[Letter]) -> Word:
    out: tuple = ()
    for w in ws:
        out = out + tuple(w)
    return free_reduce(out)


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple
    relators: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        rels = tuple(free_reduce(r) for r in self.relators)
        if any(len(r) == 0 for r in rels):
            raise ValueError("relators must be nonempty after free reduction")
        object.__setattr__(self, "relators", rels)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def parse(self, text: str) -> Word:
        """Parse space-separated letters; uppercase (or a trailing ``^-1``) means inverse."""
        out = []
        for tok in text.split():
            out.append(self.parse_letter(tok))
        return tuple(out)

    def parse_letter(self, tok: str) -> Letter:
        if tok.endswith("^-1"):
            g, s = tok[:-3], -1
        elif tok in self.generators:
            g, s = tok, 1
        elif tok.lower() in self.generators and tok != tok.lower():
            g, s = tok.lower(), -1
        else:
            raise ValueError(f"unknown letter {tok!r}")
        if g not in self.generators:
            raise ValueError(f"unknown letter {tok!r}")
        return (self.generators.index(g), s)

    def format(self, w: Sequence[Letter]) -> str:
        names = []
        for g, s in w:
            name = self.generators[g]
            if s < 0:
                name = name.upper() if name.lower() == name and name.upper() != name else name + "^-1"
            names.append(name)
        return " ".join(names)

    def to_json(self) -> dict:
        return {"generators": list(self.generators), "relators": [self.format(r) for r in self.relators]}

    @classmethod
    def from_json(cls, data) -> "GroupPresentation":
        if isinstance(data, str):
            data = json.loads(data)
        gens = tuple(data["generators"])
        shell = cls(gens, ())
        return cls(gens, tuple(shell.parse(r) for r in data.get("relators", [])))


def seifert_presentation() -> GroupPresentation:
    """The group with a^2 = b^3 = c^7 = t and abc = t^3."""
    return GroupPresentation.from_json(
        {"generators": ["a", "b", "c", "t"], "relators": ["a a T", "b b b T", "c c c c c c c T", "a b c T T T"]}
    )


def free_presentation(rank: int) -> GroupPresentation:
    return GroupPresentation(tuple("abcdefghijklmnopqrstuvwxyz"[:rank]))


def z2_presentation() -> GroupPresentation:
    return GroupPresentation.from_json({"generators": ["a", "b"], "relators": ["a b A B"]})


class BoundsExhausted(Exception):
    """Internal signal; completion reports it through ``complete=False``."""


class RewriteSystem:
    """Shortlex-reducing string rewriting system on signed letters.

    Letters are coded as ``2*g`` for ``g`` and ``2*g+1`` for its inverse, so
    the default precedence is a < A < b < B < ...; ``precedence`` reorders
    generators. Words are handled internally as strings of code points.
    """

    def __init__(self, rank: int, rules: Sequence[tuple] = (), complete: bool = False, precedence: Optional[Sequence[int]] = None):
        self.rank = rank
        self.precedence = list(precedence) if precedence is not None else list(range(rank))
        if sorted(self.precedence) != list(range(rank)):
            raise ValueError("precedence must be a permutation of generator indices")
        self._pos = {g: i for i, g in enumerate(self.precedence)}
        self.rules: list = []
        self._index: dict = {}
        self.max_lhs = 0
        self.complete = complete
        for lhs, rhs in rules:
            self._add(self.encode(lhs), self.encode(rhs))

    # encoding -------------------------------------------------------------
    def encode(self, w: Sequence[Letter]) -> str:
        return "".join(chr(0x100 + 2 * self._pos[g] + (0 if s > 0 else 1)) for g, s in w)

    def decode(self, s: str) -> Word:
        out = []
        for ch in s:
            c = ord(ch) - 0x100
            out.append((self.precedence[c // 2], 1 if c % 2 == 0 else -1))
        return tuple(out)

    @staticmethod
    def _inv(s: str) -> str:
        return "".join(chr(((ord(ch) - 0x100) ^ 1) + 0x100) for ch in reversed(s))

    @staticmethod
    def shortlex_less(u: str, v: str) -> bool:
        return (len(u), u) < (len(v), v)

    def _add(self, lhs: str, rhs: str) -> int:
        if lhs in self._index:
            return self._index[lhs]
        self.rules.append((lhs, rhs))
        self._index[lhs] = len(self.rules) - 1
        self.max_lhs = max(self.max_lhs, len(lhs))
        return len(self.rules) - 1

    def _drop(self, keep: Sequence[bool]) -> None:
        old = self.rules
        self.rules, self._index, self.max_lhs = [], {}, 0
        for (l, r), k in zip(old, keep):
            if k:
                self._add(l, r)

    # rewriting ------------------------------------------------------------
    def _rewrite(self, s: str, trace: Optional[list] = None, skip: int = -1, limit: int = 10**6) -> str:
        stack: list = []
        todo = list(reversed(s))
        steps = 0
        index, rules, L = self._index, self.rules, self.max_lhs
        while todo:
            stack.append(todo.pop())
            n = len(stack)
            for length in range(1, min(L, n) + 1):
                key = "".join(stack[n - length:])
                k = index.get(key)
                if k is not None and k != skip:
                    del stack[n - length:]
                    rhs = rules[k][1]
                    if trace is not None:
                        trace.append((n - length, k))
                    todo.extend(reversed(rhs))
                    steps += 1
                    if steps > limit:
                        raise RuntimeError("rewrite step limit exceeded")
                    break
        return "".join(stack)

    def reduce(self, w: Sequence[Letter]) -> Word:
        return self.decode(self._rewrite(self.encode(w)))

    def reduce_with_trace(self, w: Sequence[Letter]) -> tuple:
        trace: list = []
        out = self._rewrite(self.encode(w), trace)
        return self.decode(out), trace

    def replay(self, w: Sequence[Letter], trace: Sequence[tuple]) -> Word:
        """Apply ``trace`` step by step, checking every left-hand side actually occurs."""
        s = self.encode(w)
        for pos, k in trace:
            lhs, rhs = self.rules[k]
            if s[pos:pos + len(lhs)] != lhs:
                raise ValueError(f"trace step ({pos}, {k}) does not match")
            s = s[:pos] + rhs + s[pos + len(lhs):]
        return self.decode(s)

    def rule_words(self) -> list:
        return [(self.decode(l), self.decode(r)) for l, r in self.rules]

    def __len__(self):
        return len(self.rules)

    def __repr__(self):
        return f"RewriteSystem(rules={len(self.rules)}, complete={self.complete})"


def _relator_closure(p: GroupPresentation) -> list:
    seen: set = set()
    out = []
    for r in p.relators:
        r = cyclic_reduce(r)
        for base in (r, inverse(r)):
            for i in range(len(base)):
                rot = base[i:] + base[:i]
                if rot not in seen:
                    seen.add(rot)
                    out.append(rot)
    return out


def knuth_bendix_bounded(
    p: GroupPresentation,
    max_rule_len: int = 12,
    max_rules: int = 400,
    precedence: Optional[Sequence[int]] = None,
    max_passes: int = 50,
) -> RewriteSystem:
    """Bounded Knuth-Bendix completion under shortlex.

    Every rule is a consequence of the relators, so rewriting is always
    sound; ``complete`` is set only when all critical pairs resolved.
    """
    rs = RewriteSystem(p.rank, precedence=precedence)
    inv = rs._inv
    pending: deque = deque()
    for g in range(p.rank):
        x = rs.encode(((g, 1),))
        pending.append((x + inv(x), ""))
        pending.append((inv(x) + x, ""))
    for r in _relator_closure(p):
        s = rs.encode(r)
        k = len(s) // 2 + 1
        pending.append((s[:k], inv(s[k:])))

    truncated = False

    def orient_pair(u: str, v: str):
        u, v = rs._rewrite(u), rs._rewrite(v)
        if u == v:
            return None
        return (u, v) if rs.shortlex_less(v, u) else (v, u)

    def absorb() -> None:
        nonlocal truncated
        while pending:
            u, v = pending.popleft()
            pair = orient_pair(u, v)
            if pair is None:
                continue
            lhs, rhs = pair
            if len(lhs) > max_rule_len:
                truncated = True
                continue
            if len(rs.rules) >= max_rules:
                truncated = True
                pending.clear()
                return
            rs._add(lhs, rhs)
            interreduce()

    def interreduce() -> None:
        # drop rules whose lhs contains a newer lhs; renormalize right-hand sides
        changed = True
        while changed:
            changed = False
            keep = [True] * len(rs.rules)
            for i, (l, r) in enumerate(rs.rules):
                reduced_l = rs._rewrite(l, skip=i)
                if reduced_l != l:
                    keep[i] = False
                    pending.append((l, r))
                    changed = True
            if changed:
                rs._drop(keep)
            for i, (l, r) in enumerate(rs.rules):
                nr = rs._rewrite(r)
                if nr != r:
                    rs.rules[i] = (l, nr)

    absorb()
    done_pairs: set = set()
    for _ in range(max_passes):
        new_found = False
        snapshot = list(rs.rules)
        for l1, r1 in snapshot:
            for l2, r2 in snapshot:
                key = (l1, l2)
                if key in done_pairs:
                    continue
                done_pairs.add(key)
                # suffix of l1 equals prefix of l2
                for k in range(1, min(len(l1), len(l2))):
                    if l1[-k:] == l2[:k]:
                        w1 = r1 + l2[k:]
                        w2 = l1[:-k] + r2
                        pending.append((w1, w2))
                # l2 strictly inside l1
                if l1 != l2 and len(l2) < len(l1):
                    i = l1.find(l2)
                    if i >= 0:
                        pending.append((r1, l1[:i] + r2 + l1[i + len(l2):]))
        before = list(rs.rules)
        absorb()
        if truncated and len(rs.rules) >= max_rules:
            break
        if rs.rules == before:
            new_found = False
        else:
            new_found = True
        if not new_found:
            break
    else:
        truncated = True
    rs.complete = (not truncated) and _locally_confluent(rs)
    return rs


def _locally_confluent(rs: RewriteSystem) -> bool:
    for l1, r1 in rs.rules:
        for l2, r2 in rs.rules:
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    if rs._rewrite(r1 + l2[k:]) != rs._rewrite(l1[:-k] + r2):
                        return False
            if l1 != l2 and len(l2) < len(l1):
                i = l1.find(l2)
                if i >= 0 and rs._rewrite(r1) != rs._rewrite(l1[:i] + r2 + l1[i + len(l2):]):
                    return False
    return True


class GroupOracle(Protocol):
    def multiply(self, u: Word, v: Word) -> Word: ...

    def is_identity(self, w: Word) -> str: ...

    def key(self, w: Word): ...


class FreeGroupOracle:
    """Exact oracle for a free group: free reduction is the normal form."""

    complete = True

    def __init__(self, rank: int):
        self.rank = rank

    def normal_form(self, w: Word) -> Word:
        return free_reduce(w)

    def multiply(self, u: Word, v: Word) -> Word:
        return free_reduce(tuple(u) + tuple(v))

    def is_identity(self, w: Word) -> str:
        return YES if not free_reduce(w) else NO

    def key(self, w: Word):
        return free_reduce(w)

    def proof(self, w: Word):
        return None


class RewriteOracle:
    """Word oracle backed by a (possibly incomplete) rewriting system."""

    def __init__(self, rs: RewriteSystem):
        self.rs = rs
        self.rank = rs.rank
        self.complete = rs.complete

    @classmethod
    def from_presentation(cls, p: GroupPresentation, **kw) -> "RewriteOracle":
        return cls(knuth_bendix_bounded(p, **kw))

    def normal_form(self, w: Word) -> Word:
        return self.rs.reduce(w)

    def multiply(self, u: Word, v: Word) -> Word:
        return self.rs.reduce(tuple(u) + tuple(v))

    def is_identity(self, w: Word) -> str:
        if not self.rs.reduce(w):
            return YES
        return NO if self.rs.complete else UNKNOWN

    def key(self, w: Word):
        return self.rs.reduce(w)

    def proof(self, w: Word):
        nf, trace = self.rs.reduce_with_trace(w)
        return trace if not nf else None

    def replay(self, w: Word, trace) -> Word:
        return self.rs.replay(w, trace)


def is_identity(oracle, w: Word) -> str:
    return oracle.is_identity(w)


@dataclass
class Ball:
    words: list
    flagged: list = field(default_factory=list)

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


def enumerate_ball(p: GroupPresentation, oracle, radius: int, with_flags: bool = False):
    """Breadth-first ball of the given radius, one word per group element.

    Elements are deduplicated by ``oracle.key``; when the oracle is not
    complete two different keys might still be the same element, so such
    words are reported in ``flagged`` (only with ``with_flags=True``).
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    letters = [(g, s) for g in range(p.rank) for s in (1, -1)]
    seen = {oracle.key(()): ()}
    out = [()]
    frontier = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1][0] == x[0] and w[-1][1] == -x[1]:
                    continue
                v = w + (x,)
                k = oracle.key(v)
                if k not in seen:
                    seen[k] = v
                    out.append(v)
                    nxt.append(v)
        frontier = nxt
    flagged = [] if getattr(oracle, "complete", True) else list(out[1:])
    if with_flags:
        return Ball(out, flagged)
    return out
