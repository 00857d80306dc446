"""Finite non-left-orderability certificates and positive-cone checks on balls."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional, Sequence

from .order_core import OrderReport
from .words import YES, NO, UNKNOWN, Word, free_reduce, inverse, power


class OracleInconclusive(Exception):
    pass


def assignment_bits(signs: Sequence[int]) -> str:
    """``'1'`` for a positive sign, ``'0'`` for a negative one, in base order."""
    return "".join("1" if s > 0 else "0" for s in signs)


def bits_to_signs(bits: str) -> tuple:
    return tuple(1 if b == "1" else -1 for b in bits)


@dataclass(frozen=True)
class SignAssignment:
    base: tuple
    signs: tuple

    def __post_init__(self):
        check_base(self.base)
        if len(self.signs) != len(self.base) or any(s not in (1, -1) for s in self.signs):
            raise ValueError("one sign of +-1 per base word")

    def factor(self, i: int) -> Word:
        return power(self.base[i], self.signs[i])

    @property
    def bits(self) -> str:
        return assignment_bits(self.signs)


def check_base(base: Sequence[Word]) -> None:
    reduced = [free_reduce(w) for w in base]
    if any(not w for w in reduced):
        raise ValueError("base words must be nontrivial")
    if len(set(reduced)) != len(reduced):
        raise ValueError("base words must be pairwise distinct")
    rs = set(reduced)
    if any(inverse(w) in rs for w in reduced):
        raise ValueError("base must not contain a word together with its inverse")


@dataclass
class Witness:
    factors: tuple  # indices into the base
    word: Word
    trace: Optional[list]


@dataclass
class NonLOCertificate:
    base: tuple
    witnesses: dict  # assignment bits -> Witness

    @property
    def depth(self) -> int:
        return max((len(w.factors) for w in self.witnesses.values()), default=0)


@dataclass
class NotFound:
    depth: int
    missing: list = field(default_factory=list)  # assignment bits with no witness


def _witness_word(base, signs, factors) -> Word:
    out: tuple = ()
    for i in factors:
        out = out + power(base[i], signs[i])
    return out


def _search_one(oracle, base, signs, max_len: int) -> Optional[Witness]:
    n = len(base)
    pieces = [power(base[i], signs[i]) for i in range(n)]
    seen = set()
    frontier = [((), ())]
    for _ in range(max_len):
        nxt = []
        for factors, w in frontier:
            for i in range(n):
                v = w + pieces[i]
                f = factors + (i,)
                if oracle.is_identity(v) == YES:
                    return Witness(f, free_reduce(v), oracle.proof(v) if hasattr(oracle, "proof") else None)
                k = oracle.key(v)
                if k in seen:
                    continue
                seen.add(k)
                nxt.append((f, v))
        frontier = nxt
    return None


def search_non_lo_certificate(oracle, base: Sequence[Word], max_witness_len: int):
    """Look for a positive product equal to Id for every choice of signs on ``base``."""
    base = tuple(free_reduce(w) for w in base)
    check_base(base)
    witnesses = {}
    missing = []
    for signs in product((1, -1), repeat=len(base)):
        bits = assignment_bits(signs)
        w = _search_one(oracle, base, signs, max_witness_len)
        if w is None:
            missing.append(bits)
        else:
            witnesses[bits] = w
    if missing:
        return NotFound(max_witness_len, missing)
    return NonLOCertificate(base, witnesses)


def verify_certificate(oracle, cert: NonLOCertificate) -> OrderReport:
    """Re-check every witness: sign pattern, word, and trace (or oracle answer)."""
    n = len(cert.base)
    try:
        check_base(cert.base)
    except ValueError:
        return OrderReport("fail", ("base",))
    for signs in product((1, -1), repeat=n):
        bits = assignment_bits(signs)
        w = cert.witnesses.get(bits)
        if w is None or not w.factors:
            return OrderReport("fail", (bits, "missing"))
        if any(not (0 <= i < n) for i in w.factors):
            return OrderReport("fail", (bits, "factor"))
        expected = _witness_word(cert.base, signs, w.factors)
        if free_reduce(expected) != free_reduce(w.word):
            return OrderReport("fail", (bits, "signs"))
        if w.trace is not None and hasattr(oracle, "replay"):
            try:
                if oracle.replay(expected, w.trace) != ():
                    return OrderReport("fail", (bits, "trace"))
            except ValueError:
                return OrderReport("fail", (bits, "trace"))
        elif oracle.is_identity(expected) != YES:
            return OrderReport("fail", (bits, "trace"))
    return OrderReport("pass")


@dataclass
class ConeCheckReport:
    verdict: str
    violation: Optional[tuple] = None
    unresolved: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"


def check_positive_cone(oracle, cone: Callable[[Word], bool], ball: Sequence[Word]) -> ConeCheckReport:
    """Check the partition and closure axioms of a positive cone on a finite ball."""
    keys = {}
    for w in ball:
        keys.setdefault(oracle.key(w), w)
    unresolved = []
    positive = []
    for w in keys.values():
        ident = oracle.is_identity(w)
        if ident == UNKNOWN:
            unresolved.append((w, "identity"))
            continue
        in_p, in_n = bool(cone(w)), bool(cone(inverse(w)))
        if ident == YES:
            if in_p or in_n:
                return ConeCheckReport("fail", ((w,), "identity in cone"))
            continue
        if in_p == in_n:
            return ConeCheckReport("fail", ((w, inverse(w)), "partition"))
        if in_p:
            positive.append(w)
    for u in positive:
        for v in positive:
            uv = tuple(u) + tuple(v)
            if oracle.key(uv) not in keys:
                continue
            ident = oracle.is_identity(uv)
            if ident == YES:
                return ConeCheckReport("fail", ((u, v), "closure"))
            if ident == UNKNOWN:
                unresolved.append(((u, v), "closure"))
                continue
            if not cone(uv):
                return ConeCheckReport("fail", ((u, v), "closure"))
    if unresolved:
        return ConeCheckReport("inconclusive", None, unresolved)
    return ConeCheckReport("pass")


def certificate_ball(cert: NonLOCertificate) -> list:
    """Identity, all witness prefixes, and their inverses: a ball on which every cone must fail."""
    out = [()]
    for bits, w in cert.witnesses.items():
        signs = bits_to_signs(bits)
        acc: tuple = ()
        for i in w.factors:
            acc = acc + power(cert.base[i], signs[i])
            out.append(free_reduce(acc))
    out += [inverse(w) for w in out]
    return out
