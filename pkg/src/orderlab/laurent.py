"""Sparse integer Laurent polynomials in a fixed number of variables."""

from __future__ import annotations

from typing import Iterable


class Laurent:
    """Integer Laurent polynomial stored as ``{exponent tuple: coefficient}``."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: dict | None = None, nvars: int = 2):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, c: int, nvars: int = 2) -> "Laurent":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def monomial(cls, exps: Iterable[int], c: int = 1) -> "Laurent":
        exps = tuple(exps)
        return cls({exps: c}, len(exps))

    def _coerce(self, other) -> "Laurent":
        if isinstance(other, Laurent):
            return other
        return Laurent.const(int(other), self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Laurent(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Laurent(out, self.nvars)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int,)):
            other = Laurent.const(other, self.nvars)
        return isinstance(other, Laurent) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def shift(self, exps: Iterable[int]) -> "Laurent":
        exps = tuple(exps)
        return Laurent({tuple(a + b for a, b in zip(e, exps)): c for e, c in self.terms.items()}, self.nvars)

    def evaluate(self, values) -> object:
        total = 0
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                term = term * (v ** k)
            total = total + term
        return total

    def key(self) -> tuple:
        return tuple(sorted(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        names = "qtuvw"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"{names[i]}^{k}" for i, k in enumerate(e) if k != 0)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def matmul(A: list, B: list) -> list:
    n, m, p = len(A), len(B), len(B[0])
    zero = Laurent.const(0, A[0][0].nvars if n and isinstance(A[0][0], Laurent) else 2)
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = zero
            for k in range(m):
                a, b = A[i][k], B[k][j]
                if a.terms and b.terms:
                    acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def identity(n: int, nvars: int = 2) -> list:
    return [[Laurent.const(1 if i == j else 0, nvars) for j in range(n)] for i in range(n)]
