"""Sparse exact Gaussian elimination over the rationals.

Vectors are dicts ``column -> Fraction``.  Columns are arbitrary hashable
objects ordered by a caller-supplied key; each stored row has as pivot its
largest column, so reducing a vector yields the canonical remainder modulo
the span of the rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping


class EchelonBasis:
    def __init__(self, key: Callable[[Hashable], object] = lambda c: c):
        self.key = key
        self.rows: dict = {}  # pivot column -> row with pivot coefficient 1

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping) -> dict:
        v = {c: Fraction(x) for c, x in vec.items() if x}
        rows, key = self.rows, self.key
        while True:
            hits = [c for c in v if c in rows]
            if not hits:
                return v
            col = max(hits, key=key)
            f = v[col]
            for c, x in rows[col].items():
                y = v.get(c, 0) - f * x
                if y:
                    v[c] = y
                else:
                    v.pop(c, None)

    def add(self, vec: Mapping) -> bool:
        """Insert a vector; return False when it was already in the span."""
        r = self.reduce(vec)
        if not r:
            return False
        piv = max(r, key=self.key)
        inv = 1 / r[piv]
        self.rows[piv] = {c: x * inv for c, x in r.items()}
        return True

    def extend(self, vecs: Iterable[Mapping]) -> "EchelonBasis":
        for v in vecs:
            self.add(v)
        return self

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)


def rank(vecs: Iterable[Mapping], key=lambda c: c) -> int:
    return EchelonBasis(key).extend(vecs).rank
