"""Exact sparse row reduction over Q.

Vectors are dicts ``{column: Fraction}``.  Columns can be any hashable;
pivot choice is driven by a sort key so callers control which coordinates
get eliminated first (e.g. highest conformal weight first).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Tuple

SparseVec = Dict[Hashable, Fraction]


def _axpy(target: SparseVec, factor: Fraction, source: SparseVec) -> None:
    for col, v in source.items():
        w = target.get(col)
        if w is None:
            target[col] = -factor * v
        else:
            w -= factor * v
            if w:
                target[col] = w
            else:
                del target[col]


class RowSpace:
    """Incrementally maintained echelon basis of a subspace of Q^(columns).

    ``key`` orders columns; the pivot of a row is its column with the
    largest key.  Rows can carry a tag (any payload, combined linearly)
    which is how :meth:`add` reports linear dependencies.
    """

    def __init__(self, key: Optional[Callable[[Hashable], object]] = None, track: bool = False):
        self._key = key
        self._rows: Dict[Hashable, SparseVec] = {}
        self._tags: Dict[Hashable, SparseVec] = {}
        self._track = track

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _pivot(self, vec: SparseVec) -> Hashable:
        if self._key is None:
            try:
                return max(vec)
            except TypeError:
                return max(vec, key=repr)
        return max(vec, key=self._key)

    def reduce(self, vec: SparseVec, tag: Optional[SparseVec] = None) -> Tuple[SparseVec, Optional[SparseVec]]:
        """Reduce ``vec`` against the basis; returns (remainder, tag combination)."""
        v = {c: Fraction(x) for c, x in vec.items() if x}
        t = dict(tag) if tag is not None else ({} if self._track else None)
        rows = self._rows
        while v:
            p = self._pivot(v)
            row = rows.get(p)
            if row is None:
                # leading column is not a pivot: v is outside the span
                break
            f = v[p]
            _axpy(v, f, row)
            if t is not None:
                _axpy(t, f, self._tags[p])
        return v, t

    def add(self, vec: SparseVec, tag: Optional[SparseVec] = None) -> Tuple[bool, Optional[SparseVec]]:
        """Insert a vector.  Returns (independent?, dependency tag if dependent)."""
        rem, t = self.reduce(vec, tag)
        if not rem:
            return False, t
        p = self._pivot(rem)
        f = rem[p]
        rem = {c: x / f for c, x in rem.items()}
        if t is not None:
            t = {c: x / f for c, x in t.items()}
        self._rows[p] = rem
        if t is not None:
            self._tags[p] = t
        return True, None

    def contains(self, vec: SparseVec) -> bool:
        rem, _ = self.reduce(vec)
        return not rem

    def rows(self) -> List[SparseVec]:
        return [dict(r) for r in self._rows.values()]


def left_kernel(rows: List[SparseVec], key: Optional[Callable] = None) -> List[SparseVec]:
    """Basis of {x : sum_i x_i rows[i] = 0}, each as ``{row index: coefficient}``."""
    space = RowSpace(key=key, track=True)
    kernel = []
    for i, r in enumerate(rows):
        independent, dep = space.add(r, {i: Fraction(1)})
        if not independent:
            kernel.append(dep)
    return kernel


def rank(rows: Iterable[SparseVec]) -> int:
    space = RowSpace()
    for r in rows:
        space.add(r)
    return space.rank


def rref(vectors: List[SparseVec], order: List[Hashable]) -> List[SparseVec]:
    """Reduced row echelon form with pivots taken in the given column order."""
    pos = {c: i for i, c in enumerate(order)}
    rows = [{c: Fraction(x) for c, x in v.items() if x} for v in vectors]
    rows = [r for r in rows if r]
    out: List[SparseVec] = []
    for col in order:
        piv = None
        for i, r in enumerate(rows):
            if col in r:
                piv = i
                break
        if piv is None:
            continue
        r = rows.pop(piv)
        f = r[col]
        r = {c: x / f for c, x in r.items()}
        for other in rows:
            if col in other:
                _axpy(other, other[col], r)
        for other in out:
            if col in other:
                _axpy(other, other[col], r)
        out.append(r)
        rows = [x for x in rows if x]
    for r in rows:
        if r:
            raise ValueError("rref: vector has support outside the given column order")
    out.sort(key=lambda r: min(pos[c] for c in r))
    return out
