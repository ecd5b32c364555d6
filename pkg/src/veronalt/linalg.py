"""Exact sparse linear algebra over the rationals.

Vectors are dicts ``column -> coefficient`` with no stored zeros.  Columns
are any mutually comparable keys; the pivot of a row is its smallest
column, so a fixed column order gives a unique reduced echelon form.
"""

from __future__ import annotations

from fractions import Fraction
from heapq import heapify, heappop, heappush
from typing import Dict, Hashable, Iterable, List, Optional

from gmpy2 import mpq

Vector = Dict[Hashable, object]


def to_mpq(c):
    if isinstance(c, Fraction):
        return mpq(c.numerator, c.denominator)
    return mpq(c)


def to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    c = mpq(c)
    return Fraction(int(c.numerator), int(c.denominator))


def axpy(out: Vector, a, vec: Vector) -> None:
    """out += a * vec, in place, dropping zeros."""
    get = out.get
    for k, v in vec.items():
        s = get(k)
        if s is None:
            out[k] = a * v
        else:
            s += a * v
            if s:
                out[k] = s
            else:
                del out[k]


class Echelon:
    """Row-echelon basis of a growing subspace.

    Rows are stored as ``pivot -> tail`` where the pivot coefficient is 1
    and the tail holds the remaining entries.  :meth:`rref` turns the rows
    into the unique reduced echelon form.
    """

    def __init__(self):
        self.rows: Dict[Hashable, Vector] = {}
        self._reduced = True

    def __len__(self):
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Vector) -> Vector:
        """Remainder of ``vec`` with every pivot column eliminated (new dict)."""
        vec = {k: to_mpq(v) for k, v in vec.items() if v}
        return self._reduce_inplace(vec)

    def _reduce_inplace(self, vec: Vector) -> Vector:
        rows = self.rows
        if not rows:
            return vec
        if self._reduced:
            for c in [c for c in vec if c in rows]:
                a = vec.pop(c)
                axpy(vec, -a, rows[c])
            return vec
        heap = [c for c in vec if c in rows]
        heapify(heap)
        while heap:
            c = heappop(heap)
            a = vec.pop(c, None)
            if a is None:
                continue
            get = vec.get
            for c2, b in rows[c].items():
                s = get(c2)
                if s is None:
                    vec[c2] = -a * b
                    if c2 in rows:
                        heappush(heap, c2)
                else:
                    s -= a * b
                    if s:
                        vec[c2] = s
                    else:
                        del vec[c2]
        return vec

    def add(self, vec: Vector) -> bool:
        """Insert a vector; return True if it enlarged the span."""
        r = self.reduce(vec)
        return self._insert_reduced(r)

    def add_owned(self, vec: Vector) -> bool:
        """Like :meth:`add` but may consume ``vec`` (entries must already be mpq)."""
        return self._insert_reduced(self._reduce_inplace(vec))

    def _insert_reduced(self, r: Vector) -> bool:
        if not r:
            return False
        p = min(r)
        inv = 1 / r.pop(p)
        if inv != 1:
            for k in r:
                r[k] *= inv
        self.rows[p] = r
        self._reduced = False
        return True

    def rref(self) -> "Echelon":
        """Back-substitute to reduced echelon form (in place)."""
        if self._reduced:
            return self
        rows = self.rows
        for p in sorted(rows, reverse=True):
            tail = rows[p]
            for c in [c for c in tail if c in rows]:
                a = tail.pop(c)
                axpy(tail, -a, rows[c])
        self._reduced = True
        return self

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)

    def pivots(self) -> List[Hashable]:
        return sorted(self.rows)

    def basis(self) -> List[Vector]:
        """Reduced echelon basis vectors (pivot included), in pivot order."""
        self.rref()
        out = []
        for p in sorted(self.rows):
            v = {p: mpq(1)}
            v.update(self.rows[p])
            out.append(v)
        return out

    def copy(self) -> "Echelon":
        e = Echelon()
        e.rows = {p: dict(t) for p, t in self.rows.items()}
        e._reduced = self._reduced
        return e


def span(vectors: Iterable[Vector]) -> Echelon:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rref()


def rank(vectors: Iterable[Vector]) -> int:
    return span(vectors).dim


def kernel(vectors: List[Vector]) -> List[Vector]:
    """Basis of ``{c : sum_i c_i vectors[i] = 0}`` as dicts ``i -> c_i``,
    in reduced echelon form with respect to the index order."""
    e = Echelon()
    for i, v in enumerate(vectors):
        aug = {(0, k): to_mpq(c) for k, c in v.items() if c}
        aug[(1, i)] = mpq(1)
        e.add_owned(aug)
    rel = Echelon()
    for p, tail in e.rows.items():
        if p[0] == 1:
            v = {p[1]: mpq(1)}
            for k, c in tail.items():
                v[k[1]] = c
            rel.add_owned(v)
    return rel.basis()


class Subspace:
    """A subspace of a coordinate space, kept in reduced echelon form.

    ``ambient`` is the dimension of the coordinate space when known (used
    for reporting only).
    """

    def __init__(self, vectors: Iterable[Vector] = (), ambient: Optional[int] = None):
        self._e = span(vectors)
        self.ambient = ambient

    @classmethod
    def from_echelon(cls, e: Echelon, ambient: Optional[int] = None) -> "Subspace":
        s = cls.__new__(cls)
        s._e = e.rref()
        s.ambient = ambient
        return s

    @classmethod
    def full(cls, columns: Iterable[Hashable]) -> "Subspace":
        cols = list(columns)
        return cls(({c: 1} for c in cols), ambient=len(cols))

    @property
    def dim(self) -> int:
        return self._e.dim

    def basis(self) -> List[Vector]:
        return self._e.basis()

    def contains(self, vec: Vector) -> bool:
        return self._e.contains(vec)

    def residual(self, vec: Vector) -> Vector:
        return self._e.reduce(vec)

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis())

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim == other.dim and self <= other

    def __add__(self, other: "Subspace") -> "Subspace":
        e = self._e.copy()
        for v in other.basis():
            e.add(v)
        return Subspace.from_echelon(e, self.ambient)

    def __repr__(self):
        amb = "" if self.ambient is None else f"/{self.ambient}"
        return f"Subspace(dim={self.dim}{amb})"
