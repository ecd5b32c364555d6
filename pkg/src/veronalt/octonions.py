"""Split octonions over the rationals, with polynomial coordinates allowed.

Basis follows Zorn's vector-matrix algebra.  An element

    [[a, v], [w, b]]     a, b scalars, v, w in k^3

is stored as the coordinate tuple ``(a, v1, v2, v3, w1, w2, w3, b)`` and

    [[a,v],[w,b]] * [[a',v'],[w',b']]
        = [[a a' + v.w',  a v' + b' v - w x w'],
           [a' w + b w' + v x v',  b b' + w.v']]

The structure-constant table below is generated from this product on
basis vectors; every constant is 0 or +-1.
"""

from __future__ import annotations

from itertools import product
from typing import List, Sequence, Tuple

import flint

DIM = 8
A, B = 0, 7
V = (1, 2, 3)
W = (4, 5, 6)


def _cross(p, q):
    return (p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0])


def zorn_product(x: Sequence, y: Sequence) -> Tuple:
    """Product straight from the vector-matrix formula (any coefficient ring)."""
    a, v, w, b = x[A], [x[i] for i in V], [x[i] for i in W], x[B]
    a2, v2, w2, b2 = y[A], [y[i] for i in V], [y[i] for i in W], y[B]
    top_left = a * a2 + sum(p * q for p, q in zip(v, w2))
    bottom_right = b * b2 + sum(p * q for p, q in zip(w, v2))
    wxw = _cross(w, w2)
    vxv = _cross(v, v2)
    top_right = [a * v2[k] + b2 * v[k] - wxw[k] for k in range(3)]
    bottom_left = [a2 * w[k] + b * w2[k] + vxv[k] for k in range(3)]
    return (top_left, *top_right, *bottom_left, bottom_right)


def _table() -> List[Tuple[int, int, int, int]]:
    out = []
    for i, j in product(range(DIM), repeat=2):
        ei = [1 if k == i else 0 for k in range(DIM)]
        ej = [1 if k == j else 0 for k in range(DIM)]
        for k, c in enumerate(zorn_product(ei, ej)):
            if c:
                out.append((i, j, k, c))
    return out


STRUCTURE_CONSTANTS: Tuple[Tuple[int, int, int, int], ...] = tuple(_table())


class Octonion:
    """Split octonion with coordinates in any commutative ring (ints,
    Fractions, or flint multivariate polynomials)."""

    __slots__ = ("c",)

    def __init__(self, coords: Sequence):
        coords = tuple(coords)
        if len(coords) != DIM:
            raise ValueError("an octonion has 8 coordinates")
        self.c = coords

    @classmethod
    def scalar(cls, s, zero=0) -> "Octonion":
        return cls((s, zero, zero, zero, zero, zero, zero, s))

    def __add__(self, other: "Octonion") -> "Octonion":
        return Octonion(p + q for p, q in zip(self.c, other.c))

    def __sub__(self, other: "Octonion") -> "Octonion":
        return Octonion(p - q for p, q in zip(self.c, other.c))

    def __neg__(self) -> "Octonion":
        return Octonion(-p for p in self.c)

    def scale(self, s) -> "Octonion":
        return Octonion(s * p for p in self.c)

    def __mul__(self, other):
        if not isinstance(other, Octonion):
            return self.scale(other)
        x, y = self.c, other.c
        zero = x[0] - x[0]
        out = [zero] * DIM
        for i, j, k, s in STRUCTURE_CONSTANTS:
            xi, yj = x[i], y[j]
            if xi == 0 or yj == 0:
                continue
            t = xi * yj
            out[k] = out[k] + t if s == 1 else out[k] - t
        return Octonion(out)

    __rmul__ = scale

    def conj(self) -> "Octonion":
        a, v1, v2, v3, w1, w2, w3, b = self.c
        return Octonion((b, -v1, -v2, -v3, -w1, -w2, -w3, a))

    def trace(self):
        """t(x) = x + conj(x), returned as the scalar coefficient."""
        return self.c[A] + self.c[B]

    def norm(self):
        """n(x) = x conj(x), returned as the scalar coefficient."""
        c = self.c
        return c[A] * c[B] - sum(c[v] * c[w] for v, w in zip(V, W))

    def is_zero(self) -> bool:
        return all(p == 0 for p in self.c)

    def __eq__(self, other):
        if not isinstance(other, Octonion):
            return NotImplemented
        return all(p == q for p, q in zip(self.c, other.c))

    def __hash__(self):
        return hash(tuple(str(p) for p in self.c))

    def __repr__(self):
        return f"Octonion({', '.join(str(p) for p in self.c)})"


def octonion_mul(a: Octonion, b: Octonion) -> Octonion:
    return a * b


def associator(a: Octonion, b: Octonion, c: Octonion) -> Octonion:
    return (a * b) * c - a * (b * c)


def commutator(a: Octonion, b: Octonion) -> Octonion:
    return a * b - b * a


# -- generic elements

GENERIC_NAMES = ("X", "Y", "Z")


def polynomial_ring(count: int = 3):
    """flint context with 8 indeterminates per generic octonion."""
    names = tuple(f"{GENERIC_NAMES[g]}{k}" for g in range(count) for k in range(DIM))
    return flint.fmpq_mpoly_ctx.get(names, "degrevlex")


RING = polynomial_ring(3)


def generic(g: int, ring=RING) -> Octonion:
    """The generic octonion X, Y or Z (g = 0, 1, 2) with fresh coordinates."""
    gens = ring.gens()
    return Octonion(gens[DIM * g + k] for k in range(DIM))


def unit(ring=RING) -> Octonion:
    one = ring.constant(1)
    return Octonion.scalar(one, ring.constant(0))
