"""Finite linear groups acting on the generators of a free algebra.

Matrix entries are exact rationals or elements of a cyclotomic field
Q(zeta_N); the latter are needed for scalar groups of order >= 3, which
have no faithful rational scalar representation.  Column j of a matrix is
the image of the generator x_j.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from gmpy2 import mpq

from .terms import FreePoly, Monomial

DEFAULT_CLOSURE_BOUND = 10000


class GroupError(ValueError):
    pass


class GroupClosureError(GroupError):
    pass


@lru_cache(maxsize=None)
def _cyclotomic_poly(n: int) -> Tuple[int, ...]:
    """Coefficients (low degree first) of the n-th cyclotomic polynomial."""
    from sympy import Poly, cyclotomic_poly, symbols

    t = symbols("t")
    coeffs = Poly(cyclotomic_poly(n, t), t).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


def _rational(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    c = mpq(c)
    return Fraction(int(c.numerator), int(c.denominator))


class Cyclotomic:
    """Element of Q(zeta_n) as coordinates on 1, zeta, ..., zeta^(phi(n)-1)."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coords: Sequence):
        self.n = n
        self.c = tuple(_rational(x) for x in coords)

    @classmethod
    def rational(cls, n: int, q) -> "Cyclotomic":
        phi = len(_cyclotomic_poly(n)) - 1
        return cls(n, [q] + [0] * (phi - 1))

    @classmethod
    def root(cls, n: int, k: int = 1, coeff=1) -> "Cyclotomic":
        """coeff * zeta_n^k."""
        return cls._reduce(n, {k % n: _rational(coeff)})

    @classmethod
    def _reduce(cls, n: int, terms: Dict[int, Fraction]) -> "Cyclotomic":
        mod = _cyclotomic_poly(n)
        phi = len(mod) - 1
        top = max(terms, default=0)
        work = [Fraction(0)] * max(top + 1, phi)
        for e, v in terms.items():
            work[e] += v
        for e in range(len(work) - 1, phi - 1, -1):
            v = work[e]
            if v:
                work[e] = Fraction(0)
                for i in range(phi):
                    if mod[i]:
                        work[e - phi + i] -= v * mod[i]
        return cls(n, work[:phi])

    def lift(self, n: int) -> "Cyclotomic":
        if n == self.n:
            return self
        if n % self.n:
            raise ValueError("can only lift to a multiple of the conductor")
        step = n // self.n
        return Cyclotomic._reduce(n, {i * step: v for i, v in enumerate(self.c) if v})

    def _coerce(self, other) -> Optional[Tuple["Cyclotomic", "Cyclotomic"]]:
        if isinstance(other, Cyclotomic):
            if other.n == self.n:
                return self, other
            n = self.n * other.n // gcd(self.n, other.n)
            return self.lift(n), other.lift(n)
        try:
            return self, Cyclotomic.rational(self.n, _rational(other))
        except (TypeError, ValueError):
            return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Cyclotomic(a.n, [x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, [-x for x in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Cyclotomic):
            try:
                q = _rational(other)
            except (TypeError, ValueError):
                return NotImplemented
            return Cyclotomic(self.n, [x * q for x in self.c])
        a, b = self._coerce(other)
        terms: Dict[int, Fraction] = {}
        for i, x in enumerate(a.c):
            if not x:
                continue
            for j, y in enumerate(b.c):
                if y:
                    terms[i + j] = terms.get(i + j, 0) + x * y
        return Cyclotomic._reduce(a.n, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Cyclotomic):
            if not other.is_rational():
                raise ZeroDivisionError("division by an irrational cyclotomic is not supported")
            other = other.c[0]
        return self * (1 / _rational(other))

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[0].c == pair[1].c

    def __hash__(self):
        if self.is_rational():
            return hash(self.c[0])
        return hash((self.n, self.c))

    def __repr__(self):
        parts = []
        for i, v in enumerate(self.c):
            if v:
                parts.append(str(v) if i == 0 else f"{v}*zeta{self.n}^{i}")
        return " + ".join(parts) or "0"


Scalar = Union[Fraction, Cyclotomic]
Matrix = Tuple[Tuple[Scalar, ...], ...]


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    k = len(b)
    return tuple(
        tuple(_simplify(sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0))) for j in range(len(b[0])))
        for i in range(len(a))
    )


def _simplify(x) -> Scalar:
    if isinstance(x, Cyclotomic) and x.is_rational():
        return x.c[0]
    return _rational(x) if not isinstance(x, Cyclotomic) else x


def identity_matrix(rank: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(rank)) for i in range(rank))


class LinearGroupAction:
    """A finite group of rank x rank matrices, given by generators.

    The element list is the closure of the generators under products, in
    breadth-first order starting from the identity.
    """

    def __init__(self, generators: Iterable[Sequence[Sequence]], bound: int = DEFAULT_CLOSURE_BOUND):
        gens = [tuple(tuple(_simplify(x) for x in row) for row in g) for g in generators]
        if not gens:
            raise GroupError("at least one generator matrix is required")
        rank = len(gens[0])
        for g in gens:
            if len(g) != rank or any(len(row) != rank for row in g):
                raise GroupError(f"generator matrices must all be {rank}x{rank}")
        # a common conductor keeps equal matrices hash-equal
        conductors = [x.n for g in gens for row in g for x in row if isinstance(x, Cyclotomic)]
        if conductors:
            n = 1
            for c in conductors:
                n = n * c // gcd(n, c)
            gens = [tuple(tuple(x.lift(n) if isinstance(x, Cyclotomic) else x for x in row) for row in g) for g in gens]
        self.rank = rank
        self.generators: List[Matrix] = gens
        self.bound = bound
        self.elements: List[Matrix] = self._closure()
        self._check_invertible()

    def _closure(self) -> List[Matrix]:
        ident = identity_matrix(self.rank)
        seen = {ident}
        out = [ident]
        frontier = [ident]
        while frontier:
            nxt = []
            for h in frontier:
                for g in self.generators:
                    e = _matmul(g, h)
                    if e in seen:
                        continue
                    seen.add(e)
                    out.append(e)
                    nxt.append(e)
                    if len(out) > self.bound:
                        raise GroupClosureError(
                            f"group closure exceeded the bound of {self.bound} elements"
                        )
            frontier = nxt
        return out

    def _check_invertible(self) -> None:
        # in a finite closure a generator is invertible iff a power is the identity
        ident = identity_matrix(self.rank)
        for g in self.generators:
            p = g
            for _ in range(len(self.elements)):
                if p == ident:
                    break
                p = _matmul(g, p)
            else:
                raise GroupError("generator matrix is not invertible")

    @property
    def order(self) -> int:
        return len(self.elements)

    @classmethod
    def scalar(cls, rank: int, n: int) -> "LinearGroupAction":
        """Cyclic group generated by zeta_n times the identity."""
        if n < 1:
            raise GroupError("scalar order must be positive")
        z = Cyclotomic.root(n, 1)
        return cls([[[z if i == j else Fraction(0) for j in range(rank)] for i in range(rank)]])

    @classmethod
    def permutation(cls, rank: int, perm: Sequence[int]) -> "LinearGroupAction":
        """Group generated by the generator permutation x_j -> x_perm[j]."""
        m = [[Fraction(0)] * rank for _ in range(rank)]
        for j, i in enumerate(perm):
            m[i][j] = Fraction(1)
        return cls([m])

    @classmethod
    def trivial(cls, rank: int) -> "LinearGroupAction":
        return cls([identity_matrix(rank)])


# -- action on free polynomials


def _image_generator(g: Matrix, j: int) -> Dict[Monomial, Scalar]:
    return {Monomial.leaf(i): g[i][j] for i in range(len(g)) if g[i][j]}


def act(g: Matrix, p: FreePoly, memo: Optional[Dict] = None) -> Dict[Monomial, Scalar]:
    """p^g as a dict monomial -> coefficient (coefficients may be cyclotomic)."""
    memo = {} if memo is None else memo

    def image(mono: Monomial) -> Dict[Monomial, Scalar]:
        hit = memo.get(mono)
        if hit is None:
            if mono.is_leaf:
                if mono.gen >= len(g):
                    raise GroupError(f"generator {mono.gen} outside the group's rank {len(g)}")
                hit = _image_generator(g, mono.gen)
            else:
                hit = {}
                left, right = image(mono.left), image(mono.right)
                for a, ca in left.items():
                    for b, cb in right.items():
                        k = Monomial(left=a, right=b)
                        s = hit.get(k, 0) + ca * cb
                        if s:
                            hit[k] = s
                        else:
                            hit.pop(k, None)
            memo[mono] = hit
        return hit

    out: Dict[Monomial, Scalar] = {}
    for mono, c in p.items():
        for k, v in image(mono).items():
            s = out.get(k, 0) + c * v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def rationalize(coeffs: Dict, what: str = "result") -> Dict:
    out = {}
    for k, v in coeffs.items():
        if isinstance(v, Cyclotomic):
            if not v.is_rational():
                raise GroupError(f"{what} has irrational coefficients; average over the whole group")
            v = v.c[0]
        if v:
            out[k] = v
    return out


def apply(g: Matrix, p: FreePoly) -> FreePoly:
    """p^g for a rational matrix g."""
    return FreePoly(rationalize(act(g, p), "image"))


def reynolds(action: LinearGroupAction, p: FreePoly) -> FreePoly:
    """(1/|G|) sum_g p^g."""
    total: Dict[Monomial, Scalar] = {}
    for g in action.elements:
        for k, v in act(g, p).items():
            s = total.get(k, 0) + v
            if s:
                total[k] = s
            else:
                total.pop(k, None)
    n = action.order
    return FreePoly({k: c / n for k, c in rationalize(total, "Reynolds image").items()})


# -- group files

_ENTRY = re.compile(
    r"""^(?P<sign>[+-]?)
        (?:(?P<coef>\d+(?:/\d+)?)\*?)?
        (?:zeta(?P<n>\d+)(?:\^(?P<k>\d+))?)?$""",
    re.X,
)


def parse_entry(text: str) -> Scalar:
    """An exact rational such as ``-3/2``, optionally times ``zeta<N>`` or
    ``zeta<N>^k`` (a primitive N-th root of unity)."""
    m = _ENTRY.match(text)
    if not m or (m.group("coef") is None and m.group("n") is None):
        raise GroupError(f"bad matrix entry {text!r}")
    coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
    if m.group("sign") == "-":
        coef = -coef
    if m.group("n") is None:
        return coef
    n = int(m.group("n"))
    if n < 1:
        raise GroupError(f"bad root of unity in {text!r}")
    k = int(m.group("k")) if m.group("k") else 1
    return _simplify(Cyclotomic.root(n, k, coef))


def parse_group(text: str, bound: int = DEFAULT_CLOSURE_BOUND) -> LinearGroupAction:
    """One matrix per block of lines, blocks separated by blank lines; ``#``
    starts a comment."""
    blocks: List[List[List[Scalar]]] = []
    current: List[List[Scalar]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            if current:
                blocks.append(current)
                current = []
            continue
        current.append([parse_entry(tok) for tok in line.split()])
    if current:
        blocks.append(current)
    return LinearGroupAction(blocks, bound=bound)


def load_group_file(path, bound: int = DEFAULT_CLOSURE_BOUND) -> LinearGroupAction:
    return parse_group(Path(path).read_text(), bound=bound)
