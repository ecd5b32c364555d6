"""Tree monomials and polynomials of the free nonassociative algebra.

A monomial is a fully bracketed word: a binary tree whose leaves are
generator indices.  Monomials of a fixed degree are totally ordered by
``(shape rank, leaf word)`` where the shape rank comes from a Catalan
ranking of binary trees.  The order is compatible with multiplication on
either side, which the normal-form engine relies on.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

MultiDegree = Tuple[int, ...]
Scalar = Union[int, Fraction]


@lru_cache(maxsize=None)
def catalan(n: int) -> int:
    """n-th Catalan number; ``catalan(n-1)`` counts binary trees with n leaves."""
    if n < 0:
        raise ValueError("catalan index must be nonnegative")
    return factorial(2 * n) // (factorial(n + 1) * factorial(n))


def shape_count(leaves: int) -> int:
    return catalan(leaves - 1)


@lru_cache(maxsize=None)
def _split_offset(leaves: int, left: int) -> int:
    # number of shapes with `leaves` leaves whose left subtree has < `left` leaves
    return sum(shape_count(j) * shape_count(leaves - j) for j in range(1, left))


class Monomial:
    """A bracketed word.  Immutable; equality is exact tree equality."""

    __slots__ = ("left", "right", "gen", "degree", "word", "shape", "_hash")

    def __init__(self, gen=None, left=None, right=None):
        if gen is not None:
            if left is not None or right is not None:
                raise ValueError("a leaf has no children")
            if gen < 0:
                raise ValueError("generator index must be nonnegative")
            self.gen = gen
            self.left = self.right = None
            self.degree = 1
            self.word = (gen,)
            self.shape = 0
        else:
            if not isinstance(left, Monomial) or not isinstance(right, Monomial):
                raise TypeError("product needs two monomials")
            self.gen = None
            self.left = left
            self.right = right
            n = left.degree + right.degree
            self.degree = n
            self.word = left.word + right.word
            self.shape = (
                _split_offset(n, left.degree)
                + left.shape * shape_count(right.degree)
                + right.shape
            )
        self._hash = hash((self.shape, self.word))

    @classmethod
    def leaf(cls, gen: int) -> "Monomial":
        return _leaf(gen)

    @classmethod
    def from_shape(cls, leaves: int, shape: int, word: Sequence[int]) -> "Monomial":
        """Unrank a tree shape and attach the given leaf word."""
        if len(word) != leaves:
            raise ValueError("word length must equal the number of leaves")
        return _build(leaves, shape, tuple(word))

    @property
    def is_leaf(self) -> bool:
        return self.gen is not None

    def key(self) -> Tuple[int, Tuple[int, ...]]:
        """Canonical sort key among monomials of equal degree."""
        return (self.shape, self.word)

    def sort_key(self):
        return (self.degree, self.shape, self.word)

    def multidegree(self, rank: int) -> MultiDegree:
        counts = [0] * rank
        for g in self.word:
            if g >= rank:
                raise ValueError(f"generator {g} outside rank {rank}")
            counts[g] += 1
        return tuple(counts)

    def __mul__(self, other: "Monomial") -> "Monomial":
        if isinstance(other, Monomial):
            return Monomial(left=self, right=other)
        return NotImplemented

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Monomial):
            return NotImplemented
        return self._hash == other._hash and self.shape == other.shape and self.word == other.word

    def __lt__(self, other: "Monomial") -> bool:
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        return self._hash

    def __repr__(self):
        from .termlang import format_monomial

        return f"Monomial({format_monomial(self)})"


@lru_cache(maxsize=None)
def _leaf(gen: int) -> Monomial:
    return Monomial(gen=gen)


def _build(leaves: int, shape: int, word: Tuple[int, ...]) -> Monomial:
    if leaves == 1:
        if shape != 0:
            raise ValueError("a single leaf has only shape 0")
        return _leaf(word[0])
    for k in range(1, leaves):
        block = shape_count(k) * shape_count(leaves - k)
        if shape < block:
            rl, rr = divmod(shape, shape_count(leaves - k))
            return Monomial(left=_build(k, rl, word[:k]), right=_build(leaves - k, rr, word[k:]))
        shape -= block
    raise ValueError("shape rank out of range")


def _words(counts: MultiDegree) -> Iterator[Tuple[int, ...]]:
    """All words with the given letter counts, lexicographically."""
    total = sum(counts)
    counts = list(counts)
    word: List[int] = []

    def rec():
        if len(word) == total:
            yield tuple(word)
            return
        for g, c in enumerate(counts):
            if c:
                counts[g] -= 1
                word.append(g)
                yield from rec()
                word.pop()
                counts[g] += 1

    yield from rec()


def multinomial(counts: Iterable[int]) -> int:
    counts = list(counts)
    out = factorial(sum(counts))
    for c in counts:
        out //= factorial(c)
    return out


def monomial_count(m: MultiDegree) -> int:
    return shape_count(sum(m)) * multinomial(m)


def enumerate_monomials(rank: int, m: MultiDegree) -> List[Monomial]:
    """All monomials of multidegree ``m`` in canonical order."""
    m = tuple(m)
    if len(m) != rank:
        raise ValueError(f"multidegree {m} does not match rank {rank}")
    if any(c < 0 for c in m):
        raise ValueError("multidegree entries must be nonnegative")
    n = sum(m)
    if n == 0:
        raise ValueError("empty multidegree")
    words = list(_words(m))
    return [_build(n, s, w) for s in range(shape_count(n)) for w in words]


def multidegrees(rank: int, total: int) -> List[MultiDegree]:
    """Multidegrees of the given total, in reverse-lex order."""
    if rank == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(total, -1, -1):
        for rest in multidegrees(rank - 1, total - first):
            out.append((first,) + rest)
    return out


class FreePoly:
    """Finite rational combination of monomials.  Treat as immutable."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                if not isinstance(mono, Monomial):
                    raise TypeError("FreePoly keys must be Monomials")
                c = Fraction(c)
                if c:
                    clean[mono] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "FreePoly":
        obj = cls.__new__(cls)
        obj._terms = {k: v for k, v in terms.items() if v}
        obj._hash = None
        return obj

    @classmethod
    def gen(cls, i: int) -> "FreePoly":
        return cls._raw({Monomial.leaf(i): Fraction(1)})

    @classmethod
    def monomial(cls, mono: Monomial, coeff: Scalar = 1) -> "FreePoly":
        return cls({mono: coeff})

    @classmethod
    def zero(cls) -> "FreePoly":
        return cls._raw({})

    # -- container protocol
    def items(self):
        return self._terms.items()

    def monomials(self):
        return self._terms.keys()

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: t[0].sort_key())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, FreePoly):
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return FreePoly._raw(out)

    def __sub__(self, other):
        if not isinstance(other, FreePoly):
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) - v
        return FreePoly._raw(out)

    def __neg__(self):
        return FreePoly._raw({k: -v for k, v in self._terms.items()})

    def scale(self, c: Scalar) -> "FreePoly":
        c = Fraction(c)
        if not c:
            return FreePoly.zero()
        return FreePoly._raw({k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, FreePoly):
            return multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, FreePoly):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- grading
    def degrees(self) -> set:
        return {m.degree for m in self._terms}

    def max_generator(self) -> int:
        """Largest generator index occurring, or -1 for the zero polynomial."""
        return max((max(m.word) for m in self._terms), default=-1)

    def components(self, rank: int) -> Dict[MultiDegree, "FreePoly"]:
        """Split into multihomogeneous components."""
        parts: Dict[MultiDegree, Dict[Monomial, Fraction]] = {}
        for mono, c in self._terms.items():
            parts.setdefault(mono.multidegree(rank), {})[mono] = c
        return {m: FreePoly._raw(t) for m, t in parts.items()}

    def __repr__(self):
        from .termlang import format_poly

        return f"FreePoly({format_poly(self)!r})"

    def __str__(self):
        from .termlang import format_poly

        return format_poly(self)


def multiply(p: FreePoly, q: FreePoly) -> FreePoly:
    out: Dict[Monomial, Fraction] = {}
    for a, ca in p.items():
        for b, cb in q.items():
            k = Monomial(left=a, right=b)
            out[k] = out.get(k, 0) + ca * cb
    return FreePoly._raw(out)


def substitute(p: FreePoly, s: Union[Mapping[int, FreePoly], Sequence[FreePoly]]) -> FreePoly:
    """Apply the algebra homomorphism sending generator i to ``s[i]``."""
    if not isinstance(s, Mapping):
        s = dict(enumerate(s))
    memo: Dict[Monomial, FreePoly] = {}

    def image(mono: Monomial) -> FreePoly:
        hit = memo.get(mono)
        if hit is not None:
            return hit
        if mono.is_leaf:
            if mono.gen not in s:
                raise KeyError(f"substitution does not map generator {mono.gen}")
            val = s[mono.gen]
        else:
            val = multiply(image(mono.left), image(mono.right))
        memo[mono] = val
        return val

    out: Dict[Monomial, Fraction] = {}
    for mono, c in p.items():
        for k, v in image(mono).items():
            out[k] = out.get(k, 0) + c * v
    return FreePoly._raw(out)


def associator(a: FreePoly, b: FreePoly, c: FreePoly) -> FreePoly:
    return multiply(multiply(a, b), c) - multiply(a, multiply(b, c))


def commutator(a: FreePoly, b: FreePoly) -> FreePoly:
    return multiply(a, b) - multiply(b, a)


def circ(a: FreePoly, b: FreePoly) -> FreePoly:
    return multiply(a, b) + multiply(b, a)


def left_power(a: FreePoly, n: int) -> FreePoly:
    """Left-normed power ((a a) a) ... a."""
    if n < 1:
        raise ValueError("lpow exponent must be at least 1")
    out = a
    for _ in range(n - 1):
        out = multiply(out, a)
    return out


def teichmuller_check(m: FreePoly, a: FreePoly, b: FreePoly, c: FreePoly) -> FreePoly:
    """Residual of m(a,b,c) = (ma,b,c) + (m,a,bc) - (m,ab,c) - (m,a,b)c.

    Vanishes in every algebra; a nonzero result indicates an arithmetic bug.
    """
    return (
        multiply(m, associator(a, b, c))
        - associator(multiply(m, a), b, c)
        - associator(m, a, multiply(b, c))
        + associator(m, multiply(a, b), c)
        + multiply(associator(m, a, b), c)
    )


def linearize(p: FreePoly) -> List[FreePoly]:
    """Full linearization of each multihomogeneous component of ``p``.

    A component of multidegree (d_0, ..., d_{v-1}) becomes a multilinear
    polynomial in d_0 + ... + d_{v-1} fresh variables: each occurrence set
    of variable i is replaced by d_i new variables in all d_i! orders.
    In characteristic 0 the result generates the same T-ideal.
    """
    rank = p.max_generator() + 1
    out = []
    for m, comp in sorted(p.components(rank).items()):
        starts = [sum(m[:i]) for i in range(rank)]
        perms = [list(permutations(range(starts[i], starts[i] + m[i]))) for i in range(rank)]
        terms: Dict[Monomial, Fraction] = {}
        for mono, c in comp.items():
            for choice in product(*perms):
                pos = [0] * rank
                word = []
                for g in mono.word:
                    word.append(choice[g][pos[g]])
                    pos[g] += 1
                k = Monomial.from_shape(mono.degree, mono.shape, word)
                terms[k] = terms.get(k, 0) + c
        lin = FreePoly._raw(terms)
        if lin:
            out.append(lin)
    return out

