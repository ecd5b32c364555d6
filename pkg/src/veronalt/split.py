"""Rank <= 3 free alternative elements as (associative part, octonion part).

The free alternative algebra on x, y, z embeds in the direct sum of the
free associative algebra and the algebra generated by three generic split
octonions X, Y, Z.  ``eval_split`` computes both images exactly; an element
is zero iff both parts vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

import flint
import numpy as np
from scipy import sparse

from .octonions import DIM, RING, Octonion, generic, unit
from .terms import FreePoly, Monomial

MAX_SPLIT_RANK = 3


class SplitRankError(ValueError):
    pass


@dataclass(frozen=True)
class SplitRep:
    """Associative words with coefficients, and the generic octonion value."""

    assoc_part: Dict[Tuple[int, ...], Fraction]
    oct_part: Octonion

    def is_zero(self) -> bool:
        return not self.assoc_part and self.oct_part.is_zero()


def _check_rank(p: FreePoly) -> None:
    if p.max_generator() >= MAX_SPLIT_RANK:
        raise SplitRankError("split representation valid only for rank <= 3")


def forget_brackets(p: FreePoly) -> Dict[Tuple[int, ...], Fraction]:
    """Image in the free associative algebra: words with coefficients."""
    out: Dict[Tuple[int, ...], Fraction] = {}
    for mono, c in p.items():
        out[mono.word] = out.get(mono.word, 0) + c
    return {w: c for w, c in out.items() if c}


class GenericEvaluator:
    """Evaluates polynomials at the generic octonions X, Y, Z.

    Monomial values are memoized.  Polynomials are evaluated by factoring
    out their top-level left or right factors (whichever side has fewer
    distinct factors) and recursing, with a memo on polynomials up to
    scalar; structured inputs such as powers of commutators then cost a
    handful of octonion products instead of one per monomial.
    """

    def __init__(self, ring=RING):
        self.ring = ring
        self.zero = ring.constant(0)
        self.gens = [generic(g, ring) for g in range(MAX_SPLIT_RANK)]
        self._mono: Dict[Monomial, Octonion] = {}
        self._poly: Dict[frozenset, Octonion] = {}

    def monomial(self, mono: Monomial) -> Octonion:
        hit = self._mono.get(mono)
        if hit is None:
            if mono.is_leaf:
                hit = self.gens[mono.gen]
            else:
                hit = self.monomial(mono.left) * self.monomial(mono.right)
            self._mono[mono] = hit
        return hit

    def poly(self, p: FreePoly) -> Octonion:
        if p.is_zero():
            return Octonion([self.zero] * DIM)
        lead_mono, lead = p.sorted_terms()[0]
        if len(p) == 1:
            return self.monomial(lead_mono).scale(_q(lead))
        key = frozenset((m, c / lead) for m, c in p.items())
        hit = self._poly.get(key)
        if hit is None:
            hit = self._evaluate(FreePoly({m: c / lead for m, c in p.items()}))
            self._poly[key] = hit
        return hit.scale(_q(lead))

    def _evaluate(self, p: FreePoly) -> Octonion:
        leaves = {m: c for m, c in p.items() if m.is_leaf}
        out = Octonion([self.zero] * DIM)
        for m, c in leaves.items():
            out = out + self.monomial(m).scale(_q(c))
        by_left: Dict[Monomial, Dict[Monomial, Fraction]] = {}
        by_right: Dict[Monomial, Dict[Monomial, Fraction]] = {}
        for m, c in p.items():
            if m.is_leaf:
                continue
            by_left.setdefault(m.left, {})[m.right] = c
            by_right.setdefault(m.right, {})[m.left] = c
        if not by_left:
            return out
        if len(by_right) < len(by_left):
            for r, lefts in sorted(by_right.items(), key=lambda t: t[0].sort_key()):
                out = out + self.poly(FreePoly(lefts)) * self.monomial(r)
        else:
            for l, rights in sorted(by_left.items(), key=lambda t: t[0].sort_key()):
                out = out + self.monomial(l) * self.poly(FreePoly(rights))
        return out


def _q(c: Fraction):
    return flint.fmpq(c.numerator, c.denominator)


_EVALUATOR = None


def evaluator() -> GenericEvaluator:
    global _EVALUATOR
    if _EVALUATOR is None:
        _EVALUATOR = GenericEvaluator()
    return _EVALUATOR


def eval_split(p: FreePoly) -> SplitRep:
    _check_rank(p)
    return SplitRep(forget_brackets(p), evaluator().poly(p))


def is_zero_split(p: FreePoly) -> bool:
    _check_rank(p)
    if forget_brackets(p):
        return False
    return evaluator().poly(p).is_zero()


def even_odd_center_identity(z0: Octonion, z1: Octonion) -> Octonion:
    """Residual of z^2 = 2 z0 z + (z1^2 - z0^2) for z = z0 + z1."""
    z = z0 + z1
    return z * z - (z0 * z).scale(2) - (z1 * z1 - z0 * z0)


def trace_element(x: Octonion, ring=RING) -> Octonion:
    """t(x) as a scalar octonion."""
    return unit(ring).scale(x.trace())


def norm_element(x: Octonion, ring=RING) -> Octonion:
    """n(x) as a scalar octonion."""
    return unit(ring).scale(x.norm())


def split_vectors(monomials: Sequence[Monomial]) -> List[Dict]:
    """Coordinate vectors of eval_split on each monomial: associative word
    and (octonion coordinate, polynomial exponent) columns."""
    ev = evaluator()
    out = []
    for mono in monomials:
        if max(mono.word) >= MAX_SPLIT_RANK:
            raise SplitRankError("split representation valid only for rank <= 3")
        vec: Dict = {("w", mono.word): 1}
        for k, coord in enumerate(ev.monomial(mono).c):
            for exps, c in coord.to_dict().items():
                vec[("o", k, exps)] = c
        out.append(vec)
    return out


def split_rank(monomials: Sequence[Monomial]) -> int:
    """Exact rank of eval_split restricted to the span of ``monomials``.

    Computed as the rank of the Gram matrix M M^T of the integer coordinate
    matrix M, which has the same rank over the rationals.
    """
    vecs = split_vectors(monomials)
    if not vecs:
        return 0
    cols: Dict = {}
    data, rows_i, cols_j = [], [], []
    for i, v in enumerate(vecs):
        for key, c in v.items():
            c = flint.fmpq(c)
            if c.q != 1:
                raise ValueError("monomial values are expected to have integer coefficients")
            j = cols.setdefault(key, len(cols))
            rows_i.append(i)
            cols_j.append(j)
            data.append(int(c.p))
    bound = max(sum(x * x for x in v_data) for v_data in _row_values(vecs))
    if bound >= 2**62:
        raise OverflowError("coefficients too large for the int64 Gram product")
    m = sparse.csr_matrix((np.array(data, dtype=np.int64), (rows_i, cols_j)), shape=(len(vecs), len(cols)))
    gram = (m @ m.T).toarray()
    return flint.fmpz_mat([[int(x) for x in row] for row in gram]).rank()


def _row_values(vecs: Iterable[Dict]):
    for v in vecs:
        yield [int(flint.fmpq(c).p) for c in v.values()]
