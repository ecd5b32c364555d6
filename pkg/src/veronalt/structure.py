"""Degree-truncated nucleus, center, associative nucleus and associator ideals.

Nuclear-type subspaces are infinite conditions; here they are truncated at
a cutoff ``D``: an element of degree d counts as nuclear when all its
associators with standard monomials of total degree at most ``D`` vanish.
Truncated subspaces over-approximate the true ones and shrink (weakly) as
``D`` grows.
"""

from __future__ import annotations

from collections import Counter
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .engine import Element, RelativelyFreeAlgebra, algebra, compositions, sub_multidegrees, _sub
from .graded import GradedSubspace
from .identities import IdentitySet
from .linalg import Subspace, axpy, kernel
from .terms import MultiDegree, multidegrees


def _check_cutoff(alg: RelativelyFreeAlgebra, d: int, D: int, cap: Optional[int]) -> None:
    if d < 1:
        raise ValueError("degree must be at least 1")
    if not d < D:
        raise ValueError(f"degree {d} must be below the cutoff {D}")
    alg.check_cap(D, cap)


def _basis_elements(alg: RelativelyFreeAlgebra, max_degree: int) -> List[Element]:
    out = []
    for e in range(1, max_degree + 1):
        for m in multidegrees(alg.rank, e):
            comp = alg.component(m)
            out.extend(alg.basis_element(m, i) for i in range(comp.dim))
    return out


def _assoc(alg, a: Element, b: Element, c: Element) -> Element:
    m, left = alg.mul(alg.mul(a, b), c)
    _, right = alg.mul(a, alg.mul(b, c))
    out = dict(left)
    axpy(out, mpq(-1), right)
    return (m, out)


def _comm(alg, a: Element, b: Element) -> Element:
    m, ab = alg.mul(a, b)
    _, ba = alg.mul(b, a)
    out = dict(ab)
    axpy(out, mpq(-1), ba)
    return (m, out)


def _tagged(vec: Dict, tag) -> Dict:
    return {(tag, k): c for k, c in vec.items()}


def _kernel_subspace(images: List[Dict], dim: int) -> Subspace:
    return Subspace(kernel(images), ambient=dim)


def _nuclear_images(alg, v: Element, D: int, with_center: bool) -> Dict:
    d = sum(v[0])
    img: Dict = {}
    rest = D - d
    if rest >= 2:
        small = _basis_elements(alg, rest - 1)
        for u in small:
            du = sum(u[0])
            for w in small:
                if du + sum(w[0]) > rest:
                    continue
                tag = (u[0], tuple(u[1]), w[0], tuple(w[1]))
                for pos, (a, b, c) in enumerate(((v, u, w), (u, v, w), (u, w, v))):
                    m, vec = _assoc(alg, a, b, c)
                    img.update(_tagged(vec, (pos, tag, m)))
    if with_center and rest >= 1:
        for u in _basis_elements(alg, rest):
            m, vec = _comm(alg, v, u)
            img.update(_tagged(vec, (3, u[0], tuple(u[1]), m)))
    return img


def _nuclear_slice(ids, rank, d, D, cap, with_center) -> GradedSubspace:
    alg = algebra(ids, rank, cap)
    _check_cutoff(alg, d, D, cap)
    out = GradedSubspace(cutoff=D)
    for m in multidegrees(rank, d):
        comp = alg.component(m)
        images = [_nuclear_images(alg, alg.basis_element(m, i), D, with_center) for i in range(comp.dim)]
        out.components[m] = _kernel_subspace(images, comp.dim)
    return out


def nucleus_component(ids: IdentitySet, rank: int, d: int, D: int, cap: Optional[int] = None) -> GradedSubspace:
    """Degree-d part of the nucleus truncated at D, per multidegree.

    Membership is tested on standard monomials u, w only: by linearity this
    covers all monomials since T-ideal elements associate to zero anyway.
    """
    return _nuclear_slice(ids, rank, d, D, cap, with_center=False)


def center_component(ids: IdentitySet, rank: int, d: int, D: int, cap: Optional[int] = None) -> GradedSubspace:
    """Truncated nucleus intersected with the truncated commutative center."""
    return _nuclear_slice(ids, rank, d, D, cap, with_center=True)


def assoc_nucleus_component(ids: IdentitySet, rank: int, d: int, D: int, cap: Optional[int] = None) -> GradedSubspace:
    """Largest graded subspace of the truncated nucleus closed under
    multiplication by monomials (results of degree <= D), degree-d part.

    Closure conditions only point to higher degrees, so the greatest fixed
    point is reached in one pass from degree D downwards.
    """
    return assoc_nucleus_tower(ids, rank, d, D, cap)[d]


def assoc_nucleus_tower(ids, rank, d, D, cap=None) -> Dict[int, GradedSubspace]:
    alg = algebra(ids, rank, cap)
    _check_cutoff(alg, d, D, cap)
    tower: Dict[int, GradedSubspace] = {}
    full: Dict[MultiDegree, bool] = {}
    for e in range(D, d - 1, -1):
        layer = GradedSubspace(cutoff=D)
        for m in multidegrees(rank, e):
            comp = alg.component(m)
            images = []
            for i in range(comp.dim):
                v = alg.basis_element(m, i)
                img = _nuclear_images(alg, v, D, with_center=False) if e < D else {}
                for u in _basis_elements(alg, D - e):
                    for side, (a, b) in enumerate(((v, u), (u, v))):
                        mm, vec = alg.mul(a, b)
                        if full.get(mm) or not vec:
                            continue
                        res = tower[sum(mm)][mm].residual(vec)
                        img.update(_tagged(res, (4 + side, u[0], tuple(u[1]), mm)))
                images.append(img)
            sub = _kernel_subspace(images, comp.dim)
            layer.components[m] = sub
            full[m] = sub.dim == comp.dim
        tower[e] = layer
    return tower


class _DChain:
    def __init__(self, alg: RelativelyFreeAlgebra):
        self.alg = alg
        self.memo: Dict[Tuple[int, MultiDegree], Subspace] = {}

    def get(self, i: int, m: MultiDegree) -> Subspace:
        key = (i, m)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        alg = self.alg
        comp = alg.component(m)
        if i == 0:
            sub = Subspace.full(range(comp.dim))
        else:
            gens = []
            for m1, m2, m3 in compositions(m, 3):
                prev = self.get(i - 1, m1)
                if prev.dim == 0:
                    continue
                c2, c3 = alg.component(m2), alg.component(m3)
                for v in prev.basis():
                    ve = (m1, v)
                    for j in range(c2.dim):
                        for k in range(c3.dim):
                            _, vec = _assoc(alg, ve, alg.basis_element(m2, j), alg.basis_element(m3, k))
                            if vec:
                                gens.append(vec)
            for a in sub_multidegrees(m):
                lower = self.get(i, a)
                if lower.dim == 0:
                    continue
                b = _sub(m, a)
                cb = alg.component(b)
                for v in lower.basis():
                    for j in range(cb.dim):
                        u = alg.basis_element(b, j)
                        gens.append(alg.mul((a, v), u)[1])
                        gens.append(alg.mul(u, (a, v))[1])
            sub = Subspace((g for g in gens if g), ambient=comp.dim)
        self.memo[key] = sub
        return sub


_DCHAINS: Dict[int, _DChain] = {}


def _dchain(alg: RelativelyFreeAlgebra) -> _DChain:
    hit = _DCHAINS.get(id(alg))
    if hit is None or hit.alg is not alg:
        hit = _DCHAINS[id(alg)] = _DChain(alg)
    return hit


def d_chain_component(ids: IdentitySet, rank: int, i: int, m: Sequence[int], cap: Optional[int] = None) -> Subspace:
    """Multidegree-m part of D_i: D_0 is the whole algebra and D_i is the ideal
    generated by the associators (D_{i-1}, A, A)."""
    if i < 0:
        raise ValueError("chain index must be nonnegative")
    alg = algebra(ids, rank, cap)
    m = tuple(m)
    alg.check_cap(sum(m), cap)
    return _dchain(alg).get(i, m)


def associator_ideal_component(ids: IdentitySet, rank: int, m: Sequence[int], cap: Optional[int] = None) -> Subspace:
    return d_chain_component(ids, rank, 1, m, cap)


def d_chain_slice(ids, rank, i, d, cap=None) -> GradedSubspace:
    return GradedSubspace({m: d_chain_component(ids, rank, i, m, cap) for m in multidegrees(rank, d)})


def pigeonhole_witness(n: int, residues: Iterable[int]) -> Optional[int]:
    """Smallest residue class in {1..n-1} holding at least n of the given
    residues, or None.  Some class always qualifies once there are at
    least (n-1)^2 + 1 residues."""
    if n < 2:
        raise ValueError("n must be at least 2")
    counts = Counter()
    for r in residues:
        if not 1 <= r <= n - 1:
            raise ValueError(f"residue {r} outside 1..{n - 1}")
        counts[r] += 1
    hits = [r for r, c in counts.items() if c >= n]
    return min(hits) if hits else None


def pigeonhole_bound(n: int) -> int:
    return (n - 1) ** 2 + 1


def ud_violations(ids: IdentitySet, rank: int, D: int, margin: int = 2, cap: Optional[int] = None) -> List[Tuple]:
    """Soft check of U*D = D*U = 0 inside the truncation.

    Multiplies basis vectors of the truncated associative nucleus (degrees
    with at least ``margin`` below ``D``) by basis vectors of the associator
    ideal, with product degree <= D, and returns the nonzero cases as
    ``(side, multidegree of v, multidegree of w)``.  Truncation
    over-approximates U, so violations are findings, not errors.
    """
    alg = algebra(ids, rank, cap)
    top = D - margin
    if top < 1:
        return []
    tower = assoc_nucleus_tower(ids, rank, 1, D, cap)
    out = []
    for d in range(1, top + 1):
        for m, sub in tower[d].items():
            for v in sub.basis():
                for e in range(3, D - d + 1):
                    for mw in multidegrees(rank, e):
                        ideal = d_chain_component(ids, rank, 1, mw, cap)
                        for w in ideal.basis():
                            if alg.mul((m, v), (mw, w))[1]:
                                out.append(("UD", m, mw))
                            if alg.mul((mw, w), (m, v))[1]:
                                out.append(("DU", m, mw))
    return out
