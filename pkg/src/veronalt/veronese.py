"""Veronese subalgebras, invariant subalgebras and their generator counts.

Vectors spanning several multidegrees of one total degree are dicts keyed
by ``(multidegree, standard-monomial index)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .engine import NormalVector, RelativelyFreeAlgebra, _sub, algebra
from .graded import GradedSubspace
from .groups import Cyclotomic, LinearGroupAction, _cyclotomic_poly
from .identities import IdentitySet
from .linalg import Echelon, Subspace, axpy, to_mpq
from .terms import MultiDegree, multidegrees

log = logging.getLogger(__name__)

MixedVec = Dict[Tuple[MultiDegree, int], object]


@dataclass
class VeroneseConfig:
    n: int
    ids: IdentitySet
    rank: int
    max_degree: int
    cap: Optional[int] = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("Veronese index n must be at least 2")
        if self.rank < 1:
            raise ValueError("rank must be at least 1")
        if self.max_degree < 1:
            raise ValueError("max_degree must be at least 1")

    @property
    def algebra(self) -> RelativelyFreeAlgebra:
        return algebra(self.ids, self.rank, self.cap)


@dataclass
class DegreeReport:
    degree: int
    dim_target: int
    dim_generated: int
    new_basis: List[List[NormalVector]] = field(default_factory=list)

    @property
    def new_count(self) -> int:
        return self.dim_target - self.dim_generated


@dataclass
class GeneratorReport:
    degrees: List[DegreeReport] = field(default_factory=list)

    @property
    def new_counts(self) -> List[int]:
        return [r.new_count for r in self.degrees]

    def __getitem__(self, d: int) -> DegreeReport:
        for r in self.degrees:
            if r.degree == d:
                return r
        raise KeyError(d)

    def summary(self) -> List[Tuple[int, int, int, int]]:
        return [(r.degree, r.dim_target, r.dim_generated, r.new_count) for r in self.degrees]


def veronese_component(cfg: VeroneseConfig, d: int) -> GradedSubspace:
    """Degree-d part of the Veronese subalgebra, per multidegree: the whole
    component when n divides d, zero otherwise."""
    if not 1 <= d <= cfg.max_degree:
        raise ValueError(f"degree {d} outside 1..{cfg.max_degree}")
    alg = cfg.algebra
    alg.check_cap(d, cfg.cap)
    out = GradedSubspace()
    for m in multidegrees(cfg.rank, d):
        dim = alg.dim(m)
        out.components[m] = Subspace.full(range(dim)) if d % cfg.n == 0 else Subspace(ambient=dim)
    return out


def veronese_mixed(cfg: VeroneseConfig, d: int) -> Subspace:
    """Same as :func:`veronese_component` in ``(multidegree, index)`` keys."""
    comp = veronese_component(cfg, d)
    keys = [(m, i) for m, s in comp.items() if s.dim for i in range(s.ambient)]
    return Subspace.full(keys)


def _complement(target: Sequence[Dict], generated: Echelon) -> List[Dict]:
    """Reduced echelon basis of the residues of ``target`` modulo ``generated``."""
    res = Echelon()
    for v in target:
        r = generated.reduce(v)
        if r:
            res.add_owned(r)
    return res.rref().basis()


def _split_mixed(v: MixedVec) -> Dict[MultiDegree, Dict[int, object]]:
    out: Dict[MultiDegree, Dict[int, object]] = {}
    for (m, i), c in v.items():
        out.setdefault(m, {})[i] = c
    return out


def _to_normal_vectors(v: MixedVec) -> List[NormalVector]:
    return [NormalVector.from_vec(m, part) for m, part in sorted(_split_mixed(v).items())]


def new_generators(cfg: VeroneseConfig, threads: int = 1) -> GeneratorReport:
    """Per-degree counts of new generators of the Veronese subalgebra.

    At degree d (a multiple of n) the generated part is spanned by the
    normal forms of all products s*t of standard monomials with deg s and
    deg t positive multiples of n (both orders); new generators are the
    echelon complement of that span in the whole component.
    """
    alg = cfg.algebra
    alg.check_cap(cfg.max_degree, cfg.cap)
    n = cfg.n
    report = GeneratorReport()
    for d in range(n, cfg.max_degree + 1, n):
        alg.build_degree(d, threads, cfg.cap)
        target = generated = 0
        basis: List[List[NormalVector]] = []
        for m in multidegrees(cfg.rank, d):
            comp = alg.component(m)
            gen = Echelon()
            for c, (a, _, _) in enumerate(comp.col_origin):
                if sum(a) % n == 0:
                    v = comp.nfcol[c]
                    if v:
                        gen.add(v)
            target += comp.dim
            generated += gen.dim
            for v in _complement([{i: mpq(1)} for i in range(comp.dim)], gen):
                basis.append([NormalVector.from_vec(m, v)])
        log.info("veronese n=%d degree %d: target %d, generated %d", n, d, target, generated)
        report.degrees.append(DegreeReport(d, target, generated, basis))
    return report


# -- group actions on normal-form coordinates


class _NormalFormAction:
    """Action of one group element on the relatively free algebra.

    A coefficient in Q(zeta_N) is stored as rational vectors per power of
    zeta, so that engine arithmetic stays rational.
    """

    def __init__(self, alg: RelativelyFreeAlgebra, g, conductor: int):
        self.alg = alg
        self.g = g
        self.N = conductor
        self.mod = _cyclotomic_poly(conductor)
        self.phi = len(self.mod) - 1
        self.memo: Dict[Tuple[MultiDegree, int], Dict[int, MixedVec]] = {}

    def _powers(self, x) -> Dict[int, mpq]:
        if isinstance(x, Cyclotomic):
            x = x.lift(self.N)
            return {k: to_mpq(c) for k, c in enumerate(x.c) if c}
        return {0: to_mpq(x)} if x else {}

    def _reduce(self, buckets: Dict[int, MixedVec]) -> Dict[int, MixedVec]:
        phi, mod = self.phi, self.mod
        for e in sorted((e for e in buckets if e >= phi), reverse=True):
            v = buckets.pop(e)
            for i in range(phi):
                if mod[i]:
                    axpy(buckets.setdefault(e - phi + i, {}), mpq(-mod[i]), v)
        return {k: v for k, v in buckets.items() if v}

    def basis_image(self, m: MultiDegree, i: int) -> Dict[int, MixedVec]:
        key = (m, i)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        alg = self.alg
        if sum(m) == 1:
            j = m.index(1)
            out: Dict[int, MixedVec] = {}
            for r in range(alg.rank):
                e = tuple(int(k == r) for k in range(alg.rank))
                for k, c in self._powers(self.g[r][j]).items():
                    out.setdefault(k, {})[(e, 0)] = c
        else:
            a, li, ri = alg.component(m).basis_origin[i]
            out = self.product(self.basis_image(a, li), self.basis_image(_sub(m, a), ri))
        self.memo[key] = out
        return out

    def product(self, x: Dict[int, MixedVec], y: Dict[int, MixedVec]) -> Dict[int, MixedVec]:
        out: Dict[int, MixedVec] = {}
        for k, xv in x.items():
            for l, yv in y.items():
                bucket = out.setdefault(k + l, {})
                mixed_product_into(self.alg, bucket, xv, yv)
        return self._reduce(out)

    def image(self, v: MixedVec) -> Dict[int, MixedVec]:
        out: Dict[int, MixedVec] = {}
        for (m, i), c in v.items():
            for k, w in self.basis_image(m, i).items():
                axpy(out.setdefault(k, {}), c, w)
        return {k: w for k, w in out.items() if w}


def mixed_product_into(alg: RelativelyFreeAlgebra, out: MixedVec, x: MixedVec, y: MixedVec) -> None:
    """out += x*y for vectors keyed by (multidegree, index)."""
    xs, ys = _split_mixed(x), _split_mixed(y)
    for ma, va in xs.items():
        for mb, vb in ys.items():
            m, prod = alg.mul((ma, va), (mb, vb))
            for i, c in prod.items():
                k = (m, i)
                s = out.get(k)
                s = c if s is None else s + c
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)


def mixed_product(alg: RelativelyFreeAlgebra, x: MixedVec, y: MixedVec) -> MixedVec:
    out: MixedVec = {}
    mixed_product_into(alg, out, x, y)
    return out


def _conductor(action: LinearGroupAction) -> int:
    for g in action.generators:
        for row in g:
            for x in row:
                if isinstance(x, Cyclotomic):
                    return x.n
    return 1


class _ActionCache:
    def __init__(self, action: LinearGroupAction, alg: RelativelyFreeAlgebra):
        self.action = action
        self.alg = alg
        n = _conductor(action)
        self.elements = [_NormalFormAction(alg, g, n) for g in action.elements]
        self.generators = [_NormalFormAction(alg, g, n) for g in action.generators]
        self.components: Dict[int, Subspace] = {}


_CACHES: Dict[Tuple[int, int], _ActionCache] = {}


def _cache(action: LinearGroupAction, alg: RelativelyFreeAlgebra) -> _ActionCache:
    key = (id(action), id(alg))
    hit = _CACHES.get(key)
    if hit is None or hit.action is not action or hit.alg is not alg:
        hit = _CACHES[key] = _ActionCache(action, alg)
    return hit


def _rational_part(buckets: Dict[int, MixedVec], what: str) -> MixedVec:
    if any(k != 0 and v for k, v in buckets.items()):
        raise ValueError(f"{what} is not defined over the rationals")
    return buckets.get(0, {})


def reynolds_vector(action: LinearGroupAction, alg: RelativelyFreeAlgebra, v: MixedVec) -> MixedVec:
    """Reynolds projector on a normal-form vector."""
    cache = _cache(action, alg)
    total: Dict[int, MixedVec] = {}
    for el in cache.elements:
        for k, w in el.image(v).items():
            axpy(total.setdefault(k, {}), mpq(1), w)
    out = _rational_part({k: w for k, w in total.items() if w}, "Reynolds image")
    inv = mpq(1, action.order)
    return {k: c * inv for k, c in out.items()}


def act_vector(action: LinearGroupAction, alg: RelativelyFreeAlgebra, gen: int, v: MixedVec) -> MixedVec:
    """Image of a rational vector under the ``gen``-th group generator
    (must itself be rational)."""
    cache = _cache(action, alg)
    return _rational_part(cache.generators[gen].image(v), "image")


def _check_rank(action: LinearGroupAction, ids: IdentitySet, rank: Optional[int]) -> int:
    if rank is not None and rank != action.rank:
        raise ValueError(f"group acts in rank {action.rank}, not {rank}")
    return action.rank


def invariant_component(action: LinearGroupAction, ids: IdentitySet, d: int, cap: Optional[int] = None) -> GradedSubspace:
    """Fixed vectors of the degree-d component, as the image of the Reynolds
    projector.  The single grade is the total degree ``d``."""
    return GradedSubspace({d: _invariants(action, ids, d, cap)})


def _invariants(action: LinearGroupAction, ids: IdentitySet, d: int, cap: Optional[int]) -> Subspace:
    if d < 1:
        raise ValueError("degree must be at least 1")
    alg = algebra(ids, action.rank, cap)
    alg.check_cap(d, cap)
    cache = _cache(action, alg)
    hit = cache.components.get(d)
    if hit is not None:
        return hit
    images = []
    ambient = 0
    for m in multidegrees(action.rank, d):
        dim = alg.dim(m)
        ambient += dim
        for i in range(dim):
            r = reynolds_vector(action, alg, {(m, i): mpq(1)})
            if r:
                images.append(r)
    sub = Subspace(images, ambient=ambient)
    cache.components[d] = sub
    return sub


def invariant_generators(action: LinearGroupAction, ids: IdentitySet, max_degree: int, cap: Optional[int] = None) -> GeneratorReport:
    """Per-degree counts of new generators of the invariant subalgebra."""
    alg = algebra(ids, action.rank, cap)
    alg.check_cap(max_degree, cap)
    report = GeneratorReport()
    comps: Dict[int, Subspace] = {}
    for d in range(1, max_degree + 1):
        target = _invariants(action, ids, d, cap)
        comps[d] = target
        gen = Echelon()
        for a in range(1, d):
            sa, sb = comps[a], comps[d - a]
            if sa.dim == 0 or sb.dim == 0:
                continue
            for x in sa.basis():
                for y in sb.basis():
                    p = mixed_product(alg, x, y)
                    if p:
                        gen.add(p)
        basis = [_to_normal_vectors(v) for v in _complement(target.basis(), gen)]
        log.info("invariants degree %d: target %d, generated %d", d, target.dim, gen.dim)
        report.degrees.append(DegreeReport(d, target.dim, gen.dim, basis))
    return report
