"""Normal forms in relatively free algebras.

For a variety given by an :class:`IdentitySet` and a rank, the
multidegree-``m`` component of the relatively free algebra is built from
the lower components.  Every monomial of degree >= 2 is a product ``u*v``,
and modulo the ideal generated by lower-degree T-ideal components only
products of standard monomials survive.  The component is therefore the
quotient of ``sum_{a+b=m} Q_a (x) Q_b`` by the images of the substitution
instances ``f(u_1, ..., u_k)`` of the linearized identities, with each
``u_i`` running over standard monomials of lower components.

Columns of that space are the monomials ``s*t`` (s, t standard) sorted in
the canonical monomial order, and pivots are taken on the earliest column.
Because the canonical order is compatible with multiplication, the
standard monomials and normal forms obtained this way coincide with the
reduced row-echelon form of the full T-ideal component in monomial
coordinates.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .identities import IdentitySet, MultilinearIdentity
from .linalg import Echelon, axpy, to_fraction, to_mpq
from .termlang import format_rational
from .terms import FreePoly, Monomial, MultiDegree, enumerate_monomials, multidegrees, substitute

log = logging.getLogger(__name__)

CACHE_ENV = "VERONALT_CACHE_DIR"
CACHE_VERSION = 1

Vec = Dict[int, object]
Element = Tuple[MultiDegree, Vec]


class CapExceededError(ValueError):
    def __init__(self, degree: int, cap: int, rank: int):
        super().__init__(
            f"total degree {degree} exceeds the degree cap {cap} for rank {rank}; "
            f"raise it with --cap {degree} (cap={degree} in the library API)"
        )
        self.degree = degree
        self.cap = cap


def default_cap(rank: int) -> int:
    if rank <= 2:
        return 8
    if rank == 3:
        return 6
    return 5


def _sub(a: MultiDegree, b: MultiDegree) -> MultiDegree:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: MultiDegree, b: MultiDegree) -> MultiDegree:
    return tuple(x + y for x, y in zip(a, b))


def sub_multidegrees(m: MultiDegree) -> List[MultiDegree]:
    """Nonzero proper sub-multidegrees of ``m``."""
    out = []
    for a in product(*(range(c + 1) for c in m)):
        if any(a) and a != tuple(m):
            out.append(a)
    return out


def compositions(m: MultiDegree, k: int) -> List[Tuple[MultiDegree, ...]]:
    """Ordered k-tuples of nonzero multidegrees summing to ``m``."""
    if k == 1:
        return [(tuple(m),)] if any(m) else []
    out = []
    for a in sub_multidegrees(m):
        for rest in compositions(_sub(m, a), k - 1):
            out.append((a,) + rest)
    return out


class Component:
    """One multihomogeneous component of a relatively free algebra.

    ``basis`` lists the standard monomials in canonical order; a vector of
    the component is a dict ``basis index -> coefficient``.  ``cols[a]`` maps
    the pair ``(i, j)`` of basis indices of the split ``a + (m - a)`` to the
    column of the monomial ``basis_a[i] * basis_{m-a}[j]``; ``nfcol[c]`` is
    the normal form of that column's monomial.
    """

    def __init__(self, m: MultiDegree):
        self.m = m
        self.degree = sum(m)
        self.basis: List[Monomial] = []
        self.index: Dict[Monomial, int] = {}
        self.cols: Dict[MultiDegree, List[int]] = {}
        self.col_monomials: List[Monomial] = []
        # column -> (left multidegree, left basis index, right basis index)
        self.col_origin: List[Tuple[MultiDegree, int, int]] = []
        self.nfcol: List[Vec] = []
        self.relations = Echelon()

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return len(self.col_monomials)

    def _finish(self):
        self.relations.rref()
        rows = self.relations.rows
        std = [c for c in range(len(self.col_monomials)) if c not in rows]
        pos = {c: i for i, c in enumerate(std)}
        self.basis = [self.col_monomials[c] for c in std]
        self.basis_origin = [self.col_origin[c] for c in std] if self.col_origin else []
        self.index = {mono: i for i, mono in enumerate(self.basis)}
        nfcol: List[Vec] = []
        one = mpq(1)
        for c in range(len(self.col_monomials)):
            if c in pos:
                nfcol.append({pos[c]: one})
            else:
                nfcol.append({pos[c2]: -v for c2, v in rows[c].items()})
        self.nfcol = nfcol


class RelativelyFreeAlgebra:
    """Graded components of the relatively free algebra of a variety.

    Components are built on demand, bottom-up, and cached; each cache slot
    is written exactly once, so concurrent readers are safe.
    """

    def __init__(self, ids: IdentitySet, rank: int, cap: Optional[int] = None):
        if rank < 1:
            raise ValueError("rank must be at least 1")
        self.ids = ids
        self.rank = rank
        self.cap = cap if cap is not None else default_cap(rank)
        self._slots: Dict[MultiDegree, Future] = {}
        self._lock = threading.Lock()
        self._trivial = any(f.degree == 1 for f in ids.multilinear)
        self._identities = [f for f in ids.multilinear if f.degree >= 2]
        self._nf_memo: Dict[Monomial, Element] = {}

    # -- component construction
    def check_cap(self, degree: int, cap: Optional[int] = None) -> None:
        limit = self.cap if cap is None else cap
        if degree > limit:
            raise CapExceededError(degree, limit, self.rank)

    def component(self, m: Sequence[int], cap: Optional[int] = None) -> Component:
        m = tuple(m)
        if len(m) != self.rank or any(c < 0 for c in m):
            raise ValueError(f"multidegree {m} does not match rank {self.rank}")
        if not any(m):
            raise ValueError("empty multidegree")
        slot = self._slots.get(m)
        if slot is not None and slot.done():
            return slot.result()
        self.check_cap(sum(m), cap)
        with self._lock:
            slot = self._slots.get(m)
            owner = slot is None
            if owner:
                slot = Future()
                self._slots[m] = slot
        if not owner:
            return slot.result()
        try:
            comp = self._load_cached(m) or self._build(m)
        except BaseException as exc:
            with self._lock:
                del self._slots[m]
            slot.set_exception(exc)
            raise
        slot.set_result(comp)
        return comp

    def dim(self, m: Sequence[int], cap: Optional[int] = None) -> int:
        return self.component(m, cap).dim

    def build_degree(self, degree: int, threads: int = 1, cap: Optional[int] = None) -> List[Component]:
        """Build every component of a total degree (lower degrees first)."""
        self.check_cap(degree, cap)
        for d in range(1, degree):
            for m in multidegrees(self.rank, d):
                self.component(m, cap)
        ms = multidegrees(self.rank, degree)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                return list(pool.map(lambda m: self.component(m, cap), ms))
        return [self.component(m, cap) for m in ms]

    def _build(self, m: MultiDegree) -> Component:
        comp = Component(m)
        d = comp.degree
        if self._trivial:
            return comp
        if d == 1:
            g = m.index(1)
            comp.col_monomials = [Monomial.leaf(g)]
            comp._finish()
            return comp
        log.debug("building component %s", m)
        # columns: products of standard monomials over all splits
        entries = []
        for a in sub_multidegrees(m):
            ca = self.component(a)
            cb = self.component(_sub(m, a))
            for i, s in enumerate(ca.basis):
                for j, t in enumerate(cb.basis):
                    mono = Monomial(left=s, right=t)
                    entries.append((mono.key(), mono, a, i * cb.dim + j))
        self._assign_columns(comp, entries)
        for f in self._identities:
            if f.degree > d:
                continue
            self._add_instances(comp, f)
        comp._finish()
        log.debug("component %s: ambient %d, dim %d", m, comp.ambient_dim, comp.dim)
        self._save_cached(comp)
        return comp

    def _assign_columns(self, comp: Component, entries) -> None:
        entries.sort(key=lambda e: e[0])
        comp.col_monomials = [e[1] for e in entries]
        for a in sub_multidegrees(comp.m):
            comp.cols[a] = [0] * (self.component(a).dim * self.component(_sub(comp.m, a)).dim)
        origin = []
        for c, (_, _, a, slot) in enumerate(entries):
            comp.cols[a][slot] = c
            i, j = divmod(slot, self.component(_sub(comp.m, a)).dim)
            origin.append((a, i, j))
        comp.col_origin = origin

    def _add_instances(self, comp: Component, f: MultilinearIdentity) -> None:
        sym = [s for s in f.symmetries if list(s) != list(range(f.degree))]
        rel = comp.relations
        for parts in compositions(comp.m, f.degree):
            dims = [self.component(p).dim for p in parts]
            if 0 in dims:
                continue
            if sym and any(tuple(parts[s] for s in perm) < parts for perm in sym):
                continue
            for idx in product(*(range(n) for n in dims)):
                if sym:
                    t = tuple(zip(parts, idx))
                    if any(tuple(t[s] for s in perm) < t for perm in sym):
                        continue
                vec = self._evaluate(comp, f, parts, idx)
                if vec:
                    rel.add_owned(vec)

    def _evaluate(self, comp: Component, f: MultilinearIdentity, parts, idx) -> Vec:
        """Image of f(u_1, ..., u_k) in the column space of ``comp``."""
        one = mpq(1)
        leaves = [(p, {i: one}) for p, i in zip(parts, idx)]
        memo: Dict[Monomial, Element] = {}

        def value(t: Monomial) -> Element:
            if t.is_leaf:
                return leaves[t.gen]
            hit = memo.get(t)
            if hit is None:
                hit = self.mul(value(t.left), value(t.right))
                memo[t] = hit
            return hit

        out: Vec = {}
        for c, t in f.terms:
            la, va = value(t.left)
            lb, vb = value(t.right)
            cols = comp.cols[la]
            db = self.component(lb).dim
            cq = to_mpq(c)
            for i, a in va.items():
                base = i * db
                ca = cq * a
                for j, b in vb.items():
                    col = cols[base + j]
                    s = out.get(col)
                    s = ca * b if s is None else s + ca * b
                    if s:
                        out[col] = s
                    else:
                        del out[col]
        return out

    # -- arithmetic in the quotient
    def mul(self, x: Element, y: Element) -> Element:
        """Product of two homogeneous elements, in normal-form coordinates."""
        ma, va = x
        mb, vb = y
        m = _add(ma, mb)
        out: Vec = {}
        if not va or not vb:
            return (m, out)
        comp = self.component(m)
        cols = comp.cols[ma]
        nfcol = comp.nfcol
        db = self.component(mb).dim
        for i, a in va.items():
            base = i * db
            for j, b in vb.items():
                axpy(out, a * b, nfcol[cols[base + j]])
        return (m, out)

    def basis_element(self, m: Sequence[int], i: int) -> Element:
        return (tuple(m), {i: mpq(1)})

    def generator(self, g: int) -> Element:
        m = [0] * self.rank
        m[g] = 1
        return (tuple(m), {0: mpq(1)})

    def nf_monomial(self, mono: Monomial) -> Element:
        hit = self._nf_memo.get(mono)
        if hit is not None:
            return hit
        if mono.is_leaf:
            if mono.gen >= self.rank:
                raise ValueError(f"generator {mono.gen} outside rank {self.rank}")
            val = self.generator(mono.gen)
            if self._trivial:
                val = (val[0], {})
        else:
            val = self.mul(self.nf_monomial(mono.left), self.nf_monomial(mono.right))
        self._nf_memo[mono] = val
        return val

    def normal_form(self, p: FreePoly) -> Dict[MultiDegree, Vec]:
        """Normal-form vectors of each multihomogeneous component of ``p``
        (zero components omitted)."""
        out: Dict[MultiDegree, Vec] = {}
        for mono, c in p.items():
            self.check_cap(mono.degree)
            m, v = self.nf_monomial(mono)
            axpy(out.setdefault(m, {}), to_mpq(c), v)
        return {m: v for m, v in out.items() if v}

    def to_poly(self, x: Element) -> FreePoly:
        """Lift a normal-form vector to the combination of standard monomials."""
        m, v = x
        basis = self.component(m).basis
        return FreePoly({basis[i]: to_fraction(c) for i, c in v.items()})

    def dim_table(self, max_degree: int, threads: int = 1) -> Dict[int, int]:
        self.check_cap(max_degree)
        out = {}
        for d in range(1, max_degree + 1):
            out[d] = sum(c.dim for c in self.build_degree(d, threads))
        return out

    # -- optional on-disk cache
    def _cache_path(self, m: MultiDegree) -> Optional[Path]:
        root = os.environ.get(CACHE_ENV)
        if not root:
            return None
        tag = "-".join(map(str, m))
        return Path(root) / f"v{CACHE_VERSION}-{self.ids.signature()[:20]}-r{self.rank}-{tag}.json"

    def _save_cached(self, comp: Component) -> None:
        path = self._cache_path(comp.m)
        if path is None:
            return
        rows = comp.relations.rows
        blob = {
            "version": CACHE_VERSION,
            "variety": self.ids.signature(),
            "rank": self.rank,
            "multidegree": list(comp.m),
            "ambient": comp.ambient_dim,
            "rows": [[p, [[c, format_rational(to_fraction(v))] for c, v in sorted(rows[p].items())]] for p in sorted(rows)],
        }
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(f".tmp{os.getpid()}-{threading.get_ident()}")
        tmp.write_text(json.dumps(blob, separators=(",", ":")))
        os.replace(tmp, path)

    def _load_cached(self, m: MultiDegree) -> Optional[Component]:
        path = self._cache_path(m)
        if path is None or not path.exists() or sum(m) == 1 or self._trivial:
            return None
        try:
            blob = json.loads(path.read_text())
            if blob.get("version") != CACHE_VERSION or blob.get("variety") != self.ids.signature():
                return None
        except (OSError, ValueError):
            return None
        comp = Component(m)
        entries = []
        for a in sub_multidegrees(m):
            ca = self.component(a)
            cb = self.component(_sub(m, a))
            for i, s in enumerate(ca.basis):
                for j, t in enumerate(cb.basis):
                    mono = Monomial(left=s, right=t)
                    entries.append((mono.key(), mono, a, i * cb.dim + j))
        if len(entries) != blob["ambient"]:
            return None
        self._assign_columns(comp, entries)
        rows = comp.relations.rows
        for p, tail in blob["rows"]:
            rows[p] = {c: to_mpq(Fraction(v)) for c, v in tail}
        comp.relations._reduced = True
        comp._finish()
        return comp


_ALGEBRAS: Dict[Tuple[int, int], RelativelyFreeAlgebra] = {}
_ALGEBRAS_LOCK = threading.Lock()


def algebra(ids: IdentitySet, rank: int, cap: Optional[int] = None) -> RelativelyFreeAlgebra:
    """Shared algebra instance per (identity set, rank).  A larger ``cap``
    raises the stored cap; a smaller one leaves it."""
    key = (id(ids), rank)
    with _ALGEBRAS_LOCK:
        alg = _ALGEBRAS.get(key)
        if alg is None or alg.ids is not ids:
            alg = RelativelyFreeAlgebra(ids, rank, cap)
            _ALGEBRAS[key] = alg
        elif cap is not None and cap > alg.cap:
            alg.cap = cap
    return alg


# ---------------------------------------------------------------------------
# public operations


@dataclass(frozen=True)
class NormalVector:
    """Coordinates of an element's image on the standard monomials of one
    multidegree component.  Equal iff the elements are equal in the
    relatively free algebra."""

    multidegree: MultiDegree
    coords: Tuple[Tuple[int, Fraction], ...]

    @classmethod
    def from_vec(cls, m: MultiDegree, v: Vec) -> "NormalVector":
        return cls(tuple(m), tuple(sorted((i, to_fraction(c)) for i, c in v.items() if c)))

    def is_zero(self) -> bool:
        return not self.coords

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(self.coords)


class ComponentNormalizer:
    """Normal-form map for one multidegree of a relatively free algebra."""

    def __init__(self, alg: RelativelyFreeAlgebra, m: MultiDegree):
        self.algebra = alg
        self.identity_set = alg.ids
        self.rank = alg.rank
        self.multidegree = tuple(m)
        self._comp = alg.component(m)
        self._echelon = None

    @property
    def quotient_dim(self) -> int:
        return self._comp.dim

    @property
    def standard_monomials(self) -> List[Monomial]:
        return list(self._comp.basis)

    def monomials(self) -> List[Monomial]:
        return enumerate_monomials(self.rank, self.multidegree)

    @property
    def pivots(self) -> List[Monomial]:
        """Leading monomials of the T-ideal component (the non-standard ones)."""
        std = self._comp.index
        return [w for w in self.monomials() if w not in std]

    @property
    def echelon_basis(self) -> List[FreePoly]:
        """Reduced row-echelon basis of the T-ideal component: ``w - NF(w)``
        for each non-standard monomial ``w``, in canonical order."""
        if self._echelon is None:
            rows = []
            for w in self.pivots:
                m, v = self.algebra.nf_monomial(w)
                rows.append(FreePoly.monomial(w) - self.algebra.to_poly((m, v)))
            self._echelon = rows
        return self._echelon

    def normal_form(self, p: FreePoly) -> NormalVector:
        for mono in p.monomials():
            if mono.multidegree(self.rank) != self.multidegree:
                raise ValueError(
                    f"multidegree mismatch: {mono.multidegree(self.rank)} is not {self.multidegree}"
                )
        v = self.algebra.normal_form(p).get(self.multidegree, {})
        return NormalVector.from_vec(self.multidegree, v)

    def lift(self, nv: NormalVector) -> FreePoly:
        return FreePoly({self._comp.basis[i]: c for i, c in nv.coords})


def normalizer(ids: IdentitySet, rank: int, m: Sequence[int], cap: Optional[int] = None) -> ComponentNormalizer:
    alg = algebra(ids, rank, cap)
    alg.check_cap(sum(m), cap)
    return ComponentNormalizer(alg, tuple(m))


def normal_form(nz: ComponentNormalizer, p: FreePoly) -> NormalVector:
    return nz.normal_form(p)


def quotient_dim(ids: IdentitySet, rank: int, m: Sequence[int], cap: Optional[int] = None) -> int:
    return algebra(ids, rank, cap).dim(m, cap)


def is_identity(ids: IdentitySet, candidate: FreePoly, rank: Optional[int] = None, cap: Optional[int] = None) -> bool:
    """True iff every multihomogeneous component of ``candidate`` vanishes in
    the relatively free algebra of the variety."""
    if candidate.is_zero():
        return True
    rank = rank if rank is not None else candidate.max_generator() + 1
    alg = algebra(ids, rank, cap)
    for d in candidate.degrees():
        alg.check_cap(d, cap)
    return not alg.normal_form(candidate)


def dim_table(ids: IdentitySet, rank: int, max_degree: int, cap: Optional[int] = None, threads: int = 1) -> Dict[int, int]:
    alg = algebra(ids, rank, cap)
    alg.check_cap(max_degree, cap)
    return alg.dim_table(max_degree, threads)


# ---------------------------------------------------------------------------
# direct construction in monomial coordinates (small multidegrees only)


class _DirectTIdeal:
    def __init__(self, ids: IdentitySet, rank: int):
        self.ids = ids
        self.rank = rank
        self.memo: Dict[MultiDegree, Tuple[Echelon, Dict]] = {}

    def echelon(self, m: MultiDegree) -> Tuple[Echelon, Dict]:
        m = tuple(m)
        hit = self.memo.get(m)
        if hit is not None:
            return hit
        e = Echelon()
        monos: Dict = {}

        def add(p: FreePoly):
            v = {}
            for mono, c in p.items():
                k = mono.key()
                monos[k] = mono
                v[k] = c
            e.add(v)

        d = sum(m)
        for f in self.ids.multilinear:
            if f.degree > d:
                continue
            if f.degree == 1:
                for w in enumerate_monomials(self.rank, m):
                    add(FreePoly.monomial(w))
                continue
            for parts in compositions(m, f.degree):
                choices = [enumerate_monomials(self.rank, p) for p in parts]
                for us in product(*choices):
                    add(substitute(f.poly, [FreePoly.monomial(u) for u in us]))
        for a in sub_multidegrees(m):
            lower, lower_monos = self.echelon(a)
            others = enumerate_monomials(self.rank, _sub(m, a))
            for row in lower.basis():
                g = FreePoly({lower_monos[k]: to_fraction(c) for k, c in row.items()})
                for u in others:
                    um = FreePoly.monomial(u)
                    add(g * um)
                    add(um * g)
        e.rref()
        self.memo[m] = (e, monos)
        return e, monos


_DIRECT: Dict[Tuple[int, int], _DirectTIdeal] = {}


def tideal_component(ids: IdentitySet, rank: int, m: Sequence[int], cap: Optional[int] = None) -> List[FreePoly]:
    """Spanning set (reduced echelon basis) of the multidegree-``m`` component
    of the T-ideal, built directly in monomial coordinates: substitution
    instances of the linearized identities, closed under multiplication by
    monomials of every degree on either side.

    Independent of :class:`RelativelyFreeAlgebra`; cost grows like the
    number of monomials, so keep ``m`` small.
    """
    m = tuple(m)
    if len(m) != rank:
        raise ValueError(f"multidegree {m} does not match rank {rank}")
    if not any(m):
        raise ValueError("empty multidegree")
    limit = default_cap(rank) if cap is None else cap
    if sum(m) > limit:
        raise CapExceededError(sum(m), limit, rank)
    direct = _DIRECT.setdefault((id(ids), rank), _DirectTIdeal(ids, rank))
    e, monos = direct.echelon(m)
    return [FreePoly({monos[k]: to_fraction(c) for k, c in row.items()}) for row in e.basis()]
