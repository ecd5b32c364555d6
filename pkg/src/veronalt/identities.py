"""Identity sets defining varieties of algebras."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .termlang import format_poly, parse
from .terms import FreePoly, Monomial, linearize


@dataclass(frozen=True)
class MultilinearIdentity:
    """A multilinear identity in variables 0..k-1, ready for substitution.

    ``terms`` pairs each coefficient with a monomial whose leaf word is a
    permutation of 0..k-1.  ``symmetries`` lists variable permutations
    that map the identity to a scalar multiple of itself; substitution
    tuples related by them give proportional instances.
    """

    poly: FreePoly
    degree: int
    terms: Tuple[Tuple[Fraction, Monomial], ...]
    symmetries: Tuple[Tuple[int, ...], ...]


def _permute(p: FreePoly, perm) -> FreePoly:
    return FreePoly({Monomial.from_shape(m.degree, m.shape, [perm[g] for g in m.word]): c for m, c in p.items()})


def _proportional(p: FreePoly, q: FreePoly) -> bool:
    if len(p) != len(q):
        return False
    (m0, c0), = list(p.sorted_terms())[:1]
    ratio = q.coefficient(m0) / c0
    return ratio != 0 and all(q.coefficient(m) == c * ratio for m, c in p.items())


def _symmetries(p: FreePoly, k: int) -> Tuple[Tuple[int, ...], ...]:
    if k > 6:
        return ((tuple(range(k))),)
    return tuple(perm for perm in permutations(range(k)) if _proportional(p, _permute(p, perm)))


@dataclass(eq=False)
class IdentitySet:
    """A named list of defining identities.

    Each identity is a :class:`FreePoly` in abstract variables; the engine
    only ever sees the full linearizations, reduced to a basis.
    """

    name: str
    defining: List[FreePoly] = field(default_factory=list)

    def __post_init__(self):
        self.defining = [p for p in self.defining if not p.is_zero()]
        self._multilinear: Optional[List[MultilinearIdentity]] = None

    @property
    def multilinear(self) -> List[MultilinearIdentity]:
        if self._multilinear is None:
            self._multilinear = self._linearize()
        return self._multilinear

    def _linearize(self) -> List[MultilinearIdentity]:
        from .linalg import Echelon

        by_degree: Dict[int, Echelon] = {}
        kept: List[FreePoly] = []
        for p in self.defining:
            for lin in linearize(p):
                k = next(iter(lin.monomials())).degree
                e = by_degree.setdefault(k, Echelon())
                # independence up to permutations of variables is not checked;
                # exact duplicates and linear dependencies are dropped
                if e.add({m.key(): c for m, c in lin.items()}):
                    kept.append(lin)
        out = []
        for lin in kept:
            k = next(iter(lin.monomials())).degree
            terms = tuple((c, m) for m, c in lin.sorted_terms())
            out.append(MultilinearIdentity(lin, k, terms, _symmetries(lin, k)))
        return out

    @property
    def min_degree(self) -> Optional[int]:
        return min((f.degree for f in self.multilinear), default=None)

    def signature(self) -> str:
        """Stable text identifying the variety's defining identities."""
        body = "\n".join(sorted(format_poly(f.poly) for f in self.multilinear))
        return hashlib.sha256(body.encode()).hexdigest()

    def __repr__(self):
        return f"IdentitySet({self.name!r}, {[format_poly(p) for p in self.defining]})"


def _ids(name: str, *texts: str) -> IdentitySet:
    return IdentitySet(name, [parse(t) for t in texts])


ASSOCIATIVE = _ids("assoc", "assoc(x,y,z)")
ALTERNATIVE = _ids("alt", "assoc(x,x,y)", "assoc(y,x,x)")
RIGHT_ALTERNATIVE = _ids("ralt", "assoc(y,x,x)")
NONASSOC_FREE = IdentitySet("nonassoc", [])

BUILTIN_VARIETIES = {
    "assoc": ASSOCIATIVE,
    "alt": ALTERNATIVE,
    "ralt": RIGHT_ALTERNATIVE,
    "nonassoc": NONASSOC_FREE,
}


def load_identity_file(path, name: Optional[str] = None) -> IdentitySet:
    """Read a custom variety: one identity per line, ``#`` starts a comment line.

    Variables in each line are named freely; they are numbered by first
    appearance within that line.
    """
    path = Path(path)
    polys = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        try:
            polys.append(parse(text, names="auto"))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return IdentitySet(name or f"custom:{path}", polys)


def variety(selector: str) -> IdentitySet:
    """Resolve ``alt | assoc | ralt | nonassoc | custom:<path>``."""
    if selector in BUILTIN_VARIETIES:
        return BUILTIN_VARIETIES[selector]
    if selector.startswith("custom:"):
        return load_identity_file(selector[len("custom:"):], name=selector)
    raise ValueError(f"unknown variety {selector!r}; expected alt, assoc, ralt, nonassoc or custom:<path>")
