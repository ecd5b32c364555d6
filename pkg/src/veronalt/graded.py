"""Graded subspaces of a relatively free algebra."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional

from .linalg import Subspace, Vector


@dataclass
class GradedSubspace:
    """Per-grade subspaces in normal-form coordinates.

    Grades are multidegrees (vectors indexed by standard-monomial position)
    or, for subspaces that mix multidegrees such as group invariants, total
    degrees (vectors indexed by ``(multidegree, position)``).
    """

    components: Dict[Hashable, Subspace] = field(default_factory=dict)
    cutoff: Optional[int] = None

    def __getitem__(self, grade) -> Subspace:
        return self.components[grade]

    def __iter__(self):
        return iter(self.components)

    def items(self):
        return self.components.items()

    @property
    def dims(self) -> Dict[Hashable, int]:
        return {g: s.dim for g, s in self.components.items()}

    @property
    def dim(self) -> int:
        return sum(s.dim for s in self.components.values())

    def basis(self, grade) -> List[Vector]:
        return self.components[grade].basis()

    def __le__(self, other: "GradedSubspace") -> bool:
        for g, s in self.components.items():
            if s.dim == 0:
                continue
            if g not in other.components or not s <= other.components[g]:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, GradedSubspace):
            return NotImplemented
        return self <= other and other <= self
