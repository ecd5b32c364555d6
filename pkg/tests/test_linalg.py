from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from veronalt.linalg import Echelon, Subspace, kernel, rank, to_fraction

entry = st.integers(-3, 3)
matrix = st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(entry, min_size=n, max_size=n), min_size=1, max_size=6))


def _dicts(rows):
    return [{j: v for j, v in enumerate(r) if v} for r in rows]


@given(matrix)
def test_rank_matches_sympy(rows):
    assert rank(_dicts(rows)) == sympy.Matrix(rows).rank()


@given(matrix)
def test_rref_matches_sympy(rows):
    e = Echelon()
    for v in _dicts(rows):
        e.add(v)
    e.rref()
    ref, pivots = sympy.Matrix(rows).rref()
    assert sorted(e.rows) == list(pivots)
    for i, p in enumerate(pivots):
        want = {j: Fraction(int(ref[i, j].p), int(ref[i, j].q)) for j in range(ref.cols) if ref[i, j] != 0}
        got = {p: Fraction(1)}
        got.update({j: to_fraction(c) for j, c in e.rows[p].items()})
        assert got == want


@given(matrix)
def test_kernel_vectors_are_relations(rows):
    vecs = _dicts(rows)
    ker = kernel(vecs)
    assert len(ker) == len(rows) - rank(vecs)
    for k in ker:
        total = {}
        for i, c in k.items():
            for j, v in vecs[i].items():
                total[j] = total.get(j, 0) + c * v
        assert not any(total.values())


def test_subspace_ops():
    a = Subspace([{0: 1, 1: 1}], ambient=3)
    b = Subspace([{0: 1}, {1: 1}], ambient=3)
    assert a <= b and not b <= a
    assert (a + b) == b
    assert b.residual({0: 2, 2: 5}) == {2: 5}
    assert Subspace.full(range(3)).dim == 3
