from itertools import permutations

import pytest

from veronalt.engine import (
    CapExceededError,
    RelativelyFreeAlgebra,
    algebra,
    dim_table,
    is_identity,
    normal_form,
    normalizer,
    quotient_dim,
    tideal_component,
)
from veronalt.identities import ALTERNATIVE, ASSOCIATIVE, NONASSOC_FREE, RIGHT_ALTERNATIVE
from veronalt.termlang import format_poly, parse
from veronalt.terms import FreePoly, associator, catalan, monomial_count, multidegrees, substitute

from conftest import random_poly

ORACLE_CASES = [
    (ids, m)
    for ids in (ALTERNATIVE, RIGHT_ALTERNATIVE, ASSOCIATIVE)
    for m in [(2, 1), (2, 2), (3, 1), (3, 2), (1, 1, 1), (2, 1, 1)]
]


@pytest.mark.parametrize("ids,m", ORACLE_CASES, ids=lambda v: getattr(v, "name", str(v)))
def test_echelon_basis_matches_direct_tideal(ids, m):
    nz = normalizer(ids, len(m), m)
    direct = tideal_component(ids, len(m), m)
    assert [format_poly(p) for p in nz.echelon_basis] == [format_poly(p) for p in direct]
    assert nz.quotient_dim == monomial_count(m) - len(direct)


@pytest.mark.parametrize("m", [(2, 1), (1, 1, 1), (2, 2)])
def test_echelon_rows_normalize_to_zero(m):
    nz = normalizer(ALTERNATIVE, len(m), m)
    for row in nz.echelon_basis:
        assert normal_form(nz, row).is_zero()
    std = nz.standard_monomials
    assert len(std) + len(nz.pivots) == monomial_count(m)


def test_small_examples():
    assert quotient_dim(ALTERNATIVE, 2, (2, 1)) == 3
    assert quotient_dim(ALTERNATIVE, 3, (1, 1, 1)) == 7
    assert quotient_dim(RIGHT_ALTERNATIVE, 2, (2, 1)) == 4


def test_trivial_dimension_tables():
    assert dim_table(ASSOCIATIVE, 2, 6) == {d: 2 ** d for d in range(1, 7)}
    assert dim_table(NONASSOC_FREE, 1, 6) == {d: catalan(d - 1) for d in range(1, 7)}


@pytest.mark.parametrize("m", [(2, 1, 0), (2, 1, 1), (3, 1, 1)])
def test_dimension_symmetric_under_relabeling(m):
    dims = {quotient_dim(ALTERNATIVE, 3, p) for p in set(permutations(m))}
    assert len(dims) == 1


def test_dimension_monotone_in_identities():
    # more identities, smaller quotient: alt <= ralt <= nonassoc
    for d in range(1, 6):
        for m in multidegrees(2, d):
            a = quotient_dim(ALTERNATIVE, 2, m)
            r = quotient_dim(RIGHT_ALTERNATIVE, 2, m)
            assert a <= r <= monomial_count(m)


def test_normal_form_is_multiplicative(rng):
    alg = algebra(ALTERNATIVE, 3)
    for _ in range(40):
        p, q = random_poly(rng, 3, 3, 3), random_poly(rng, 3, 3, 3)
        lhs = alg.normal_form(p * q)
        rhs = {}
        for ma, va in alg.normal_form(p).items():
            for mb, vb in alg.normal_form(q).items():
                m, v = alg.mul((ma, va), (mb, vb))
                for k, c in v.items():
                    rhs.setdefault(m, {})[k] = rhs.get(m, {}).get(k, 0) + c
        rhs = {m: {k: c for k, c in v.items() if c} for m, v in rhs.items()}
        assert lhs == {m: v for m, v in rhs.items() if v}


def test_substitution_instances_vanish(rng):
    # T-ideal is closed under substitutions
    f = associator(FreePoly.gen(0), FreePoly.gen(0), FreePoly.gen(1))
    for _ in range(15):
        u, v = random_poly(rng, 2, 2, 2), random_poly(rng, 2, 2, 2)
        assert is_identity(ALTERNATIVE, substitute(f, [u, v]), rank=2)


def test_ideal_closure(rng):
    # multiplying an identity by anything stays an identity
    f = parse("assoc(x,y,z) + assoc(y,x,z)")
    for _ in range(10):
        w = random_poly(rng, 3, 2, 2)
        assert is_identity(ALTERNATIVE, f * w, rank=3)
        assert is_identity(ALTERNATIVE, w * f, rank=3)


def test_is_identity_verdicts():
    assert not is_identity(ALTERNATIVE, parse("assoc(x,y,z)"))
    assert is_identity(ASSOCIATIVE, parse("assoc(x*y,z,x)"))
    assert not is_identity(RIGHT_ALTERNATIVE, parse("assoc(x,x,y)"))
    assert is_identity(ALTERNATIVE, FreePoly.zero())


def test_normal_vectors_decide_equality():
    nz = normalizer(ALTERNATIVE, 2, (2, 1))
    a = nz.normal_form(parse("x*(x*y)"))
    b = nz.normal_form(parse("(x*x)*y"))
    c = nz.normal_form(parse("(x*y)*x"))
    assert a == b
    assert a != c
    assert normal_form(nz, nz.lift(a)) == a


def test_multidegree_mismatch():
    nz = normalizer(ALTERNATIVE, 2, (2, 1))
    with pytest.raises(ValueError, match="multidegree mismatch"):
        nz.normal_form(parse("x*y"))


def test_cap_error_names_flag():
    with pytest.raises(CapExceededError, match="--cap"):
        quotient_dim(ALTERNATIVE, 3, (3, 3, 1))
    # explicit cap lifts the limit for a small component
    assert quotient_dim(NONASSOC_FREE, 4, (2, 1, 1, 2), cap=6) == catalan(5) * 180


def test_threaded_build_matches_serial():
    serial = RelativelyFreeAlgebra(RIGHT_ALTERNATIVE, 3)
    threaded = RelativelyFreeAlgebra(RIGHT_ALTERNATIVE, 3)
    for d in range(1, 5):
        a = [(c.m, c.dim, c.basis) for c in serial.build_degree(d)]
        b = [(c.m, c.dim, c.basis) for c in threaded.build_degree(d, threads=4)]
        assert a == b


def test_cache_dir_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv("VERONALT_CACHE_DIR", str(tmp_path))
    first = RelativelyFreeAlgebra(ALTERNATIVE, 2)
    first.build_degree(5)
    blobs = list(tmp_path.glob("*.json"))
    assert blobs
    second = RelativelyFreeAlgebra(ALTERNATIVE, 2)
    p = parse("assoc(x*y,x,y*y) + (x*y)*(x*(y*x))")
    assert second.normal_form(p) == first.normal_form(p)
    assert [second.component(m).basis for m in multidegrees(2, 5)] == [first.component(m).basis for m in multidegrees(2, 5)]
