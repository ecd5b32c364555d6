import cmath
import random
from fractions import Fraction

import pytest

from veronalt.engine import algebra, tideal_component
from veronalt.groups import (
    Cyclotomic,
    GroupClosureError,
    GroupError,
    LinearGroupAction,
    apply,
    parse_group,
    reynolds,
)
from veronalt.identities import ALTERNATIVE, ASSOCIATIVE, RIGHT_ALTERNATIVE
from veronalt.linalg import Echelon, rank
from veronalt.termlang import parse
from veronalt.terms import FreePoly, enumerate_monomials, monomial_count, multidegrees
from veronalt.veronese import (
    VeroneseConfig,
    act_vector,
    invariant_component,
    invariant_generators,
    mixed_product,
    new_generators,
    veronese_component,
    veronese_mixed,
)

from conftest import random_poly

SWAP = LinearGroupAction.permutation(2, [1, 0])
MINUS = LinearGroupAction([[[-1, 0], [0, -1]]])


def _complex(c: Cyclotomic) -> complex:
    z = cmath.exp(2j * cmath.pi / c.n)
    return sum(float(v) * z ** k for k, v in enumerate(c.c))


def test_cyclotomic_arithmetic_matches_complex_numbers():
    rng = random.Random(5)
    for n in (3, 4, 5, 12):
        phi = len(Cyclotomic.rational(n, 0).c)
        for _ in range(20):
            a = Cyclotomic(n, [Fraction(rng.randint(-3, 3)) for _ in range(phi)])
            b = Cyclotomic(n, [Fraction(rng.randint(-3, 3)) for _ in range(phi)])
            assert abs(_complex(a * b) - _complex(a) * _complex(b)) < 1e-9
            assert abs(_complex(a + b) - (_complex(a) + _complex(b))) < 1e-9
    w = Cyclotomic.root(3)
    assert w * w * w == 1
    assert 1 + w + w * w == 0
    assert Cyclotomic.root(6, 2) == w


def test_group_closure_orders():
    assert SWAP.order == 2 and MINUS.order == 2
    assert LinearGroupAction.scalar(2, 3).order == 3
    s3 = LinearGroupAction([[[0, 1, 0], [1, 0, 0], [0, 0, 1]], [[0, 0, 1], [1, 0, 0], [0, 1, 0]]])
    assert s3.order == 6
    assert LinearGroupAction.trivial(2).order == 1


def test_group_errors():
    with pytest.raises(GroupClosureError):
        LinearGroupAction([[[1, 1], [0, 1]]], bound=50)
    with pytest.raises(GroupError, match="not invertible"):
        LinearGroupAction([[[1, 0], [0, 0]]])
    with pytest.raises(GroupError):
        LinearGroupAction([[[1, 0], [0, 1]], [[1]]])


def test_group_file_format():
    g = parse_group("# swap\n0 1\n1 0\n\n-1 0\n0 -1\n")
    assert g.order == 4
    h = parse_group("zeta3 0\n0 zeta3\n")
    assert h.order == 3
    k = parse_group("0 -1\n1 0\n")
    assert k.order == 4
    with pytest.raises(GroupError, match="bad matrix entry"):
        parse_group("1 x\n0 1\n")


def test_reynolds_examples():
    assert reynolds(MINUS, parse("x*y")) == parse("x*y")
    assert reynolds(MINUS, parse("x")).is_zero()
    assert reynolds(SWAP, parse("x*y")) == parse("1/2*x*y + 1/2*y*x")


@pytest.mark.parametrize("group", [SWAP, MINUS, LinearGroupAction.scalar(2, 3), LinearGroupAction.scalar(2, 4)])
def test_reynolds_projector_properties(group, rng):
    for _ in range(25):
        p = random_poly(rng, 2, 4)
        r = reynolds(group, p)
        assert reynolds(group, r) == r
        # compatible with the total-degree grading
        for d in p.degrees():
            part = FreePoly({w: c for w, c in p.items() if w.degree == d})
            assert reynolds(group, part) == FreePoly({w: c for w, c in r.items() if w.degree == d})
        if group in (SWAP, MINUS):
            assert apply(group.generators[0], r) == r


def test_veronese_component_examples():
    cfg = VeroneseConfig(2, ALTERNATIVE, 2, 6)
    assert veronese_component(cfg, 3).dim == 0
    assert veronese_component(cfg, 2).dim == 4
    assert veronese_component(VeroneseConfig(3, ASSOCIATIVE, 2, 6), 6).dim == 64
    with pytest.raises(ValueError):
        veronese_component(cfg, 7)
    with pytest.raises(ValueError):
        VeroneseConfig(1, ALTERNATIVE, 2, 6)


def test_veronese_closure_under_products():
    alg = algebra(RIGHT_ALTERNATIVE, 2)
    cfg = VeroneseConfig(2, RIGHT_ALTERNATIVE, 2, 6)
    a, b = veronese_mixed(cfg, 2), veronese_mixed(cfg, 4)
    target = veronese_mixed(cfg, 6)
    for x in a.basis():
        for y in b.basis()[:10]:
            assert target.contains(mixed_product(alg, x, y))


def test_associative_veronese_counts():
    r = new_generators(VeroneseConfig(2, ASSOCIATIVE, 2, 6))
    assert r.new_counts == [4, 0, 0]
    assert [d.degree for d in r.degrees] == [2, 4, 6]
    assert all(d.new_count == d.dim_target - d.dim_generated >= 0 for d in r.degrees)


def _direct_generated_count(ids, n, m):
    """New Veronese generators at multidegree m from the monomial-coordinate
    T-ideal: target minus span of products of degree-multiple-of-n monomials."""
    tideal = tideal_component(ids, len(m), m)
    e = Echelon()
    for p in tideal:
        e.add({mono.key(): c for mono, c in p.items()})
    base = e.dim
    for w in enumerate_monomials(len(m), m):
        if w.left.degree % n == 0:
            e.add({w.key(): 1})
    return monomial_count(m) - base, e.dim - base


def test_right_alternative_degree_four_against_direct_oracle():
    report = new_generators(VeroneseConfig(2, RIGHT_ALTERNATIVE, 2, 4))
    target = generated = 0
    for m in multidegrees(2, 4):
        t, g = _direct_generated_count(RIGHT_ALTERNATIVE, 2, m)
        target += t
        generated += g
    assert (report[4].dim_target, report[4].dim_generated) == (target, generated)
    assert report[4].new_count > 0


def test_counts_do_not_depend_on_basis_choice(rng):
    cfg = VeroneseConfig(2, RIGHT_ALTERNATIVE, 2, 4)
    report = new_generators(cfg)
    alg = algebra(RIGHT_ALTERNATIVE, 2)
    basis = veronese_mixed(cfg, 2).basis()
    mixed = []
    for _ in range(len(basis)):
        v = {}
        for b in basis:
            c = rng.randint(-3, 3)
            for k, x in b.items():
                v[k] = v.get(k, 0) + c * x
        mixed.append({k: x for k, x in v.items() if x})
    assert rank(mixed) == len(basis)
    prods = [mixed_product(alg, x, y) for x in mixed for y in mixed]
    assert rank([p for p in prods if p]) == report[4].dim_generated


def test_swap_invariants_degree_two():
    comp = invariant_component(SWAP, ASSOCIATIVE, 2)[2]
    assert comp.dim == 2
    alg = algebra(ASSOCIATIVE, 2)
    for text in ("x*x + y*y", "x*y + y*x"):
        nf = alg.normal_form(parse(text))
        assert comp.contains({(m, i): c for m, v in nf.items() for i, c in v.items()})


def test_invariant_vectors_fixed_by_generators():
    alg = algebra(RIGHT_ALTERNATIVE, 2)
    for d in (2, 3, 4):
        for v in invariant_component(SWAP, RIGHT_ALTERNATIVE, d)[d].basis():
            assert act_vector(SWAP, alg, 0, v) == v


def test_scalar_invariants():
    for d in (1, 3, 5):
        assert invariant_component(MINUS, RIGHT_ALTERNATIVE, d)[d].dim == 0
    cfg = VeroneseConfig(2, RIGHT_ALTERNATIVE, 2, 4)
    for d in (2, 4):
        assert invariant_component(MINUS, RIGHT_ALTERNATIVE, d)[d] == veronese_mixed(cfg, d)


def test_scalar_order_two_report_matches_veronese():
    inv = invariant_generators(MINUS, ALTERNATIVE, 6)
    ver = new_generators(VeroneseConfig(2, ALTERNATIVE, 2, 6))
    even = [r for r in inv.summary() if r[0] % 2 == 0]
    assert even == ver.summary()
    assert all(r[1] == 0 for r in inv.summary() if r[0] % 2)


def test_trivial_group_generators_in_degree_one():
    r = invariant_generators(LinearGroupAction.trivial(2), ALTERNATIVE, 4)
    assert r.new_counts == [2, 0, 0, 0]


def test_swap_associative_keeps_needing_generators():
    r = invariant_generators(SWAP, ASSOCIATIVE, 6)
    assert [d.dim_target for d in r.degrees] == [2 ** (d - 1) for d in range(1, 7)]
    assert all(c > 0 for c in r.new_counts[2:])
