import pytest
from hypothesis import given
from hypothesis import strategies as st

from eozip import brokemper
from eozip.brokemper import CharacterRing, TwistData
from eozip.poly_core import Polynomial
from eozip.weyl import SignedPermutation, all_elements


def x(i, g):
    return Polynomial.generator(i, (1,) * g, var="x")


def test_borel_generators():
    assert brokemper.borel_ideal_gens(1) == [x(1, 1) * x(1, 1)]
    a, b = brokemper.borel_ideal_gens(2)
    assert a == x(1, 2) ** 2 + x(2, 2) ** 2 and b == x(1, 2) ** 2 * x(2, 2) ** 2
    assert [f.degree() for f in brokemper.borel_ideal_gens(3)] == [2, 4, 6]


def test_twisted_generators():
    assert brokemper.twisted_ideal_gens(1, 2) == [(x(1, 1) ** 2).scale(-3)]
    first = brokemper.twisted_ideal_gens(2, 3)[0]
    assert first == (x(1, 2) ** 2 + x(2, 2) ** 2).scale(1 - 9)
    with pytest.raises(ValueError):
        brokemper.twisted_ideal_gens(2, 4)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_generators_are_weyl_invariant(g):
    ring = CharacterRing(g)
    for f in brokemper.borel_ideal_gens(g):
        assert all(ring.act(w, f) == f for w in all_elements(g))
    for j in range(1, g + 1):
        assert ring.is_symmetric(ring.elementary(j)) and not ring.is_weyl_invariant(ring.elementary(j))


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("g", [2, 3])
def test_twist_scales_invariants(g, p):
    tw = TwistData(g, p)
    for f in brokemper.borel_ideal_gens(g):
        assert tw.apply(f) == f.scale(p ** f.degree())
    # any Weyl element gives the same action on invariants
    other = TwistData(g, p, SignedPermutation.identity(g))
    for f in brokemper.borel_ideal_gens(g):
        assert other.apply(f) == tw.apply(f)


@pytest.mark.parametrize("g,p,d_max", [(2, 2, 6), (3, 2, 12), (3, 3, 12), (3, 5, 12)])
def test_ideals_equal(g, p, d_max):
    rep = brokemper.ideals_equal_by_degree(g, p, d_max)
    assert rep.ok
    assert rep.degrees[1].rank_borel == rep.degrees[1].rank_twisted == 0


def test_report_json_shape():
    obj = brokemper.ideals_equal_by_degree(2, 2).to_json()
    assert obj["g"] == 2 and obj["p"] == 2
    assert obj["degrees"][2] == {"d": 2, "rank_borel": 1, "rank_twisted": 1, "rank_joint": 1, "equal": True}


def test_chern_map():
    assert brokemper.chern_map_check(2).quotient_dims == [1, 1, 1, 1]
    rep = brokemper.chern_map_check(3, 6)
    assert rep.ok and rep.quotient_dims == [1, 1, 1, 2, 1, 1, 1]


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_borel_quotient_total_dimension(g):
    dims = brokemper.borel_quotient_dims(g, g * (g + 1) // 2 + 2)
    assert sum(dims) == 2**g and dims[-2:] == [0, 0]


def test_symmetric_dimension_counts_partitions():
    assert [brokemper.symmetric_dimension(2, d) for d in range(6)] == [1, 1, 2, 2, 3, 3]


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_membership_detects_non_members(cs):
    g = 2
    gens = brokemper.borel_ideal_gens(g)
    ring = CharacterRing(g)
    e1, e2 = ring.elementary(1), ring.elementary(2)
    f = (e1 * e1).scale(cs[0]) + e2.scale(cs[1])
    # degree-2 slice of the ideal is spanned by e1^2 - 2 e2
    assert brokemper.in_ideal(g, gens, f) == (cs[1] == -2 * cs[0])
