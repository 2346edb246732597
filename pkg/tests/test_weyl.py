import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eozip import weyl
from eozip.weyl import EOType, SignedPermutation


def signed_perms(g):
    return st.permutations(range(1, g + 1)).flatmap(
        lambda perm: st.lists(st.sampled_from((1, -1)), min_size=g, max_size=g).map(
            lambda signs: SignedPermutation(tuple(s * x for s, x in zip(signs, perm)))
        )
    )


@pytest.mark.parametrize("g", range(1, 5))
def test_group_order_and_lengths(g):
    elems = list(weyl.all_elements(g))
    assert len(elems) == weyl.group_order(g) == 2**g * len(list(itertools.permutations(range(g))))
    bfs = weyl.bfs_lengths(g)
    assert len(bfs) == len(elems)
    assert all(weyl.length(w) == bfs[w] for w in elems)


@given(signed_perms(4), signed_perms(4))
def test_group_laws(a, b):
    e = SignedPermutation.identity(4)
    assert weyl.compose(a, weyl.inverse(a)) == e
    assert weyl.compose(e, a) == a
    c = weyl.compose(a, b)
    assert weyl.inverse(c) == weyl.compose(weyl.inverse(b), weyl.inverse(a))


@pytest.mark.parametrize("g", range(1, 5))
def test_min_coset_reps_against_brute_force(g):
    table = weyl.min_coset_reps(g)
    brute = weyl.min_coset_reps_brute(g)
    assert len(table) == len(brute) == 2**g
    keys = {weyl.coset_key(r.rep) for r in table.rows}
    assert len(keys) == 2**g
    for r in table.rows:
        assert brute[weyl.coset_key(r.rep)] == [r.rep]
        assert r.length == r.eo_type.codimension


def test_g1_reps():
    table = weyl.min_coset_reps(1)
    assert table.lengths() == [0, 1]


def test_coset_is_left_sn_orbit():
    g = 3
    w = SignedPermutation((2, -3, 1))
    for perm in itertools.permutations(range(1, g + 1)):
        sigma = SignedPermutation(perm)
        assert weyl.coset_key(weyl.compose(sigma, w)) == weyl.coset_key(w)


@pytest.mark.parametrize("g", range(1, 6))
def test_poincare_polynomial(g):
    from eozip.taut_ring import hilbert_function

    assert weyl.coefficients(weyl.poincare_WP(g)) == hilbert_function(g)


def test_eo_types():
    assert len(EOType.all(3)) == 8
    assert EOType(3, (3, 1)).codimension == 4
    with pytest.raises(ValueError):
        EOType(2, (3,))
    with pytest.raises(ValueError):
        EOType(3, (1, 2))
    t = EOType(3, (2, 1))
    assert EOType.from_json(t.to_json()) == t
    assert EOType.parse(3, str(t)) == t and EOType.parse(2, "[]") == EOType(2, ())
    assert weyl.eo_type_of_rep(weyl.rep_of_eo_type(t)) == t


def test_coset_table_csv():
    text = weyl.min_coset_reps(2).to_csv().splitlines()
    assert text[0] == "rep,length,partition"
    assert len(text) == 5


def test_iota_table_shipped_and_conjecture():
    assert weyl.iota_is_verified(2, 1) and weyl.iota_is_verified(3, 1) and weyl.iota_is_verified(3, 2)
    assert not weyl.iota_is_verified(4, 1)
    t = EOType(3, (2, 1))
    assert weyl.iota_embedding(4, 1, t) == EOType(4, (2, 1))
    with pytest.raises(LookupError):
        weyl.iota_embedding(4, 1, t, allow_conjecture=False)
    with pytest.raises(ValueError):
        weyl.iota_embedding(3, 1, t)


@pytest.mark.parametrize("g,r", [(2, 1), (3, 1), (3, 2)])
def test_iota_preserves_codimension_and_is_injective(g, r):
    table = weyl.iota_table()[(g, r)]
    assert len(set(table.values())) == len(table) == 2 ** (g - r)
    assert all(sum(a) == sum(b) for a, b in table.items())
