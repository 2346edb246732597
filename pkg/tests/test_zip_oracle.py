import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eozip import gf
from eozip import zip_oracle as zo
from eozip.weyl import EOType


def J(g):
    return gf.standard_form(g)


def brute_lagrangians(g, p):
    """Spans of all isotropic g-tuples of vectors, deduplicated."""
    vecs = gf.all_vectors(2 * g, p)[1:]
    seen = set()
    for combo in itertools.combinations(range(len(vecs)), g):
        rows = vecs[list(combo)]
        if gf.rank(rows, p) == g and not ((rows @ J(g) @ rows.T) % p).any():
            seen.add(gf.row_space(rows, p).tobytes())
    return len(seen)


def brute_zip_count(g, p):
    mats = gf.all_matrices(2 * g, 2 * g, p)
    j = J(g)
    iso = ~((np.einsum("nki,kl,nlj->nij", mats, j, mats) % p).any(axis=(1, 2)))
    iso &= ~((np.einsum("nik,kl,njl->nij", mats, j, mats) % p).any(axis=(1, 2)))
    return sum(1 for m in mats[iso] if gf.rank(m, p) == g)


@pytest.mark.parametrize("g,p,n", [(1, 2, 3), (2, 2, 15), (2, 3, 40), (1, 5, 6)])
def test_lagrangian_counts(g, p, n):
    lag = zo.lagrangian_matrices(g, p)
    assert len(lag) == n == gf.lagrangian_count(g, p)
    assert len({m.tobytes() for m in lag}) == n


@pytest.mark.parametrize("g,p", [(1, 2), (1, 3), (2, 2)])
def test_lagrangians_against_brute_force(g, p):
    assert brute_lagrangians(g, p) == len(zo.enumerate_lagrangians(g, p))


@pytest.mark.parametrize("g,p,n", [(1, 2, 9), (1, 3, 32), (1, 5, 144), (2, 2, 1350)])
def test_zip_counts(g, p, n):
    mats = zo.zip_matrices(g, p)
    assert len(mats) == n == zo.zip_count(g, p)
    assert len({m.tobytes() for m in mats}) == n
    assert all(zo.is_zip_matrix(m, g, p) for m in mats)


@pytest.mark.parametrize("g,p", [(1, 2), (1, 3), (2, 2)])
def test_zip_count_against_all_matrices(g, p):
    assert brute_zip_count(g, p) == zo.zip_count(g, p)


def test_triple_round_trip():
    for z in zo.enumerate_zips(1, 3) + zo.enumerate_zips(2, 2)[::37]:
        l1, l2, phi = z.triple()
        assert gf.rank(phi, z.p) == z.g
        assert zo.zip_from_triple(l1, l2, phi) == z


def test_g1_invariants():
    rep = zo.orbit_decomposition(1, 2)
    assert rep.zip_count == 9 and rep.orbit_count == 2
    by_type = {c.eo_type.parts: c for c in rep.classes}
    assert by_type[()].points == 6 and by_type[()].p_rank == 1
    assert by_type[(1,)].points == 3 and by_type[(1,)].p_rank == 0
    for z in zo.enumerate_zips(1, 2):
        ss = z.kernel() == z.image()
        assert zo.eo_type(z) == EOType(1, (1,) if ss else ())
        assert zo.p_rank(z) == (0 if ss else 1)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_projection_is_ordinary(g):
    f = np.zeros((2 * g, 2 * g), dtype=np.int64)
    f[:g, :g] = np.eye(g, dtype=np.int64)  # onto <e> along <f>
    z = zo.Zip(g, 2, f)
    assert z.is_valid()
    assert zo.eo_type(z) == EOType(g, ()) and zo.p_rank(z) == g


@pytest.mark.parametrize("p", [2, 3, 5])
def test_g1_two_classes(p):
    assert zo.orbit_decomposition(1, p).distinct_invariants == 2


def test_g2_p2_report():
    rep = zo.orbit_decomposition(2, 2)
    assert rep.distinct_invariants == 4 and rep.invariant_constant_on_orbits
    assert sorted(rep.p_rank_histogram()) == [0, 1, 2]
    ordinary = rep.classes[0]
    assert ordinary.eo_type.parts == () and ordinary.p_rank == 2
    assert sum(sum(c.orbit_sizes) for c in rep.classes) == rep.zip_count
    assert [c.eo_type.codimension for c in rep.classes] == [0, 1, 2, 3]


@pytest.mark.slow
def test_g2_p3_report():
    rep = zo.orbit_decomposition(2, 3)
    assert rep.zip_count == 76800 and rep.distinct_invariants == 4
    assert rep.invariant_constant_on_orbits


def test_p_rank_matches_stable_rank():
    for m in zo.zip_matrices(2, 2)[::7]:
        a = zo.analyze_matrix(m, 2, 2)
        assert a.p_rank == gf.rank(np.linalg.matrix_power(m, 4) % 2, 2)


@pytest.mark.parametrize("g,p", [(1, 2), (1, 3), (2, 2)])
def test_generators_generate_sp(g, p):
    gens = zo.sp_generators(g, p)
    assert all(zo.is_symplectic(s, g, p) for s in gens)
    assert zo.generated_group_order(g, p) == gf.sp_order(g, p)


@given(st.integers(0, 10**6), st.integers(0, 1349))
def test_invariant_under_random_conjugation(seed, idx):
    rng = random.Random(seed)
    gens = zo.sp_generators(2, 2)
    s = np.eye(4, dtype=np.int64)
    for _ in range(10):
        s = (s @ rng.choice(gens)) % 2
    f = zo.zip_matrices(2, 2)[idx]
    moved = (s @ f @ gf.inverse(s, 2)) % 2
    assert zo.is_zip_matrix(moved, 2, 2)
    assert zo.analyze_matrix(moved, 2, 2) == zo.analyze_matrix(f, 2, 2)


def test_invariant_string_round_trip():
    inv = zo.zip_invariant(zo.enumerate_zips(2, 2)[100])
    assert zo.ZipInvariant.parse(inv.key()) == inv


def test_elementary_sequences():
    assert zo.eo_type_from_sequence((1, 2)) == EOType(2, ())
    assert zo.eo_type_from_sequence((0, 0)) == EOType(2, (2, 1))
    assert zo.eo_type_from_sequence((0, 1)) == EOType(2, (2,))
    assert zo.eo_type_from_sequence((1, 1)) == EOType(2, (1,))
    with pytest.raises(zo.OracleError):
        zo.eo_type_from_sequence((0, 2))


@pytest.mark.parametrize("p", [2, 3])
def test_isotropic_locus_matches_filter(p):
    g, r = 2, 1
    locus = zo.isotropic_zip_matrices(g, r, p)
    filtered = [m for m in zo.zip_matrices(g, p) if zo.in_isotropic_locus(m, g, r, p)]
    assert len(locus) > 0
    assert {m.tobytes() for m in locus} == {m.tobytes() for m in filtered}


def test_isotropic_locus_structure():
    g, r, p = 2, 1, 2
    zs = zo.zips_with_isotropic(g, p, r)
    i_vec = np.array([1, 0, 0, 0])
    perp_basis = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    sub_keys = set()
    fibers = {}
    for z in zs:
        ker = gf.nullspace(z.matrix, p)
        # I inside the kernel, kernel inside I^perp
        assert gf.rank(np.vstack([ker, i_vec]), p) == gf.rank(ker, p)
        assert gf.rank(np.vstack([perp_basis, ker]), p) == 3
        zp = zo.induced_zip(z, r)
        assert zp.is_valid()
        sub_keys.add(zp.key())
        fibers[zp.key()] = fibers.get(zp.key(), 0) + 1
    assert sub_keys == {z.key() for z in zo.enumerate_zips(1, p)}
    assert len(set(fibers.values())) == 1


def test_pad_then_induce():
    for zp in zo.enumerate_zips(1, 3):
        assert zo.induced_zip(zo.pad_zip(zp, 1), 1) == zp


def test_r_must_be_proper():
    with pytest.raises(ValueError):
        zo.zips_with_isotropic(2, 2, 2)
    z = zo.enumerate_zips(2, 2)[0]
    with pytest.raises(ValueError):
        zo.induced_zip(z, 2)


def test_not_in_locus_rejected():
    f = np.zeros((4, 4), dtype=np.int64)
    f[:2, :2] = np.eye(2, dtype=np.int64)
    with pytest.raises(ValueError):
        zo.induced_zip(zo.Zip(2, 2, f), 1)


def test_derive_iota_g2():
    d2 = zo.derive_iota(2, 1, 2)
    d3 = zo.derive_iota(2, 1, 3)
    assert len(d2.table) == 2 and d2.lemma_violations == 0
    assert d2.parts_table() == d3.parts_table() == {(): (), (1,): (1,)}
    assert d2.constant_fibers() and d3.constant_fibers()


def test_derive_iota_g3_r2_and_composition():
    d = zo.derive_iota(3, 2, 2)
    assert len(d.table) == 2 and d.lemma_violations == 0
    from eozip.weyl import iota_table

    t = iota_table()
    assert {a: t[(3, 1)][t[(2, 1)][a]] for a in t[(2, 1)]} == d.parts_table()


def test_lemma_check_with_shipped_table():
    checked, bad = zo.lemma_check(2, 1, 3)
    assert checked > 0 and bad == 0


def test_isotropic_transitivity():
    assert zo.isotropic_subspaces_transitive(2, 1, 2)


def test_point_counts():
    pc = zo.orbit_point_counts(1, [2, 3, 5])
    for p in (2, 3, 5):
        assert pc.counts[()][p] > pc.counts[(1,)][p]
    assert pc.counts[(1,)] == {2: 3, 3: 8, 5: 24}
    with pytest.raises(zo.ResourceGuardError):
        zo.orbit_point_counts(3, [2])


def test_guards():
    with pytest.raises(zo.ResourceGuardError):
        zo.zip_matrices(4, 2)
    with pytest.raises(zo.ResourceGuardError):
        zo.lagrangian_matrices(1, 17)
    with pytest.raises(ValueError):
        zo.zip_matrices(1, 4)
    with pytest.raises(zo.ResourceGuardError):
        zo.zip_matrices(2, 3, max_points=1000)


def test_parallel_batch_matches_serial():
    mats = zo.zip_matrices(2, 3)[:6000]
    assert zo.analyze_batch(mats, 2, 3, jobs=2) == zo.analyze_batch(mats, 2, 3)


def test_shipped_iota_table_is_reproducible():
    from eozip.weyl import iota_table

    payload = zo.iota_table_payload(((2, 1, (2, 3)), (3, 2, (2,))))
    for entry in payload["tables"]:
        assert {tuple(a): tuple(b) for a, b in entry["map"]} == iota_table()[(entry["g"], entry["r"])]
