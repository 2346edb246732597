import pytest

from eozip import eo_classes, taut_ring


def test_small_examples():
    assert eo_classes.p_rank_locus_class(2, 1, 2).cls == taut_ring.lam(2, 1)
    assert eo_classes.p_rank_locus_class(2, 0, 2).cls == taut_ring.lam(2, 2) * 3
    rec = eo_classes.p_rank_locus_class(3, 3, 2)
    assert rec.coefficient == 1 and rec.cls == taut_ring.ring(3).one() and rec.codimension == 0


def test_class_table():
    t = eo_classes.class_table(3, 2)
    assert [(r.f, r.coefficient) for r in t.rows] == [(3, 1), (2, 1), (1, 3), (0, 21)]
    assert eo_classes.class_table(1, 5).rows[-1].cls.to_text() == "4*u1"
    lines = t.to_csv().splitlines()
    assert lines[0] == "g,p,f,codim,coefficient,class" and lines[-1] == "3,2,0,3,21,21*u3"


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("g", range(1, 7))
def test_coefficients_increase(g, p):
    cs = [eo_classes.coefficient(g, f, p) for f in range(g, -1, -1)]
    assert cs[0] == 1 and all(a < b for a, b in zip(cs[1:], cs[2:]))
    assert all(not eo_classes.p_rank_locus_class(g, f, p).cls.is_zero() for f in range(g + 1))


def test_product_with_top_lambda_vanishes():
    g = 3
    v0 = eo_classes.p_rank_locus_class(g, 0, 2).cls
    assert (v0 * taut_ring.lam(g, g)).is_zero()


def test_effectivity():
    rep = eo_classes.effectivity_check(2, 2)
    assert rep.ok and rep.oracle_p_ranks == [0, 1, 2]
    rep = eo_classes.effectivity_check(4, 3)
    assert rep.ok and [str(c.scalar) for c in rep.certifications] == ["1/2", "1/16", "1/416", "1/33280"]


def test_large_prime_allowed_and_guards():
    assert eo_classes.p_rank_locus_class(2, 0, 65521).coefficient == 65520 * (65521**2 - 1)
    with pytest.raises(ValueError):
        eo_classes.p_rank_locus_class(2, 3, 2)
    with pytest.raises(ValueError):
        eo_classes.p_rank_locus_class(2, 0, 6)
