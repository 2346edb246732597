"""One test per acceptance criterion.

Each test runs the packaged check (the same code behind ``eozip selftest
--profile full``) and then re-asserts the headline numbers directly, so a
bug in the runner cannot turn into a silent pass.  A PASS/FAIL line per
criterion is printed in the terminal summary.
"""

import time

import pytest

from eozip import acceptance, brokemper, eo_classes, taut_ring, weyl, zip_oracle
from eozip.poly_core import Polynomial

FULL = acceptance.Settings(profile="full", seed=1)


def product_coefficients(g):
    coeffs = [1]
    for i in range(1, g + 1):
        nxt = coeffs + [0] * i
        for k, c in enumerate(coeffs):
            nxt[k + i] += c
        coeffs = nxt
    return coeffs


@pytest.fixture
def criterion(acceptance_log):
    def run(number, extra):
        res = acceptance.run_criterion(number, FULL)
        err = None
        if res.passed:
            try:
                extra()
            except AssertionError as exc:
                err = exc
        passed = res.passed and err is None
        acceptance_log.append(
            f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {res.title} ({res.seconds:.1f}s)"
        )
        print(res.line())
        assert res.passed, res.failures
        if err is not None:
            raise err
        return res

    return run


def test_criterion_1_dimension(criterion):
    def extra():
        start = time.perf_counter()
        for g in range(1, 9):
            hf = taut_ring.TautRing(taut_ring.build_presentation(g)).hilbert_function()
            assert sum(hf) == 2**g and hf == product_coefficients(g)
        assert time.perf_counter() - start < 120

    criterion(1, extra)


def test_criterion_2_identities(criterion):
    def extra():
        for g in range(1, 9):
            w = taut_ring.weights(g)
            nf = taut_ring.normal_form
            if g >= 2:
                assert nf(g, Polynomial.generator(1, w) ** 2).poly == Polynomial.generator(2, w).scale(2)
            assert nf(g, Polynomial.generator(g, w) ** 2).is_zero()

    criterion(2, extra)


def test_criterion_3_quotient(criterion):
    def extra():
        for g in range(2, 7):
            _, rep = taut_ring.quotient_by_top_lambda(g)
            assert rep.ok and rep.products_checked == 2 ** (g - 1) * (2 ** (g - 1) + 1) // 2

    criterion(3, extra)


def test_criterion_4_weyl(criterion):
    def extra():
        for g in range(1, 5):
            assert len(weyl.min_coset_reps(g)) == 2**g
            assert weyl.coefficients(weyl.poincare_WP(g)) == taut_ring.hilbert_function(g)

    criterion(4, extra)


def test_criterion_5_borel(criterion):
    def extra():
        for g in range(1, 5):
            for p in (2, 3, 5):
                assert brokemper.ideals_equal_by_degree(g, p).ok
        for g in range(1, 6):
            rep = brokemper.chern_map_check(g, 2 * g)
            assert rep.image_matches and rep.in_ideal

    criterion(5, extra)


def test_criterion_6_oracle(criterion):
    def extra():
        for p, n in ((2, 9), (3, 32), (5, 144)):
            rep = zip_oracle.orbit_decomposition(1, p)
            assert rep.zip_count == n == zip_oracle.zip_count(1, p) and rep.distinct_invariants == 2
        for p in (2, 3):
            rep = zip_oracle.orbit_decomposition(2, p)
            assert rep.distinct_invariants == 4 and rep.invariant_constant_on_orbits

    criterion(6, extra)


def test_criterion_7_degeneration(criterion):
    def extra():
        for g, r, p in ((2, 1, 2), (2, 1, 3), (3, 2, 2)):
            checked, bad = zip_oracle.lemma_check(g, r, p)
            assert checked > 0 and bad == 0

    criterion(7, extra)


def test_criterion_8_prank(criterion):
    def extra():
        for g in range(1, 7):
            for p in (2, 3, 5, 7):
                for f in range(g + 1):
                    rec = eo_classes.p_rank_locus_class(g, f, p)
                    coeff = 1
                    for i in range(1, g - f + 1):
                        coeff *= p**i - 1
                    assert rec.coefficient == coeff and rec.cls == taut_ring.lam(g, g - f) * coeff
                assert eo_classes.effectivity_check(g, p, with_oracle=False).ok

    criterion(8, extra)


def test_criterion_9_negative_control(criterion):
    def extra():
        bad = acceptance.Settings(profile="quick", presentation=taut_ring.corrupted_presentation)
        res = acceptance.run_criterion(1, bad)
        assert not res.passed and res.module == "taut_ring"
        assert any(f.startswith("g=2:") for f in res.failures)

    criterion(9, extra)
