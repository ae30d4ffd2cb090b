import random

import numpy as np
import pytest

from thhtate.errors import VerificationFailure
from thhtate.fpcore import Element, mono_from_names
from thhtate.models import build_h_bp, build_h_mu, build_h_thh
from thhtate.singer import Window
from thhtate.steenrod import DualSteenrodAlgebra
from thhtate.tatess import (
    check_d2_squares_to_zero,
    check_t_periodicity,
    collapsed_vertical_monomials,
    d2_element,
    d2_leibniz_check,
    e2_page,
    e3_page,
    filtration_of,
    kappa_star,
    kappa_substitution_composite,
    omega_t_star,
    page_mono,
    page_table_for,
    sigma_matrix,
    verify_collapse,
)


@pytest.fixture(scope="module")
def thh_mu1():
    st = DualSteenrodAlgebra(3, 1)
    return build_h_thh(build_h_mu(st, 1))


@pytest.fixture(scope="module")
def thh_mu2():
    st = DualSteenrodAlgebra(3, 1)
    return build_h_thh(build_h_mu(st, 2))


@pytest.fixture(scope="module")
def thh_bp1():
    st = DualSteenrodAlgebra(3, 1)
    return build_h_thh(build_h_bp(st, 1))


def test_e2_cell_dimensions(thh_mu2):
    page = e2_page(thh_mu2, Window(-10, 10, -6, 2))
    assert len(page.cells[(0, 0)]) == 1
    # u (x) m1 sits at (s, w) = (-1, 2)
    assert len(page.cells[(-1, 2)]) == 1
    # t (x) s(m1) at (-2, 3)
    assert len(page.cells[(-2, 3)]) == 1


def test_d2_formula_on_basis(thh_mu2):
    pt = page_table_for(thh_mu2)
    page = e2_page(thh_mu2, Window(-12, 12, -6, 2))
    x = Element.from_mono(pt, page_mono(pt, 0, 0, (("m1", 1),)))
    got = d2_element(page, x)
    want = Element.from_mono(pt, page_mono(pt, 0, 1, (("s(m1)", 1),)))
    assert got == want
    # u (x) s(m1) is a cycle since sigma squares to zero
    y = Element.from_mono(pt, page_mono(pt, 1, 0, (("s(m1)", 1),)))
    assert d2_element(page, y).is_zero()
    # derivation rule on m1^2
    z = Element.from_mono(pt, page_mono(pt, 0, 0, (("m1", 2),)))
    want2 = Element.from_mono(pt, page_mono(pt, 0, 1, (("m1", 1), ("s(m1)", 1))), 2)
    assert d2_element(page, z) == want2


def test_d2_squares_to_zero(thh_mu2):
    page = e2_page(thh_mu2, Window(-12, 12, -6, 2))
    assert check_d2_squares_to_zero(page)


def test_d2_leibniz(thh_mu2):
    page = e2_page(thh_mu2, Window(-10, 10, -4, 2))
    assert d2_leibniz_check(page, 150, random.Random(17))


def test_e3_vertical_column_mu1(thh_mu1):
    # P(m1^3) (x) E(m1^2 s(m1)): dims 1 at w = 0, 6, 7, 12 (w <= 12), else 0
    page2 = e2_page(thh_mu1, Window(-30, 14, -8, 2))
    page3 = e3_page(page2)
    col = {w: len(page3.homology[(0, w)]) for (s, w) in page3.homology if s == 0}
    expected = {0: 1, 6: 1, 7: 1, 12: 1, 13: 1}
    for w, d in col.items():
        assert d == expected.get(w, 0), f"w={w}"


def test_e3_class_t0_m1_dies(thh_mu1):
    page2 = e2_page(thh_mu1, Window(-30, 14, -8, 2))
    page3 = e3_page(page2)
    # w = 2 column has no homology: t^0 (x) m1 supports a differential
    assert len(page3.homology[(0, 2)]) == 0


def test_e3_bp_column_matches_closed_form(thh_bp1):
    page2 = e2_page(thh_bp1, Window(-30, 20, -8, 2))
    page3 = e3_page(page2)
    col = {w: len(page3.homology[(0, w)]) for (s, w) in page3.homology if s == 0}
    # P(xi1^3) (x) E(xi1^2 s(xi1)) with |xi1| = 4: degrees 0, 12, 13, 24, ...
    expected = {0: 1, 12: 1, 13: 1}
    for w in range(0, 20):
        assert col.get(w, 0) == expected.get(w, 0), f"w={w}"


def test_e3_undetermined_rows(thh_mu1):
    w = Window(-30, 14, -8, 2)
    page3 = e3_page(e2_page(thh_mu1, w))
    assert page3.undetermined_rows == {-8, -7, 1, 2}
    for s, _ in page3.homology:
        assert s not in page3.undetermined_rows


def test_t_periodicity(thh_mu1):
    page2 = e2_page(thh_mu1, Window(-30, 14, -8, 2))
    assert check_t_periodicity(page2)
    assert check_t_periodicity(e3_page(page2))


def test_verify_collapse_passes(thh_mu2, thh_bp1):
    for model in (thh_mu2, thh_bp1):
        page3 = e3_page(e2_page(model, Window(-40, 20, -10, 0)))
        assert verify_collapse(page3)


def test_verify_collapse_detects_injected_class(thh_mu1):
    page3 = e3_page(e2_page(thh_mu1, Window(-30, 14, -8, 2)))
    # inject a fake class u (x) m1 at (s, w) = (-1, 2)
    cell = (-1, 2)
    vert = [mono_from_names(thh_mu1.table, {"m1": 1})]
    vec = np.array([1], dtype=np.int64)
    page3.homology.setdefault(cell, []).append(vec)
    page3.reps_monomial.setdefault(cell, []).append(None)
    with pytest.raises(VerificationFailure):
        verify_collapse(page3)


def test_verify_collapse_detects_corrupted_coefficient(thh_mu1):
    page3 = e3_page(e2_page(thh_mu1, Window(-30, 14, -8, 2)))
    # corrupt one homology dimension record
    cell = next(iter(page3.homology))
    page3.homology[cell] = page3.homology[cell] + [np.zeros(1, dtype=np.int64)]
    page3.reps_monomial[cell] = page3.reps_monomial[cell] + [None]
    with pytest.raises(VerificationFailure):
        verify_collapse(page3)


def test_collapsed_monomials_small(thh_mu1):
    assert collapsed_vertical_monomials(thh_mu1, 0) == [()]
    assert len(collapsed_vertical_monomials(thh_mu1, 6)) == 1  # m1^3
    assert len(collapsed_vertical_monomials(thh_mu1, 7)) == 1  # m1^2 s(m1)
    assert len(collapsed_vertical_monomials(thh_mu1, 5)) == 0


def test_kappa_cases():
    mono = (("m1", 3),)
    assert kappa_star(0, 0, 1, mono) == [(1, 0, 1, 0, mono)]
    assert kappa_star(0, 1, 1, mono) == [(1, 1, 1, 0, mono)]
    assert kappa_star(1, 0, 1, mono) == [(1, 0, 1, 1, mono)]
    assert kappa_star(1, 1, 1, mono) == [(1, 1, 1, 1, mono), (1, 0, 1, 0, mono)]


def test_kappa_filtration_remark():
    # for the doubled case the second term has filtration -2r, one higher
    # than the input's -(1 + 2r)
    terms = kappa_star(1, 1, 2, (("m1", 1),))
    filts = sorted(-(i + 2 * r) for (_, i, r, _, _) in terms)
    assert filts == [-5, -4]


def test_omega_rules(thh_mu2):
    pt = page_table_for(thh_mu2)
    base_mono = mono_from_names(thh_mu2.base.table, {"m1": 1})
    # rule 1: e_0 (x) t (x) m1^{(x)3} -> t (x) m1^3
    got = omega_t_star(thh_mu2, 0, 0, 1, base_mono)
    assert got == Element.from_mono(pt, page_mono(pt, 0, 1, (("m1", 3),)))
    # rule 2: e_1 (x) 1 (x) m1^{(x)3} -> 1 (x) m1^2 s(m1)
    got2 = omega_t_star(thh_mu2, 1, 0, 0, base_mono)
    assert got2 == Element.from_mono(pt, page_mono(pt, 0, 0, (("m1", 2), ("s(m1)", 1))))
    # linearity case: e_1 (x) u (x) m1^{(x)3} -> u (x) wedge + 1 (x) m1^3
    got3 = omega_t_star(thh_mu2, 1, 1, 0, base_mono)
    want3 = Element.from_mono(
        pt, page_mono(pt, 1, 0, (("m1", 2), ("s(m1)", 1)))
    ) + Element.from_mono(pt, page_mono(pt, 0, 0, (("m1", 3),)))
    assert got3 == want3


def test_omega_factors_through_kappa(thh_mu2):
    rng = random.Random(23)
    base = thh_mu2.base
    monos = [m for d in range(0, 9, 2) for m in base.basis_of_degree(d)]
    for _ in range(60):
        mono = rng.choice(monos)
        j = rng.randrange(2)
        i = rng.randrange(2)
        r = rng.randrange(-2, 3)
        direct = omega_t_star(thh_mu2, j, i, r, mono)
        composite = kappa_substitution_composite(thh_mu2, j, i, r, mono)
        assert direct == composite, (j, i, r, mono)
