import pytest

from thhtate.comparison import (
    ComparisonContext,
    IndexSequence,
    all_index_sequences,
    check_gamma_closed_forms,
    check_gamma_factors_through_phi,
    check_phi_b_cell,
    check_phi_b_proinverse,
    check_projection_identities,
    check_shifted_dimensions,
    check_slope_identities,
    check_strictness,
    epsilon_class_bidegree,
    gamma_class_bidegree,
    gamma_star,
    n_reindex,
    survival_phi,
    survival_psi,
)
from thhtate.errors import VerificationFailure
from thhtate.fpcore import Element, mono_from_names
from thhtate.models import build_h_bp, build_h_mu, build_h_thh
from thhtate.singer import Unit
from thhtate.steenrod import DualSteenrodAlgebra
from thhtate.tatess import page_table_for


@pytest.fixture(scope="module")
def ctx_mu():
    st = DualSteenrodAlgebra(3, 2)
    return ComparisonContext(build_h_thh(build_h_mu(st, 3)))


@pytest.fixture(scope="module")
def ctx_bp():
    st = DualSteenrodAlgebra(3, 2)
    return ComparisonContext(build_h_thh(build_h_bp(st, 2)))


def test_n_reindex_formula():
    assert n_reindex(3, -10, 0) == -30
    assert n_reindex(3, 0, 0) == 0
    assert n_reindex(5, -2, 4) == -26


def test_f_vert_on_suspension_class(ctx_mu):
    v = ((ctx_mu.vert_mid.position("s(m1)"), 1),)
    img = ctx_mu.f_vert(v)
    # representative t^3 (x) stp(m1): shift 3, filtration drop 6
    assert img.shift == 3
    assert img.mono == ((ctx_mu.vert_b.position("stp(m1)"), 1),)
    assert not img.unit.is_plain()


def test_f_page_truncation(ctx_mu):
    # f_n(1 (x) s(m1)) has filtration -6: survives at n = -6, dies at n = -5
    pt = ctx_mu.page_mid
    mono = ((pt.position("s(m1)"), 1),)
    kept = ctx_mu.f_page(-6, 3, mono)
    assert kept is not None
    unit, img = kept
    assert ctx_mu.page_b.name_at(img[0][0]) == "t"
    assert img[0][1] == 3
    assert ctx_mu.f_page(-5, 3, mono) is None


def test_f_page_unit_case(ctx_mu):
    # f_n(alpha (x) 1) = alpha for any alpha
    pt = ctx_mu.page_mid
    mono = ((pt.position("t"), 2), (pt.position("tp(m1)"), 1))
    unit, img = ctx_mu.f_page(-100, 2, mono)
    assert unit == Unit(3, 1)
    names = sorted((ctx_mu.page_b.name_at(q), e) for q, e in img)
    assert names == [("t", 2), ("tp(m1)", 1)]


def test_g_page_values(ctx_mu):
    pt = ctx_mu.page_mid
    # g_n(u t (x) tp(m1) (x) 1) -> u t (x) pp(m1)
    mono = (
        (pt.position("u"), 1),
        (pt.position("t"), 1),
        (pt.position("tp(m1)"), 1),
    )
    unit, img = ctx_mu.g_page(-100, 3, mono)
    assert unit == Unit(3, 1)
    names = sorted((ctx_mu.page_c.name_at(q), e) for q, e in img)
    assert names == [("pp(m1)", 1), ("t", 1), ("u", 1)]
    # g_n(1 (x) s(m1)) -> -t^2 (x) w(m1), filtration -4
    mono2 = ((pt.position("s(m1)"), 1),)
    unit2, img2 = ctx_mu.g_page(-4, 3, mono2)
    assert unit2 == Unit(3, -1)
    names2 = sorted((ctx_mu.page_c.name_at(q), e) for q, e in img2)
    assert names2 == [("t", 2), ("w(m1)", 1)]
    assert ctx_mu.g_page(-3, 3, mono2) is None


def test_g_bidegree_of_double_product(ctx_mu):
    seq = IndexSequence((1, 2))
    assert gamma_class_bidegree(ctx_mu, seq) == (-12, 20)
    assert epsilon_class_bidegree(ctx_mu, seq) == (-16, 24)


def test_slope_identities(ctx_mu, ctx_bp):
    for ctx in (ctx_mu, ctx_bp):
        ells = sorted(g.degree // 2 for g in ctx.gens)
        for seq in all_index_sequences(ells):
            assert check_slope_identities(ctx, seq)


def test_projection_identities_all_cells_small(ctx_mu):
    for d in range(0, 13):
        for n in range(-6, 1):
            check_projection_identities(ctx_mu, n, d)


def test_phi_b_cells_small(ctx_mu, ctx_bp):
    for ctx in (ctx_mu, ctx_bp):
        for d in range(0, 11):
            for n in range(-4, 1):
                check_phi_b_cell(ctx, n, d)


def test_phi_b_proinverse_sample(ctx_mu):
    for d in range(0, 7):
        for n in range(-3, 1):
            check_phi_b_proinverse(ctx_mu, n, d)


def test_strictness(ctx_mu):
    for which in ("f", "g"):
        assert check_strictness(ctx_mu, which, -8, -3, 10)


def test_survival_enumeration_matches_frozen_case(ctx_mu):
    # at d = 0, n = -6 the surviving psi sequences have 2|L| <= 6
    seqs = survival_psi(ctx_mu, -6, 0)
    got = sorted(s.ells for s in seqs)
    assert got == [(), (1,), (1, 2), (2,), (3,)]


def test_survival_phi_closed_form(ctx_mu):
    # 2|L| + r <= d - n with d = 0, n = -6: drop (1, 2) since 2*3 + 2 = 8 > 6
    seqs = survival_phi(ctx_mu, -6, 0)
    got = sorted(s.ells for s in seqs)
    assert got == [(), (1,), (2,)]
    # and a bigger budget admits pairs again
    seqs2 = survival_phi(ctx_mu, -8, 0)
    assert (1, 2) in {s.ells for s in seqs2}


def test_shifted_dimension_bookkeeping(ctx_mu, ctx_bp):
    for ctx in (ctx_mu, ctx_bp):
        for d in range(0, 12):
            for n in range(-6, 1):
                check_shifted_dimensions(ctx, n, d)


def test_gamma_star_on_sigma_classes(ctx_mu, ctx_bp):
    thh = ctx_mu.thh
    pt = page_table_for(thh)
    unit, mono = gamma_star(thh, ((thh.table.position("s(m1)"), 1),))
    assert unit == Unit(3, -1)
    names = sorted((pt.name_at(q), e) for q, e in mono)
    assert names == [("m1", 2), ("s(m1)", 1), ("t", 2)]

    thb = ctx_bp.thh
    ptb = page_table_for(thb)
    unit_b, mono_b = gamma_star(thb, ((thb.table.position("s(xi1)"), 1),))
    # (p-1)(p^k - 1) = 4 at k = 1; the sign is +1 since p^k - 1 is even
    assert unit_b == Unit(3, 1)
    names_b = sorted((ptb.name_at(q), e) for q, e in mono_b)
    assert names_b == [("s(xi1)", 1), ("t", 4), ("xi1", 2)]


def test_gamma_star_unital_and_multiplicative(ctx_mu):
    thh = ctx_mu.thh
    unit, mono = gamma_star(thh, ())
    assert unit == Unit(3, 1) and mono == ()
    # product of two suspension classes multiplies the leading terms
    m = mono_from_names(thh.table, {"s(m1)": 1, "s(m2)": 1})
    unit2, mono2 = gamma_star(thh, m)
    pt = page_table_for(thh)
    names = sorted((pt.name_at(q), e) for q, e in mono2)
    assert ("t", 2 + 4) in names
    assert ("m1", 2) in names and ("m2", 2) in names


def test_gamma_first_principles_closed_forms(ctx_mu, ctx_bp):
    assert check_gamma_closed_forms(ctx_mu.thh)
    assert check_gamma_closed_forms(ctx_bp.thh)


def test_gamma_factors_through_phi(ctx_mu, ctx_bp):
    for ctx in (ctx_mu, ctx_bp):
        assert check_gamma_factors_through_phi(ctx, range(-10, 1))


def test_identity_failure_detected(ctx_mu):
    # sabotage the reindexing and watch a projection identity fail
    import thhtate.comparison as cmp

    orig = cmp.n_reindex
    try:
        cmp.n_reindex = lambda p, n, d: n  # no shift
        with pytest.raises(VerificationFailure):
            for d in range(0, 13):
                for n in range(-6, 1):
                    cmp.check_projection_identities(ctx_mu, n, d)
    finally:
        cmp.n_reindex = orig
