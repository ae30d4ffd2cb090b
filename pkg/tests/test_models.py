import random

import pytest

from thhtate.errors import HypothesisError
from thhtate.fpcore import Element, MONO_ONE, TensorElement, monomials_up_to_degree
from thhtate.models import (
    build_h_bp,
    build_h_mu,
    build_h_thh,
    is_pk_minus_one,
    mu_to_bp_projection,
    wedge_class,
)
from thhtate.steenrod import DualSteenrodAlgebra


@pytest.fixture(scope="module")
def st3():
    return DualSteenrodAlgebra(3, 2)


@pytest.fixture(scope="module")
def mu(st3):
    return build_h_mu(st3, 3)


@pytest.fixture(scope="module")
def bp(st3):
    return build_h_bp(st3, 2)


@pytest.fixture(scope="module")
def thh_mu(mu):
    return build_h_thh(mu)


@pytest.fixture(scope="module")
def thh_bp(bp):
    return build_h_thh(bp)


def test_pk_minus_one():
    assert is_pk_minus_one(3, 2) == 1
    assert is_pk_minus_one(3, 8) == 2
    assert is_pk_minus_one(3, 1) is None
    assert is_pk_minus_one(3, 3) is None


def test_mu_m1_is_primitive(mu, st3):
    # at p = 3 the index 1 is not of the form p^k - 1, so m1 coacts trivially
    assert mu.is_primitive("m1")
    val = mu.coaction(Element.gen(mu.table, "m1"))
    assert val == TensorElement.of(
        Element.unit(st3.conj_table), Element.gen(mu.table, "m1")
    )


def test_mu_m2_is_xibar1(mu, st3):
    # ell = 2 = p - 1, so m2 carries the conjugate coproduct at k = 1
    val = mu.coaction_on_gens["m2"]
    ct = st3.conj_table
    want = TensorElement.of(Element.unit(ct), Element.gen(mu.table, "m2")) + TensorElement.of(
        Element.gen(ct, "xi1"), Element.unit(mu.table)
    )
    assert val == want


def test_bp_generator_degrees_and_count(bp):
    assert len(bp.table) == 2
    assert bp.table.generator("xi1").degree == 4
    assert bp.table.generator("xi2").degree == 16


def test_bp_xi1_coaction(bp, st3):
    val = bp.coaction_on_gens["xi1"]
    ct = st3.conj_table
    want = TensorElement.of(Element.unit(ct), Element.gen(bp.table, "xi1")) + TensorElement.of(
        Element.gen(ct, "xi1"), Element.unit(bp.table)
    )
    assert val == want


def test_thh_sigma_degree_and_primitivity(thh_mu, thh_bp, st3):
    assert thh_mu.table.generator("s(m1)").degree == 3
    for model in (thh_mu, thh_bp):
        for g in model.base.table.entries:
            assert model.is_primitive(f"s({g.name})")


def test_bigger_mu_coaction_rewrites_in_model_alphabet(st3):
    mu8 = build_h_mu(st3, 8)
    val = mu8.coaction_on_gens["m8"]
    ct = st3.conj_table
    t = mu8.table
    want = (
        TensorElement.of(Element.unit(ct), Element.gen(t, "m8"))
        + TensorElement.of(Element.gen(ct, "xi1"), Element.gen(t, "m2", 3))
        + TensorElement.of(Element.gen(ct, "xi2"), Element.unit(t))
    )
    assert val == want


def test_coaction_coassociativity(mu, bp, thh_mu, st3):
    # (psi (x) id) nu = (id (x) nu) nu on generators and sampled products
    for model in (mu, bp, thh_mu):
        monos = [m for ms in monomials_up_to_degree(model.table, 12).values() for m in ms]
        for mono in monos:
            x = Element.from_mono(model.table, mono)
            nu = model.coaction(x)
            left = {}
            for (a, h), c in nu.terms.items():
                psi_a = st3.coproduct(Element.from_mono(st3.conj_table, a))
                for (a1, a2), c2 in psi_a.terms.items():
                    key = (a1, a2, h)
                    left[key] = (left.get(key, 0) + c * c2) % 3
            right = {}
            for (a, h), c in nu.terms.items():
                nu_h = model.coaction(Element.from_mono(model.table, h))
                for (a2, h2), c2 in nu_h.terms.items():
                    key = (a, a2, h2)
                    right[key] = (right.get(key, 0) + c * c2) % 3
            defect = {k: (left.get(k, 0) - right.get(k, 0)) % 3 for k in set(left) | set(right)}
            assert all(v == 0 for v in defect.values()), mono


def test_sigma_is_derivation_on_pairs(thh_mu):
    rng = random.Random(5)
    monos = [m for ms in monomials_up_to_degree(thh_mu.table, 10).values() for m in ms]
    sigma = thh_mu.sigma
    for g1 in thh_mu.table.entries:
        for g2 in thh_mu.table.entries:
            x = Element.gen(thh_mu.table, g1.name)
            y = Element.gen(thh_mu.table, g2.name)
            lhs = sigma(x * y)
            rhs = sigma(x) * y + (x * sigma(y)).scaled((-1) ** g1.degree)
            assert lhs == rhs, (g1.name, g2.name)
    for _ in range(200):
        m1 = rng.choice(monos)
        m2 = rng.choice(monos)
        x = Element.from_mono(thh_mu.table, m1)
        y = Element.from_mono(thh_mu.table, m2)
        dx = sum(e * thh_mu.table.degree_at(pos) for pos, e in m1)
        lhs = sigma(x * y)
        rhs = sigma(x) * y + (x * sigma(y)).scaled((-1) ** dx)
        assert lhs == rhs


def test_sigma_squared_and_pth_power(thh_mu):
    sigma = thh_mu.sigma
    monos = [m for ms in monomials_up_to_degree(thh_mu.table, 12).values() for m in ms]
    for m in monos:
        assert sigma(sigma(Element.from_mono(thh_mu.table, m))).is_zero()
    for g in thh_mu.table.entries:
        x = Element.gen(thh_mu.table, g.name)
        if g.parity == "even":
            assert sigma(x**3).is_zero()


def test_thh_mu_dimension_vector_small_window(st3):
    # independent oracle: coefficients of prod 1/(1-q^{2l}) * prod (1+q^{2l+1})
    mu2 = build_h_mu(st3, 2)
    thh2 = build_h_thh(mu2)
    degmax = 7
    coeffs = [0] * (degmax + 1)
    coeffs[0] = 1
    for gen_deg, parity in [(2, "even"), (4, "even"), (3, "odd"), (5, "odd")]:
        new = list(coeffs)
        if parity == "odd":
            for w in range(degmax + 1):
                if coeffs[w] and w + gen_deg <= degmax:
                    new[w + gen_deg] += coeffs[w]
        else:
            for w in range(degmax + 1):
                k = 1
                while w + k * gen_deg <= degmax:
                    if coeffs[w]:
                        new[w + k * gen_deg] += coeffs[w]
                    k += 1
        coeffs = new
    enumerated = [len(thh2.basis_of_degree(d)) for d in range(degmax + 1)]
    assert enumerated == coeffs
    assert enumerated == [1, 0, 1, 1, 2, 2, 2, 3]


def test_wedge_class_values(thh_mu, thh_bp):
    t = thh_mu.table
    got = wedge_class(thh_mu, "m1")
    want = Element.gen(t, "m1", 2) * Element.gen(t, "s(m1)")
    assert got == want
    assert got.degree() == 1 + 3 * 2
    tb = thh_bp.table
    got_bp = wedge_class(thh_bp, "xi1")
    assert got_bp == Element.gen(tb, "xi1", 2) * Element.gen(tb, "s(xi1)")


def test_wedge_class_rejects_odd(thh_mu):
    with pytest.raises(HypothesisError):
        wedge_class(thh_mu, "s(m1)")


def test_mu_to_bp_projection_commutes_with_structure(st3, mu, bp, thh_mu, thh_bp):
    # kills m1, m3 and sends m2 to xi-bar_1; commutes with sigma and coaction
    x = Element.gen(mu.table, "m1")
    assert mu_to_bp_projection(mu, bp, x).is_zero()
    y = Element.gen(mu.table, "m2")
    assert mu_to_bp_projection(mu, bp, y) == Element.gen(bp.table, "xi1")

    thh_proj = lambda e: mu_to_bp_projection(thh_mu, thh_bp, e)
    for mono in [m for ms in monomials_up_to_degree(thh_mu.table, 10).values() for m in ms]:
        e = Element.from_mono(thh_mu.table, mono)
        assert thh_proj(thh_mu.sigma(e)) == thh_bp.sigma(thh_proj(e)), mono
    for mono in [m for ms in monomials_up_to_degree(mu.table, 12).values() for m in ms]:
        e = Element.from_mono(mu.table, mono)
        lhs = mu.coaction(e).map_right(
            lambda m: mu_to_bp_projection(mu, bp, Element.from_mono(mu.table, m)),
            bp.table,
        )
        rhs = bp.coaction(mu_to_bp_projection(mu, bp, e))
        assert lhs == rhs, mono
