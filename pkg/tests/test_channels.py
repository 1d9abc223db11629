import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fpqc.channels import (
    AttenuationChannel,
    RandomUnitaryChannel,
    apply,
    apply_attenuation,
    choi_cp_check,
    expand,
    fpqc_full,
    fpqc_paper,
    fpqc_random_subset,
)
from fpqc.gaussian import covariance_of, random_gaussian_state, state_from_spectrum
from fpqc.majorana import DenseBudgetError, MajoranaMonomial, all_monomials
from fpqc.metrics import distance_to_mms

from conftest import jw_dense, random_density

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)


def two_m_channel_oracle(rho, modes):
    """Brute-force average over U_l = i pi c_l built from raw Kronecker products."""
    ops = jw_dense(modes)
    pi = (-1) ** modes * np.linalg.multi_dot(ops)
    out = np.zeros_like(rho)
    for c in ops:
        u = 1j * pi @ c
        out += u @ rho @ u.conj().T
    return out / len(ops)


def random_hermitian(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return a + a.conj().T


def test_expand_maximally_mixed():
    alpha = expand(np.eye(4) / 4).coefficients
    expected = np.zeros(16)
    expected[0] = 1
    np.testing.assert_allclose(alpha, expected, atol=1e-15)


def test_expand_single_mode_ground_state():
    # |0><0| = (1 - i c1 c2)/2 and Tr((c1 c2)^dag |0><0|) = -i
    ex = expand(np.diag([1.0, 0.0]))
    assert ex.to_dict(1e-12) == {"00": 1, "11": -1j}
    c1, c2 = jw_dense(1)
    assert np.trace((c1 @ c2).conj().T @ np.diag([1.0, 0.0])) == pytest.approx(-1j)


@pytest.mark.parametrize("modes", [1, 2, 3, 4])
def test_expand_round_trip_and_parseval(rng, modes):
    d = 2**modes
    rho = random_density(rng, d)
    ex = expand(rho)
    np.testing.assert_allclose(ex.reconstruct(), rho, atol=1e-10)
    assert ex.coefficients[0] == pytest.approx(np.trace(rho))
    assert np.sum(np.abs(ex.coefficients) ** 2) / d == pytest.approx(np.real(np.trace(rho @ rho)), abs=1e-10)
    h = random_hermitian(rng, d)
    np.testing.assert_allclose(expand(h).reconstruct(), h, atol=1e-10)


@pytest.mark.parametrize("modes", [1, 2])
def test_expand_matches_dense_traces(rng, modes):
    rho = random_density(rng, 2**modes)
    alpha = expand(rho).coefficients
    for m in all_monomials(modes):
        assert alpha[m.index] == pytest.approx(np.trace(m.to_dense().conj().T @ rho), abs=1e-12)


def test_expand_batched(rng):
    batch = np.array([random_density(rng, 4) for _ in range(3)])
    ex = expand(batch)
    assert ex.coefficients.shape == (3, 16)
    np.testing.assert_allclose(ex.reconstruct(), batch, atol=1e-12)


def test_expand_budget():
    with pytest.raises(DenseBudgetError):
        expand(np.eye(2**7) / 2**7)


def test_attenuation_identity_and_full_damping(rng):
    rho = random_density(rng, 8)
    np.testing.assert_allclose(apply_attenuation(AttenuationChannel(3, [1] * 6), rho), rho, atol=1e-12)
    np.testing.assert_allclose(apply_attenuation(AttenuationChannel(3, [0] * 6), rho), np.eye(8) / 8, atol=1e-12)


@pytest.mark.parametrize("s", [0.0, 0.4, 0.9])
def test_attenuation_covariance_single_mode(rng, s):
    rho = random_gaussian_state(1, "mixed", rng).density()
    out = apply_attenuation(AttenuationChannel(1, (s, s)), rho)
    np.testing.assert_allclose(covariance_of(out), s**2 * covariance_of(rho), atol=1e-12)


def test_attenuation_scales_monomials(rng):
    xi = rng.uniform(0, 1, 4)
    ch = AttenuationChannel(2, xi)
    for m in all_monomials(2):
        expected = np.prod([x for x, b in zip(xi, m.bits) if b])
        np.testing.assert_allclose(apply(ch, m.to_dense()), expected * m.to_dense(), atol=1e-12)


def test_attenuation_range_checked():
    with pytest.raises(ValueError):
        AttenuationChannel(1, (0.5, 1.5))
    with pytest.raises(ValueError):
        AttenuationChannel(1, (0.5,))


@pytest.mark.parametrize("modes", [1, 2, 3, 4, 5])
def test_fpqc_paper_covariance_contraction(rng, modes):
    ch = fpqc_paper(modes)
    assert len(ch) == 2 * modes
    np.testing.assert_allclose(ch.weights, 1 / (2 * modes))
    s = random_gaussian_state(modes, "mixed", rng)
    rho = s.density()
    out = apply(ch, rho)
    np.testing.assert_allclose(out, two_m_channel_oracle(rho, modes), atol=1e-12)
    assert np.max(np.abs(covariance_of(out) - (modes - 2) / modes * covariance_of(rho))) <= 1e-10


@pytest.mark.parametrize("modes", [1, 2, 3])
def test_fpqc_paper_scales_degree_k_by_one_minus_k_over_m(modes):
    # averaging (-1)**b_l over l gives 1 - 2k/(2M) for a degree-k monomial
    ch = fpqc_paper(modes)
    for m in all_monomials(modes):
        d = m.to_dense()
        np.testing.assert_allclose(apply(ch, d), (1 - m.degree / modes) * d, atol=1e-12)


def test_fpqc_paper_single_mode_flips_occupation():
    out = apply(fpqc_paper(1), np.diag([1.0, 0.0]))
    np.testing.assert_allclose(out, np.diag([0.0, 1.0]), atol=1e-15)


def test_fpqc_paper_two_modes_randomizes_only_odd_pfaffian_free_inputs(rng):
    ch = fpqc_paper(2)
    # lam = (1, 0) leaves no degree-4 component, so the output is maximally mixed
    s = state_from_spectrum([1.0, 0.0], random_gaussian_state(2, "pure", rng).frame)
    assert distance_to_mms(apply(ch, s.density()), 1) <= 1e-10
    # a pure state keeps a flipped degree-4 component: output is 1/4 (1 - c1c2c3c4)-like
    pure = random_gaussian_state(2, "pure", rng).density()
    out = apply(ch, pure)
    np.testing.assert_allclose(covariance_of(out), 0, atol=1e-12)
    assert distance_to_mms(out, 1) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("modes", [1, 2, 3])
def test_fpqc_full_randomizes(rng, modes):
    ch = fpqc_full(modes)
    assert len(ch) == 4**modes
    for _ in range(5):
        out = apply(ch, random_density(rng, 2**modes))
        assert distance_to_mms(out, 1) <= 1e-10
    np.testing.assert_allclose(apply(ch, np.eye(2**modes) / 2**modes), np.eye(2**modes) / 2**modes, atol=1e-15)


def test_fpqc_full_single_mode_pauli_twirl(rng):
    rho = random_density(rng, 2)
    twirl = (rho + X @ rho @ X + Y @ rho @ Y + Z @ rho @ Z) / 4
    np.testing.assert_allclose(twirl, np.eye(2) / 2, atol=1e-15)
    np.testing.assert_allclose(apply(fpqc_full(1), rho), twirl, atol=1e-15)


def test_random_subset_contract():
    a = fpqc_random_subset(2, 5, seed=3)
    b = fpqc_random_subset(2, 5, seed=3)
    assert a.kraus == b.kraus and len(a) == 5
    for _, u in a.kraus:
        d = u.to_dense()
        np.testing.assert_allclose(d, d.conj().T, atol=1e-15)
    with pytest.raises(ValueError):
        fpqc_random_subset(2, 17)


def test_single_kraus_pure_input_stays_pure(rng):
    pure = random_gaussian_state(3, "pure", rng).density()
    out = apply(fpqc_random_subset(3, 1, seed=0), pure)
    assert distance_to_mms(out, 1) == pytest.approx(2 * (8 - 1) / 8, abs=1e-12)


def test_identity_kraus_channel(rng):
    ch = RandomUnitaryChannel(2, ((1.0, MajoranaMonomial.identity(2)),))
    rho = random_density(rng, 4)
    np.testing.assert_allclose(apply(ch, rho), rho, atol=1e-15)


def test_kraus_validation():
    m = MajoranaMonomial.identity(1)
    with pytest.raises(ValueError):
        RandomUnitaryChannel(1, ((0.5, m),))
    with pytest.raises(ValueError):
        RandomUnitaryChannel(1, ((1.0, MajoranaMonomial.identity(2)),))
    with pytest.raises(ValueError):
        apply(fpqc_paper(1), np.eye(4) / 4)


@pytest.mark.parametrize("factory", [fpqc_paper, fpqc_full, lambda m: fpqc_random_subset(m, 3, seed=m)])
@pytest.mark.parametrize("modes", [1, 2, 3])
def test_trace_preserving_unital_positive(rng, factory, modes):
    ch = factory(modes)
    d = 2**modes
    rho = random_density(rng, d)
    out = apply(ch, rho)
    assert abs(np.trace(out) - 1) <= 1e-12
    np.testing.assert_allclose(out, out.conj().T, atol=1e-12)
    assert np.min(np.linalg.eigvalsh(out)) >= -1e-12
    np.testing.assert_allclose(apply(ch, np.eye(d) / d), np.eye(d) / d, atol=1e-12)


@pytest.mark.parametrize("modes", [1, 2, 3])
def test_attenuation_trace_preserving(rng, modes):
    ch = AttenuationChannel(modes, rng.uniform(0, 1, 2 * modes))
    assert abs(np.trace(apply(ch, random_density(rng, 2**modes))) - 1) <= 1e-12


def test_channel_json_round_trip():
    ch = fpqc_random_subset(2, 4, seed=9)
    data = ch.to_json()
    assert data["kind"] == "fpqc_random_subset" and data["M"] == 2
    assert set(data["kraus"][0]) == {"bits", "phase", "weight"}
    assert RandomUnitaryChannel.from_json(data) == ch
    assert AttenuationChannel(1, (0.5, 1)).to_json() == {"kind": "attenuation", "M": 1, "xi": [0.5, 1.0]}


@pytest.mark.parametrize("modes", [1, 2, 3])
def test_choi_random_unitary_channels(modes):
    rep = choi_cp_check(fpqc_paper(modes))
    assert rep.is_cp and rep.is_tp


def test_choi_identity_attenuation():
    rep = choi_cp_check(AttenuationChannel(2, (1, 1, 1, 1)))
    assert rep.is_cp and rep.is_tp


def test_choi_flags_non_cp_attenuation():
    # oracle: xi = (a, a) on one mode is Pauli-diagonal with (X, Y, Z) factors (a, a, a**2);
    # the Choi eigenvalue 2 p_X = (1 + a - a - a**2)/2 is negative for a > 1
    a = 1.5
    rep = choi_cp_check(AttenuationChannel(1, (a, a), strict=False))
    assert not rep.is_cp and rep.is_tp
    assert rep.min_eigenvalue == pytest.approx((1 - a**2) / 2, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=4, max_size=4))
def test_attenuation_in_unit_interval_is_cp(xi):
    rep = choi_cp_check(AttenuationChannel(2, xi))
    assert rep.is_cp and rep.is_tp


def test_choi_budget():
    with pytest.raises(DenseBudgetError):
        choi_cp_check(fpqc_paper(5))
