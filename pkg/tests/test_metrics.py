import math

import numpy as np
import pytest
from scipy.linalg import sqrtm

from fpqc.channels import apply, fpqc_full
from fpqc.gaussian import random_gaussian_state
from fpqc.majorana import MajoranaMonomial
from fpqc.metrics import distance_to_mms, pqc_test, pqc_threshold, schatten_norm

from conftest import random_density


def random_complex(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def test_schatten_examples():
    a = np.diag([3.0, -4.0])
    assert schatten_norm(a, 1) == pytest.approx(7)
    assert schatten_norm(a, 2) == pytest.approx(5)
    assert schatten_norm(a, math.inf) == pytest.approx(4)
    for p in (1, 1.5, 2, 3, math.inf):
        assert schatten_norm(np.zeros((4, 4)), p) == 0


def test_schatten_two_is_frobenius(rng):
    a = random_complex(rng, 6)
    assert schatten_norm(a, 2) ** 2 == pytest.approx(np.real(np.trace(a.conj().T @ a)), abs=1e-10)


def test_schatten_general_p_against_singular_values(rng):
    a = random_complex(rng, 5)
    s = np.linalg.svd(a, compute_uv=False)
    assert schatten_norm(a, 3.5) == pytest.approx(np.sum(s**3.5) ** (1 / 3.5), rel=1e-12)
    assert schatten_norm(a, 1) == pytest.approx(np.real(np.trace(sqrtm(a.conj().T @ a))), rel=1e-10)


def test_schatten_rejects_small_p():
    with pytest.raises(ValueError):
        schatten_norm(np.eye(2), 0.5)


def test_norm_ordering(rng):
    for _ in range(20):
        a = random_complex(rng, 4)
        n1, n2, n3, ninf = (schatten_norm(a, p) for p in (1, 2, 3, math.inf))
        assert ninf <= n3 + 1e-12 and n3 <= n2 + 1e-12 and n2 <= n1 + 1e-12


def test_unitary_invariance(rng):
    a = random_complex(rng, 8)
    for idx in rng.integers(0, 64, 5):
        u = MajoranaMonomial.from_index(3, int(idx), int(idx) % 4).to_dense()
        for p in (1, 2, math.inf):
            assert abs(schatten_norm(u @ a @ u.conj().T, p) - schatten_norm(a, p)) <= 1e-10


def test_triangle_inequality(rng):
    for _ in range(20):
        a, b = random_complex(rng, 4), random_complex(rng, 4)
        for p in (1, 2, math.inf):
            assert schatten_norm(a + b, p) <= schatten_norm(a, p) + schatten_norm(b, p) + 1e-10


@pytest.mark.parametrize("d", [2, 4, 8])
def test_pure_state_distance(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    v /= np.linalg.norm(v)
    rho = np.outer(v, v.conj())
    assert distance_to_mms(rho, 1) == pytest.approx(2 * (d - 1) / d, abs=1e-12)
    assert distance_to_mms(rho, math.inf) == pytest.approx(1 - 1 / d, abs=1e-12)
    assert distance_to_mms(np.eye(d) / d, 1) == 0


def test_distance_rejects_unnormalized():
    with pytest.raises(ValueError):
        distance_to_mms(np.eye(2))


def test_thresholds():
    assert pqc_threshold(0.1, 1, 8) == 0.1
    assert pqc_threshold(0.1, 2, 4) == pytest.approx(0.05)
    assert pqc_threshold(0.1, math.inf, 8) == pytest.approx(0.0125)


def test_pqc_test_exact_randomizer(rng):
    states = [random_gaussian_state(2, "pure", rng) for _ in range(5)]
    v = pqc_test(fpqc_full(2), states, 1e-6, 1)
    assert v.passes and v.measured <= 1e-10 and v.threshold == 1e-6


def test_pqc_test_identity_fails(rng):
    v = pqc_test(None, [random_gaussian_state(2, "pure", rng)], 0.1, 1)
    assert not v.passes
    assert v.measured == pytest.approx(1.5, abs=1e-12)
    assert v.to_json()["passes"] is False


def test_pqc_test_dimension_override(rng):
    v = pqc_test(fpqc_full(1), [random_density(rng, 2)], 0.1, 2, dim=16)
    assert v.threshold == pytest.approx(0.1 / 4)
    assert pqc_test(None, [np.eye(2) / 2], 0.1, math.inf).to_json()["p"] == "inf"


def test_pqc_test_empty():
    with pytest.raises(ValueError):
        pqc_test(None, [], 0.1)


def test_batched_distance(rng):
    batch = np.array([random_density(rng, 4) for _ in range(3)])
    out = apply(fpqc_full(2), batch)
    assert np.all(distance_to_mms(out, 1) <= 1e-10)
