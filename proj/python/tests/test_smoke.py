# Copyright 2026 The slatertt Authors
# SPDX-License-Identifier: Apache-2.0

import math

import numpy as np
import pytest

import slatertt


def h2(a=0.7, b=1.1):
    c, s, cp, sp = math.cos(a), math.sin(a), math.cos(b), math.sin(b)
    return np.array([[c, 0.0, s, 0.0], [0.0, cp, 0.0, sp]]), (c, s, cp, sp)


def test_random_isometry_is_reproducible_and_orthonormal():
    u = slatertt.random_isometry(3, 8, 11)
    assert np.array_equal(u, slatertt.random_isometry(3, 8, 11))
    assert np.allclose(u @ u.T, np.eye(3), atol=1e-13)


def test_coefficients_match_numpy_minors():
    u = slatertt.random_isometry(2, 5, 3)
    coeffs = slatertt.slater_coefficients(u)
    assert coeffs.shape == (32,)
    # bit (L-1-s) of the index marks site s
    idx = (1 << 4) | (1 << 1)  # sites 0 and 3
    assert coeffs[idx] == pytest.approx(np.linalg.det(u[:, [0, 3]]), abs=1e-14)
    assert np.linalg.norm(coeffs) == pytest.approx(1.0)


def test_spectrum_routes_agree_with_numpy_svd():
    u = slatertt.random_isometry(3, 8, 5)
    coeffs = slatertt.slater_coefficients(u)
    expected = np.linalg.svd(coeffs.reshape(16, 16), compute_uv=False)
    for method in ("dense", "sectors", "block"):
        assert np.allclose(slatertt.cut_spectrum(u, 4, method), expected, atol=1e-12)
    assert slatertt.inversion_residual(u, 4) < 1e-9
    s = expected
    assert slatertt.prefactor(u, 4) == pytest.approx((s[0] * s[7]) ** 2, rel=1e-9)


def test_h2_orderings():
    u, (c, s, cp, sp) = h2()
    assert slatertt.prefactor(u, 2) == pytest.approx((c * cp * s * sp) ** 2)
    for result in (slatertt.fiedler_order(u), slatertt.best_prefactor_order(u)):
        perm = result["permutation"]
        assert sorted(perm[:2]) in ([0, 2], [1, 3])
        moved = slatertt.apply_permutation(u, perm)
        assert np.allclose(slatertt.cut_spectrum(moved, 2, "dense"), [1, 0, 0, 0], atol=1e-14)
    rho = slatertt.two_orbital_rdm(u, 0, 2)
    assert rho.shape == (4, 4)
    assert np.trace(rho) == pytest.approx(1.0)
    im = slatertt.mutual_information(u)
    assert im[0, 1] < 1e-12 and im[0, 2] > 1e-3


def test_annealing_and_errors():
    u = slatertt.random_isometry(4, 10, 9)
    a = slatertt.anneal_prefactor_order(u, seed=4)
    assert a == slatertt.anneal_prefactor_order(u, seed=4)
    exact = slatertt.best_prefactor_order(u)
    assert a["objective"] >= exact["objective"]
    with pytest.raises(slatertt.CapacityError):
        slatertt.best_prefactor_order(u, cap=1)
    with pytest.raises(slatertt.ValidationError):
        slatertt.cut_spectrum(np.array([[1.0, 1.0]]), 1)
    assert issubclass(slatertt.ValidationError, slatertt.Error)


def test_experiment_and_selftest():
    r = slatertt.run_experiment(2, trials=2, seed=1, threads=1, methods=["canonical", "fiedler"])
    assert set(r["stats"]) == {"canonical", "fiedler"}
    assert len(r["stats"]["canonical"]["mean_log10"]) == 256
    assert len(r["seeds"]) == 2
    assert all(s["passed"] for s in slatertt.selftest(scale=0.02))
