"""The three recovery routes and the triangular Toeplitz kernel."""

import time

import numpy as np
import pytest
import scipy.linalg

import hankelinv as hv
from hankelinv import DataSet, LaurentPoly
from hankelinv.errors import (
    DataIdentityError,
    FactorizationUnavailableError,
    InjectivityError,
    SingularBlockError,
)

from conftest import random_poly


def perturbed(data, which, eps):
    kwargs = dict(alpha=data.alpha, beta=data.beta, gamma=data.gamma, delta=data.delta)
    bump = LaurentPoly.constant(eps * np.eye(kwargs[which].rows, kwargs[which].cols))
    kwargs[which] = kwargs[which] + bump
    return DataSet(**kwargs)


# -- tri_toeplitz_solve ---------------------------------------------------------


def test_tri_single_block(deg0_fixture):
    d0 = deg0_fixture.data.d0
    out = hv.tri_toeplitz_solve([d0], [np.eye(1)])
    assert abs(out[0][0, 0] - 0.75) < 1e-14


def test_tri_identity_diagonal(rng):
    rhs = [rng.standard_normal((2, 1)) for _ in range(5)]
    out = hv.tri_toeplitz_solve([np.eye(2)], rhs)
    for got, want in zip(out, rhs):
        assert np.allclose(got, want)


def test_tri_block_vs_dense_lu(rng):
    k, m = 3, 4
    blocks = [np.eye(k) + 0.3 * rng.standard_normal((k, k))]
    blocks += [0.4 * (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) for _ in range(m - 1)]
    rhs = [rng.standard_normal((k, 2)) for _ in range(m)]
    got = np.vstack(hv.tri_toeplitz_solve(blocks, rhs))
    dense = np.zeros((m * k, m * k), dtype=complex)
    for j in range(m):
        for i in range(j, m):
            dense[i * k : (i + 1) * k, j * k : (j + 1) * k] = blocks[i - j]
    want = np.linalg.solve(dense, np.vstack(rhs))
    assert np.max(np.abs(got - want)) <= 1e-11


def test_tri_upper_vs_dense_lu(rng):
    k, m = 2, 5
    blocks = [np.eye(k) + 0.2 * rng.standard_normal((k, k))]
    blocks += [0.4 * rng.standard_normal((k, k)) for _ in range(m - 1)]
    rhs = [rng.standard_normal((k, 1)) for _ in range(m)]
    got = np.vstack(hv.tri_toeplitz_solve(blocks, rhs, orientation="upper"))
    dense = np.zeros((m * k, m * k), dtype=complex)
    for j in range(m):
        for i in range(m - j):
            dense[i * k : (i + 1) * k, (i + j) * k : (i + j + 1) * k] = blocks[j]
    want = np.linalg.solve(dense, np.vstack(rhs))
    assert np.max(np.abs(got - want)) <= 1e-11


def test_tri_long_scalar_vs_dense(rng):
    m = 300
    t = np.zeros(m, dtype=complex)
    t[0] = 1.0
    t[1:] = 0.4 ** np.arange(1, m) * rng.standard_normal(m - 1)
    rhs = rng.standard_normal((m, 1))
    got = np.vstack(hv.tri_toeplitz_solve(list(t), list(rhs)))
    dense = scipy.linalg.toeplitz(t, np.concatenate([t[:1], np.zeros(m - 1)]))
    want = np.linalg.solve(dense, rhs)
    assert np.max(np.abs(got - want)) <= 1e-11


def test_tri_singular_diagonal():
    with pytest.raises(SingularBlockError):
        hv.tri_toeplitz_solve([np.zeros((2, 2))], [np.eye(2)])


def test_tri_scaling_certificate(rng):
    # doubling the block count should cost at most ~4x (plus noise)
    def timed(m):
        t = np.zeros(m, dtype=complex)
        t[0] = 1.0
        t[1:] = 0.3 ** np.arange(1, m) * rng.standard_normal(m - 1)
        rhs = rng.standard_normal((m, 1))
        cb = [t[j].reshape(1, 1) for j in range(m)]
        rb = [rhs[j].reshape(1, 1) for j in range(m)]
        hv.tri_toeplitz_solve(cb, rb)  # warm up
        return min(
            (lambda s=time.perf_counter(): (hv.tri_toeplitz_solve(cb, rb), time.perf_counter() - s)[1])()
            for _ in range(5)
        )

    t256, t512 = timed(256), timed(512)
    assert t512 <= 5 * t256 + 1e-3


# -- polynomial route -----------------------------------------------------------


def test_polynomial_trivial():
    rep = hv.solve_polynomial(hv.trivial_data(2, 1))
    assert rep.g.is_zero
    assert max(rep.residual_inclusions) == 0.0


def test_polynomial_deg0(deg0_fixture):
    rep = hv.solve_polynomial(deg0_fixture.data)
    assert abs(rep.g.coeff(0)[0, 0] - 0.5) < 1e-12
    assert rep.details["two_sided_gap"] < 1e-12


def test_polynomial_deg1(deg1_fixture):
    rep = hv.solve_polynomial(deg1_fixture.data)
    assert hv.poly_gap(rep.g, deg1_fixture.g) < 1e-12
    assert rep.details["two_sided_gap"] < 1e-12
    assert rep.details["phi_adjoint_gap"] < 1e-12


def test_polynomial_refuses_gross_violation(deg1_fixture):
    bad = perturbed(deg1_fixture.data, "beta", 1e-3)
    with pytest.raises(DataIdentityError) as err:
        hv.solve_polynomial(bad)
    assert "identity" in str(err.value)


def test_polynomial_flags_moderate_violation(deg1_fixture):
    bad = perturbed(deg1_fixture.data, "beta", 1e-3)
    rep = hv.solve_polynomial(bad, tol=1e-4)  # residual sits in the flag band
    assert rep.flags
    # dropping the cross identity decouples the two sides by ~ the bump size
    assert rep.details["two_sided_gap"] >= 1e-4


def test_polynomial_degree_bound():
    fx = hv.random_fixture(p=2, q=3, m=5, target_norm=0.7, rng_seed=33)
    rep = hv.solve_polynomial(fx.data)
    assert rep.g.hi <= fx.data.m


# -- truncated route --------------------------------------------------------------


def test_truncated_trivial():
    rep = hv.solve_truncated(hv.trivial_data(1, 1))
    assert rep.g.is_zero
    assert rep.details["sigma_min_m11"] == pytest.approx(1.0)
    assert rep.details["sigma_min_m22"] == pytest.approx(1.0)


def test_truncated_deg0(deg0_fixture):
    rep = hv.solve_truncated(deg0_fixture.data, n_blocks=6)
    assert abs(rep.g.coeff(0)[0, 0] - 0.5) < 1e-12
    assert rep.details["column_gap"] <= 1e-12


def test_truncated_matches_polynomial():
    fx = hv.random_fixture(p=2, q=2, m=4, target_norm=0.8, rng_seed=44)
    rp = hv.solve_polynomial(fx.data)
    rt = hv.solve_truncated(fx.data, n_blocks=24)
    assert hv.poly_gap(rp.g, rt.g) <= 1e-9
    assert rt.details["hankel_structure_defect"] <= 1e-10
    assert rt.details["tail_beyond_degree"] <= 1e-12


def test_truncated_injectivity_gate():
    # an absurd tolerance turns the certificate threshold above sigma_min
    with pytest.raises(InjectivityError):
        hv.solve_truncated(hv.trivial_data(1, 1), tol=1.0)


def test_truncated_refuses_bad_identities(deg1_fixture):
    bad = perturbed(deg1_fixture.data, "alpha", 1e-3)
    with pytest.raises(DataIdentityError):
        hv.solve_truncated(bad)


def test_truncated_tail_mass(deg1_fixture):
    rep = hv.solve_truncated(deg1_fixture.data, n_blocks=4)
    # window 4 certifies degree 0 only; the degree-1 mass is reported
    assert rep.details["tail_mass_uncertified"] > 1.0
    rep_full = hv.solve_truncated(deg1_fixture.data)
    assert rep_full.details["tail_mass_uncertified"] == 0.0


# -- factorization route -----------------------------------------------------------


def test_factorization_trivial():
    rep = hv.solve_factorization(hv.trivial_data(2, 2))
    assert rep.g.is_zero
    assert rep.details["path_gap"] == 0.0


def test_factorization_deg0(deg0_fixture):
    rep = hv.solve_factorization(deg0_fixture.data)
    assert abs(rep.g.coeff(0)[0, 0] - 0.5) < 1e-12
    assert rep.details["path_gap"] < 1e-12


def test_factorization_deg1(deg1_fixture):
    rep = hv.solve_factorization(deg1_fixture.data)
    assert hv.poly_gap(rep.g, deg1_fixture.g) < 1e-12


def test_factorization_unavailable_path():
    # alpha = 1 - 2z has its determinant zero inside the disk
    data = DataSet(
        alpha=LaurentPoly(1, 1, {0: [[1.0]], 1: [[-2.0]]}),
        beta=LaurentPoly.zero(1, 1),
        gamma=LaurentPoly.zero(1, 1),
        delta=LaurentPoly.identity(1),
    )
    rep = hv.solve_factorization(data, tol=1e6)  # identities off, gate relaxed
    assert rep.details["alpha_path"] == "fail"
    assert rep.details["delta_path"] == "pass"
    assert "only one factorization path available" in rep.flags


def test_factorization_no_paths():
    data = DataSet(
        alpha=LaurentPoly(1, 1, {0: [[1.0]], 1: [[-2.0]]}),
        beta=LaurentPoly.zero(1, 1),
        gamma=LaurentPoly.zero(1, 1),
        delta=LaurentPoly(1, 1, {0: [[1.0]], -1: [[-2.0]]}),
    )
    with pytest.raises(FactorizationUnavailableError):
        hv.solve_factorization(data, tol=1e6)


# -- dual phi -----------------------------------------------------------------------


def test_dual_phi_trivial():
    phi = hv.solve_dual_phi(hv.trivial_data(2, 1))
    assert phi.is_zero


def test_dual_phi_deg0(deg0_fixture):
    phi = hv.solve_dual_phi(deg0_fixture.data)
    assert abs(phi.coeff(0)[0, 0] - 0.5) < 1e-12


def test_dual_phi_deg1(deg1_fixture):
    phi = hv.solve_dual_phi(deg1_fixture.data)
    assert abs(phi.coeff(-1)[0, 0] - 0.5) < 1e-12
    assert hv.poly_gap(phi.adjoint(), deg1_fixture.g) < 1e-12


def test_dual_phi_adjoint_matches_g():
    fx = hv.random_fixture(p=3, q=2, m=3, target_norm=0.6, rng_seed=55)
    phi = hv.solve_dual_phi(fx.data)
    assert hv.poly_gap(phi.adjoint(), fx.g) <= 1e-10


# -- cross-method properties ----------------------------------------------------------


@pytest.mark.parametrize("seed,p,q,m,t", [(1, 1, 1, 0, 0.3), (2, 2, 1, 3, 0.6), (3, 2, 3, 5, 0.9)])
def test_method_agreement(seed, p, q, m, t):
    fx = hv.random_fixture(p=p, q=q, m=m, target_norm=t, rng_seed=seed)
    reports, gap, notes = hv.solve_all(fx.data)
    assert not notes
    assert gap <= 1e-8
    for rep in reports.values():
        assert hv.poly_gap(rep.g, fx.g) <= 1e-8
        assert rep.accepted


def test_uniqueness_probe(deg1_fixture, rng):
    d = deg1_fixture.data
    base = max(hv.inclusion_residuals(d, deg1_fixture.g))
    assert base <= 1e-12
    for _ in range(10):
        noise = random_poly(rng, 1, 1, tuple(rng.integers(0, 3, size=2)), scale=1e-3)
        perturbed_g = deg1_fixture.g + noise
        if hv.poly_gap(perturbed_g, deg1_fixture.g) == 0.0:
            continue
        assert max(hv.inclusion_residuals(d, perturbed_g)) > 1e-6
