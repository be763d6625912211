import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ptdyn.infomeasures import von_neumann_entropy
from ptdyn.ptdynamics import (
    PTParams,
    Regime,
    RenormalizationError,
    bloch,
    damping,
    default_horizon,
    evolve,
    ghz,
    ghz_dm,
    hpt,
    propagator,
    reduced_b_closed,
    stable_state_a,
    stable_state_b,
)
from ptdyn.qmath import SX, expm_2x2, partial_trace, trace_distance, validate_density_matrix

from oracles import expm_series, random_density_matrix


def test_params_validation_and_regimes():
    assert PTParams(0.3).regime is Regime.UNBROKEN
    assert PTParams(1.0).regime is Regime.EXCEPTIONAL
    assert PTParams(2.0).regime is Regime.BROKEN
    assert PTParams(2.0).k == pytest.approx(math.sqrt(3))
    assert PTParams(2.0).theta == pytest.approx(math.pi / 3)
    assert PTParams(0.6).gap == pytest.approx(1.6)
    with pytest.raises(ValueError):
        PTParams(-0.1)
    with pytest.raises(ValueError):
        PTParams(0.5, s=0)


def test_hpt_hermitian_limit():
    np.testing.assert_array_equal(hpt(PTParams(0.0)), SX)


@given(r=st.floats(0, 10), s=st.floats(0.1, 10))
def test_hpt_pt_symmetry(r, s):
    h = hpt(PTParams(r, s))
    np.testing.assert_allclose(SX @ h.conj() @ SX, h, atol=1e-12)


def test_hpt_spectrum():
    w = np.sort_complex(np.linalg.eigvals(hpt(PTParams(0.6))))
    np.testing.assert_allclose(w, [-0.8, 0.8], atol=1e-12)


def test_propagator_t0():
    for r in (0.0, 0.5, 1.0, 3.0):
        np.testing.assert_array_equal(propagator(PTParams(r), 0.0), np.eye(2))


def test_propagator_matches_series():
    p = PTParams(0.6)
    np.testing.assert_allclose(propagator(p, 1.7), expm_series(hpt(p), 1.7), atol=1e-10)
    np.testing.assert_allclose(propagator(p, 1.7), expm_2x2(hpt(p), 1.7), atol=1e-12)


@pytest.mark.parametrize("r", [0.2, 0.99, 1.0, 1.01, 2.0, 5.0])
@pytest.mark.parametrize("t", [0.1, 0.9, 2.5])
def test_propagator_matches_cayley_hamilton(r, t):
    p = PTParams(r, s=0.8)
    u = propagator(p, t)
    ref = expm_2x2(hpt(p), t)
    assert np.max(np.abs(u - ref)) <= 1e-10 * max(1.0, np.max(np.abs(ref)))


def test_propagator_broken_growth():
    r, t = 2.0, 3.0
    k = math.sqrt(3)
    u = propagator(PTParams(r), t) * math.exp(-k * t)
    root = math.sqrt(r * r - 1)
    limit = 0.5 * np.array([[1 + r / root, -1j / root], [-1j / root, 1 - r / root]])
    np.testing.assert_allclose(u, limit, atol=5 * math.exp(-2 * k * t))


@pytest.mark.parametrize("t", [0.5, 2.0, 4.0])
def test_propagator_continuous_across_ep(t):
    u_ep = propagator(PTParams(1.0), t)
    for r in (1 - 1e-6, 1 + 1e-6):
        assert np.linalg.norm(propagator(PTParams(r), t) - u_ep) < 1e-4


def test_propagator_ep_gap_shrinks_linearly():
    # the r-derivative grows like t^3, so check the rate rather than a fixed bound
    t = 7.0
    u_ep = propagator(PTParams(1.0), t)
    for side in (-1, 1):
        d = [np.linalg.norm(propagator(PTParams(1 + side * eps), t) - u_ep)
             for eps in (1e-5, 1e-6, 1e-7)]
        assert d[0] / d[1] == pytest.approx(10, rel=0.05)
        assert d[1] / d[2] == pytest.approx(10, rel=0.05)


def test_evolve_t0_and_hermitian_limit(rng):
    rho0 = random_density_matrix(rng, 3)
    np.testing.assert_allclose(evolve(rho0, PTParams(1.5), 0.0), rho0, atol=1e-15)
    p = PTParams(0.0)
    u = np.kron(propagator(p, 1.3), np.eye(4))
    raw = u @ rho0 @ u.conj().T
    assert abs(np.trace(raw) - 1) < 1e-12
    np.testing.assert_allclose(evolve(rho0, p, 1.3), raw, atol=1e-12)


def test_evolve_output_is_density_matrix(rng):
    for _ in range(100):
        rho0 = random_density_matrix(rng, 3, rank=int(rng.integers(1, 9)))
        p = PTParams(float(rng.uniform(0, 4)), s=float(rng.uniform(0.2, 3)))
        validate_density_matrix(evolve(rho0, p, float(rng.uniform(0, 6))))


def test_evolve_converges_to_bob_stable_state():
    rho = evolve(ghz_dm(), PTParams(2.0), 10.0)
    assert trace_distance(partial_trace(rho, [1]), stable_state_b(2.0)) < 1e-6


def test_evolve_survives_huge_kt():
    p = PTParams(3.0)
    rho = evolve(ghz_dm(), p, 1000.0 / p.k)
    validate_density_matrix(rho)
    assert trace_distance(partial_trace(rho, [1]), stable_state_b(3.0)) < 1e-12


def test_evolve_zero_state_raises():
    with pytest.raises(RenormalizationError):
        evolve(np.zeros((8, 8)), PTParams(0.5), 1.0)


def test_reduced_b_closed_examples():
    np.testing.assert_allclose(reduced_b_closed(PTParams(2.0), 0.0), np.eye(2) / 2)
    p = PTParams(2.0)
    brute = partial_trace(evolve(ghz_dm(), p, 1.3), [1])
    np.testing.assert_allclose(reduced_b_closed(p, 1.3), brute, atol=1e-10)


def test_reduced_b_closed_grid():
    worst = 0.0
    for r in np.linspace(0.05, 4.0, 20):
        for s in (0.7,):
            p = PTParams(float(r), s=s)
            for t in np.linspace(0.0, 6.0, 20):
                closed = reduced_b_closed(p, t)
                assert closed[0, 1] == 0 and closed[1, 0] == 0
                brute = partial_trace(evolve(ghz_dm(), p, t), [1])
                worst = max(worst, np.max(np.abs(closed - brute)))
    assert worst < 1e-10


def test_stable_state_b():
    np.testing.assert_allclose(stable_state_b(1 + 1e-12), np.eye(2) / 2, atol=1e-6)
    np.testing.assert_allclose(np.diag(stable_state_b(2.0)).real, [0.93301, 0.06699], atol=1e-5)
    ket0 = np.diag([1, 0])
    assert trace_distance(stable_state_b(1e6), ket0) < 1e-6
    for bad in (0.5, 1.0):
        with pytest.raises(ValueError):
            stable_state_b(bad)


def test_stable_state_a():
    np.testing.assert_allclose(bloch(stable_state_a(1 + 1e-12)), [0, -1, 0], atol=1e-5)
    assert abs(stable_state_a(2.0)[0, 1]) == pytest.approx(0.25, abs=1e-15)
    for r in np.geomspace(1.001, 1e3, 30):
        rho = stable_state_a(r)
        np.testing.assert_allclose(np.linalg.eigvalsh(rho), [0, 1], atol=1e-12)
        th = math.acos(1 / r)
        np.testing.assert_allclose(bloch(rho), [0, -math.cos(th), math.sin(th)], atol=1e-12)
        assert abs(rho[0, 1]) == pytest.approx(damping(r), abs=1e-15)
    with pytest.raises(ValueError):
        stable_state_a(1.0)


def test_stable_state_a_matches_long_time_evolution():
    # fixes the sign of the sigma_y coherence
    for r in (1.5, 2.0, 4.0):
        p = PTParams(r)
        rho_a = partial_trace(evolve(ghz_dm(), p, 20 / p.k), [0])
        assert trace_distance(rho_a, stable_state_a(r)) < 1e-9


def test_bloch_norms():
    np.testing.assert_allclose(bloch(np.eye(2) / 2), 0)
    for r in (1.01, 2.0, 10.0):
        assert np.linalg.norm(bloch(stable_state_a(r))) == pytest.approx(1, abs=1e-12)
        assert np.linalg.norm(bloch(stable_state_b(r))) == pytest.approx(
            math.sqrt(r * r - 1) / r, abs=1e-12)


def test_ghz():
    psi = ghz()
    assert np.nonzero(psi)[0].tolist() == [0, 7]
    assert np.linalg.norm(psi) == pytest.approx(1, abs=1e-15)
    rho = ghz_dm()
    assert np.trace(rho @ rho).real == pytest.approx(1, abs=1e-14)
    for q in range(3):
        np.testing.assert_allclose(partial_trace(rho, [q]), np.eye(2) / 2)


def test_default_horizon():
    assert default_horizon(PTParams(0.6)) == pytest.approx(4 * 2 * math.pi / 1.6)
    assert default_horizon(PTParams(2.0)) == pytest.approx(20 / math.sqrt(3))
    assert default_horizon(PTParams(1.0, s=2.0)) == pytest.approx(10.0)


@settings(max_examples=60, deadline=None)
@given(r=st.floats(0.01, 0.99), t=st.floats(0, 20))
def test_unbroken_periodicity(r, t):
    p = PTParams(r)
    a = evolve(ghz_dm(), p, t)
    b = evolve(ghz_dm(), p, t + p.period)
    assert trace_distance(a, b) < 1e-9


@settings(max_examples=60, deadline=None)
@given(r=st.floats(0, 6), t=st.floats(0, 15))
def test_purity_and_complementarity(r, t):
    rho = evolve(ghz_dm(), PTParams(r), t)
    assert np.trace(rho @ rho).real == pytest.approx(1, abs=1e-10)
    s = von_neumann_entropy
    assert abs(s(partial_trace(rho, [0])) - s(partial_trace(rho, [1, 2]))) < 1e-9
    assert abs(s(partial_trace(rho, [2])) - s(partial_trace(rho, [0, 1]))) < 1e-9
    assert np.max(np.abs(partial_trace(rho, [1]) - partial_trace(rho, [2]))) < 1e-12


@pytest.mark.parametrize("r", [1.05, 1.5, 2.0, 5.0, 20.0])
def test_broken_convergence_after_20_over_k(r):
    p = PTParams(r)
    for t in (20 / p.k, 25 / p.k, 40 / p.k):
        rho_b = partial_trace(evolve(ghz_dm(), p, t), [1])
        assert trace_distance(rho_b, stable_state_b(r)) < 1e-6
