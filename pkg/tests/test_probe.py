import math

import numpy as np
import pytest

from omcavity.params import SystemParams
from omcavity import probe
from omcavity.dynamics import time_domain_oracle
from omcavity.steady import steady_roots

# the four transmission scenarios exercised throughout (photon number fixed
# directly, emitter decoupled from the fluctuations)
OMIT_A = dict(params=SystemParams(delta_c=-0.9, eta=0.113, gamma_m=0.0017,
                                  kappa=0.078, chi=0.03, g=0.0), n=0.64)
FANO_C = dict(params=SystemParams(delta_c=1.2, eta=0.4, gamma_m=0.001,
                                  kappa=0.01, chi=0.1, g=0.0), n=1.0)


def linear_solve_oracle(params, n, delta_p, a_s=None):
    """Independent 2x2 solve of the sideband equations for (A1, A2*).

    Built straight from the linearized time-domain equations:
      -i dp A1 = M A1 + i kappa a_s^2 A2* + i chi a_s Q1 + S
      -i dp A2* = M* A2* - i kappa a_s*^2 A1 - i chi a_s* Q1
      Q1 = Z chi (a_s* A1 + a_s A2*)
    """
    if a_s is None:
        a_s = math.sqrt(n)
    z = 1.0 / (1.0 - delta_p ** 2 - 1j * params.gamma_m * delta_p)
    dtil = params.delta_c - params.chi ** 2 * n - 2 * params.kappa * n
    m = -1j * dtil - params.eta
    s = math.sqrt(2 * params.eta) * params.e_p
    c11 = m + 1j * delta_p + 1j * params.chi ** 2 * z * abs(a_s) ** 2
    c12 = 1j * params.kappa * a_s ** 2 + 1j * params.chi ** 2 * z * a_s ** 2
    c21 = -1j * params.kappa * np.conj(a_s) ** 2 \
        - 1j * params.chi ** 2 * z * np.conj(a_s) ** 2
    c22 = np.conj(m) + 1j * delta_p - 1j * params.chi ** 2 * z * abs(a_s) ** 2
    mat = np.array([[c11, c12], [c21, c22]])
    rhs = np.array([-s, 0.0])
    a1, a2c = np.linalg.solve(mat, rhs)
    q1 = z * params.chi * (np.conj(a_s) * a1 + a_s * a2c)
    return a1, np.conj(a2c), q1


def test_mech_susceptibility_limits():
    p = SystemParams()
    assert probe.mech_susceptibility(p, 0.0) == pytest.approx(1.0)
    z = probe.mech_susceptibility(p.replace(gamma_m=0.001), 1.0)
    assert z == pytest.approx(1000j)


def test_pole_guard():
    p = SystemParams(gamma_m=0.0)
    with pytest.raises(ZeroDivisionError):
        probe.mech_susceptibility(p, 1.0)


def test_closed_form_matches_linear_solve():
    rng = np.random.default_rng(3)
    for _ in range(300):
        p = SystemParams(
            delta_c=rng.uniform(-2, 2), eta=rng.uniform(0.05, 1),
            gamma_m=rng.uniform(1e-4, 0.05), kappa=rng.uniform(0, 0.2),
            chi=rng.uniform(0, 0.2), g=0.0, e_p=rng.uniform(1e-5, 1e-2))
        n = rng.uniform(0, 5)
        dp = rng.uniform(-2, 2)
        a1, a2, q1 = probe.probe_amplitude(p, n, dp)
        o1, o2, oq = linear_solve_oracle(p, n, dp)
        assert a1 == pytest.approx(o1, rel=1e-10, abs=1e-15)
        assert a2 == pytest.approx(o2, rel=1e-10, abs=1e-15)
        assert q1 == pytest.approx(oq, rel=1e-10, abs=1e-15)


def test_matches_time_domain_fourier_projection():
    """Full nonlinear integration with the probe on: project the late-time
    cavity field onto the two sideband frequencies and compare."""
    p = SystemParams(delta_c=1.1, delta_d=1.1, eta=0.4, gamma_a=0.01,
                     gamma_m=0.01, kappa=0.01, chi=0.04, g=0.0,
                     e_l=1.0, e_p=1e-5)
    rs = steady_roots(p)
    b = rs.branches[0]
    dp = 0.7
    traj = time_domain_oracle(p, initial=(b.q_s, 0.0, b.a_s, b.sigma_s),
                              t_max=4000.0, include_probe=True, delta_p=dp,
                              n_eval=120_001)
    t, a = traj.t, traj.a
    # project over an integer number of beat periods at the end
    period = 2 * math.pi / dp
    n_per = int(800.0 / period)
    mask = t >= t[-1] - n_per * period
    tt, aa = t[mask], (a - b.a_s)[mask]
    a1_num = np.trapezoid(aa * np.exp(1j * dp * tt), tt) / (tt[-1] - tt[0])
    a2_num = np.trapezoid(aa * np.exp(-1j * dp * tt), tt) / (tt[-1] - tt[0])
    a1, a2, _ = probe.probe_amplitude(p, b.n, dp, a_s=b.a_s)
    assert a1_num == pytest.approx(a1, rel=2e-3)
    # the Stokes line is ~40 dB below the anti-Stokes one here, so the
    # projection picks up relatively more transient residue
    assert a2_num == pytest.approx(a2, rel=2e-2)


def test_transmission_independent_of_probe_power():
    p = OMIT_A["params"]
    dp = np.linspace(-1.2, -0.8, 101)
    t_ref = probe.transmission(p, 0.64, dp)
    for ep in (1e-6, 1e-3, 1.0):
        t = probe.transmission(p.replace(e_p=ep), 0.64, dp)
        assert np.max(np.abs(t - t_ref)) < 1e-12


def test_all_pass_identity():
    p = SystemParams(kappa=0.0, chi=0.0, g=0.0, delta_c=0.7, eta=0.33)
    dp = np.linspace(-2, 2, 501)
    assert np.max(np.abs(probe.transmission(p, 3.0, dp) - 1.0)) < 1e-12


def test_no_probe_no_response():
    p = OMIT_A["params"].replace(e_p=0.0)
    a1, a2, q1 = probe.probe_amplitude(p, 0.64, 0.3)
    assert a1 == 0 and a2 == 0 and q1 == 0


def test_decoupled_sidebands():
    p = SystemParams(kappa=0.0, chi=0.0, g=0.0)
    a1, a2, q1 = probe.probe_amplitude(p, 2.0, 0.4)
    f = probe.linear_factors(p, 2.0, 0.4)
    assert a2 == 0 and q1 == 0
    assert a1 == pytest.approx(-math.sqrt(2 * p.eta) * p.e_p / f.y_factor)


def test_stokes_suppression_along_beta_ray():
    p0 = OMIT_A["params"]
    mags = []
    for s in (1.0, 0.5, 0.25, 0.1):
        p = p0.replace(kappa=p0.kappa * s ** 2, chi=p0.chi * s)
        mags.append(abs(probe.probe_amplitude(p, 0.64, 0.5)[1]))
    assert all(a > b for a, b in zip(mags, mags[1:]))
    assert mags[-1] < 0.02 * mags[0]


def test_a_s_phase_does_not_change_transmission():
    p = FANO_C["params"]
    dp = np.linspace(0.9, 1.1, 64)
    t1 = probe.spectrum(p, 1.0, dp).t
    t2 = probe.spectrum(p, 1.0, dp, a_s=np.exp(0.7j)).t
    assert np.max(np.abs(t1 - t2)) < 1e-12


def test_delta_tilde_scenario_a():
    v = probe.delta_tilde(OMIT_A["params"], 0.64)
    assert v == pytest.approx(-1.0004, abs=1e-4)


def test_spectrum_grid_validation_and_warning():
    p = OMIT_A["params"]
    with pytest.raises(ValueError):
        probe.spectrum(p, 0.64, np.array([0.0, 0.0, 1.0]))
    coarse = probe.spectrum(p, 0.64, np.linspace(-1.5, -0.5, 64))
    assert coarse.warnings
    fine = probe.spectrum(p, 0.64,
                          probe.make_grid(-1.5, -0.5, 801, p.gamma_m))
    assert not fine.warnings


def test_make_grid_refinement():
    g = probe.make_grid(-2, 2, 201, 0.002)
    assert np.all(np.diff(g) > 0)
    for center in (-1.0, 1.0):
        near = np.abs(g - center) <= 10 * 0.002
        far_step = 4.0 / 200
        assert np.diff(g[near]).max() < far_step / 5


def test_eit_model_bare_cavity_limit():
    p = SystemParams(chi=0.0, kappa=0.02, g=0.0, delta_c=1.0, eta=0.1)
    dp = np.linspace(0.5, 1.5, 31)
    da, t = probe.eit_model_response(p, 1.0, dp)
    dtil = probe.delta_tilde(p, 1.0)
    den = 1j * (dtil - dp) + p.eta
    assert np.allclose(da, math.sqrt(2 * p.eta) * p.e_p / den)
    assert np.allclose(t, np.abs(1 - 2 * p.eta / den) ** 2)


def test_eit_model_perfect_suppression_limit():
    p = SystemParams(chi=0.05, kappa=0.0, g=0.0, delta_c=1.0, eta=0.1,
                     gamma_m=1e-9)
    da, _ = probe.eit_model_response(p, 1.0, 1.0)
    assert abs(da) < 1e-6


def test_features_flat_spectrum():
    f = probe.extract_features(np.linspace(-2, 2, 64), np.ones(64))
    assert f.peak_positions == () and f.dip_positions == ()
    assert f.contrast == 0.0


def test_features_lorentzian_peak():
    x = np.linspace(-1.0, 1.0, 2001)
    width = 0.05
    y = 1.0 + 2.0 / (1.0 + ((x - 0.1) / width) ** 2)
    f = probe.extract_features(x, y)
    assert f.principal_kind == "peak"
    assert f.principal_position == pytest.approx(0.1, abs=1e-4)
    assert f.window_width == pytest.approx(2 * width, rel=0.02)
    assert abs(f.asymmetry) < 0.02
    # contrast is measured inside the feature window, which clips the
    # Lorentzian tails: strictly between half and full prominence
    assert 1.0 < f.contrast <= 2.0


def test_features_asymmetric_profile():
    x = np.linspace(-1, 1, 4001)
    d = (x - 0.0)
    q = 2.0  # Fano-like asymmetric shape
    y = 1.0 + ((q * 0.05 + d) ** 2 / (d ** 2 + 0.05 ** 2) - 1.0) * 0.2
    f = probe.extract_features(x, y)
    assert abs(f.asymmetry) > 0.05
    assert -1.0 <= f.asymmetry <= 1.0
