import math

import numpy as np
import pytest

from omcavity.params import SystemParams, effective_params
from omcavity import steady

FIG2 = SystemParams(delta_c=0.5, delta_d=0.5, eta=0.4, gamma_a=0.01,
                    kappa=0.01, chi=0.04, g=0.2, e_l=2.0)
BISTABLE = FIG2.replace(delta_c=1.2, delta_d=1.2, kappa=0.1, e_l=1.7)


def dense_scan_roots(params, n_max=50.0, points=400_001):
    """Bracketing oracle: sign changes of p(n) - 2 eta E_l^2 on a fine grid."""
    eff = effective_params(params)
    n = np.linspace(0.0, n_max, points)
    f = (n * (eff.gamma_eff ** 2 + (eff.theta_eff - eff.beta * n) ** 2)
         - eff.e_tilde_sq)
    idx = np.where(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]
    roots = []
    for i in idx:
        lo, hi = n[i], n[i + 1]
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            fm = (mid * (eff.gamma_eff ** 2
                         + (eff.theta_eff - eff.beta * mid) ** 2)
                  - eff.e_tilde_sq)
            if fm == 0.0:
                lo = hi = mid
                break
            if np.sign(fm) == np.sign(f[i]):
                lo = mid
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    return roots


def test_single_root_matches_dense_scan():
    rs = steady.steady_roots(FIG2)
    oracle = dense_scan_roots(FIG2)
    assert len(rs.branches) == len(oracle) == 1
    assert rs.branches[0].n == pytest.approx(oracle[0], rel=1e-10)
    assert rs.branches[0].stability == "stable"
    assert not rs.is_bistable


def test_three_roots_match_dense_scan():
    rs = steady.steady_roots(BISTABLE)
    oracle = dense_scan_roots(BISTABLE)
    assert len(rs.branches) == len(oracle) == 3
    for b, r in zip(rs.branches, oracle):
        assert b.n == pytest.approx(r, rel=1e-9)
    assert rs.is_bistable
    assert [b.stability for b in rs.branches] == ["stable", "unstable", "stable"]


def test_branch_self_consistency():
    """Each branch satisfies the full steady equations, not just the cubic."""
    for params in (FIG2, BISTABLE):
        for b in steady.steady_roots(params).branches:
            assert abs(b.a_s) ** 2 == pytest.approx(b.n, rel=1e-9)
            assert b.q_s == pytest.approx(params.chi * b.n)
            assert b.p_s == 0.0
            # cavity equation residual
            res = ((-1j * params.delta_c + 1j * params.chi * b.q_s
                    + 1j * params.kappa * b.n - params.eta) * b.a_s
                   - 1j * params.g * b.sigma_s
                   + math.sqrt(2 * params.eta) * params.e_l)
            assert abs(res) < 1e-9 * max(1.0, abs(b.a_s))
            # emitter equation residual
            res_s = (-(params.gamma_a + 1j * params.delta_d) * b.sigma_s
                     + 1j * params.g * params.sigma_z * b.a_s)
            assert abs(res_s) < 1e-12 * max(1.0, abs(b.a_s))


def test_undriven_cavity():
    rs = steady.steady_roots(FIG2.replace(e_l=0.0))
    assert rs.n_values == [0.0]
    assert rs.branches[0].a_s == 0j


def test_drive_power_at_roots():
    target = 2 * BISTABLE.eta * BISTABLE.e_l ** 2
    for b in steady.steady_roots(BISTABLE).branches:
        assert steady.drive_power(BISTABLE, b.n) == pytest.approx(target, rel=1e-9)


def test_turning_points_between_roots():
    tps = steady.turning_points(BISTABLE)
    assert len(tps) == 2
    n1, n2, n3 = steady.steady_roots(BISTABLE).n_values
    assert n1 < tps[0] < n2 < tps[1] < n3
    for t in tps:
        assert steady.drive_power_slope(BISTABLE, t) == pytest.approx(0.0, abs=1e-9)


def test_no_turning_points_when_monostable():
    assert steady.turning_points(FIG2) == []
    assert steady.turning_points(FIG2.replace(kappa=0.0, chi=0.0)) == []


def test_knee_drives_bracket_three_root_window():
    e_up, e_down = steady.knee_drives(BISTABLE)
    assert e_down < e_up
    inside = steady.steady_roots(BISTABLE.replace(e_l=0.5 * (e_up + e_down)))
    below = steady.steady_roots(BISTABLE.replace(e_l=0.9 * e_down))
    above = steady.steady_roots(BISTABLE.replace(e_l=1.1 * e_up))
    assert len(inside.branches) == 3
    assert len(below.branches) == 1
    assert len(above.branches) == 1


def test_discriminant_bracket_matches_compact_form():
    rng = np.random.default_rng(11)
    for _ in range(200):
        p = SystemParams(
            delta_c=rng.uniform(-2, 2), delta_d=rng.uniform(-2, 2),
            eta=rng.uniform(0.05, 1.0), gamma_a=rng.uniform(1e-3, 0.1),
            kappa=rng.uniform(0, 0.2), chi=rng.uniform(0, 0.3),
            g=rng.uniform(0, 1.0))
        eff = effective_params(p)
        compact = (eff.theta_eff ** 2 - 3 * eff.gamma_eff ** 2) * eff.d_qd ** 2
        printed = steady.discriminant_bracket(p)
        assert printed == pytest.approx(compact, rel=1e-10, abs=1e-12)


def test_bistability_predicate_consistency():
    assert steady.bistability_predicate(BISTABLE)[0]
    assert not steady.bistability_predicate(FIG2)[0]
    # beta = 0: linear response can never fold
    assert not steady.bistability_predicate(
        BISTABLE.replace(kappa=0.0, chi=0.0))[0]


def test_literal_cubic_mode_differs():
    c = steady.drive_polynomial(BISTABLE)
    cl = steady.drive_polynomial(BISTABLE, literal=True)
    assert cl[1] == pytest.approx(c[1] / 2)
    assert cl[0] == c[0] and cl[2] == c[2] and cl[3] == c[3]


def test_marginal_root_flagged():
    # drive exactly at a knee: double root, flagged degenerate + marginal
    e_up, _ = steady.knee_drives(BISTABLE)
    rs = steady.steady_roots(BISTABLE.replace(e_l=e_up))
    assert rs.degenerate or any(b.marginal for b in rs.branches) \
        or len(rs.branches) == 3  # fp jitter may split the double root
