import math

import pytest

from omcavity.params import (
    SystemParams, PhysicalParams, validate, effective_params,
    chi_from_physical, kappa_from_medium, HBAR,
)


def test_defaults_valid():
    assert validate(SystemParams()).ok


def test_from_dict_rejects_unknown_keys():
    with pytest.raises(ValueError, match="unknown parameter"):
        SystemParams.from_dict({"delta_c": 0.5, "detuning": 1.0})


def test_round_trip_dict():
    p = SystemParams(delta_c=1.2, kappa=0.1)
    assert SystemParams.from_dict(p.to_dict()) == p


def test_replace_returns_new_instance():
    p = SystemParams()
    q = p.replace(e_l=3.0)
    assert q.e_l == 3.0 and p.e_l == 2.0


@pytest.mark.parametrize("kw", [
    {"eta": 0.0}, {"eta": -1.0}, {"gamma_a": -0.1}, {"chi": -1e-3},
    {"e_l": -2.0}, {"delta_c": math.nan}, {"delta_d": math.inf},
])
def test_invalid_params_flagged(kw):
    rep = validate(SystemParams(**kw))
    assert not rep.ok and rep.violations


def test_qd_denominator_guard():
    rep = validate(SystemParams(gamma_a=0.0, delta_d=0.0, g=0.2))
    assert not rep.ok
    # decoupled emitter makes the same point harmless
    assert validate(SystemParams(gamma_a=0.0, delta_d=0.0, g=0.0)).ok


def test_effective_params_absorber_signs():
    p = SystemParams(delta_c=0.5, delta_d=0.5, eta=0.4, gamma_a=0.01,
                     g=0.2, kappa=0.01, chi=0.04)
    eff = effective_params(p)
    d = 0.01 ** 2 + 0.5 ** 2
    # ground-state emitter broadens the line and pulls the detuning down
    assert eff.gamma_eff == pytest.approx(0.4 + 0.2 ** 2 * 0.01 / d)
    assert eff.theta_eff == pytest.approx(0.5 - 0.2 ** 2 * 0.5 / d)
    assert eff.beta == pytest.approx(0.04 ** 2 + 0.01)
    assert eff.e_tilde_sq == pytest.approx(2 * 0.4 * 4.0)


def test_effective_params_decoupled_emitter():
    p = SystemParams(g=0.0)
    eff = effective_params(p)
    assert eff.gamma_eff == p.eta
    assert eff.theta_eff == p.delta_c


def test_effective_params_inverted_emitter_flips_sign():
    base = SystemParams()
    inv = base.replace(sigma_z=1.0)
    eb, ei = effective_params(base), effective_params(inv)
    assert ei.gamma_eff == pytest.approx(2 * base.eta - eb.gamma_eff)
    assert ei.theta_eff == pytest.approx(2 * base.delta_c - eb.theta_eff)


def test_chi_from_physical():
    phys = PhysicalParams(omega_c=2e15, omega_m=2e7, length=1e-3, mass=1e-12)
    expect = 2e15 * HBAR / (1e-3 * 1e-12 * (2e7) ** 2)
    assert chi_from_physical(phys) == pytest.approx(expect, rel=1e-12)
    with pytest.raises(ValueError):
        chi_from_physical(PhysicalParams(omega_c=2e15, omega_m=2e7,
                                         length=0.0, mass=1e-12))


def test_kappa_from_medium_scaling():
    phys = PhysicalParams(omega_c=2e15, omega_m=2e7, length=1e-3, mass=1e-12,
                          v_c=1e-12, chi3_re=1e-30)
    k1 = kappa_from_medium(phys)
    k2 = kappa_from_medium(PhysicalParams(omega_c=2e15, omega_m=1e7,
                                          length=1e-3, mass=1e-12,
                                          v_c=1e-12, chi3_re=1e-30))
    assert k2 == pytest.approx(2 * k1)
    assert kappa_from_medium(PhysicalParams(omega_c=2e15, omega_m=2e7,
                                            length=1e-3, mass=1e-12)) == 0.0
