"""Model parameters, validation and derived effective quantities.

All frequency-like quantities are expressed in units of the mechanical
frequency omega_m, which is therefore fixed to 1 internally and never
stored.  The cavity is described by its detuning ``delta_c`` from the pump,
the quantum dot (QD) by its detuning ``delta_d`` and decay ``gamma_a``, and
the two optical nonlinearities by the Kerr coefficient ``kappa`` and the
dimensionless optomechanical coupling ``chi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace, asdict

HBAR = 1.054_571_817e-34  # J s


@dataclass(frozen=True)
class SystemParams:
    """Scenario parameters in units of the mechanical frequency.

    ``sigma_z`` is the steady QD inversion.  It defaults to -1 (QD in the
    ground state, low-excitation regime) and may be overridden for
    exploration; the QD back-action on the cavity is linear in it.
    """

    delta_c: float = 0.5
    delta_d: float = 0.5
    eta: float = 0.4
    gamma_a: float = 0.01
    gamma_m: float = 0.01
    kappa: float = 0.01
    chi: float = 0.04
    g: float = 0.2
    e_l: float = 2.0
    e_p: float = 1e-4
    sigma_z: float = -1.0

    def replace(self, **kw) -> "SystemParams":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SystemParams":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown parameter keys: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class PhysicalParams:
    """Laboratory-frame quantities used to derive the scaled couplings."""

    omega_c: float  # cavity frequency, rad/s
    omega_m: float  # mechanical frequency, rad/s
    length: float  # cavity length, m
    mass: float  # effective mirror mass, kg
    v_c: float = 1e-12  # cavity mode volume, m^3
    chi3_re: float = 0.0  # Re of the third-order susceptibility, SI
    eps0: float = 8.854_187_8128e-12  # dielectric constant, SI


@dataclass(frozen=True)
class EffectiveParams:
    """Lumped quantities that make the drive-response cubic a one-liner.

    ``gamma_eff`` and ``theta_eff`` absorb the dispersive and absorptive
    QD back-action into an effective cavity linewidth and detuning;
    ``beta`` is the total nonlinear detuning shift per photon.
    """

    beta: float
    d_qd: float
    gamma_eff: float
    theta_eff: float
    e_tilde_sq: float


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.ok


def validate(params: SystemParams) -> ValidationReport:
    """Check parameter invariants; returns a report, never raises."""
    v = []
    for name in ("delta_c", "delta_d", "eta", "gamma_a", "gamma_m", "kappa",
                 "chi", "g", "e_l", "e_p", "sigma_z"):
        x = getattr(params, name)
        if not math.isfinite(x):
            v.append(f"{name} must be finite")
    if params.eta <= 0:
        v.append("eta must be positive")
    for name in ("gamma_a", "gamma_m", "kappa", "chi", "g", "e_l", "e_p"):
        if getattr(params, name) < 0:
            v.append(f"{name} must be nonnegative")
    if params.g > 0 and params.gamma_a == 0 and params.delta_d == 0:
        v.append("QD denominator vanishes (gamma_a = delta_d = 0 with g > 0)")
    return ValidationReport(ok=not v, violations=tuple(v))


def require_valid(params: SystemParams) -> None:
    rep = validate(params)
    if not rep.ok:
        raise ValueError("invalid parameters: " + "; ".join(rep.violations))


def effective_params(params: SystemParams) -> EffectiveParams:
    """Effective cavity linewidth/detuning and nonlinear shift per photon.

    For the default inversion sigma_z = -1 the QD acts as an absorber:
    gamma_eff = eta + g^2 gamma_a / D and theta_eff = delta_c - g^2 delta_d / D
    with D = gamma_a^2 + delta_d^2.  These signs are the ones consistent with
    the cubic's cross terms and the bistability discriminant.
    """
    require_valid(params)
    beta = params.chi ** 2 + params.kappa
    d_qd = params.gamma_a ** 2 + params.delta_d ** 2
    if params.g > 0:
        gamma_eff = params.eta - params.sigma_z * params.g ** 2 * params.gamma_a / d_qd
        theta_eff = params.delta_c + params.sigma_z * params.g ** 2 * params.delta_d / d_qd
    else:
        gamma_eff = params.eta
        theta_eff = params.delta_c
    e_tilde_sq = 2.0 * params.eta * params.e_l ** 2
    return EffectiveParams(beta=beta, d_qd=d_qd, gamma_eff=gamma_eff,
                           theta_eff=theta_eff, e_tilde_sq=e_tilde_sq)


def chi_from_physical(phys: PhysicalParams) -> float:
    """Dimensionless optomechanical coupling from lab-frame quantities.

    The cavity pull per displacement is G = (omega_c/L) sqrt(hbar/(m omega_m));
    scaling by the mechanical zero-point factor once more gives
    chi = omega_c * hbar / (L * m * omega_m^2).
    """
    _check_positive(phys, ("omega_c", "omega_m", "length", "mass"))
    return phys.omega_c * HBAR / (phys.length * phys.mass * phys.omega_m ** 2)


def kappa_from_medium(phys: PhysicalParams) -> float:
    """Kerr coefficient of a chi^(3) medium filling the cavity, in units of omega_m."""
    _check_positive(phys, ("omega_c", "omega_m", "v_c", "eps0"))
    kappa_si = 3.0 * phys.omega_c ** 2 * phys.chi3_re / (2.0 * phys.eps0 * phys.v_c)
    return kappa_si / phys.omega_m


def _check_positive(phys: PhysicalParams, names) -> None:
    for name in names:
        if getattr(phys, name) <= 0:
            raise ValueError(f"{name} must be positive")
