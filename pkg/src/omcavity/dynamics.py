"""Mean-field time-domain integration, used as an independent oracle for
the steady-state solutions and their stability.

Integrates the coupled equations for the mechanical quadratures (Q, P),
the cavity amplitude a and the QD polarization sigma with the pump always
on and the probe optionally included:

    dQ/dt     = P
    dP/dt     = -Q + chi |a|^2 - gamma_m P
    da/dt     = (-i delta_c + i chi Q + i kappa |a|^2 - eta) a
                - i g sigma + sqrt(2 eta) E_l [+ probe]
    dsigma/dt = -(gamma_a + i delta_d) sigma + i g sigma_z a

(sigma_z = -1 recovers the absorber form used throughout the steady-state
analysis; omega_m = 1.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .params import SystemParams, require_valid


@dataclass(frozen=True)
class TrajectoryResult:
    t: np.ndarray
    q: np.ndarray
    p: np.ndarray
    a: np.ndarray
    sigma: np.ndarray
    converged: bool
    final_state: tuple  # (Q, P, a, sigma)

    @property
    def final_n(self) -> float:
        return abs(self.final_state[2]) ** 2


def _rhs(params: SystemParams, include_probe: bool):
    dc, dd = params.delta_c, params.delta_d
    eta, ga, gm = params.eta, params.gamma_a, params.gamma_m
    kappa, chi, g, sz = params.kappa, params.chi, params.g, params.sigma_z
    drive = math.sqrt(2.0 * eta) * params.e_l
    probe = math.sqrt(2.0 * eta) * params.e_p if include_probe else 0.0

    def rhs(t, y, delta_p=0.0):
        q, p = y[0], y[1]
        a = y[2] + 1j * y[3]
        s = y[4] + 1j * y[5]
        n = (a.real * a.real + a.imag * a.imag)
        da = ((-1j * dc + 1j * chi * q + 1j * kappa * n - eta) * a
              - 1j * g * s + drive)
        if probe:
            da += probe * np.exp(-1j * delta_p * t)
        ds = -(ga + 1j * dd) * s + 1j * g * sz * a
        return [p,
                -q + chi * n - gm * p,
                da.real, da.imag,
                ds.real, ds.imag]

    return rhs


def time_domain_oracle(params: SystemParams,
                       initial=None,
                       t_max: float = 2000.0,
                       include_probe: bool = False,
                       delta_p: float = 0.0,
                       rtol: float = 1e-10,
                       atol: float = 1e-12,
                       fp_tol: float = 1e-8,
                       n_eval: int = 400) -> TrajectoryResult:
    """Integrate the mean-field equations and report the asymptotic state.

    ``initial`` is (Q, P, a, sigma); defaults to the origin.  Convergence
    to a fixed point is judged by the residual of the right-hand side at
    the final time (probe excluded from the residual).  Non-convergence is
    reported through the flag, not raised.
    """
    require_valid(params)
    if initial is None:
        initial = (0.0, 0.0, 0j, 0j)
    q0, p0, a0, s0 = initial
    y0 = [q0, p0, complex(a0).real, complex(a0).imag,
          complex(s0).real, complex(s0).imag]
    rhs = _rhs(params, include_probe)
    sol = solve_ivp(rhs, (0.0, t_max), y0, args=(delta_p,),
                    t_eval=np.linspace(0.0, t_max, n_eval),
                    rtol=rtol, atol=atol, method="RK45")
    y = sol.y
    a = y[2] + 1j * y[3]
    sigma = y[4] + 1j * y[5]
    yf = y[:, -1]
    resid = np.linalg.norm(_rhs(params, False)(sol.t[-1], yf))
    scale = max(1.0, np.linalg.norm(yf))
    converged = bool(sol.success and resid <= fp_tol * scale)
    final = (yf[0], yf[1], yf[2] + 1j * yf[3], yf[4] + 1j * yf[5])
    return TrajectoryResult(t=sol.t, q=y[0], p=y[1], a=a, sigma=sigma,
                            converged=converged, final_state=final)


def branch_initial_state(branch, scale: float = 1.0):
    """Initial condition at (or perturbed around) a steady branch."""
    return (branch.q_s * scale, 0.0, branch.a_s * scale, branch.sigma_s * scale)
