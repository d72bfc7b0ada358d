"""Steady states of the driven cavity: the drive-response cubic, branch
reconstruction, stability by the slope rule, turning points and the
bistability criterion.

The central object is the response polynomial in the intracavity photon
number n:

    p(n) = n |d(n)|^2,   d(n) = gamma_eff + i (theta_eff - beta n)

A steady state satisfies p(n) = 2 eta E_l^2.  Expanded, that is the cubic

    beta^2 n^3 - 2 beta theta_eff n^2 + (gamma_eff^2 + theta_eff^2) n
        = 2 eta E_l^2

Note the factor 2 on the quadratic coefficient: it is what the turning
point quadratic and the discriminant criterion require.  A diagnostic
mode with the quadratic coefficient halved is available for comparison
output only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import cubic
from .params import SystemParams, EffectiveParams, effective_params, require_valid

DEGENERATE_REL_TOL = 1e-8


@dataclass(frozen=True)
class SteadyStateBranch:
    n: float
    a_s: complex
    q_s: float
    p_s: float
    sigma_s: complex
    stability: str = "unknown"  # "stable" | "unstable"
    marginal: bool = False


@dataclass(frozen=True)
class RootSet:
    params: SystemParams
    branches: tuple  # SteadyStateBranch, sorted by n ascending
    discriminant_value: float
    is_bistable: bool
    discarded_negative: int = 0
    discarded_complex: int = 0
    degenerate: bool = False

    @property
    def n_values(self):
        return [b.n for b in self.branches]

    def max_stable_n(self) -> float:
        stable = [b.n for b in self.branches if b.stability == "stable"]
        return max(stable) if stable else max(self.n_values)


def drive_polynomial(params: SystemParams, literal: bool = False):
    """Cubic coefficients (c3, c2, c1, c0) of the drive-response equation in n.

    ``literal=True`` evaluates the quadratic coefficient exactly as printed
    in the source cubic (half the consistent value); diagnostic only.
    """
    eff = effective_params(params)
    c3 = eff.beta ** 2
    c2 = -2.0 * eff.beta * eff.theta_eff
    if literal:
        c2 /= 2.0
    c1 = eff.gamma_eff ** 2 + eff.theta_eff ** 2
    c0 = -eff.e_tilde_sq
    return c3, c2, c1, c0


def response_denominator(params: SystemParams, n: float,
                         eff: EffectiveParams | None = None) -> complex:
    """d(n) = gamma_eff + i (theta_eff - beta n)."""
    if eff is None:
        eff = effective_params(params)
    return complex(eff.gamma_eff, eff.theta_eff - eff.beta * n)


def drive_power(params: SystemParams, n: float) -> float:
    """p(n) = n |d(n)|^2; equals 2 eta E_l^2 at a steady state."""
    return n * abs(response_denominator(params, n)) ** 2


def drive_power_slope(params: SystemParams, n: float,
                      eff: EffectiveParams | None = None) -> float:
    """dp/dn, the quantity whose sign is the slope stability criterion."""
    if eff is None:
        eff = effective_params(params)
    return (3.0 * eff.beta ** 2 * n * n
            - 4.0 * eff.beta * eff.theta_eff * n
            + eff.gamma_eff ** 2 + eff.theta_eff ** 2)


def _make_branch(params: SystemParams, eff: EffectiveParams, n: float) -> SteadyStateBranch:
    d = complex(eff.gamma_eff, eff.theta_eff - eff.beta * n)
    a_s = math.sqrt(2.0 * params.eta) * params.e_l / d if params.e_l > 0 else 0j
    q_s = params.chi * n
    # steady QD polarization from the absorber-convention Bloch equation
    if params.g > 0:
        sigma_s = 1j * params.g * params.sigma_z * a_s / complex(params.gamma_a, params.delta_d)
    else:
        sigma_s = 0j
    return SteadyStateBranch(n=n, a_s=a_s, q_s=q_s, p_s=0.0, sigma_s=sigma_s)


def steady_roots(params: SystemParams) -> RootSet:
    """All coexisting steady states at the given pump drive.

    Roots of the cubic are filtered to real nonnegative photon numbers,
    expanded into full branches, and classified by the slope criterion.
    Nearly coincident roots are merged and flagged degenerate.
    """
    require_valid(params)
    eff = effective_params(params)
    c3, c2, c1, c0 = drive_polynomial(params)
    roots = cubic.real_roots(c3, c2, c1, c0)
    n_discarded_complex = 3 - len(roots) if c3 != 0.0 else 1 - len(roots)

    positive, n_neg = [], 0
    for r in roots:
        if r < -1e-14:
            n_neg += 1
        else:
            positive.append(max(r, 0.0))

    # merge degenerate pairs (turning-point double roots)
    merged, degenerate = [], False
    for r in positive:
        if merged and abs(r - merged[-1]) < DEGENERATE_REL_TOL * max(1.0, r):
            degenerate = True
            continue
        merged.append(r)
    if not merged:
        merged = [0.0]  # undriven or fully detuned limit

    branches = tuple(_make_branch(params, eff, n) for n in merged)
    bistable, disc = bistability_predicate(params)
    rs = RootSet(params=params, branches=branches, discriminant_value=disc,
                 is_bistable=(len(branches) == 3 and all(b.n > 0 for b in branches)),
                 discarded_negative=n_neg,
                 discarded_complex=max(n_discarded_complex, 0),
                 degenerate=degenerate)
    return classify_stability(rs)


def classify_stability(root_set: RootSet) -> RootSet:
    """Fill branch stability from the slope of the drive-response curve.

    A branch is stable iff dp/dn > 0 at its root; a vanishing slope
    (turning point) is flagged marginal and reported unstable.
    """
    eff = effective_params(root_set.params)
    out = []
    for b in root_set.branches:
        slope = drive_power_slope(root_set.params, b.n, eff)
        tol = 1e-9 * max(1.0, eff.gamma_eff ** 2 + eff.theta_eff ** 2)
        if abs(slope) <= tol:
            out.append(replace(b, stability="unstable", marginal=True))
        else:
            out.append(replace(b, stability="stable" if slope > 0 else "unstable"))
    return replace(root_set, branches=tuple(out))


def turning_points(params: SystemParams) -> list[float]:
    """Photon numbers of the response-curve knees (0 or 2 values).

    Real positive roots of dp/dn = 0; empty when the cubic is monotone
    for nonnegative n or when beta = 0.
    """
    eff = effective_params(params)
    if eff.beta == 0.0:
        return []
    disc = eff.theta_eff ** 2 - 3.0 * eff.gamma_eff ** 2
    if disc <= 0.0:
        return []
    s = math.sqrt(disc)
    n_minus = (2.0 * eff.theta_eff - s) / (3.0 * eff.beta)
    n_plus = (2.0 * eff.theta_eff + s) / (3.0 * eff.beta)
    if n_minus <= 0.0 or n_plus <= 0.0:
        return []
    return [n_minus, n_plus]


def knee_drives(params: SystemParams) -> list[float]:
    """Pump amplitudes E_l at the two knees, [up-jump, down-jump] order."""
    tps = turning_points(params)
    return [math.sqrt(drive_power(params, n) / (2.0 * params.eta)) for n in tps]


def discriminant_bracket(params: SystemParams) -> float:
    """The printed discriminant bracket of the bistability criterion.

    4 g^4 dd^2 + (dc^2 - 3 eta^2) D^2 - (2 g^2 dc dd + 3 g^4 + 6 eta ga g^2) D.
    Algebraically equal to (theta_eff^2 - 3 gamma_eff^2) D^2.
    """
    g2 = params.g ** 2
    D = params.gamma_a ** 2 + params.delta_d ** 2
    return (4.0 * g2 * g2 * params.delta_d ** 2
            + (params.delta_c ** 2 - 3.0 * params.eta ** 2) * D * D
            - (2.0 * g2 * params.delta_c * params.delta_d
               + 3.0 * g2 * g2
               + 6.0 * params.eta * params.gamma_a * g2) * D)


def bistability_predicate(params: SystemParams) -> tuple[bool, float]:
    """Whether some pump drive yields three coexisting positive steady states.

    Uses the compact form theta_eff^2 > 3 gamma_eff^2 (identical to the
    printed bracket divided by D^2) plus positivity of both knees.
    Returns (predicate, compact discriminant value).
    """
    eff = effective_params(params)
    disc = eff.theta_eff ** 2 - 3.0 * eff.gamma_eff ** 2
    ok = eff.beta > 0.0 and disc > 0.0 and bool(turning_points(params))
    return ok, disc
