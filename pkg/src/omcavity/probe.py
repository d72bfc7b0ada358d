"""Linear response to the weak probe: sideband amplitudes, normalized
power transmission, the EIT-form approximation and spectral feature
extraction.

The probe at detuning delta_p beats against the pump and drives the
mechanical oscillator; the fluctuation ansatz

    delta_a = A1 exp(-i delta_p t) + A2 exp(+i delta_p t)
    delta_Q = Q1 exp(-i delta_p t) + conj(Q1) exp(+i delta_p t)

turns the linearized equations into a 2x2 complex system for (A1, A2*).
The closed forms below are the self-consistent solution of that system,
which the time-domain integration confirms to ten digits.  A
``literal_signs`` diagnostic mode flips the sign of the Stokes coupling
in the closed form; it produces noticeably different (deeper, more
structured) spectra and is kept for comparison output only.

All operations accept the photon number n directly, because the spectra
of interest are specified by |a_s|^2 rather than by a pump amplitude; a
wrapper deriving n from a steady branch is provided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import SystemParams, require_valid


@dataclass(frozen=True)
class LinearFactors:
    z: complex  # mechanical susceptibility Z(delta_p)
    m_drift: complex  # cavity drift coefficient M
    x_factor: complex
    y_factor: complex
    delta_tilde: float  # effective cavity detuning after static shifts


@dataclass(frozen=True)
class ProbeResponse:
    delta_p: float
    a1: complex
    a2: complex
    q1: complex
    t: float


@dataclass(frozen=True)
class SpectralFeatures:
    peak_positions: tuple = ()
    dip_positions: tuple = ()
    principal_position: float | None = None
    principal_value: float | None = None
    principal_kind: str = ""  # "peak" | "dip"
    window_width: float | None = None
    contrast: float = 0.0
    asymmetry: float = 0.0


@dataclass(frozen=True)
class Spectrum:
    delta_p: np.ndarray
    t: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    q1: np.ndarray
    t_eit: np.ndarray | None
    features: SpectralFeatures
    warnings: tuple = ()


def mech_susceptibility(params: SystemParams, delta_p):
    """Z(delta_p) = 1 / (1 - delta_p^2 - i gamma_m delta_p), omega_m = 1."""
    dp = np.asarray(delta_p, dtype=float)
    den = 1.0 - dp * dp - 1j * params.gamma_m * dp
    if np.any(den == 0):
        raise ZeroDivisionError(
            "mechanical susceptibility pole: gamma_m = 0 at delta_p = +-1")
    return 1.0 / den


def delta_tilde(params: SystemParams, n: float) -> float:
    """Effective cavity detuning after the static Kerr and radiation-pressure shifts."""
    return params.delta_c - params.chi ** 2 * n - 2.0 * params.kappa * n


def linear_factors(params: SystemParams, n: float, delta_p) -> LinearFactors:
    require_valid(params)
    if n < 0:
        raise ValueError("photon number must be nonnegative")
    z = mech_susceptibility(params, delta_p)
    dtil = delta_tilde(params, n)
    m = -1j * dtil - params.eta
    chi2n = params.chi ** 2 * n
    x = 1j * np.asarray(delta_p) + np.conj(m) - 1j * chi2n * z
    y = 1j * np.asarray(delta_p) + m + 1j * chi2n * z
    return LinearFactors(z=z, m_drift=m, x_factor=x, y_factor=y,
                         delta_tilde=dtil)


def _amplitudes(params, n, delta_p, a_s, literal_signs):
    f = linear_factors(params, n, delta_p)
    s = math.sqrt(2.0 * params.eta) * params.e_p
    c = 1j * (params.kappa + params.chi ** 2 * f.z)
    w = -n * n * c * c  # n^2 (kappa + chi^2 Z)^2
    x, y = f.x_factor, f.y_factor
    if literal_signs:
        den = w + x * y
        a1 = -s * x / den
        a2_conj = -np.conj(a_s) ** 2 * c * a1 / x
    else:
        den = w - x * y
        a1 = s * x / den
        a2_conj = np.conj(a_s) ** 2 * c * a1 / x
    if np.any(den == 0) or np.any(x == 0):
        raise ZeroDivisionError("vanishing response denominator at delta_p")
    q1 = f.z * params.chi * (np.conj(a_s) * a1 + a_s * a2_conj)
    return f, a1, np.conj(a2_conj), q1


def probe_amplitude(params: SystemParams, n: float, delta_p,
                    a_s: complex | None = None,
                    literal_signs: bool = False):
    """Sideband amplitudes (A1, A2, Q1) at probe detuning delta_p.

    ``a_s`` defaults to the real positive sqrt(n); its phase only rotates
    A2 and Q1 and leaves the transmission unchanged.
    """
    if a_s is None:
        a_s = math.sqrt(max(n, 0.0))
    _, a1, a2, q1 = _amplitudes(params, n, delta_p, a_s, literal_signs)
    return a1, a2, q1


def transmission(params: SystemParams, n: float, delta_p,
                 literal_signs: bool = False):
    """Normalized power transmission T of the probe; independent of e_p."""
    f = linear_factors(params, n, delta_p)
    c = 1j * (params.kappa + params.chi ** 2 * f.z)
    w = -n * n * c * c
    x, y = f.x_factor, f.y_factor
    if literal_signs:
        amp = 1.0 + 2.0 * params.eta * x / (w + x * y)
    else:
        amp = 1.0 - 2.0 * params.eta * x / (w - x * y)
    return np.abs(amp) ** 2


def eit_model_response(params: SystemParams, n: float, delta_p):
    """EIT-form approximation of the cavity fluctuation and its transmission.

    delta_a = sqrt(2 eta) E_p / [i(delta_c' - delta_p) + eta
              + g_alpha^2 / (i(1 - delta_p) + gamma_m)]
    with delta_c' the shifted detuning and g_alpha^2 = chi^2 n / 2, the
    value that matches the full model's mechanical self-energy in the
    resolved-sideband limit.
    """
    require_valid(params)
    dtil = delta_tilde(params, n)
    g_alpha_sq = params.chi ** 2 * n / 2.0
    dp = np.asarray(delta_p, dtype=float)
    sigma = g_alpha_sq / (1j * (1.0 - dp) + params.gamma_m)
    den = 1j * (dtil - dp) + params.eta + sigma
    delta_a = math.sqrt(2.0 * params.eta) * params.e_p / den
    t_eit = np.abs(1.0 - 2.0 * params.eta / den) ** 2
    return delta_a, t_eit


def response_from_branch(params: SystemParams, branch, delta_p,
                         literal_signs: bool = False):
    """Probe amplitudes using a steady branch's photon number and phase."""
    return probe_amplitude(params, branch.n, delta_p, a_s=branch.a_s,
                           literal_signs=literal_signs)


def make_grid(start: float, stop: float, points: int,
              gamma_m: float, refine: bool = True) -> np.ndarray:
    """Monotone probe-detuning grid, densified near the mechanical sidebands.

    With ``refine`` the base grid gains 10x density within 10 gamma_m of
    each of delta_p = +-1 that falls inside [start, stop], so that
    features of width gamma_m stay resolved.
    """
    base = np.linspace(start, stop, points)
    if not refine or gamma_m <= 0:
        return base
    extra = []
    half = 10.0 * gamma_m
    step = (stop - start) / max(points - 1, 1)
    for center in (-1.0, 1.0):
        lo, hi = max(start, center - half), min(stop, center + half)
        if lo < hi:
            m = max(int(np.ceil((hi - lo) / (step / 10.0))), 16)
            extra.append(np.linspace(lo, hi, m))
    if not extra:
        return base
    grid = np.unique(np.concatenate([base] + extra))
    return grid


def spectrum(params: SystemParams, n: float, grid,
             literal_signs: bool = False,
             with_eit: bool = False,
             a_s: complex | None = None) -> Spectrum:
    """Probe response on a detuning grid plus extracted spectral features."""
    dp = np.asarray(grid, dtype=float)
    if dp.ndim != 1 or dp.size < 2 or np.any(np.diff(dp) <= 0):
        raise ValueError("grid must be a strictly increasing 1-D array")
    warnings = []
    if params.gamma_m > 0:
        for center in (-1.0, 1.0):
            near = np.abs(dp - center) <= 5.0 * params.gamma_m
            if near.sum() >= 2:
                local_step = np.diff(dp[near]).max()
                if local_step > params.gamma_m / 4.0:
                    warnings.append(
                        f"grid step {local_step:.3g} near delta_p={center:+g} "
                        f"exceeds gamma_m/4 = {params.gamma_m / 4.0:.3g}")
    if a_s is None:
        a_s = math.sqrt(max(n, 0.0))
    _, a1, a2, q1 = _amplitudes(params, n, dp, a_s, literal_signs)
    t = transmission(params, n, dp, literal_signs=literal_signs)
    t_eit = eit_model_response(params, n, dp)[1] if with_eit else None
    feats = extract_features(dp, t)
    return Spectrum(delta_p=dp, t=t, a1=a1, a2=a2, q1=q1, t_eit=t_eit,
                    features=feats, warnings=tuple(warnings))


# --- feature extraction -------------------------------------------------

BASELINE = 1.0  # all-pass level of the normalized transmission


def _refine_extremum(x, y, i):
    """Quadratic refinement of a 3-point extremum; returns (pos, value)."""
    x0, x1, x2 = x[i - 1], x[i], x[i + 1]
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    if denom == 0:
        return x1, y1
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom
    if a == 0:
        return x1, y1
    xv = -b / (2 * a)
    if not (min(x0, x2) <= xv <= max(x0, x2)):
        return x1, y1
    c = y1 - a * x1 * x1 - b * x1
    return xv, a * xv * xv + b * xv + c


def extract_features(delta_p, t, min_prominence: float = 1e-10) -> SpectralFeatures:
    """Local extrema, transparency-window width, contrast and asymmetry.

    The principal feature is the extremum with the largest excursion from
    the all-pass baseline; the asymmetry compares the absolute slopes of
    its two flanks at half prominence, signed positive when the left
    flank is the steeper one.
    """
    x = np.asarray(delta_p, dtype=float)
    y = np.asarray(t, dtype=float)
    if x.size < 16:
        raise ValueError("spectrum needs at least 16 points")
    imax = np.where((y[1:-1] > y[:-2]) & (y[1:-1] > y[2:]))[0] + 1
    imin = np.where((y[1:-1] < y[:-2]) & (y[1:-1] < y[2:]))[0] + 1
    peaks = [(i, *_refine_extremum(x, y, i)) for i in imax]
    dips = [(i, *_refine_extremum(x, y, i)) for i in imin]
    peaks = [(i, p, v) for i, p, v in peaks if abs(v - BASELINE) >= min_prominence]
    dips = [(i, p, v) for i, p, v in dips if abs(v - BASELINE) >= min_prominence]

    if not peaks and not dips:
        return SpectralFeatures()

    cands = ([(abs(v - BASELINE), p, v, "peak", i) for i, p, v in peaks]
             + [(abs(v - BASELINE), p, v, "dip", i) for i, p, v in dips])
    prom, pos, val, kind, i0 = max(cands, key=lambda c: c[0])

    half_level = BASELINE + np.sign(val - BASELINE) * prom / 2.0
    above = (y - half_level) * (val - half_level) > 0

    il = i0
    while il > 0 and above[il - 1]:
        il -= 1
    ir = i0
    while ir < y.size - 1 and above[ir + 1]:
        ir += 1

    def crossing(j, k):
        # linear interpolation of the half-level crossing between j and k
        if y[k] == y[j]:
            return x[j], 0.0
        slope = (y[k] - y[j]) / (x[k] - x[j])
        xc = x[j] + (half_level - y[j]) / slope
        return xc, slope

    width = None
    asym = 0.0
    if il > 0 and ir < y.size - 1:
        xl, sl = crossing(il - 1, il)
        xr, sr = crossing(ir, ir + 1)
        width = xr - xl
        if abs(sl) + abs(sr) > 0:
            asym = (abs(sl) - abs(sr)) / (abs(sl) + abs(sr))

    lo = max(il - (ir - il) - 1, 0)
    hi = min(ir + (ir - il) + 2, y.size)
    window = y[lo:hi]
    contrast = float(window.max() - window.min())

    return SpectralFeatures(
        peak_positions=tuple(p for _, p, _v in peaks),
        dip_positions=tuple(p for _, p, _v in dips),
        principal_position=float(pos),
        principal_value=float(val),
        principal_kind=kind,
        window_width=width,
        contrast=contrast,
        asymmetry=float(asym),
    )
