"""Closed-form real-root solver for cubics with real coefficients.

Eigenvalue-free: depressed-cubic discriminant analysis with the
trigonometric formula in the three-root case and Cardano otherwise,
followed by one round of Newton polishing.  Degenerate leading
coefficients fall back to the quadratic/linear formulas.
"""

from __future__ import annotations

import math


def real_roots(c3: float, c2: float, c1: float, c0: float,
               eps: float = 1e-14) -> list[float]:
    """All real roots of c3 x^3 + c2 x^2 + c1 x + c0, ascending, with multiplicity merged."""
    scale = max(abs(c3), abs(c2), abs(c1), abs(c0))
    if scale == 0.0:
        return []
    if abs(c3) <= eps * scale:
        return _quadratic(c2, c1, c0, eps, scale)

    b, c, d = c2 / c3, c1 / c3, c0 / c3
    # depressed cubic t^3 + p t + q with x = t - b/3
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    disc = -4.0 * p ** 3 - 27.0 * q * q

    if disc > 0.0:
        # three distinct real roots (p < 0 here)
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        phi = math.acos(arg) / 3.0
        roots = [m * math.cos(phi - 2.0 * math.pi * k / 3.0) - shift
                 for k in range(3)]
    elif p == 0.0 and q == 0.0:
        roots = [-shift]
    else:
        # one real root (Cardano, numerically stable branch)
        if disc == 0.0 and p != 0.0:
            # double root plus a simple one
            roots = [3.0 * q / p - shift, -3.0 * q / (2.0 * p) - shift]
        else:
            u = math.sqrt(q * q / 4.0 + p ** 3 / 27.0)
            w = -q / 2.0
            s = w + u if w >= 0.0 else w - u
            t1 = math.copysign(abs(s) ** (1.0 / 3.0), s)
            t = t1 - p / (3.0 * t1) if t1 != 0.0 else 0.0
            roots = [t - shift]

    roots = sorted(_polish(r, c3, c2, c1, c0) for r in roots)
    return _merge(roots)


def _polish(x, c3, c2, c1, c0, iters=3):
    for _ in range(iters):
        f = ((c3 * x + c2) * x + c1) * x + c0
        df = (3.0 * c3 * x + 2.0 * c2) * x + c1
        if df == 0.0:
            break
        step = f / df
        x -= step
        if abs(step) <= 1e-15 * max(1.0, abs(x)):
            break
    return x


def _quadratic(a, b, c, eps, scale):
    if abs(a) <= eps * scale:
        if abs(b) <= eps * scale:
            return []
        return [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    q = -(b + math.copysign(sq, b)) / 2.0
    r1 = q / a
    r2 = c / q if q != 0.0 else -b / (2.0 * a)
    return sorted(_merge(sorted([r1, r2])))


def _merge(roots, rel=1e-12):
    out = []
    for r in roots:
        if out and abs(r - out[-1]) <= rel * max(1.0, abs(r)):
            continue
        out.append(r)
    return out
