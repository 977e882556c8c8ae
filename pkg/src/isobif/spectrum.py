"""Invariant Laplacian spectrum by two-sided Wronskian shooting.

mu is an eigenvalue of the reduced linear problem exactly when the bounded
solutions launched from the two singular endpoints are linearly dependent,
i.e. when their Wronskian at the matching point vanishes.  The scan window
is bounded by the closed-form rule g*k*(g*k + N - 1), but the detector
brackets and refines roots on its own; the closed form is only an
acceptance check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, RunConfig
from .geometry import GeometryEntry, closed_form_mu
from .odecore import IVPTrace, integrate_linearized, matching_point, shoot_linear


@dataclass
class EigenResult:
    k: int
    mu_numeric: float
    mu_closed: float
    zero_count: int
    u_at_tstar: float
    trace: IVPTrace


def wronskian(profile, mu: float, cfg: RunConfig = DEFAULT_CONFIG) -> float:
    """u_L*u_R' - u_L'*u_R at t_m; zero iff mu is an eigenvalue."""
    if mu <= 0.0:
        raise ValueError("mu must be positive")
    t_m = matching_point(profile)
    ul, dul = shoot_linear(profile, mu, "left", t_m, cfg)
    ur, dur = shoot_linear(profile, mu, "right", t_m, cfg)
    return ul * dur - dul * ur


def count_zeros(trace: IVPTrace, about: float = 0.0) -> int:
    """Sign changes of (phi - about) across the samples of a trace.

    Counts each simple crossing once; adjacent-sample linear interpolation
    would place the zero inside the flagged gap but cannot change the count.
    The counting layer only supports simple zeros: a dense sample may land
    on a crossing by coincidence (within 1e-12), which is tolerated as long
    as its neighbours straddle the level, but a sample run hugging the level
    or a near-zero endpoint leaves the count ambiguous and is rejected.
    """
    y = np.asarray(trace.phi, dtype=float) - about
    tiny = np.abs(y) <= 1e-12
    if not np.any(tiny):
        signs = np.sign(y)
        return int(np.count_nonzero(signs[1:] != signs[:-1]))
    if tiny[0] or tiny[-1]:
        raise ValueError("endpoint sample lies on the level; count ambiguous")
    idx = np.flatnonzero(tiny)
    if np.any(np.diff(idx) == 1):
        raise ValueError("consecutive samples lie on the level; count ambiguous")
    if np.any(y[idx - 1] * y[idx + 1] >= 0.0):
        raise ValueError("tangency at the level; cannot count simple crossings")
    keep = y[~tiny]
    signs = np.sign(keep)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def _refine_root(f, a: float, b: float, fa: float, fb: float, rtol: float) -> float:
    """Bracketed bisection with secant acceleration, to relative width rtol."""
    for _ in range(200):
        if abs(b - a) <= rtol * max(abs(a), abs(b)):
            break
        # secant proposal, used only while it stays safely inside the bracket
        x = b - fb * (b - a) / (fb - fa) if fb != fa else 0.5 * (a + b)
        lo = a + 0.05 * (b - a)
        hi = b - 0.05 * (b - a)
        if not (lo <= x <= hi):
            x = 0.5 * (a + b)
        fx = f(x)
        if fx == 0.0:
            return x
        if (fa > 0) != (fx > 0):
            b, fb = x, fx
        else:
            a, fa = x, fx
    return 0.5 * (a + b)


def _glue_eigenfunction(profile, mu: float, cfg: RunConfig):
    """Glued eigenfunction u on [delta, t*-delta], normalized u(0)=1.

    The right half is rescaled by the least-squares ratio of the two state
    vectors at t_m, which stays well-defined when the eigenfunction itself
    vanishes there.  Returns (trace, u_at_tstar, match_defect).
    """
    t_m = matching_point(profile)
    left = integrate_linearized(profile, mu, "left", t_m, cfg)
    right = integrate_linearized(profile, mu, "right", t_m, cfg)
    vl = np.array([left.phi[-1], left.dphi[-1]])
    vr = np.array([right.phi[-1], right.dphi[-1]])
    scale = float(vl @ vr) / float(vr @ vr)
    defect = float(np.hypot(*(vl - scale * vr)))
    t = np.concatenate([left.t, right.t[::-1][1:]])
    u = np.concatenate([left.phi, scale * right.phi[::-1][1:]])
    du = np.concatenate([left.dphi, scale * right.dphi[::-1][1:]])
    zeros = tuple(left.zero_times) + tuple(sorted(right.zero_times))
    trace = IVPTrace(
        side="left",
        start_value=1.0,
        t=t,
        phi=u,
        dphi=du,
        status="ok",
        zero_times=zeros,
    )
    return trace, scale, defect


def find_eigenvalues(
    entry: GeometryEntry,
    count: int,
    cfg: RunConfig = DEFAULT_CONFIG,
) -> list[EigenResult]:
    """First `count` eigenvalues with eigenfunction data, sorted ascending.

    Scans (0, mu_upper) with mu_upper from the closed form at count+1 on a
    uniform grid of 40*count points, brackets sign changes of the Wronskian,
    then refines each bracket.  Raises if the scan finds fewer roots than
    requested, if a grid point shows a sign-touch without a crossing (double
    root), or if the zero counts fail to increase strictly.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    profile = entry.profile
    mu_hi = closed_form_mu(entry, count + 1)
    n_grid = 40 * count
    mus = np.linspace(0.0, mu_hi, n_grid + 2)[1:-1]
    ws = np.array([wronskian(profile, m, cfg) for m in mus])

    w_scale = float(np.max(np.abs(ws)))
    for i in range(1, len(mus) - 1):
        if abs(ws[i]) < 1e-12 * w_scale and ws[i - 1] * ws[i + 1] > 0:
            raise ArithmeticError(
                f"Wronskian sign-touch at mu={mus[i]:.6g}: double root not supported"
            )

    roots: list[float] = []
    f = lambda m: wronskian(profile, m, cfg)
    for i in range(len(mus) - 1):
        if ws[i] == 0.0:
            roots.append(float(mus[i]))
        elif ws[i] * ws[i + 1] < 0.0:
            roots.append(_refine_root(f, float(mus[i]), float(mus[i + 1]), float(ws[i]), float(ws[i + 1]), 1e-9))
    if len(roots) < count:
        raise ArithmeticError(
            f"found only {len(roots)} eigenvalues below mu={mu_hi:.6g}, need {count}"
        )
    roots = sorted(roots)[:count]

    results = []
    for k, mu in enumerate(roots, start=1):
        trace, u_star, _ = _glue_eigenfunction(profile, mu, cfg)
        results.append(
            EigenResult(
                k=k,
                mu_numeric=mu,
                mu_closed=closed_form_mu(entry, k),
                zero_count=count_zeros(trace),
                u_at_tstar=u_star,
                trace=trace,
            )
        )
    counts = [r.zero_count for r in results]
    if any(b <= a for a, b in zip(counts, counts[1:])):
        raise ArithmeticError(f"zero counts not strictly increasing: {counts}")
    return results
