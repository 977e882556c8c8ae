"""Singular two-point integration of the reduced equation.

The reduced problem on (0, t*) is

    -(phi'' + h(t) phi') + lam*phi = lam*phi^q,   phi'(0) = phi'(t*) = 0,

with h(t) the cotangent profile of a catalog entry.  Both endpoints are
regular singular points; the bounded branch is selected by leaving the
endpoint at offset delta with the second-order series

    phi(delta)  = v + a*delta^2/2,   phi'(delta) = a*delta,
    a = lam*(v - v^q)/(1 + m_side),

where m_side is the endpoint multiplicity.  Integrating from the right end
uses the substitution tau = t* - t, which turns the profile into the same
cotangent sum with the multiplicity list reversed, so a single forward
kernel covers both sides.

Solutions of the two-point problem are zeros of the miss map: integrate left
from phi(0)=alpha and right from phi(t*)=beta to the matching point
t_m = t*/2 and return the jump in (phi, phi').
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .config import DEFAULT_CONFIG, RunConfig
from .geometry import GeometryEntry, MunznerProfile

_TRACE_CAP = 32768


@dataclass(frozen=True)
class EquationParams:
    entry: GeometryEntry
    q: float
    lam: float

    def __post_init__(self):
        if self.q <= 1.0:
            raise ValueError("exponent q must exceed 1")
        if self.lam <= 0.0:
            raise ValueError("lambda must be positive")


@dataclass
class IVPTrace:
    """One integrated trajectory with dense samples.

    Samples are in integration order: ascending t for a left trace,
    descending for a right trace (the first sample sits at the start
    offset).  status is 'ok', 'hit_zero' or 'overflow'; t_event locates
    the zero or the blow-up point in global t coordinates.
    """

    side: str
    start_value: float
    t: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    status: str
    t_event: float | None = None
    zero_times: tuple[float, ...] = field(default_factory=tuple)

    @property
    def samples(self):
        return list(zip(self.t, self.phi, self.dphi))

    def to_csv(self, path, header_comment: str | None = None) -> None:
        with open(path, "w", newline="") as fh:
            if header_comment:
                fh.write(f"# {header_comment}\n")
            fh.write("t,phi,dphi\n")
            for ti, yi, di in zip(self.t, self.phi, self.dphi):
                fh.write(f"{ti:.17g},{yi:.17g},{di:.17g}\n")


_STATUS_NAMES = {K.STATUS_OK: "ok", K.STATUS_HIT_ZERO: "hit_zero", K.STATUS_OVERFLOW: "overflow"}


def _check_side(side: str) -> str:
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return side


def _profile_arrays(profile: MunznerProfile, side: str):
    """Kernel profile arguments for integrating away from the given end."""
    p = profile if side == "left" else profile.reversed()
    return p.g, np.array(p.mults, dtype=float)


def endpoint_accel(params: EquationParams, value: float, side: str) -> float:
    """Second derivative of phi at the endpoint for endpoint value v."""
    _check_side(side)
    if value <= 0.0:
        raise ValueError("endpoint value must be positive")
    m_side = params.entry.profile.m_left if side == "left" else params.entry.profile.m_right
    v = value
    return params.lam * (v - _odd_pow(v, params.q)) / (1.0 + m_side)


def _odd_pow(v: float, q: float) -> float:
    if v >= 0.0:
        return v ** q
    return -((-v) ** q)


def _delta(profile: MunznerProfile, cfg: RunConfig) -> float:
    return cfg.delta_endpoint_factor * profile.t_star


# Relative size allowed for the quadratic term of the endpoint series.  The
# truncation error is the square of this, far below integrator tolerance.
_SERIES_BUDGET = 1e-6


def _shrink_delta(d: float, curvature_rate: float, m_side: int) -> float:
    """Shrink the offset when the solution varies faster than the baseline.

    curvature_rate bounds |phi''/phi| at the endpoint; the offset keeps the
    relative quadratic correction within the series budget, which matters
    for blow-up amplitudes whose length scale drops below the default
    offset.
    """
    if curvature_rate <= 0.0:
        return d
    d_ok = math.sqrt(2.0 * (1.0 + m_side) * _SERIES_BUDGET / curvature_rate)
    return min(d, d_ok)


def _nonlinear_start(params: EquationParams, value: float, side: str, cfg: RunConfig):
    profile = params.entry.profile
    m_side = profile.m_left if side == "left" else profile.m_right
    d = _delta(profile, cfg)
    d = _shrink_delta(d, params.lam * max(1.0, value) ** (params.q - 1.0), m_side)
    a = endpoint_accel(params, value, side)
    return d, value + 0.5 * a * d * d, a * d


def _linear_start(profile: MunznerProfile, mu: float, side: str, cfg: RunConfig):
    m_side = profile.m_left if side == "left" else profile.m_right
    d = _delta(profile, cfg)
    d = _shrink_delta(d, abs(mu), m_side)
    a = -mu / (1.0 + m_side)
    return d, 1.0 + 0.5 * a * d * d, a * d


def _local_t_end(profile: MunznerProfile, side: str, t_end: float, cfg: RunConfig) -> float:
    """Map a global target to the forward (local) coordinate; validate range."""
    d = _delta(profile, cfg)
    ts = profile.t_star
    if side == "left":
        lo, hi = d, ts
        local = t_end
    else:
        lo, hi = d, ts
        local = ts - t_end
    if not (lo < local < hi):
        raise ValueError(f"t_end={t_end} outside the integrable range for side {side!r}")
    return local


def _run_dense(flag, g, mults, lam, q, mu, m0, t0, te, y0, dy0, cfg: RunConfig, stop_on_zero):
    t_buf = np.empty(_TRACE_CAP)
    y_buf = np.empty(_TRACE_CAP)
    dy_buf = np.empty(_TRACE_CAP)
    zero_buf = np.empty(K.MAX_ZEROS)
    max_step = (math.pi / g) / 50.0 if flag != K.RHS_LIMIT else (te - t0) / 50.0
    status, t_ev, y_e, dy_e, n, n_zeros = K.rk45_run(
        flag, g, mults, lam, q, mu, m0, t0, te, y0, dy0,
        cfg.tol_ode, cfg.tol_ode, max_step, cfg.overflow_cap,
        stop_on_zero, True, t_buf, y_buf, dy_buf, zero_buf,
    )
    zeros = tuple(zero_buf[: min(n_zeros, K.MAX_ZEROS)])
    return status, t_ev, t_buf[:n].copy(), y_buf[:n].copy(), dy_buf[:n].copy(), zeros


def integrate(
    params: EquationParams,
    start_value: float,
    side: str,
    t_end: float,
    cfg: RunConfig = DEFAULT_CONFIG,
) -> IVPTrace:
    """Integrate the nonlinear equation from one endpoint toward t_end.

    Stops early with status 'hit_zero' at the first sign change of phi, or
    'overflow' past the configured cap.  Samples are kept at every accepted
    step plus the target point.
    """
    _check_side(side)
    if start_value <= 0.0:
        raise ValueError("start_value must be positive")
    profile = params.entry.profile
    g, mults = _profile_arrays(profile, side)
    te = _local_t_end(profile, side, t_end, cfg)
    t0, y0, dy0 = _nonlinear_start(params, start_value, side, cfg)
    status, t_ev, t, y, dy, _ = _run_dense(
        K.RHS_NONLINEAR, g, mults, params.lam, params.q, 0.0, 0.0, t0, te, y0, dy0, cfg, True
    )
    if side == "right":
        t = profile.t_star - t
        dy = -dy
        if not math.isnan(t_ev):
            t_ev = profile.t_star - t_ev
    return IVPTrace(
        side=side,
        start_value=start_value,
        t=t,
        phi=y,
        dphi=dy,
        status=_STATUS_NAMES[status],
        t_event=None if math.isnan(t_ev) else float(t_ev),
    )


def integrate_linearized(
    profile: MunznerProfile,
    mu: float,
    side: str,
    t_end: float | None = None,
    cfg: RunConfig = DEFAULT_CONFIG,
) -> IVPTrace:
    """Integrate the linearized equation u'' + h u' + mu u = 0, u(end)=1.

    Never stops at sign changes; crossing times are recorded in zero_times
    (localized on the Hermite interpolant) while count_zeros offers an
    independent sample-based count.  Default target is the far offset point.
    """
    _check_side(side)
    d = _delta(profile, cfg)
    if t_end is None:
        t_end = profile.t_star - d if side == "left" else d
    g, mults = _profile_arrays(profile, side)
    te = _local_t_end(profile, side, t_end, cfg)
    t0, y0, dy0 = _linear_start(profile, mu, side, cfg)
    status, t_ev, t, y, dy, zeros = _run_dense(
        K.RHS_LINEAR, g, mults, 0.0, 2.0, mu, 0.0, t0, te, y0, dy0, cfg, False
    )
    if side == "right":
        t = profile.t_star - t
        dy = -dy
        zeros = tuple(profile.t_star - z for z in zeros)
        if not math.isnan(t_ev):
            t_ev = profile.t_star - t_ev
    return IVPTrace(
        side=side,
        start_value=1.0,
        t=t,
        phi=y,
        dphi=dy,
        status=_STATUS_NAMES[status],
        t_event=None if math.isnan(t_ev) else float(t_ev),
        zero_times=zeros,
    )


def shoot(
    params: EquationParams,
    value: float,
    side: str,
    t_target: float,
    cfg: RunConfig = DEFAULT_CONFIG,
    stop_on_zero: bool = True,
):
    """Final state only: (phi, dphi, status, t_event) at the global target."""
    _check_side(side)
    profile = params.entry.profile
    g, mults = _profile_arrays(profile, side)
    te = _local_t_end(profile, side, t_target, cfg)
    t0, y0, dy0 = _nonlinear_start(params, value, side, cfg)
    one = np.empty(1)
    max_step = profile.t_star / 50.0
    status, t_ev, y_e, dy_e, _, _ = K.rk45_run(
        K.RHS_NONLINEAR, g, mults, params.lam, params.q, 0.0, 0.0, t0, te, y0, dy0,
        cfg.tol_ode, cfg.tol_ode, max_step, cfg.overflow_cap, stop_on_zero,
        False, one, one, one, one,
    )
    if side == "right":
        dy_e = -dy_e
        if not math.isnan(t_ev):
            t_ev = profile.t_star - t_ev
    return y_e, dy_e, _STATUS_NAMES[status], None if math.isnan(t_ev) else float(t_ev)


def shoot_batch(
    params: EquationParams,
    values: np.ndarray,
    side: str,
    t_target: float,
    cfg: RunConfig = DEFAULT_CONFIG,
    stop_on_zero: bool = True,
) -> np.ndarray:
    """Batched shoot(): (n, 4) rows of (phi, dphi, status_code, t_event)."""
    _check_side(side)
    values = np.asarray(values, dtype=float)
    if np.any(values <= 0.0):
        raise ValueError("start values must be positive")
    profile = params.entry.profile
    g, mults = _profile_arrays(profile, side)
    te = _local_t_end(profile, side, t_target, cfg)
    d = _delta(profile, cfg)
    m_side = profile.m_left if side == "left" else profile.m_right
    rate = params.lam * np.maximum(1.0, values) ** (params.q - 1.0)
    ds = np.minimum(d, np.sqrt(2.0 * (1.0 + m_side) * _SERIES_BUDGET / rate))
    accel = params.lam * (values - np.sign(values) * np.abs(values) ** params.q) / (1.0 + m_side)
    y0s = values + 0.5 * accel * ds * ds
    dy0s = accel * ds
    max_step = profile.t_star / 50.0
    out = K.rk45_batch(
        K.RHS_NONLINEAR, g, mults, params.lam, params.q, 0.0, 0.0, ds, te, y0s, dy0s,
        cfg.tol_ode, cfg.tol_ode, max_step, cfg.overflow_cap, stop_on_zero,
    )
    if side == "right":
        out = out.copy()
        out[:, 1] = -out[:, 1]
        ev = out[:, 3]
        finite = np.isfinite(ev)
        out[finite, 3] = profile.t_star - ev[finite]
    return out


def shoot_linear(
    profile: MunznerProfile,
    mu: float,
    side: str,
    t_target: float,
    cfg: RunConfig = DEFAULT_CONFIG,
):
    """Final state (u, u') of the linearized equation at the global target."""
    _check_side(side)
    g, mults = _profile_arrays(profile, side)
    te = _local_t_end(profile, side, t_target, cfg)
    t0, y0, dy0 = _linear_start(profile, mu, side, cfg)
    one = np.empty(1)
    max_step = profile.t_star / 50.0
    status, _, y_e, dy_e, _, _ = K.rk45_run(
        K.RHS_LINEAR, g, mults, 0.0, 2.0, mu, 0.0, t0, te, y0, dy0,
        cfg.tol_ode, cfg.tol_ode, max_step, cfg.overflow_cap, False,
        False, one, one, one, one,
    )
    if _STATUS_NAMES[status] != "ok":
        raise ArithmeticError(f"linear integration overflowed at mu={mu}")
    if side == "right":
        dy_e = -dy_e
    return y_e, dy_e


def matching_point(profile: MunznerProfile) -> float:
    return 0.5 * profile.t_star


def miss(
    params: EquationParams,
    alpha: float,
    beta: float,
    cfg: RunConfig = DEFAULT_CONFIG,
) -> tuple[float, float]:
    """Two-sided matching defect at t_m = t*/2.

    Returns (phi_L - phi_R, phi_L' - phi_R') evaluated at the matching
    point; (nan, nan) when either trajectory dies before reaching it, which
    callers treat as 'no solution through this pair'.
    """
    if alpha <= 0.0 or beta <= 0.0:
        raise ValueError("alpha and beta must be positive")
    t_m = matching_point(params.entry.profile)
    yl, dyl, st_l, _ = shoot(params, alpha, "left", t_m, cfg)
    if st_l != "ok":
        return (math.nan, math.nan)
    yr, dyr, st_r, _ = shoot(params, beta, "right", t_m, cfg)
    if st_r != "ok":
        return (math.nan, math.nan)
    return (yl - yr, dyl - dyr)


def glue_solution(
    params: EquationParams,
    alpha: float,
    beta: float,
    cfg: RunConfig = DEFAULT_CONFIG,
):
    """Dense matched profile over [delta, t* - delta], ascending in t.

    Meant for (alpha, beta) pairs that solve the matching problem; the two
    half-traces are concatenated at t_m without smoothing, so any residual
    jump stays visible to diagnostics.
    """
    profile = params.entry.profile
    t_m = matching_point(profile)
    left = integrate(params, alpha, "left", t_m, cfg)
    right = integrate(params, beta, "right", t_m, cfg)
    if left.status != "ok" or right.status != "ok":
        raise ValueError("cannot glue: a half-trajectory died before t_m")
    t = np.concatenate([left.t, right.t[::-1][1:]])
    phi = np.concatenate([left.phi, right.phi[::-1][1:]])
    dphi = np.concatenate([left.dphi, right.dphi[::-1][1:]])
    return t, phi, dphi
