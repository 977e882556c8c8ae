"""Jitted Dormand-Prince 4(5) stepping for the reduced equations.

Three right-hand sides share one kernel, selected by an integer flag:

    0  nonlinear     y'' = -h(t) y' + lam*(y - y^q)
    1  linearized    y'' = -h(t) y' - mu*y
    2  limit profile y'' = -(m0/t) y' - y^q

with h(t) = sum_k m_k cot(t + k*pi/g).  Integration always runs forward in t;
callers handle the far endpoint by reversing the multiplicity list.  The
power y^q is extended oddly (sign(y)*|y|^q) so a trajectory stays integrable
through a sign change; nonlinear and limit-profile runs normally stop at the
first zero anyway.

Events: a sign change of y inside an accepted step is localized on the cubic
Hermite interpolant.  Nonlinear runs stop there (STATUS_HIT_ZERO); linear
runs record the crossing time and continue.  State exceeding the overflow
cap, or a stalled step size, ends the run with STATUS_OVERFLOW.
"""

import math

import numpy as np
from numba import njit, prange

RHS_NONLINEAR = 0
RHS_LINEAR = 1
RHS_LIMIT = 2

STATUS_OK = 0
STATUS_HIT_ZERO = 1
STATUS_OVERFLOW = 2

MAX_ZEROS = 128

# Dormand-Prince 4(5) tableau
_C2, _C3, _C4, _C5 = 0.2, 0.3, 0.8, 8.0 / 9.0
_A21 = 0.2
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)


@njit(cache=True, inline="always")
def _accel(flag, g, mults, lam, q, mu, m0, t, y, dy):
    if flag == RHS_LIMIT:
        h = m0 / t
    else:
        h = 0.0
        step = math.pi / g
        for k in range(g):
            h += mults[k] / math.tan(t + k * step)
    if flag == RHS_LINEAR:
        return -h * dy - mu * y
    if y >= 0.0:
        yq = y ** q
    else:
        yq = -((-y) ** q)
    if flag == RHS_NONLINEAR:
        return -h * dy + lam * (y - yq)
    return -h * dy - yq


@njit(cache=True, inline="always")
def _hermite(theta, hstep, y0, f0, y1, f1):
    t2 = theta * theta
    t3 = t2 * theta
    return (
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + theta) * hstep * f0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * hstep * f1
    )


@njit(cache=True)
def rk45_run(
    flag,
    g,
    mults,
    lam,
    q,
    mu,
    m0,
    t0,
    t_end,
    y_start,
    dy_start,
    rtol,
    atol,
    max_step,
    overflow_cap,
    stop_on_zero,
    store,
    t_buf,
    y_buf,
    dy_buf,
    zero_buf,
):
    """Integrate from (t0, y_start, dy_start) to t_end.

    Returns (status, t_event, y_end, dy_end, n_stored, n_zeros).  t_event is
    the zero or overflow location, nan when status is OK.  When store is
    false the buffers are untouched except for n_stored = 0.
    """
    t = t0
    y = y_start
    dy = dy_start
    cap = t_buf.shape[0]
    n_stored = 0
    n_zeros = 0
    if store and cap > 0:
        t_buf[0] = t
        y_buf[0] = y
        dy_buf[0] = dy
        n_stored = 1

    span = t_end - t0
    h = span / 100.0
    if h > max_step:
        h = max_step
    k1y = dy
    k1v = _accel(flag, g, mults, lam, q, mu, m0, t, y, dy)
    have_k1 = True

    while t < t_end:
        if h > t_end - t:
            h = t_end - t
        if h < 1e-14 * (abs(t) + abs(t_end)):
            # stalled controller; only happens at genuine blow-up
            return STATUS_OVERFLOW, t, y, dy, n_stored, n_zeros
        if not have_k1:
            k1y = dy
            k1v = _accel(flag, g, mults, lam, q, mu, m0, t, y, dy)
            have_k1 = True

        ty = y + h * _A21 * k1y
        tv = dy + h * _A21 * k1v
        k2y = tv
        k2v = _accel(flag, g, mults, lam, q, mu, m0, t + _C2 * h, ty, tv)

        ty = y + h * (_A31 * k1y + _A32 * k2y)
        tv = dy + h * (_A31 * k1v + _A32 * k2v)
        k3y = tv
        k3v = _accel(flag, g, mults, lam, q, mu, m0, t + _C3 * h, ty, tv)

        ty = y + h * (_A41 * k1y + _A42 * k2y + _A43 * k3y)
        tv = dy + h * (_A41 * k1v + _A42 * k2v + _A43 * k3v)
        k4y = tv
        k4v = _accel(flag, g, mults, lam, q, mu, m0, t + _C4 * h, ty, tv)

        ty = y + h * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y)
        tv = dy + h * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v)
        k5y = tv
        k5v = _accel(flag, g, mults, lam, q, mu, m0, t + _C5 * h, ty, tv)

        ty = y + h * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y + _A65 * k5y)
        tv = dy + h * (_A61 * k1v + _A62 * k2v + _A63 * k3v + _A64 * k4v + _A65 * k5v)
        k6y = tv
        k6v = _accel(flag, g, mults, lam, q, mu, m0, t + h, ty, tv)

        y_new = y + h * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y + _B6 * k6y)
        dy_new = dy + h * (_B1 * k1v + _B3 * k3v + _B4 * k4v + _B5 * k5v + _B6 * k6v)
        k7y = dy_new
        k7v = _accel(flag, g, mults, lam, q, mu, m0, t + h, y_new, dy_new)

        if not (math.isfinite(y_new) and math.isfinite(dy_new) and math.isfinite(k7v)):
            h *= 0.1
            continue

        err_y = h * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y + _E6 * k6y + _E7 * k7y)
        err_v = h * (_E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v + _E6 * k6v + _E7 * k7v)
        sc_y = atol + rtol * max(abs(y), abs(y_new))
        sc_v = atol + rtol * max(abs(dy), abs(dy_new))
        err = math.sqrt(0.5 * ((err_y / sc_y) ** 2 + (err_v / sc_v) ** 2))

        if err > 1.0:
            fac = 0.9 * err ** -0.2
            if fac < 0.2:
                fac = 0.2
            h *= fac
            continue

        # accepted step
        if (y > 0.0 and y_new <= 0.0) or (y < 0.0 and y_new >= 0.0):
            # bisect the Hermite interpolant for the crossing
            lo, hi = 0.0, 1.0
            f_lo = y
            for _ in range(64):
                mid = 0.5 * (lo + hi)
                f_mid = _hermite(mid, h, y, k1y, y_new, k7y)
                if (f_lo > 0.0 and f_mid <= 0.0) or (f_lo < 0.0 and f_mid >= 0.0):
                    hi = mid
                else:
                    lo = mid
                    f_lo = f_mid
            t_cross = t + 0.5 * (lo + hi) * h
            if stop_on_zero:
                return STATUS_HIT_ZERO, t_cross, y_new, dy_new, n_stored, n_zeros
            if n_zeros < zero_buf.shape[0]:
                zero_buf[n_zeros] = t_cross
            n_zeros += 1

        t = t + h
        y = y_new
        dy = dy_new
        k1y = k7y
        k1v = k7v
        have_k1 = True

        if store:
            if n_stored < cap:
                t_buf[n_stored] = t
                y_buf[n_stored] = y
                dy_buf[n_stored] = dy
                n_stored += 1
            else:
                t_buf[cap - 1] = t
                y_buf[cap - 1] = y
                dy_buf[cap - 1] = dy

        if abs(y) > overflow_cap or abs(dy) > overflow_cap:
            return STATUS_OVERFLOW, t, y, dy, n_stored, n_zeros

        if err < 1e-10:
            fac = 5.0
        else:
            fac = 0.9 * err ** -0.2
            if fac > 5.0:
                fac = 5.0
            elif fac < 0.2:
                fac = 0.2
        h *= fac
        if h > max_step:
            h = max_step

    return STATUS_OK, np.nan, y, dy, n_stored, n_zeros


@njit(cache=True, parallel=True)
def rk45_batch(
    flag,
    g,
    mults,
    lam,
    q,
    mu,
    m0,
    t0s,
    t_end,
    y_starts,
    dy_starts,
    rtol,
    atol,
    max_step,
    overflow_cap,
    stop_on_zero,
):
    """Final-state integration for a batch of start states.

    Start times are per row because the endpoint offset shrinks with the
    start amplitude.  Returns an (n, 4) array of (y_end, dy_end, status,
    t_event) rows.  Rows are independent, so the parallel loop is
    deterministic.
    """
    n = y_starts.shape[0]
    out = np.empty((n, 4))
    for i in prange(n):
        tb = np.empty(1)
        yb = np.empty(1)
        db = np.empty(1)
        zb = np.empty(1)
        status, t_ev, y_e, dy_e, _, _ = rk45_run(
            flag,
            g,
            mults,
            lam,
            q,
            mu,
            m0,
            t0s[i],
            t_end,
            y_starts[i],
            dy_starts[i],
            rtol,
            atol,
            max_step,
            overflow_cap,
            stop_on_zero,
            False,
            tb,
            yb,
            db,
            zb,
        )
        out[i, 0] = y_e
        out[i, 1] = dy_e
        out[i, 2] = float(status)
        out[i, 3] = t_ev
    return out
