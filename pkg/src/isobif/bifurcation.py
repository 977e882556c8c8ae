"""Branches of nontrivial solutions and fixed-lambda solution counts.

Nontrivial solutions of the matching problem miss(alpha, beta; lam) = 0
bifurcate from the constant solution at lam_k = mu_k/(q-1).  This module
seeds those branches just off the constant line, follows them in
(alpha, beta, lam) by pseudo-arclength continuation with finite-difference
Jacobians, estimates the a-priori amplitude box via direct shooting, and
enumerates all solutions at a fixed lambda two independent ways: Newton from
a coarse grid of seeds (the census) and sign-crossing cells of the miss map
on a fine grid (the oracle, a lower bound the census must reach).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _kernels as K
from .config import DEFAULT_CONFIG, RunConfig
from .geometry import GeometryEntry, validate_exponent
from .odecore import (
    EquationParams,
    glue_solution,
    matching_point,
    shoot,
    shoot_batch,
)
from .spectrum import count_zeros, find_eigenvalues

from .odecore import IVPTrace


@dataclass
class BranchPoint:
    lam: float
    alpha: float
    beta: float
    sup_dist: float
    zero_count: int
    residual: float


@dataclass
class BranchSeed:
    """Corrected first point of one sub-branch plus its outgoing tangent."""

    entry: GeometryEntry
    q: float
    k: int
    lambda_k: float
    direction: int
    state: np.ndarray
    tangent: np.ndarray
    point: BranchPoint


@dataclass
class Branch:
    k: int
    lambda_k: float
    points: list[BranchPoint] = field(default_factory=list)
    status: str = "ok"


class CensusSolution(NamedTuple):
    alpha: float
    beta: float
    residual: float
    zero_count: int
    sup_dist: float


@dataclass
class Census:
    params: EquationParams
    bound_A: float
    solutions: list[CensusSolution]
    method: str = "newton_grid"


def bifurcation_lambdas(
    entry: GeometryEntry,
    q: float,
    count: int,
    cfg: RunConfig = DEFAULT_CONFIG,
    eigen=None,
) -> list[float]:
    """lam_k = mu_k/(q-1) from the numeric spectrum, k = 1..count."""
    if not validate_exponent(entry, q):
        raise ValueError(f"exponent q={q} is not below the threshold for {entry.id}")
    eigen = eigen if eigen is not None else find_eigenvalues(entry, count, cfg)
    return [r.mu_numeric / (q - 1.0) for r in eigen[:count]]


# ---------------------------------------------------------------------------
# Matching-map plumbing shared by Newton, seeding and continuation.
# The map separates into left and right states, so Jacobian columns touch
# only the side they perturb.
# ---------------------------------------------------------------------------


class _MissWork:
    def __init__(self, entry: GeometryEntry, q: float, cfg: RunConfig):
        self.entry = entry
        self.q = q
        self.cfg = cfg
        self.t_m = matching_point(entry.profile)

    def _params(self, lam: float) -> EquationParams:
        return EquationParams(self.entry, self.q, lam)

    def state(self, value: float, side: str, lam: float):
        if value <= 0.0 or lam <= 0.0:
            return None
        y, dy, status, _ = shoot(self._params(lam), value, side, self.t_m, self.cfg)
        if status != "ok":
            return None
        return np.array([y, dy])

    def F(self, x: np.ndarray):
        """miss at x = (alpha, beta, lam); None when a trajectory dies."""
        L = self.state(x[0], "left", x[2])
        if L is None:
            return None
        R = self.state(x[1], "right", x[2])
        if R is None:
            return None
        return L - R

    def jacobian(self, x: np.ndarray):
        """2x3 central-difference Jacobian of the miss map, or None."""
        cols = []
        for j, side in ((0, "left"), (1, "right")):
            d = 1e-6 * max(1.0, abs(x[j]))
            sp = self.state(x[j] + d, side, x[2])
            sm = self.state(x[j] - d, side, x[2])
            if sp is None or sm is None:
                return None
            col = (sp - sm) / (2.0 * d)
            cols.append(col if side == "left" else -col)
        d = 1e-6 * max(1.0, abs(x[2]))
        Fp = self.F(np.array([x[0], x[1], x[2] + d]))
        Fm = self.F(np.array([x[0], x[1], x[2] - d]))
        if Fp is None or Fm is None:
            return None
        cols.append((Fp - Fm) / (2.0 * d))
        return np.column_stack(cols)


def _newton_fixed_lambda(work: _MissWork, lam: float, a: float, b: float, max_iter: int = 25):
    """Newton on miss(., ., lam) from (a, b); returns (a, b, residual) or None."""
    tol = work.cfg.tol_newton
    x = np.array([a, b, lam])
    for _ in range(max_iter):
        Fv = work.F(x)
        if Fv is None:
            return None
        res = float(np.max(np.abs(Fv)))
        if res <= tol:
            return float(x[0]), float(x[1]), res
        J = work.jacobian(x)
        if J is None:
            return None
        J2 = J[:, :2]
        try:
            step = np.linalg.solve(J2, -Fv)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(step)):
            return None
        damp = 1.0
        for _ in range(40):
            xn = x[:2] + damp * step
            if xn[0] > 0.0 and xn[1] > 0.0:
                break
            damp *= 0.5
        else:
            return None
        x = np.array([xn[0], xn[1], lam])
    return None


def _newton_arclength(work: _MissWork, x_pred: np.ndarray, tangent: np.ndarray, max_iter: int = 20):
    """Newton on (miss, tangent plane through x_pred); returns (x, res) or None."""
    tol = work.cfg.tol_newton
    x = x_pred.copy()
    for _ in range(max_iter):
        Fv = work.F(x)
        if Fv is None:
            return None
        c = float(tangent @ (x - x_pred))
        res = float(np.max(np.abs(Fv)))
        if res <= tol and abs(c) <= 1e-10:
            return x, res
        J = work.jacobian(x)
        if J is None:
            return None
        A = np.vstack([J, tangent])
        rhs = -np.array([Fv[0], Fv[1], c])
        try:
            step = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(step)):
            return None
        damp = 1.0
        for _ in range(40):
            xn = x + damp * step
            if xn[0] > 0.0 and xn[1] > 0.0 and xn[2] > 0.0:
                break
            damp *= 0.5
        else:
            return None
        x = xn
    return None


def _tangent(work: _MissWork, x: np.ndarray, prev: np.ndarray):
    """Unit null vector of the miss Jacobian, oriented along prev."""
    J = work.jacobian(x)
    if J is None:
        return None
    A = np.vstack([J, prev])
    try:
        tau = np.linalg.solve(A, np.array([0.0, 0.0, 1.0]))
    except np.linalg.LinAlgError:
        return None
    nrm = float(np.linalg.norm(tau))
    if not math.isfinite(nrm) or nrm == 0.0:
        return None
    return tau / nrm


def _point_data(work: _MissWork, x: np.ndarray, residual: float) -> BranchPoint:
    params = EquationParams(work.entry, work.q, float(x[2]))
    t, phi, _ = glue_solution(params, float(x[0]), float(x[1]), work.cfg)
    sup_dist = float(np.max(np.abs(phi - 1.0)))
    zc = count_zeros(IVPTrace("left", float(x[0]), t, phi - 1.0, phi, "ok"))
    return BranchPoint(
        lam=float(x[2]),
        alpha=float(x[0]),
        beta=float(x[1]),
        sup_dist=sup_dist,
        zero_count=zc,
        residual=residual,
    )


def seed_branch(
    entry: GeometryEntry,
    q: float,
    k: int,
    s0: float = 1e-2,
    cfg: RunConfig = DEFAULT_CONFIG,
    eigen=None,
) -> tuple[BranchSeed, BranchSeed]:
    """Both sub-branch starting points at amplitude s0 off (1, 1, lam_k).

    The predictor direction is (1, u_k(t*), 0), the kernel direction of the
    linearization; the corrector solves the matching system constrained to
    the plane through the predicted point orthogonal to that direction, so
    it cannot fall back onto the constant line.
    """
    if not validate_exponent(entry, q):
        raise ValueError(f"exponent q={q} is not below the threshold for {entry.id}")
    eigen = eigen if eigen is not None else find_eigenvalues(entry, k, cfg)
    if len(eigen) < k:
        raise ValueError(f"need at least {k} eigenvalues, got {len(eigen)}")
    er = eigen[k - 1]
    lam_k = er.mu_numeric / (q - 1.0)
    u_star = er.u_at_tstar
    tau = np.array([1.0, u_star, 0.0])
    tau /= np.linalg.norm(tau)
    work = _MissWork(entry, q, cfg)
    bif = np.array([1.0, 1.0, lam_k])

    seeds = []
    for direction in (+1, -1):
        x_pred = bif + direction * s0 * tau
        got = _newton_arclength(work, x_pred, tau, max_iter=20)
        if got is None:
            raise ArithmeticError(
                f"seed correction failed for k={k}, direction {direction:+d} on {entry.id}"
            )
        x, res = got
        point = _point_data(work, x, res)
        out_tan = _tangent(work, x, tau * direction)
        if out_tan is None:
            out_tan = (x - bif) / np.linalg.norm(x - bif)
        seeds.append(
            BranchSeed(
                entry=entry,
                q=q,
                k=k,
                lambda_k=lam_k,
                direction=direction,
                state=x,
                tangent=out_tan,
                point=point,
            )
        )
    return seeds[0], seeds[1]


def continue_branch(
    seed: BranchSeed,
    lambda_max: float,
    max_steps: int = 500,
    cfg: RunConfig = DEFAULT_CONFIG,
    bound_A: float | None = None,
) -> Branch:
    """Pseudo-arclength continuation of one sub-branch.

    Adaptive step: halve on corrector failure, grow by 1.3 after three
    consecutive successes, clamped to [1e-4, 0.5].  The first step is
    capped at the seed offset so the corrector basin stays on the branch
    rather than the nearby trivial line, and any corrector landing on the
    trivial line is rejected like a failed step (the branch itself never
    returns there).  Stops when lambda exceeds lambda_max, steps run out,
    an amplitude leaves (1e-6, 2*bound_A), or the corrector stalls at the
    minimum step (the branch is then reported dead).
    """
    work = _MissWork(seed.entry, seed.q, cfg)
    if bound_A is None:
        bound_A = apriori_bound(EquationParams(seed.entry, seed.q, seed.lambda_k), cfg)
    branch = Branch(k=seed.k, lambda_k=seed.lambda_k, points=[seed.point])
    x = seed.state.copy()
    tau = seed.tangent.copy()
    seed_offset = max(abs(x[0] - 1.0), abs(x[1] - 1.0), 1e-4)
    ds = min(0.05, seed_offset)
    ds_min, ds_max = 1e-4, 0.5
    successes = 0

    for _ in range(max_steps):
        if x[2] > lambda_max:
            branch.status = "ok"
            return branch
        if not (1e-6 < x[0] < 2.0 * bound_A and 1e-6 < x[1] < 2.0 * bound_A):
            branch.status = "amplitude_exit"
            return branch
        tau_new = _tangent(work, x, tau)
        if tau_new is None:
            branch.status = "dead:tangent"
            return branch
        tau = tau_new
        accepted = False
        while ds >= ds_min:
            x_pred = x + ds * tau
            got = _newton_arclength(work, x_pred, tau, max_iter=12)
            if got is not None and max(abs(got[0][0] - 1.0), abs(got[0][1] - 1.0)) > 1e-9:
                accepted = True
                break
            ds *= 0.5
            successes = 0
        if not accepted:
            branch.status = "dead:corrector"
            return branch
        x, res = got
        branch.points.append(_point_data(work, x, res))
        successes += 1
        if successes >= 3:
            ds = min(ds * 1.3, ds_max)
    branch.status = "max_steps"
    return branch


def apriori_bound(params: EquationParams, cfg: RunConfig = DEFAULT_CONFIG) -> float:
    """Amplitude A beyond which endpoint shots always cross zero.

    Walks the geometric ladder 2 * 10^(j/8), j = 0, 1, ...; once eight
    consecutive rungs (one full decade) all report hit_zero, twice the first
    rung of that run bounds the side.  Returns the max over both endpoints.
    Aborts past the overflow cap, which signals an exponent at or above the
    critical threshold.
    """
    if not validate_exponent(params.entry, params.q):
        raise ValueError("a-priori bound needs a subcritical exponent")
    profile = params.entry.profile
    delta = cfg.delta_endpoint_factor * profile.t_star
    ratio = 10.0 ** 0.125
    bounds = []
    for side, target in (("left", profile.t_star - delta), ("right", delta)):
        run = 0
        run_start = math.nan
        v = 2.0
        while v <= cfg.overflow_cap:
            _, _, status, _ = shoot(params, v, side, target, cfg, stop_on_zero=True)
            if status == "hit_zero":
                if run == 0:
                    run_start = v
                run += 1
                if run == 8:
                    bounds.append(2.0 * run_start)
                    break
            else:
                run = 0
            v *= ratio
        else:
            raise ArithmeticError(
                f"no zero found below the overflow cap on side {side!r}; "
                "check that q is below the critical threshold"
            )
    return max(bounds)


def census(
    params: EquationParams,
    grid_n: int | None = None,
    cfg: RunConfig = DEFAULT_CONFIG,
    bound_A: float | None = None,
) -> Census:
    """All matching-map roots found by Newton from a seed grid over (0.01, A]^2.

    Roots are deduplicated at dedup_eps in the (alpha, beta) max-norm (ties
    keep the smaller residual) and the constant solution is dropped.  An
    empty census is a valid result.
    """
    if not validate_exponent(params.entry, params.q):
        raise ValueError("census needs a subcritical exponent")
    grid_n = cfg.grid_n if grid_n is None else grid_n
    A = apriori_bound(params, cfg) if bound_A is None else bound_A
    work = _MissWork(params.entry, params.q, cfg)
    t_m = work.t_m
    values = np.linspace(1e-2, A, grid_n + 1)[1:]

    # one batched sweep per side marks seeds whose half-trajectory survives
    L = shoot_batch(params, values, "left", t_m, cfg)
    R = shoot_batch(params, values, "right", t_m, cfg)
    ok_L = L[:, 2] == float(K.STATUS_OK)
    ok_R = R[:, 2] == float(K.STATUS_OK)

    found: list[tuple[float, float, float]] = []
    for i, a in enumerate(values):
        if not ok_L[i]:
            continue
        for j, b in enumerate(values):
            if not ok_R[j]:
                continue
            got = _newton_fixed_lambda(work, params.lam, float(a), float(b))
            if got is not None:
                found.append(got)

    # dedup in max-norm, preferring smaller residuals
    found.sort(key=lambda r: r[2])
    kept: list[tuple[float, float, float]] = []
    for a, b, res in found:
        if any(max(abs(a - a2), abs(b - b2)) < cfg.dedup_eps for a2, b2, _ in kept):
            continue
        kept.append((a, b, res))

    solutions = []
    for a, b, res in kept:
        t, phi, _ = glue_solution(params, a, b, cfg)
        sup_dist = float(np.max(np.abs(phi - 1.0)))
        if sup_dist <= cfg.dedup_eps:
            continue
        zc = count_zeros(IVPTrace("left", a, t, phi - 1.0, phi, "ok"))
        solutions.append(CensusSolution(a, b, res, zc, sup_dist))
    solutions.sort(key=lambda s: (s.alpha, s.beta))
    return Census(params=params, bound_A=A, solutions=solutions)


def count_oracle(
    params: EquationParams,
    fine_n: int | None = None,
    cfg: RunConfig = DEFAULT_CONFIG,
    bound_A: float | None = None,
) -> int:
    """Independent lower bound on the census by brute-force sign boxes.

    Evaluates the miss map on a fine_n x fine_n grid (separating the left
    and right halves, so the cost is linear in fine_n), flags cells where
    both components change sign among the four corners, merges neighboring
    flagged cells into components, and drops the component containing the
    constant solution.  Cells with a dead corner never flag.
    """
    if not validate_exponent(params.entry, params.q):
        raise ValueError("oracle needs a subcritical exponent")
    fine_n = cfg.fine_n if fine_n is None else fine_n
    A = apriori_bound(params, cfg) if bound_A is None else bound_A
    t_m = matching_point(params.entry.profile)
    values = np.linspace(1e-2, A, fine_n + 1)[1:]
    L = shoot_batch(params, values, "left", t_m, cfg)
    R = shoot_batch(params, values, "right", t_m, cfg)
    L[L[:, 2] != float(K.STATUS_OK), :2] = np.nan
    R[R[:, 2] != float(K.STATUS_OK), :2] = np.nan

    F1 = L[:, 0][:, None] - R[:, 0][None, :]
    F2 = L[:, 1][:, None] - R[:, 1][None, :]

    def crossing(F):
        c = np.stack([F[:-1, :-1], F[1:, :-1], F[:-1, 1:], F[1:, 1:]])
        finite = np.all(np.isfinite(c), axis=0)
        return finite & (np.min(c, axis=0) < 0.0) & (np.max(c, axis=0) > 0.0)

    cells = crossing(F1) & crossing(F2)
    if not np.any(cells):
        return 0

    from scipy import ndimage

    labels, n_comp = ndimage.label(cells, structure=np.ones((3, 3), dtype=int))
    # component through the constant solution does not count
    ia = int(np.searchsorted(values, 1.0)) - 1
    trivial_labels = set()
    for di in (0, 1):
        for dj in (0, 1):
            i, j = ia + 1 - di, ia + 1 - dj
            if 0 <= i < labels.shape[0] and 0 <= j < labels.shape[1] and labels[i, j] > 0:
                trivial_labels.add(int(labels[i, j]))
    return int(n_comp - len(trivial_labels))


def limit_profile(m0: float, q: float, cfg: RunConfig = DEFAULT_CONFIG) -> float:
    """First zero of the blow-up limit equation w'' + (m0/t) w' + w^q = 0.

    Starts from w(0)=1, w'(0)=0 via the series bootstrap
    w''(0) = -1/(1+m0) and integrates until the first sign change.
    """
    if not (m0 + 1.0) / 2.0 < (q + 1.0) / (q - 1.0):
        raise ValueError("oscillation condition violated: no zero is guaranteed")
    delta = 1e-4
    a = -1.0 / (1.0 + m0)
    y0 = 1.0 + 0.5 * a * delta * delta
    dy0 = a * delta
    one = np.empty(1)
    status, t_ev, _, _, _, _ = K.rk45_run(
        K.RHS_LIMIT, 1, np.array([m0]), 0.0, q, 0.0, m0, delta, 1e3, y0, dy0,
        cfg.tol_ode, cfg.tol_ode, 0.1, cfg.overflow_cap, True,
        False, one, one, one, one,
    )
    if status != K.STATUS_HIT_ZERO:
        raise ArithmeticError("limit profile found no zero before t = 1e3")
    return float(t_ev)


def rescaled_first_zero(params: EquationParams, alpha: float, cfg: RunConfig = DEFAULT_CONFIG) -> float:
    """Blow-up rescaling alpha^((q-1)/2) * sqrt(lam) * t_z of the first zero."""
    profile = params.entry.profile
    delta = cfg.delta_endpoint_factor * profile.t_star
    _, _, status, t_z = shoot(params, alpha, "left", profile.t_star - delta, cfg, stop_on_zero=True)
    if status != "hit_zero":
        raise ArithmeticError(f"trajectory from alpha={alpha} has no zero")
    return alpha ** ((params.q - 1.0) / 2.0) * math.sqrt(params.lam) * t_z


def uniqueness_certificate(lam: float, q: float, mu1: float, sup_max: float) -> bool:
    """Small-lambda uniqueness test: q*lam*M^(q-1) <= lam + mu1.

    M is an upper bound for the largest solution value seen at this lambda
    (the constant solution contributes M = 1).  True means every solution
    is provably the constant one.
    """
    M = max(1.0, sup_max)
    return q * lam * M ** (q - 1.0) <= lam + mu1
