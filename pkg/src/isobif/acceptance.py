"""Runnable acceptance suite: ten numbered end-to-end checks.

Each check returns (passed, detail) and is cheap enough for a laptop; the
whole suite completes in a few minutes.  The CLI `acceptance` subcommand
and the test suite both call into this module so there is exactly one
definition of what the package promises.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from . import bifurcation as bif
from . import polynomials as poly
from .config import DEFAULT_CONFIG, RunConfig
from .geometry import closed_form_mu, get_entry
from .metrics import (
    HopfMetric,
    predict_counts,
    scalar_curvature,
    sectional_curvatures,
)
from .odecore import EquationParams
from .spectrum import find_eigenvalues

SPECTRUM_ENTRIES = (
    "s3_torus",
    "s4_o3o2",
    "cpn_un(2)",
    "cpn_son1(2)",
    "hpn_spn(2)",
    "hpn_un1(2)",
)


@functools.lru_cache(maxsize=16)
def _eigen(entry_id: str, count: int, cfg: RunConfig):
    return find_eigenvalues(get_entry(entry_id), count, cfg)


def check_spectrum_exactness(cfg: RunConfig = DEFAULT_CONFIG):
    """Numeric eigenvalues match the closed form g*k*(g*k+N-1)."""
    worst = 0.0
    for name in SPECTRUM_ENTRIES:
        for res in _eigen(name, 6, cfg):
            rel = abs(res.mu_numeric - res.mu_closed) / res.mu_closed
            worst = max(worst, rel)
    ok = worst <= 1e-6
    return ok, f"worst rel err {worst:.2e} over {len(SPECTRUM_ENTRIES)} entries, k<=6"


def check_zero_count_monotone(cfg: RunConfig = DEFAULT_CONFIG):
    """Interior zero counts strictly increase with the eigenvalue index."""
    bad = []
    for name in SPECTRUM_ENTRIES:
        counts = [r.zero_count for r in _eigen(name, 6, cfg)]
        if any(b <= a for a, b in zip(counts, counts[1:])):
            bad.append(f"{name}:{counts}")
    return not bad, "all strictly increasing" if not bad else "; ".join(bad)


def check_bifurcation_constants(cfg: RunConfig = DEFAULT_CONFIG):
    """First three bifurcation parameters for the torus entry at q=3."""
    got = bif.bifurcation_lambdas(get_entry("s3_torus"), 3.0, 3, cfg)
    want = (4.0, 12.0, 24.0)
    worst = max(abs(g - w) / w for g, w in zip(got, want))
    return worst <= 1e-6, f"got {tuple(round(g, 9) for g in got)}, worst rel err {worst:.2e}"


def check_census_multiplicity(cfg: RunConfig = DEFAULT_CONFIG):
    """Solution floor, distinct zero counts, residuals, and grid oracle."""
    entry = get_entry("s3_torus")
    details = []
    ok = True
    for lam, k in ((4.5, 1), (13.0, 2), (25.0, 3)):
        params = EquationParams(entry=entry, q=3.0, lam=lam)
        cen = bif.census(params, cfg.grid_n, cfg)
        oracle = bif.count_oracle(params, cfg.fine_n, cfg)
        n_sol = len(cen.solutions)
        n_zc = len({s.zero_count for s in cen.solutions})
        max_res = max((s.residual for s in cen.solutions), default=0.0)
        good = n_sol >= k and n_zc >= k and max_res <= 1e-8 and n_sol >= oracle
        ok = ok and good
        details.append(
            f"lam={lam:g}: {n_sol} sols, {n_zc} zero counts, oracle {oracle}, "
            f"max res {max_res:.1e}"
        )
    return ok, "; ".join(details)


def check_small_lambda_uniqueness(cfg: RunConfig = DEFAULT_CONFIG):
    """No nontrivial solutions below the first bifurcation parameter."""
    cases = []
    s3 = get_entry("s3_torus")
    cases.append((s3, 2.0))
    s4 = get_entry("s4_o3o2")
    lam1 = bif.bifurcation_lambdas(s4, 3.0, 1, cfg)[0]
    cases.append((s4, 0.5 * lam1))
    parts = []
    ok = True
    for entry, lam in cases:
        params = EquationParams(entry=entry, q=3.0, lam=lam)
        cen = bif.census(params, cfg.grid_n, cfg)
        oracle = bif.count_oracle(params, cfg.fine_n, cfg)
        good = len(cen.solutions) == 0 and oracle == 0
        ok = ok and good
        parts.append(f"{entry.id} lam={lam:g}: census {len(cen.solutions)}, oracle {oracle}")
    return ok, "; ".join(parts)


def check_branch_globality(cfg: RunConfig = DEFAULT_CONFIG):
    """First branch reaches lambda >= 40 and stays away from the trivial pair."""
    entry = get_entry("s3_torus")
    n1 = _eigen("s3_torus", 1, cfg)[0].zero_count
    seeds = bif.seed_branch(entry, 3.0, 1, cfg=cfg)
    ok = True
    parts = []
    for label, seed in zip("+-", seeds):
        br = bif.continue_branch(seed, lambda_max=40.0, max_steps=2000, cfg=cfg)
        lam_end = br.points[-1].lam
        zcs = {p.zero_count for p in br.points}
        dist = min(
            math.hypot(p.alpha - 1.0, p.beta - 1.0) for p in br.points[1:]
        )
        good = (
            br.status == "ok"
            and lam_end >= 40.0
            and zcs == {n1}
            and dist >= 1e-3
        )
        ok = ok and good
        parts.append(
            f"dir{label}: lam_end {lam_end:.1f}, zero counts {sorted(zcs)}, "
            f"min dist to (1,1) {dist:.3f}"
        )
    return ok, "; ".join(parts)


def check_rescaling_law(cfg: RunConfig = DEFAULT_CONFIG):
    """Blow-up shots approach the limit-profile first zero after rescaling."""
    entry = get_entry("s3_torus")
    t_w = bif.limit_profile(1, 3.0)
    worst = 0.0
    for alpha in (1e2, 1e3, 1e4):
        params = EquationParams(entry=entry, q=3.0, lam=4.0)
        z = bif.rescaled_first_zero(params, alpha, cfg)
        worst = max(worst, abs(z - t_w) / t_w)
    return worst <= 0.05, f"limit zero {t_w:.6f}, worst rel dev {worst:.2%}"


def check_curvature_identities(cfg: RunConfig = DEFAULT_CONFIG):
    """Round-point exactness, the equal-scale closed form, and pair sums."""
    # round metrics give s = N(N-1) exactly
    metrics = [HopfMetric("u", n, (1.0,)) for n in (1, 2, 3, 4)]
    metrics += [HopfMetric("sp", n, (1.0,) * 3) for n in (1, 2, 3, 4)]
    metrics.append(HopfMetric("spin9", 1, (1.0,)))
    for m in metrics:
        if scalar_curvature(m) != float(m.dim * (m.dim - 1)):
            return False, f"round identity failed for {m.family} n={m.n}"
    # equal-scale specialization
    worst_t = 0.0
    for n in (1, 2, 3):
        for t in (0.3, 1.0, 2.0):
            m = HopfMetric("sp", n, (t * t,) * 3)
            want = 6.0 / t**2 - 12.0 * n * t**2 + 16.0 * n * n + 32.0 * n
            worst_t = max(worst_t, abs(scalar_curvature(m) - want) / abs(want))
    if worst_t > 1e-12:
        return False, f"equal-scale specialization off by {worst_t:.2e}"
    # weighted pair sums at random scales
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for _ in range(20):
        for family, n in (("u", 2), ("sp", 1), ("sp", 3), ("spin9", 1)):
            k = 3 if family == "sp" else 1
            m = HopfMetric(family, n, tuple(rng.uniform(0.2, 3.0, size=k)))
            s = scalar_curvature(m)
            total = 2.0 * sum(v.weight * v.value for v in sectional_curvatures(m))
            worst = max(worst, abs(total - s) / abs(s))
    ok = worst <= 1e-10
    return ok, (
        f"round exact; specialization {worst_t:.1e}; pair-sum worst {worst:.1e}"
    )


def check_polynomial_verification(cfg: RunConfig = DEFAULT_CONFIG):
    """Clifford relations, gradient identity, invariances, integer constant."""
    rng = np.random.default_rng(cfg.seed)
    parts = []
    for n in (1, 2, 3):
        system = poly.build_clifford(n)
        dim = 2 * system.l
        eye = np.eye(dim)
        rel = max(
            np.max(np.abs(Pi @ Pj + Pj @ Pi - (2.0 * eye if i == j else 0.0)))
            for i, Pi in enumerate(system.P)
            for j, Pj in enumerate(system.P)
        )
        worst_grad = 0.0
        worst_inv = 0.0
        for _ in range(100):
            x = rng.normal(size=dim)
            nx2 = float(x @ x)
            g = poly.fkm_grad(system, x)
            worst_grad = max(
                worst_grad, abs(float(g @ g) - 16.0 * nx2**3) / nx2**3
            )
            f = poly.fkm_eval(system, x)
            Q = poly.right_sp1_matrix(system, poly.random_unit_quaternion(rng))
            worst_inv = max(worst_inv, abs(poly.fkm_eval(system, Q @ x) - f) / abs(f))
            U = poly.random_unitary(n + 1, rng)
            M = poly.unitary_action_matrix(system, U)
            worst_inv = max(worst_inv, abs(poly.fkm_eval(system, M @ x) - f) / abs(f))
        rep = poly.verify_cm(
            lambda x, s=system: poly.fkm_eval(s, x),
            dim,
            4,
            samples=20,
            seed=cfg.seed,
            grad=lambda x, s=system: poly.fkm_grad(s, x),
            expected_c=2 * n - 3,
        )
        good = (
            rel == 0.0
            and worst_grad <= 1e-9
            and worst_inv <= 1e-9
            and rep["c_deviation"] <= 1e-3
            and rep["c_matches_expected"]
        )
        if not good:
            return False, (
                f"fkm n={n}: rel {rel}, grad {worst_grad:.1e}, inv {worst_inv:.1e}, "
                f"c {rep['c_estimate']:.6f}"
            )
        parts.append(f"fkm n={n}: c={rep['c_int']}")
    for n in (1, 2):
        dim = 8 * (n + 1)
        worst_q = 0.0
        for _ in range(100):
            z = rng.normal(size=dim)
            u, v = poly.ot_split(z)
            f = poly.ot_eval(u, v)
            q = poly.random_unit_quaternion(rng)
            f2 = poly.ot_eval(
                poly.sp1_right_diagonal(u, q), poly.sp1_right_diagonal(v, q)
            )
            worst_q = max(worst_q, abs(f2 - f) / max(1.0, abs(f)))
        rep = poly.verify_cm(poly.ot_eval_flat, dim, 4, samples=10, seed=cfg.seed)
        if worst_q > 1e-9 or rep["max_grad_residual"] > 1e-5:
            return False, (
                f"ot n={n}: invariance {worst_q:.1e}, "
                f"grad residual {rep['max_grad_residual']:.1e}"
            )
        parts.append(
            f"ot n={n}: grad residual {rep['max_grad_residual']:.0e} "
            f"({rep['normalization']})"
        )
    return True, "; ".join(parts)


def _sp_equal_scale_for_lambda(n: int, lam: float) -> HopfMetric:
    """Equal-scale sp metric whose Yamabe parameter equals lam."""
    N = 4 * n + 3
    s = lam * 4.0 * (N - 1) / (N - 2)
    # solve 6/x - 12 n x + 16 n^2 + 32 n = s for the positive root
    b = s - 16.0 * n * n - 32.0 * n
    x = (-b + math.sqrt(b * b + 288.0 * n)) / (24.0 * n)
    return HopfMetric("sp", n, (x, x, x))


def check_predictor(cfg: RunConfig = DEFAULT_CONFIG):
    """Counts just above the first two bifurcation levels, monotone in lambda."""
    n = 2
    q = (4 * n + 5) / (4 * n + 1)
    half = (n + 1) // 2
    parts = []
    for k_want, factor in ((1, 1.01), (2, 1.01)):
        alpha = 4.0 * k_want * (4.0 * k_want + 4.0 * n + 2.0) / (q - 1.0)
        m = _sp_equal_scale_for_lambda(n, alpha * factor)
        rep = predict_counts(m)
        good = (
            rep["k"] == k_want
            and rep["total_lower"] == (2 * half + 1) * k_want
            and rep["total_upper"] == (2 * half + 2) * k_want
        )
        if not good:
            return False, f"just above level {k_want}: got {rep}"
        parts.append(
            f"above level {k_want}: k={rep['k']}, totals "
            f"({rep['total_lower']}, {rep['total_upper']})"
        )
    ks = []
    for x in np.geomspace(2e-3, 1.0, 40):
        rep = predict_counts(HopfMetric("sp", n, (x, x, x)))
        ks.append((rep["lambda"], rep["k"]))
    ks.sort()
    mono = all(a[1] <= b[1] for a, b in zip(ks, ks[1:]))
    if not mono:
        return False, "k not monotone along the lambda sweep"
    parts.append(f"monotone over lambda in [{ks[0][0]:.1f}, {ks[-1][0]:.1f}]")
    return True, "; ".join(parts)


CRITERIA = (
    ("spectrum exactness", check_spectrum_exactness),
    ("zero-count monotonicity", check_zero_count_monotone),
    ("bifurcation constants", check_bifurcation_constants),
    ("census multiplicity floor", check_census_multiplicity),
    ("small-lambda uniqueness", check_small_lambda_uniqueness),
    ("branch globality", check_branch_globality),
    ("rescaling law", check_rescaling_law),
    ("curvature identities", check_curvature_identities),
    ("polynomial verification", check_polynomial_verification),
    ("predictor consistency", check_predictor),
)


def run_all(cfg: RunConfig = DEFAULT_CONFIG, report=print):
    """Run the full suite; one line per criterion; returns overall success."""
    all_ok = True
    results = []
    for i, (name, fn) in enumerate(CRITERIA, start=1):
        try:
            ok, detail = fn(cfg)
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok = all_ok and ok
        results.append({"index": i, "name": name, "passed": ok, "detail": detail})
        report(f"criterion {i:2d} {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    return all_ok, results
