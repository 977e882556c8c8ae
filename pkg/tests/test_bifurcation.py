import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from isobif.bifurcation import (
    apriori_bound,
    bifurcation_lambdas,
    census,
    continue_branch,
    count_oracle,
    limit_profile,
    rescaled_first_zero,
    seed_branch,
    uniqueness_certificate,
)
from isobif.geometry import get_entry, h_eval
from isobif.odecore import EquationParams, miss

S3 = get_entry("s3_torus")


def test_bifurcation_lambdas():
    lams = bifurcation_lambdas(S3, 3.0, 3)
    assert lams == pytest.approx([4.0, 12.0, 24.0], rel=1e-8)
    lams2 = bifurcation_lambdas(get_entry("s4_o3o2"), 2.0, 2)
    assert lams2 == pytest.approx([10.0, 28.0], rel=1e-8)
    with pytest.raises(ValueError):
        bifurcation_lambdas(get_entry("s4_o3o2"), 6.0, 1)  # above threshold


def test_seed_branch_pair():
    plus, minus = seed_branch(S3, 3.0, 1, s0=1e-2)
    assert plus.direction == 1 and minus.direction == -1
    for s in (plus, minus):
        assert s.lambda_k == pytest.approx(4.0, rel=1e-8)
        assert s.point.residual < 1e-9
        off = max(abs(s.state[0] - 1.0), abs(s.state[1] - 1.0))
        assert 1e-3 < off < 5e-2
        assert s.point.zero_count == 1
    # mode 1 is antisymmetric: the two seeds mirror each other
    assert plus.state[0] == pytest.approx(minus.state[1], rel=1e-6)
    assert plus.state[1] == pytest.approx(minus.state[0], rel=1e-6)


def test_continue_branch_k1_reaches_target():
    plus, minus = seed_branch(S3, 3.0, 1)
    for seed in (plus, minus):
        br = continue_branch(seed, 12.0)
        assert br.status == "ok"
        assert br.points[-1].lam > 12.0
        assert all(p.zero_count == 1 for p in br.points)
        assert all(p.residual < 1e-7 for p in br.points)
        # the guard keeps every stored point off the constant line
        assert all(
            max(abs(p.alpha - 1.0), abs(p.beta - 1.0)) > 1e-9 for p in br.points
        )
        # each stored point is a genuine root of the matching map
        p_mid = br.points[len(br.points) // 2]
        f = miss(EquationParams(S3, 3.0, p_mid.lam), p_mid.alpha, p_mid.beta)
        assert max(abs(f[0]), abs(f[1])) < 1e-7


def test_branch_mirror_symmetry_k1():
    # equal endpoint multiplicities make the two sub-branches exact mirrors
    plus, minus = seed_branch(S3, 3.0, 1)
    bp = continue_branch(plus, 9.0)
    bm = continue_branch(minus, 9.0)
    assert bp.status == bm.status == "ok"
    assert len(bp.points) == len(bm.points)
    for p, m in zip(bp.points, bm.points):
        assert p.lam == pytest.approx(m.lam, rel=1e-6)
        assert p.alpha == pytest.approx(m.beta, rel=1e-5, abs=1e-7)
        assert p.beta == pytest.approx(m.alpha, rel=1e-5, abs=1e-7)


def test_transcritical_k2_directions():
    # mode 2 is symmetric: one direction descends below lambda_2 and folds
    # back, the other ascends directly; both carry two interior zeros
    plus, minus = seed_branch(S3, 3.0, 2)
    lam2 = plus.lambda_k
    mins = {}
    for seed in (plus, minus):
        br = continue_branch(seed, 13.0)
        assert br.status == "ok"
        assert all(p.zero_count == 2 for p in br.points)
        # symmetric mode: alpha == beta all along
        assert all(p.alpha == pytest.approx(p.beta, rel=1e-6) for p in br.points)
        mins[seed.direction] = min(p.lam for p in br.points)
    folded = min(mins.values())
    direct = max(mins.values())
    assert folded < lam2 - 0.5
    assert direct > lam2 - 0.1


def test_apriori_bound_frozen_ladder():
    # frozen ladder outputs; the middle value sits one rung higher because
    # alpha = 2 genuinely stays positive at lam = 12 (see the scipy check)
    got = [apriori_bound(EquationParams(S3, 3.0, lam)) for lam in (4.0, 12.0, 24.0)]
    assert got[0] == pytest.approx(4.0, rel=1e-12)
    assert got[1] == pytest.approx(4.0 * 10.0**0.125, rel=1e-12)
    assert got[2] == pytest.approx(4.0, rel=1e-12)


def test_apriori_window_confirmed_by_scipy():
    # independent route: integrate alpha = 2 with DOP853 and look for a
    # sign change; at lam = 12 there is none, at lam = 4 there is one
    ts = S3.profile.t_star
    for lam, expect_zero in ((4.0, True), (12.0, False)):

        def rhs(t, y):
            return [y[1], -h_eval(S3.profile, t) * y[1] + lam * (y[0] - y[0] ** 3)]

        d = 1e-6
        a = lam * (2.0 - 8.0) / 2.0
        sol = solve_ivp(
            rhs,
            (d, ts - 1e-6),
            [2.0 + 0.5 * a * d * d, a * d],
            method="DOP853",
            rtol=1e-11,
            atol=1e-11,
            dense_output=True,
        )
        assert sol.success
        grid = sol.sol(np.linspace(d, ts - 1e-6, 2000))[0]
        assert (np.min(grid) < 0.0) == expect_zero
        if not expect_zero:
            assert np.min(grid) > 0.1


def test_census_frozen_lam13():
    p = EquationParams(S3, 3.0, 13.0)
    c = census(p)
    assert c.method == "newton_grid"
    got = [(s.alpha, s.beta, s.zero_count) for s in c.solutions]
    want = [
        (0.03771845696825634, 2.025426591031607, 1),
        (0.843256097109309, 0.8432560971093106, 2),
        (1.847422095549668, 1.8474220955496687, 2),
        (2.0254265910316067, 0.037718456968256354, 1),
    ]
    assert len(got) == len(want)
    for (a, b, z), (wa, wb, wz) in zip(got, want):
        assert a == pytest.approx(wa, rel=1e-7)
        assert b == pytest.approx(wb, rel=1e-7)
        assert z == wz
    for s in c.solutions:
        assert s.residual < 1e-8
        assert s.sup_dist > 1e-2
        # independent residual check straight through the miss map
        f = miss(p, s.alpha, s.beta)
        assert max(abs(f[0]), abs(f[1])) < 1e-8


def test_census_mirror_pairs():
    # the solution set at fixed lambda is swap-invariant for this entry
    c = census(EquationParams(S3, 3.0, 25.0))
    assert len(c.solutions) == 6
    pairs = {(round(s.alpha, 7), round(s.beta, 7)) for s in c.solutions}
    assert pairs == {(b, a) for a, b in pairs}
    counts = sorted({s.zero_count for s in c.solutions})
    assert counts == [1, 2, 3]


def test_census_empty_below_first_eigenvalue():
    p = EquationParams(S3, 3.0, 2.0)
    c = census(p, 21)
    assert c.solutions == []
    assert count_oracle(p, 100) == 0


def test_census_vs_count_oracle():
    p = EquationParams(S3, 3.0, 13.0)
    n_census = len(census(p).solutions)
    n_oracle = count_oracle(p, 200)
    assert n_oracle <= n_census
    assert n_oracle == 4


def test_limit_profile_frozen_and_scipy():
    assert limit_profile(1.0, 3.0) == pytest.approx(3.5739009821248025, rel=1e-9)
    assert limit_profile(2.0, 3.0) == pytest.approx(6.896848617310884, rel=1e-9)

    # independent route for the frozen value
    def rhs(t, y):
        return [y[1], -y[1] / t - y[0] ** 3]

    def cross(t, y):
        return y[0]

    cross.terminal = True
    d = 1e-8
    sol = solve_ivp(
        rhs,
        (d, 50.0),
        [1.0 - d * d / 4.0, -d / 2.0],
        method="DOP853",
        events=cross,
        rtol=1e-12,
        atol=1e-13,
    )
    assert sol.t_events[0].size == 1
    assert sol.t_events[0][0] == pytest.approx(3.5739009821248025, rel=1e-8)

    with pytest.raises(ValueError):
        limit_profile(9.0, 3.0)  # oscillation condition violated


def test_rescaled_first_zero_converges_to_limit():
    target = limit_profile(S3.profile.m_left, 3.0)
    p = EquationParams(S3, 3.0, 4.5)
    errs = []
    for alpha in (1e2, 1e3):
        z = rescaled_first_zero(p, alpha)
        errs.append(abs(z - target) / target)
    assert errs[0] < 1e-3
    assert errs[1] < 2.5e-4
    with pytest.raises(ArithmeticError):
        rescaled_first_zero(EquationParams(S3, 3.0, 12.0), 2.0)


def test_uniqueness_certificate_arithmetic():
    # exactly the inequality q*lam*M^(q-1) <= lam + mu1 with M = max(1, sup)
    assert uniqueness_certificate(1.0, 3.0, 8.0, 0.5)
    assert uniqueness_certificate(1.0, 3.0, 8.0, 1.5) == (3.0 * 1.0 * 1.5**2 <= 9.0)
    assert not uniqueness_certificate(100.0, 3.0, 8.0, 2.0)
    rng = np.random.default_rng(5)
    for _ in range(50):
        lam = float(rng.uniform(0.1, 50.0))
        q = float(rng.uniform(1.1, 5.0))
        mu1 = float(rng.uniform(1.0, 60.0))
        sup = float(rng.uniform(0.0, 3.0))
        want = q * lam * max(1.0, sup) ** (q - 1.0) <= lam + mu1
        assert uniqueness_certificate(lam, q, mu1, sup) == want


def test_certificate_consistent_with_census():
    # below the first branch point a certified lambda really has no
    # nontrivial solutions in the census
    lam, q = 1.5, 3.0
    assert uniqueness_certificate(lam, q, 8.0, 1.0)
    c = census(EquationParams(S3, q, lam), 21)
    assert c.solutions == []
