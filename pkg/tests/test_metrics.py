import math

import numpy as np
import pytest

from isobif.metrics import (
    HopfMetric,
    predict_counts,
    scalar_curvature,
    sectional_curvatures,
    yamabe_lambda,
)


def test_metric_validation():
    with pytest.raises(ValueError):
        HopfMetric("su", 2, (1.0,))
    with pytest.raises(ValueError):
        HopfMetric("u", 2, (1.0, 1.0))
    with pytest.raises(ValueError):
        HopfMetric("sp", 2, (1.0,))
    with pytest.raises(ValueError):
        HopfMetric("u", 2, (0.0,))
    with pytest.raises(ValueError):
        HopfMetric("u", 0, (1.0,))


def test_dimensions():
    assert HopfMetric("u", 3, (2.0,)).dim == 7
    assert HopfMetric("sp", 2, (1.0, 2.0, 3.0)).dim == 11
    assert HopfMetric("spin9", 1, (0.5,)).dim == 15


def test_round_metrics_are_exact():
    metrics = [HopfMetric("u", n, (1.0,)) for n in range(1, 6)]
    metrics += [HopfMetric("sp", n, (1.0, 1.0, 1.0)) for n in range(1, 5)]
    metrics.append(HopfMetric("spin9", 1, (1.0,)))
    for m in metrics:
        N = m.dim
        assert scalar_curvature(m) == float(N * (N - 1))
        # every plane of the round sphere is a unit-curvature plane
        for sv in sectional_curvatures(m):
            assert sv.value == pytest.approx(1.0, abs=1e-15)
        assert yamabe_lambda(m) == pytest.approx(N * (N - 2) / 4.0, rel=1e-14)


def test_closed_forms_at_sample_scales():
    assert scalar_curvature(HopfMetric("u", 2, (2.0,))) == 16.0
    m = HopfMetric("sp", 1, (0.1, 0.1, 0.1))
    assert scalar_curvature(m) == pytest.approx(6.0 / 0.1 - 1.2 + 48.0, rel=1e-14)
    assert scalar_curvature(HopfMetric("spin9", 1, (2.0,))) == 21.0 - 112.0 + 224.0


def test_scalar_curvature_can_go_negative():
    m = HopfMetric("spin9", 1, (10.0,))
    assert scalar_curvature(m) < 0.0
    with pytest.raises(ValueError):
        yamabe_lambda(m)
    mu = HopfMetric("u", 1, (10.0,))
    assert scalar_curvature(mu) < 0.0
    with pytest.raises(ValueError):
        yamabe_lambda(mu)


def test_weights_count_unordered_pairs():
    for m in (
        HopfMetric("u", 1, (0.7,)),
        HopfMetric("u", 4, (2.5,)),
        HopfMetric("sp", 1, (0.5, 1.0, 2.0)),
        HopfMetric("sp", 3, (1.2, 0.4, 0.9)),
        HopfMetric("spin9", 1, (1.7,)),
    ):
        svs = sectional_curvatures(m)
        N = m.dim
        assert all(isinstance(sv.weight, int) and sv.weight > 0 for sv in svs)
        assert sum(sv.weight for sv in svs) == N * (N - 1) // 2


def test_pair_sum_reproduces_scalar_curvature():
    rng = np.random.default_rng(17)
    for _ in range(20):
        for family, n in (("u", 1), ("u", 3), ("sp", 1), ("sp", 2), ("spin9", 1)):
            k = 3 if family == "sp" else 1
            m = HopfMetric(family, n, tuple(rng.uniform(0.2, 3.0, size=k)))
            s = scalar_curvature(m)
            total = 2.0 * sum(sv.weight * sv.value for sv in sectional_curvatures(m))
            assert total == pytest.approx(s, rel=1e-12, abs=1e-12)


def test_sp_scale_permutation_invariance():
    # the three fiber directions enter symmetrically
    rng = np.random.default_rng(23)
    for _ in range(10):
        x = tuple(rng.uniform(0.3, 2.5, size=3))
        s0 = scalar_curvature(HopfMetric("sp", 2, x))
        for perm in ((1, 2, 0), (2, 1, 0), (0, 2, 1)):
            xp = tuple(x[i] for i in perm)
            assert scalar_curvature(HopfMetric("sp", 2, xp)) == pytest.approx(
                s0, rel=1e-13
            )


def test_predictor_rejects_bad_inputs():
    with pytest.raises(ValueError):
        predict_counts(HopfMetric("u", 2, (1.0,)))
    with pytest.raises(ValueError):
        predict_counts(HopfMetric("sp", 1, (1.0, 1.0, 1.0)), q=3.1)
    with pytest.raises(ValueError):
        predict_counts(HopfMetric("sp", 1, (1.0, 1.0, 1.0)), q=1.0)


def test_predictor_round_metric_below_first_level():
    out = predict_counts(HopfMetric("sp", 1, (1.0, 1.0, 1.0)))
    assert out["q"] == pytest.approx(9.0 / 5.0)
    assert out["lambda"] == pytest.approx(8.75)
    assert out["k"] == 0
    assert out["total_lower"] == 0 and out["total_upper"] == 0


def test_predictor_known_level_crossing():
    # n=1, q=3: levels alpha_k = 2k(4k+6) = 20, 56, ...; x=0.1 gives
    # lambda = (6/0.1 - 1.2 + 48)*5/24 = 22.25, one level crossed
    out = predict_counts(HopfMetric("sp", 1, (0.1, 0.1, 0.1)), q=3.0)
    assert out["lambda"] == pytest.approx(22.25, rel=1e-12)
    assert out["k"] == 1
    assert out["breakdown"] == {"Sp(1)": 2, "U(2)": 1}
    assert out["total_lower"] == 3 and out["total_upper"] == 4


def test_predictor_breakdown_structure_n4():
    out = predict_counts(HopfMetric("sp", 4, (0.003, 0.003, 0.003)))
    k = out["k"]
    assert k >= 1
    assert set(out["breakdown"]) == {"Sp(4)", "Sp(3)xSp(2)", "U(5)"}
    assert out["breakdown"]["Sp(4)"] == 2 * k
    assert out["breakdown"]["Sp(3)xSp(2)"] == 2 * k
    assert out["breakdown"]["U(5)"] == k
    assert out["total_lower"] == 5 * k
    assert out["total_upper"] == 6 * k
    assert sum(out["breakdown"].values()) == out["total_lower"]


def test_predictor_monotone_in_lambda():
    # shrinking the fiber raises lambda, so k never decreases
    last_k = -1
    last_lam = 0.0
    for x in np.geomspace(1.0, 1e-3, 25):
        out = predict_counts(HopfMetric("sp", 2, (x, x, x)))
        assert out["lambda"] > last_lam
        assert out["k"] >= last_k
        last_k = out["k"]
        last_lam = out["lambda"]
    assert last_k >= 2
