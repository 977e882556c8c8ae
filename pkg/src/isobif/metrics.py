"""Curvature and solution-count predictions for homogeneous sphere metrics.

Three families of homogeneous metrics on spheres are supported, each a
canonical variation of the round metric along the fibers of a Hopf-type
fibration:

* ``u``: circle fibers over CP^n, one scale x, total dimension 2n+1;
* ``sp``: S^3 fibers over HP^n, three scales (x1, x2, x3), dimension 4n+3;
* ``spin9``: S^7 fibers over S^8, one scale x, dimension 15.

Scalar curvature follows the closed forms for these families; sectional
curvatures are returned as (label, value, pair weight) triples whose
weighted pair sum reproduces the scalar curvature, which pins down the
weights uniquely.  The predictor maps a metric to the expected number of
invariant solutions of the associated constant-curvature equation by
locating its Yamabe parameter between consecutive bifurcation levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "HopfMetric",
    "SectionalValue",
    "scalar_curvature",
    "sectional_curvatures",
    "yamabe_lambda",
    "predict_counts",
]

_FAMILIES = {"u": 1, "sp": 3, "spin9": 1}


@dataclass(frozen=True)
class HopfMetric:
    """One member of a family of homogeneous metrics on a sphere.

    Parameters
    ----------
    family : str
        One of ``u``, ``sp``, ``spin9``.
    n : int
        Base parameter; the sphere dimension is 2n+1, 4n+3, or 15.
    scales : tuple of float
        Fiber scales, all positive; length 1 for ``u`` and ``spin9``,
        length 3 for ``sp``.
    """

    family: str
    n: int
    scales: tuple[float, ...]

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        want = _FAMILIES[self.family]
        if len(self.scales) != want:
            raise ValueError(f"family {self.family!r} takes {want} scale(s)")
        if any(not (s > 0.0) for s in self.scales):
            raise ValueError("scales must be positive")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def dim(self) -> int:
        """Sphere dimension N."""
        if self.family == "u":
            return 2 * self.n + 1
        if self.family == "sp":
            return 4 * self.n + 3
        return 15


@dataclass(frozen=True)
class SectionalValue:
    """A distinct sectional curvature with its unordered-pair weight."""

    label: str
    value: float
    weight: int


def scalar_curvature(metric: HopfMetric) -> float:
    """Closed-form scalar curvature of the metric.

    At unit scales every family returns N(N-1), the round value.
    """
    n = metric.n
    if metric.family == "u":
        (x,) = metric.scales
        return 4.0 * n * n + 4.0 * n - 2.0 * n * x
    if metric.family == "sp":
        x1, x2, x3 = metric.scales
        sq = x1 * x1 + x2 * x2 + x3 * x3
        diff = (x2 - x1) ** 2 + (x3 - x1) ** 2 + (x3 - x2) ** 2
        return (
            2.0 / (x1 * x2 * x3) * (sq - diff)
            - 4.0 * n * (x1 + x2 + x3)
            + 16.0 * n * n
            + 32.0 * n
        )
    (x,) = metric.scales
    return 42.0 / x - 56.0 * x + 224.0


def sectional_curvatures(metric: HopfMetric) -> list[SectionalValue]:
    """Distinct sectional curvatures with unordered-pair weights.

    The weights count orthonormal frame pairs realizing each value, so

        2 * sum(weight * value) == scalar_curvature(metric)

    and the weights sum to C(N, 2).  Both identities determine the weights
    uniquely given the value expressions, which makes the table
    self-validating.
    """
    n = metric.n
    if metric.family == "u":
        (x,) = metric.scales
        out = [
            SectionalValue("fiber-horizontal", x, 2 * n),
            SectionalValue("horizontal complex-aligned", 4.0 - 3.0 * x, n),
            SectionalValue("horizontal generic", 1.0, 2 * n * (n - 1)),
        ]
        return [sv for sv in out if sv.weight > 0]
    if metric.family == "sp":
        x = metric.scales
        vol = x[0] * x[1] * x[2]
        out = []
        for i, j in ((0, 1), (0, 2), (1, 2)):
            k = 3 - i - j
            val = (
                -3.0 * x[k] ** 2
                + 2.0 * x[i] * x[k]
                + 2.0 * x[j] * x[k]
                + (x[j] - x[i]) ** 2
            ) / vol
            out.append(SectionalValue(f"fiber pair {i + 1}{j + 1}", val, 1))
        for i in range(3):
            out.append(SectionalValue(f"fiber {i + 1}-horizontal", x[i], 4 * n))
        for i in range(3):
            out.append(
                SectionalValue(
                    f"horizontal aligned {i + 1}", 4.0 - 3.0 * x[i], 2 * n
                )
            )
        out.append(SectionalValue("horizontal generic", 1.0, 8 * n * (n - 1)))
        return [sv for sv in out if sv.weight > 0]
    (x,) = metric.scales
    return [
        SectionalValue("fiber-fiber", 1.0 / x, 21),
        SectionalValue("fiber-horizontal", x, 56),
        SectionalValue("horizontal", 4.0 - 3.0 * x, 28),
    ]


def yamabe_lambda(metric: HopfMetric) -> float:
    """Map scalar curvature to the ODE parameter lambda = s / a_N.

    a_N = 4(N-1)/(N-2).  Raises ValueError when the scalar curvature is
    not positive, where the constant solution is the only one and the
    reduction does not apply.
    """
    s = scalar_curvature(metric)
    if s <= 0.0:
        raise ValueError("scalar curvature must be positive")
    N = metric.dim
    a_N = 4.0 * (N - 1) / (N - 2)
    return s / a_N


def _alpha_level(k: int, n: int, q: float) -> float:
    return 4.0 * k * (4.0 * k + 4.0 * n + 2.0) / (q - 1.0)


def predict_counts(metric: HopfMetric, q: float | None = None) -> dict:
    """Predicted invariant-solution counts for an ``sp`` family metric.

    Locates lambda = yamabe_lambda(metric) between consecutive bifurcation
    levels alpha_k = 4k(4k+4n+2)/(q-1) and reports the per-subgroup
    breakdown: the quaternionic-line action contributes 2k, each of the
    two-block product actions (second block size l = 2 .. floor((n+1)/2))
    contributes 2k, and the complex diagonal action contributes k.  The
    two stated grand totals, (2*floor((n+1)/2) + 1)*k and
    (2*floor((n+1)/2) + 2)*k, disagree by k; both are reported as
    total_lower and total_upper and neither is corrected here.

    q defaults to the critical exponent (N+2)/(N-2) of the sphere.
    """
    if metric.family != "sp":
        raise ValueError("predictor is defined for the sp family only")
    n = metric.n
    N = metric.dim
    if q is None:
        q = (N + 2.0) / (N - 2.0)
    q_top = (4.0 * n + 2.0) / (4.0 * n - 2.0)
    if not (1.0 < q <= q_top):
        raise ValueError(f"q must lie in (1, {q_top}]")
    lam = yamabe_lambda(metric)
    k = 0
    while _alpha_level(k + 1, n, q) < lam:
        k += 1
    half = (n + 1) // 2
    breakdown = {f"Sp({n})": 2 * k}
    for l in range(2, half + 1):
        breakdown[f"Sp({n + 1 - l})xSp({l})"] = 2 * k
    breakdown[f"U({n + 1})"] = k
    return {
        "family": "sp",
        "n": n,
        "scales": list(metric.scales),
        "s": scalar_curvature(metric),
        "lambda": lam,
        "q": q,
        "k": k,
        "breakdown": breakdown,
        "total_lower": (2 * half + 1) * k,
        "total_upper": (2 * half + 2) * k,
    }
