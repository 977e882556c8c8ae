"""Clifford systems and degree-4 isoparametric polynomial verification.

Two explicit quartic families are built and checked numerically:

* the Clifford-system quartic F(x) = |x|^4 - 2 sum_i <P_i x, x>^2 on
  R^{4n+4}, built from three anticommuting symmetric 4x4 blocks; and
* the quaternionic-pairing quartic on H^{n+1} x H^{n+1} defined through
  F0(u, v) = 4 |Im <u,v>|^2 + (|u_tail|^2 - |v_tail|^2 + 2 Re(u_0 conj(v_0)))^2
  homogenized as F = |(u,v)|^4 - 2 F0.

The verifier estimates, by finite differences, whether a candidate quartic
satisfies the two defining identities of an isoparametric polynomial of
degree k ( |grad F|^2 = k^2 |x|^{2k-2} and Laplacian proportional to
|x|^{k-2} ) and reports the proportionality constant, which must be an
integer for a genuine example.

Quaternions are (w, x, y, z) rows of plain float arrays; vectors over the
quaternions are (m, 4) arrays acting as right-module elements, so scalar
multiplication acts entrywise on the right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CliffordSystem",
    "build_clifford",
    "fkm_eval",
    "fkm_eval_split",
    "fkm_grad",
    "right_sp1_matrix",
    "unitary_action_matrix",
    "random_unitary",
    "random_unit_quaternion",
    "quat_mul",
    "quat_conj",
    "ot_eval",
    "ot_eval_flat",
    "ot_grad_flat",
    "ot_split",
    "sp1_right_diagonal",
    "verify_cm",
]


# quaternion helpers ------------------------------------------------------

def quat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of (..., 4) arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def quat_conj(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:] = -out[..., 1:]
    return out


def _quat_inner(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """sum_i u_i * conj(v_i) for (m, 4) arrays, one quaternion out."""
    return quat_mul(u, quat_conj(v)).sum(axis=0)


def random_unit_quaternion(rng: np.random.Generator) -> np.ndarray:
    q = rng.normal(size=4)
    return q / np.linalg.norm(q)


# Clifford systems --------------------------------------------------------

_A0 = np.diag([1.0, 1.0, -1.0, -1.0])
_A1 = np.array(
    [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=float
)
_A2 = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=float
)


@dataclass(frozen=True)
class CliffordSystem:
    """Symmetric matrices P_0..P_m on R^{2l} with pairwise anticommutators
    P_i P_j + P_j P_i = 2 delta_ij I, validated to 1e-12 max-entry error
    on construction (exactly zero for the integer-entry builder)."""

    m: int
    l: int
    P: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.P) != self.m + 1:
            raise ValueError("need m+1 matrices")
        dim = 2 * self.l
        eye = np.eye(dim)
        for i, Pi in enumerate(self.P):
            if Pi.shape != (dim, dim):
                raise ValueError("matrix size must be 2l")
            if np.max(np.abs(Pi - Pi.T)) > 1e-12:
                raise ValueError(f"P_{i} is not symmetric")
            for j, Pj in enumerate(self.P):
                anti = Pi @ Pj + Pj @ Pi
                want = 2.0 * eye if i == j else 0.0
                if np.max(np.abs(anti - want)) > 1e-12:
                    raise ValueError(f"anticommutator ({i},{j}) violated")


def build_clifford(n: int) -> CliffordSystem:
    """Block-diagonal system of n+1 copies of the three 4x4 generators.

    The ambient dimension is 4n+4, so l = 2n+2 and m = 2; entries are
    integers and the defining relations hold exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    blocks = []
    for A in (_A0, _A1, _A2):
        P = np.zeros((4 * (n + 1), 4 * (n + 1)))
        for b in range(n + 1):
            P[4 * b : 4 * b + 4, 4 * b : 4 * b + 4] = A
        blocks.append(P)
    return CliffordSystem(m=2, l=2 * n + 2, P=tuple(blocks))


def fkm_eval(system: CliffordSystem, x: np.ndarray) -> float:
    """F(x) = |x|^4 - 2 sum_i <P_i x, x>^2."""
    x = np.asarray(x, dtype=float)
    if x.shape != (2 * system.l,):
        raise ValueError("x must have dimension 2l")
    norm2 = float(x @ x)
    forms = [float(x @ (Pi @ x)) for Pi in system.P]
    return norm2 * norm2 - 2.0 * sum(f * f for f in forms)


def _split_xy(x: np.ndarray):
    """Per-block (x0, x1, y0, y1) coordinates split into the two planes."""
    b = x.reshape(-1, 4)
    return b[:, :2].ravel(), b[:, 2:].ravel(), b


def fkm_eval_split(system: CliffordSystem, x: np.ndarray) -> float:
    """Equivalent real form of F through the two coordinate planes.

    With X the (x0, x1) parts and Y the (y0, y1) parts of the 4-blocks,

        F = |x|^4 - 2 [ (|X|^2-|Y|^2)^2 + 4 <X,Y>^2 + 4 <JX,Y>^2 ]

    where <JX,Y> = sum_blocks (x1 y0 - x0 y1).  Agreement with fkm_eval
    to 1e-12 relative is part of the test suite; the split form makes the
    diagonal unitary invariance transparent.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (2 * system.l,):
        raise ValueError("x must have dimension 2l")
    X, Y, b = _split_xy(x)
    norm2 = float(x @ x)
    g0 = float(X @ X - Y @ Y)
    g1 = 2.0 * float(X @ Y)
    g2 = 2.0 * float(np.sum(b[:, 1] * b[:, 2] - b[:, 0] * b[:, 3]))
    return norm2 * norm2 - 2.0 * (g0 * g0 + g1 * g1 + g2 * g2)


def fkm_grad(system: CliffordSystem, x: np.ndarray) -> np.ndarray:
    """Analytic gradient 4|x|^2 x - 8 sum_i <P_i x, x> P_i x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (2 * system.l,):
        raise ValueError("x must have dimension 2l")
    out = 4.0 * float(x @ x) * x
    for Pi in system.P:
        Px = Pi @ x
        out = out - 8.0 * float(x @ Px) * Px
    return out


def right_sp1_matrix(system: CliffordSystem, quat: np.ndarray) -> np.ndarray:
    """Orthogonal matrix of the right unit-quaternion action.

    The three skew products P_1 P_2, P_1 P_0, P_2 P_0 square to -I and
    anticommute, so a I + b P_1P_2 + c P_1P_0 + d P_2P_0 is orthogonal for
    any unit (a, b, c, d) and preserves F.
    """
    a, b, c, d = np.asarray(quat, dtype=float)
    n2 = a * a + b * b + c * c + d * d
    if abs(n2 - 1.0) > 1e-12:
        raise ValueError("quaternion must be unit")
    P0, P1, P2 = system.P[0], system.P[1], system.P[2]
    eye = np.eye(2 * system.l)
    return a * eye + b * (P1 @ P2) + c * (P1 @ P0) + d * (P2 @ P0)


def unitary_action_matrix(system: CliffordSystem, U: np.ndarray) -> np.ndarray:
    """Real matrix of the diagonal unitary action on the two planes.

    U is (n+1)x(n+1) complex and acts simultaneously on the complex
    vectors X_j = x0_j + i x1_j and Y_j = y0_j + i y1_j.
    """
    nb = U.shape[0]
    if U.shape != (nb, nb) or 4 * nb != 2 * system.l:
        raise ValueError("U must act on the n+1 blocks")
    out = np.zeros((4 * nb, 4 * nb))
    re, im = U.real, U.imag
    for r in range(nb):
        for c in range(nb):
            # x0 + i x1 -> U (x0 + i x1), same for the y plane
            out[4 * r + 0, 4 * c + 0] = re[r, c]
            out[4 * r + 0, 4 * c + 1] = -im[r, c]
            out[4 * r + 1, 4 * c + 0] = im[r, c]
            out[4 * r + 1, 4 * c + 1] = re[r, c]
            out[4 * r + 2, 4 * c + 2] = re[r, c]
            out[4 * r + 2, 4 * c + 3] = -im[r, c]
            out[4 * r + 3, 4 * c + 2] = im[r, c]
            out[4 * r + 3, 4 * c + 3] = re[r, c]
    return out


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Unitary matrix composed from random complex Givens rotations."""
    U = np.diag(np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, size=dim)))
    for i in range(dim):
        for j in range(i + 1, dim):
            th = rng.uniform(0.0, 2.0 * math.pi)
            ph = rng.uniform(0.0, 2.0 * math.pi)
            G = np.eye(dim, dtype=complex)
            G[i, i] = math.cos(th)
            G[j, j] = math.cos(th)
            G[i, j] = -math.sin(th) * np.exp(1j * ph)
            G[j, i] = math.sin(th) * np.exp(-1j * ph)
            U = G @ U
    return U


# quaternionic-pairing quartic --------------------------------------------

def ot_eval(u: np.ndarray, v: np.ndarray) -> float:
    """Homogenized quartic on a pair of quaternionic vectors.

    u, v are (n+1, 4) arrays.  The printed inhomogeneous constant term is
    replaced by |(u,v)|^4; the verifier decides empirically whether this
    normalization satisfies the gradient identity (it does; the report
    records it).
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 2 or u.shape[1] != 4:
        raise ValueError("u, v must be matching (n+1, 4) arrays")
    inner = _quat_inner(u, v)
    im2 = float(inner[1] ** 2 + inner[2] ** 2 + inner[3] ** 2)
    tail = float(np.sum(u[1:] ** 2) - np.sum(v[1:] ** 2))
    head = quat_mul(u[0], quat_conj(v[0]))
    f0 = 4.0 * im2 + (tail + 2.0 * float(head[0])) ** 2
    norm2 = float(np.sum(u * u) + np.sum(v * v))
    return norm2 * norm2 - 2.0 * f0


def ot_split(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Flat vector of length 8(n+1) into the (u, v) quaternion pair."""
    z = np.asarray(z, dtype=float)
    if z.ndim != 1 or z.size % 8 != 0:
        raise ValueError("flat vector length must be 8(n+1)")
    half = z.size // 2
    return z[:half].reshape(-1, 4), z[half:].reshape(-1, 4)


def ot_eval_flat(z: np.ndarray) -> float:
    u, v = ot_split(z)
    return ot_eval(u, v)


def ot_grad_flat(z: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of the flat quartic."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    for i in range(z.size):
        zp = z.copy()
        zm = z.copy()
        zp[i] += step
        zm[i] -= step
        out[i] = (ot_eval_flat(zp) - ot_eval_flat(zm)) / (2.0 * step)
    return out


def sp1_right_diagonal(u: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Entrywise right multiplication of a quaternionic vector by q."""
    return quat_mul(u, q[np.newaxis, :])


# numerical verification ---------------------------------------------------

def _fd_laplacian(F, x: np.ndarray, h: float) -> float:
    """Richardson-extrapolated central second differences.

    (4 D(h) - D(2h)) / 3 cancels the h^2 truncation term, so the result is
    exact for polynomials of degree <= 5 up to rounding.
    """

    def second_sum(step: float) -> float:
        tot = 0.0
        f0 = F(x)
        for i in range(x.size):
            xp = x.copy()
            xm = x.copy()
            xp[i] += step
            xm[i] -= step
            tot += (F(xp) - 2.0 * f0 + F(xm)) / (step * step)
        return tot

    return (4.0 * second_sum(h) - second_sum(2.0 * h)) / 3.0


def verify_cm(
    F,
    dim: int,
    degree: int,
    samples: int = 20,
    seed: int = 2024,
    grad=None,
    fd_step: float = 1e-5,
    lap_step: float = 1e-3,
    expected_c: int | None = None,
) -> dict:
    """Check the two isoparametric-polynomial identities at random points.

    For a homogeneous polynomial of degree k the identities are
    |grad F|^2 = k^2 |x|^{2k-2} and  Lap F = (c k^2 / 2) |x|^{k-2} for an
    integer constant c.  The report carries the worst relative gradient
    residual (normalized by |x|^{2k-2}), the mean Laplacian-based estimate
    of c, its closest integer, and the deviation.  When expected_c is
    given the report records whether the closest integer matches; the
    verifier never raises on a failed identity, callers act on the report.

    The gradient defaults to central differences with fd_step, so purely
    finite-difference candidates resolve the identity to about 1e-5.
    """
    if degree not in (2, 4):
        raise ValueError("degree must be 2 or 4")
    if samples < 10:
        raise ValueError("need at least 10 samples")
    rng = np.random.default_rng(seed)
    k = degree
    if grad is None:
        def grad(x, _F=F):
            out = np.empty(dim)
            for i in range(dim):
                xp = x.copy()
                xm = x.copy()
                xp[i] += fd_step
                xm[i] -= fd_step
                out[i] = (_F(xp) - _F(xm)) / (2.0 * fd_step)
            return out

    worst_grad = 0.0
    c_vals = []
    for _ in range(samples):
        x = rng.normal(size=dim)
        x /= np.linalg.norm(x)
        norm2 = float(x @ x)
        gv = np.asarray(grad(x), dtype=float)
        target = k * k * norm2 ** (k - 1)
        worst_grad = max(
            worst_grad, abs(float(gv @ gv) - target) / norm2 ** (k - 1)
        )
        lap = _fd_laplacian(F, x, lap_step)
        c_vals.append(lap / (0.5 * k * k * norm2 ** (k // 2 - 1)))
    c_est = float(np.mean(c_vals))
    c_int = int(round(c_est))
    report = {
        "dim": dim,
        "degree": degree,
        "samples": samples,
        "seed": seed,
        "max_grad_residual": worst_grad,
        "c_estimate": c_est,
        "c_int": c_int,
        "c_deviation": abs(c_est - c_int),
        "normalization": "homogeneous |x|^4" if degree == 4 else "quadratic",
    }
    if expected_c is not None:
        report["expected_c"] = expected_c
        report["c_matches_expected"] = c_int == expected_c
    return report
