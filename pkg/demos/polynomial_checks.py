"""
Degree-4 isoparametric polynomial checks.

Two quartic families are verified numerically.  The Clifford-system
quartic F = |x|^4 - 2 sum <P_i x, x>^2 is built from integer matrices, so
its defining relations hold exactly; its gradient identity and Laplacian
constant are checked at random points, together with two invariances
(right unit quaternions, diagonal unitaries).  The quaternionic-pairing
quartic on pairs (u, v) is given only by evaluation; its gradient is
finite-differenced and the same identities are verified.

The Laplacian constant c is the interesting output: c = 2n - 3 for the
Clifford family on R^{4n+4} and c = 4n - 3 for the pairing family on
R^{8n+8}, matching the multiplicity gaps of the corresponding catalog
entries.  A negative c (n = 1 Clifford) is a genuinely inhomogeneous
example: the two focal sets have different dimensions.
"""

import numpy as np

import isobif.polynomials as poly
from isobif.geometry import get_entry

rng = np.random.default_rng(0)

print("Clifford-system family")
for n in (1, 2, 3):
    sys_ = poly.build_clifford(n)
    dim = 2 * sys_.l
    eye = np.eye(dim)
    rel = max(
        float(np.max(np.abs(Pi @ Pj + Pj @ Pi - (2.0 * eye if i == j else 0.0))))
        for i, Pi in enumerate(sys_.P)
        for j, Pj in enumerate(sys_.P)
    )
    x = rng.normal(size=dim)
    Q = poly.right_sp1_matrix(sys_, poly.random_unit_quaternion(rng))
    U = poly.unitary_action_matrix(sys_, poly.random_unitary(n + 1, rng))
    f = poly.fkm_eval(sys_, x)
    inv_q = abs(poly.fkm_eval(sys_, Q @ x) - f)
    inv_u = abs(poly.fkm_eval(sys_, U @ x) - f)
    rep = poly.verify_cm(
        lambda y, s=sys_: poly.fkm_eval(s, y),
        dim=dim,
        degree=4,
        grad=lambda y, s=sys_: poly.fkm_grad(s, y),
        expected_c=2 * n - 3,
    )
    print(
        f"  n={n}: relations {rel:.0e}, invariances ({inv_q:.1e}, {inv_u:.1e}), "
        f"grad residual {rep['max_grad_residual']:.1e}, "
        f"c = {rep['c_int']} (expected {2 * n - 3}, "
        f"deviation {rep['c_deviation']:.1e})"
    )
    mults = get_entry(f"hpn_un1({n})").profile.mults if n >= 2 else (1, 2)
    print(f"       catalog multiplicities {mults}: gap {abs(mults[0] - mults[1])}")

print()
print("quaternionic-pairing family")
for n in (1, 2):
    dim = 8 * (n + 1)
    rep = poly.verify_cm(
        poly.ot_eval_flat, dim=dim, degree=4, grad=poly.ot_grad_flat,
        expected_c=4 * n - 3,
    )
    u = rng.normal(size=(n + 1, 4))
    v = rng.normal(size=(n + 1, 4))
    q = poly.random_unit_quaternion(rng)
    inv = abs(
        poly.ot_eval(poly.sp1_right_diagonal(u, q), poly.sp1_right_diagonal(v, q))
        - poly.ot_eval(u, v)
    )
    print(
        f"  n={n}: sp1 invariance {inv:.1e}, grad residual "
        f"{rep['max_grad_residual']:.1e} (finite differences), "
        f"c = {rep['c_int']} (expected {4 * n - 3})"
    )
    mults = get_entry(f"hp_ot({n})").profile.mults
    print(f"       catalog multiplicities {mults}: gap {mults[1] - mults[0]}")
