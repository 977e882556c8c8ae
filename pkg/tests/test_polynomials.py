import numpy as np
import pytest

import isobif.polynomials as poly
from isobif.geometry import get_entry


def test_quaternion_algebra():
    rng = np.random.default_rng(2)
    for _ in range(30):
        a, b, c = rng.normal(size=(3, 4))
        ab = poly.quat_mul(a, b)
        # associativity and norm multiplicativity
        assert np.allclose(poly.quat_mul(ab, c), poly.quat_mul(a, poly.quat_mul(b, c)), atol=1e-12)
        assert float(ab @ ab) == pytest.approx(float(a @ a) * float(b @ b), rel=1e-12)
        # conjugation reverses products
        assert np.allclose(
            poly.quat_conj(ab), poly.quat_mul(poly.quat_conj(b), poly.quat_conj(a)), atol=1e-12
        )
    q = poly.random_unit_quaternion(rng)
    assert float(q @ q) == pytest.approx(1.0, abs=1e-14)


def test_clifford_relations_hold_exactly():
    for n in (1, 2, 3):
        sys_ = poly.build_clifford(n)
        assert sys_.m == 2 and sys_.l == 2 * n + 2
        eye = np.eye(2 * sys_.l)
        for i, Pi in enumerate(sys_.P):
            for j, Pj in enumerate(sys_.P):
                want = 2.0 * eye if i == j else np.zeros_like(eye)
                # integer entries: the relations are exact, not approximate
                assert np.array_equal(Pi @ Pj + Pj @ Pi, want)


def test_clifford_validation():
    sys_ = poly.build_clifford(1)
    bad = tuple(P.copy() for P in sys_.P)
    bad[0][0, 1] = 0.5
    with pytest.raises(ValueError):
        poly.CliffordSystem(m=2, l=sys_.l, P=bad)
    with pytest.raises(ValueError):
        poly.CliffordSystem(m=2, l=sys_.l, P=sys_.P[:2])
    with pytest.raises(ValueError):
        poly.build_clifford(0)


def test_fkm_split_form_agrees():
    rng = np.random.default_rng(4)
    for n in (1, 2, 3):
        sys_ = poly.build_clifford(n)
        for _ in range(50):
            x = rng.normal(size=2 * sys_.l)
            f = poly.fkm_eval(sys_, x)
            assert poly.fkm_eval_split(sys_, x) == pytest.approx(f, rel=1e-12, abs=1e-12)


def test_fkm_gradient_identity():
    rng = np.random.default_rng(6)
    for n in (1, 2):
        sys_ = poly.build_clifford(n)
        dim = 2 * sys_.l
        for _ in range(40):
            x = rng.normal(size=dim)
            g = poly.fkm_grad(sys_, x)
            nx2 = float(x @ x)
            assert float(g @ g) == pytest.approx(16.0 * nx2**3, rel=1e-12)
            # analytic gradient against central differences
            h = 1e-6
            for i in rng.choice(dim, size=3, replace=False):
                xp, xm = x.copy(), x.copy()
                xp[i] += h
                xm[i] -= h
                fd = (poly.fkm_eval(sys_, xp) - poly.fkm_eval(sys_, xm)) / (2 * h)
                assert g[i] == pytest.approx(fd, rel=1e-6, abs=1e-6)


def test_fkm_sphere_range_attained():
    sys_ = poly.build_clifford(2)
    dim = 2 * sys_.l
    rng = np.random.default_rng(8)
    vals = []
    for _ in range(200):
        x = rng.normal(size=dim)
        x /= np.linalg.norm(x)
        vals.append(poly.fkm_eval(sys_, x))
    assert -1.0 - 1e-12 <= min(vals) and max(vals) <= 1.0 + 1e-12
    # the extremes are reached on explicit focal points
    e_x = np.zeros(dim)
    e_x[0] = 1.0
    assert poly.fkm_eval(sys_, e_x) == pytest.approx(-1.0, abs=1e-14)
    mixed = np.zeros(dim)
    mixed[0] = 1.0 / np.sqrt(2.0)  # x-plane of block 0
    mixed[6] = 1.0 / np.sqrt(2.0)  # y-plane of block 1
    assert poly.fkm_eval(sys_, mixed) == pytest.approx(1.0, abs=1e-14)


def test_right_sp1_action_preserves_fkm():
    rng = np.random.default_rng(10)
    sys_ = poly.build_clifford(2)
    dim = 2 * sys_.l
    eye = np.eye(dim)
    for _ in range(20):
        Q = poly.right_sp1_matrix(sys_, poly.random_unit_quaternion(rng))
        assert np.max(np.abs(Q.T @ Q - eye)) < 1e-12
        x = rng.normal(size=dim)
        f = poly.fkm_eval(sys_, x)
        assert poly.fkm_eval(sys_, Q @ x) == pytest.approx(f, rel=1e-12, abs=1e-10)
    with pytest.raises(ValueError):
        poly.right_sp1_matrix(sys_, np.array([1.0, 1.0, 0.0, 0.0]))


def test_diagonal_unitary_action_preserves_fkm():
    rng = np.random.default_rng(12)
    for n in (1, 2):
        sys_ = poly.build_clifford(n)
        dim = 2 * sys_.l
        eye_c = np.eye(n + 1, dtype=complex)
        for _ in range(10):
            U = poly.random_unitary(n + 1, rng)
            assert np.max(np.abs(U @ U.conj().T - eye_c)) < 1e-12
            M = poly.unitary_action_matrix(sys_, U)
            assert np.max(np.abs(M.T @ M - np.eye(dim))) < 1e-12
            x = rng.normal(size=dim)
            f = poly.fkm_eval(sys_, x)
            assert poly.fkm_eval(sys_, M @ x) == pytest.approx(f, rel=1e-12, abs=1e-10)


def test_verify_cm_fkm_constants():
    # the Laplacian constant steps through 2n-3 as blocks are added
    for n, c_want in ((1, -1), (2, 1), (3, 3)):
        sys_ = poly.build_clifford(n)
        report = poly.verify_cm(
            lambda x, s=sys_: poly.fkm_eval(s, x),
            dim=2 * sys_.l,
            degree=4,
            grad=lambda x, s=sys_: poly.fkm_grad(s, x),
            expected_c=c_want,
        )
        assert report["max_grad_residual"] < 1e-9
        assert report["c_int"] == c_want
        assert report["c_deviation"] < 1e-6
        assert report["c_matches_expected"] is True


def test_verify_cm_quadratic_case():
    report = poly.verify_cm(lambda x: float(x @ x), dim=5, degree=2, expected_c=5)
    assert report["max_grad_residual"] < 1e-8
    assert report["c_int"] == 5 and report["c_matches_expected"] is True


def test_verify_cm_reports_failures_without_raising():
    # x0^4 is homogeneous but not isoparametric: both identities fail
    report = poly.verify_cm(lambda x: float(x[0] ** 4), dim=4, degree=4, expected_c=0)
    assert report["max_grad_residual"] > 0.1
    assert report["c_matches_expected"] is False
    with pytest.raises(ValueError):
        poly.verify_cm(lambda x: float(x @ x), dim=4, degree=3)
    with pytest.raises(ValueError):
        poly.verify_cm(lambda x: float(x @ x), dim=4, degree=2, samples=5)


def test_ot_eval_extremes_and_homogeneity():
    n = 2
    u = np.zeros((n + 1, 4))
    v = np.zeros((n + 1, 4))
    u[0, 0] = 1.0
    assert poly.ot_eval(u, v) == pytest.approx(1.0, abs=1e-14)
    u2 = np.zeros((n + 1, 4))
    v2 = np.zeros((n + 1, 4))
    u2[0, 0] = v2[0, 0] = 1.0 / np.sqrt(2.0)
    assert poly.ot_eval(u2, v2) == pytest.approx(-1.0, abs=1e-14)
    rng = np.random.default_rng(14)
    for _ in range(20):
        z = rng.normal(size=8 * (n + 1))
        t = float(rng.uniform(0.3, 2.0))
        assert poly.ot_eval_flat(t * z) == pytest.approx(
            t**4 * poly.ot_eval_flat(z), rel=1e-12
        )
        zs = z / np.linalg.norm(z)
        assert -1.0 - 1e-12 <= poly.ot_eval_flat(zs) <= 1.0 + 1e-12
    with pytest.raises(ValueError):
        poly.ot_eval(u, v[:2])
    with pytest.raises(ValueError):
        poly.ot_split(np.zeros(12))


def test_ot_right_sp1_invariance():
    rng = np.random.default_rng(16)
    n = 1
    for _ in range(20):
        u = rng.normal(size=(n + 1, 4))
        v = rng.normal(size=(n + 1, 4))
        q = poly.random_unit_quaternion(rng)
        f = poly.ot_eval(u, v)
        uq = poly.sp1_right_diagonal(u, q)
        vq = poly.sp1_right_diagonal(v, q)
        assert np.linalg.norm(uq) == pytest.approx(np.linalg.norm(u), rel=1e-12)
        assert poly.ot_eval(uq, vq) == pytest.approx(f, rel=1e-9, abs=1e-9)


def test_ot_verify_cm_constants():
    for n, c_want in ((1, 1), (2, 5)):
        report = poly.verify_cm(
            poly.ot_eval_flat,
            dim=8 * (n + 1),
            degree=4,
            grad=poly.ot_grad_flat,
            expected_c=c_want,
        )
        # the finite-difference gradient limits the residual, not the form
        assert report["max_grad_residual"] < 1e-5
        assert report["c_int"] == c_want
        assert report["c_matches_expected"] is True


def test_constants_match_catalog_multiplicity_gaps():
    # the Laplacian constants equal the multiplicity differences of the
    # corresponding catalog entries
    for n in (2, 3):
        mults = get_entry(f"hpn_un1({n})").profile.mults
        assert set(mults) == {2, 2 * n - 1}
        assert abs(2 * n - 3) == abs(mults[0] - mults[1])
    for n in (1, 2):
        mults = get_entry(f"hp_ot({n})").profile.mults
        assert mults == (3, 4 * n, 3, 4 * n)
        assert 4 * n - 3 == mults[1] - mults[0]
