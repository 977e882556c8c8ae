import math

import numpy as np
import pytest

from isobif.geometry import (
    MunznerProfile,
    catalog,
    closed_form_mu,
    get_entry,
    h_eval,
    validate_exponent,
)


def test_profile_validation():
    p = MunznerProfile(2, 3, (1, 1))
    assert p.t_star == pytest.approx(math.pi / 2)
    assert p.m_left == 1 and p.m_right == 1
    with pytest.raises(ValueError):
        MunznerProfile(3, 4, (1, 1, 1))  # degree 3 not representable here
    with pytest.raises(ValueError):
        MunznerProfile(2, 5, (1, 1))  # multiplicity sum must be N - 1
    with pytest.raises(ValueError):
        MunznerProfile(4, 9, (1, 2, 2, 3))  # must alternate with period 2
    with pytest.raises(ValueError):
        MunznerProfile(2, 1, (0, 0))


def test_profile_reversed():
    p = MunznerProfile(4, 9, (1, 3, 1, 3))
    r = p.reversed()
    assert r.mults == (3, 1, 3, 1)
    assert r.t_star == p.t_star


def test_catalog_entries_consistent():
    entries = catalog()
    assert len(entries) == 10
    ids = [e.id for e in entries]
    assert len(set(ids)) == len(ids)
    for e in entries:
        p = e.profile
        assert sum(p.mults) == p.N - 1
        assert e.base_dim == p.N - e.fiber_dim
        assert e.fiber_dim in (0, 1, 3)
        # focal dimensions tie to the endpoint multiplicities in the base
        assert p.m_left == e.base_dim - e.d_at_0 - 1
        assert p.m_right == e.base_dim - e.d_at_tstar - 1


def test_get_entry_tokens():
    assert get_entry("s3_torus").profile.g == 2
    assert get_entry("cpn_un(3)").profile.N == 7
    assert get_entry("cpn_ukul(2,3)").profile.mults == (5, 3)
    assert get_entry("hp_ot(2)").profile.mults == (3, 8, 3, 8)
    with pytest.raises(KeyError):
        get_entry("no_such_entry")
    with pytest.raises(KeyError):
        get_entry("cpn_un")  # missing required argument


def test_h_eval_matches_cot_sum():
    p = MunznerProfile(4, 7, (2, 1, 2, 1))
    ts = np.linspace(0.05, p.t_star - 0.05, 7)
    for t in ts:
        want = sum(
            m / math.tan(t + k * math.pi / p.g) for k, m in enumerate(p.mults)
        )
        assert h_eval(p, float(t)) == pytest.approx(want, rel=1e-14)
    arr = h_eval(p, ts)
    assert arr.shape == ts.shape
    with pytest.raises(ValueError):
        h_eval(p, 0.0)
    with pytest.raises(ValueError):
        h_eval(p, p.t_star)


def test_h_eval_blowup_rates():
    # near the endpoints h behaves like m_left/t and -m_right/(t*-t)
    p = get_entry("s4_o3o2").profile
    eps = 1e-8
    assert h_eval(p, eps) * eps == pytest.approx(p.m_left, rel=1e-6)
    assert h_eval(p, p.t_star - eps) * eps == pytest.approx(-p.m_right, rel=1e-6)


def test_closed_form_mu():
    e = get_entry("s3_torus")
    assert [closed_form_mu(e, k) for k in (1, 2, 3)] == [8.0, 24.0, 48.0]
    e4 = get_entry("s4_o3o2")
    g, N = e4.profile.g, e4.profile.N
    for k in (1, 2, 5):
        assert closed_form_mu(e4, k) == g * k * (g * k + N - 1)
    with pytest.raises(ValueError):
        closed_form_mu(e, 0)


def test_focal_exponent_threshold():
    e = get_entry("s4_o3o2")
    assert validate_exponent(e, 3.0)
    assert not validate_exponent(e, e.p_f + 0.1)
    with pytest.raises(ValueError):
        validate_exponent(e, 1.0)
    # positive-dimensional focal sets push the threshold past the base
    # critical exponent; a point focal set (hpn_spn) leaves them equal
    hp = get_entry("hp_ot(2)")
    base_critical = (hp.base_dim + 2) / (hp.base_dim - 2)
    assert hp.p_f > base_critical
    pt = get_entry("hpn_spn(2)")
    assert pt.p_f == pytest.approx((pt.base_dim + 2) / (pt.base_dim - 2))


def test_p_f_infinite_when_codimension_two():
    e = get_entry("s3_torus")
    assert math.isinf(e.p_f)
    assert validate_exponent(e, 50.0)


def test_json_dict_schema():
    d = get_entry("cpn_un(2)").to_json_dict()
    assert set(d) == {
        "id",
        "g",
        "N",
        "mults",
        "base_dim",
        "fiber_dim",
        "d_at_0",
        "d_at_tstar",
        "p_f",
    }
    d3 = get_entry("s3_torus").to_json_dict()
    assert d3["p_f"] == "inf"


def test_random_profiles_alternation_property():
    # any admissible (g, pair) combination round-trips through validation
    rng = np.random.default_rng(1)
    for _ in range(50):
        g = int(rng.choice([1, 2, 4]))
        m1 = int(rng.integers(1, 6))
        m2 = int(rng.integers(1, 6)) if g > 1 else m1
        mults = tuple((m1, m2) * (g // 2)) if g > 1 else (m1,)
        N = sum(mults) + 1
        p = MunznerProfile(g, N, mults)
        assert p.m_left == mults[0]
        assert p.m_right == mults[-1]
        mid = p.t_star / 2
        if p.g > 1 and m1 == m2:
            # symmetric profiles have odd h about the midpoint
            assert h_eval(p, mid - 0.1) == pytest.approx(
                -h_eval(p, mid + 0.1), rel=1e-12, abs=1e-12
            )
