"""Catalog of singular coefficient profiles for the reduced equation.

Each catalog entry describes one isoparametric family on a round sphere
(possibly sitting over a projective base through a Hopf fibration) by its
Munzner data: the degree g, the sphere dimension N, the alternating
multiplicities of the two focal ends, and the arc-length width t* = pi/g.
The mean-curvature profile of the parallel hypersurfaces is the classical
cotangent sum

    h(t) = sum_k m_k * cot(t + k*pi/g),   0 < t < t*,

which blows up like m_0/t at the left end and like m_{g-1}/(t - t*) at the
right end.  Entries also carry the base-manifold focal dimensions needed for
the critical exponent threshold p_f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class MunznerProfile:
    """Sphere-level isoparametric family: degree, dimension, multiplicities.

    mults holds g integers m_0..m_{g-1} alternating between two values
    (m_even, m_odd); t_star is always pi/g.
    """

    g: int
    N: int
    mults: tuple[int, ...]

    def __post_init__(self):
        if self.g not in (1, 2, 4):
            raise ValueError(f"unsupported degree g={self.g}")
        if len(self.mults) != self.g:
            raise ValueError("need exactly g multiplicities")
        if any(m < 1 for m in self.mults):
            raise ValueError("endpoint multiplicities must be >= 1")
        for k, m in enumerate(self.mults):
            if m != self.mults[k % 2]:
                raise ValueError("multiplicities must alternate (m_even, m_odd)")
        if sum(self.mults) != self.N - 1:
            raise ValueError(
                f"multiplicities sum to {sum(self.mults)}, expected N-1={self.N - 1}"
            )

    @property
    def t_star(self) -> float:
        return math.pi / self.g

    @property
    def m_left(self) -> int:
        """Multiplicity controlling the singularity at t=0."""
        return self.mults[0]

    @property
    def m_right(self) -> int:
        """Multiplicity controlling the singularity at t=t*."""
        return self.mults[-1]

    def reversed(self) -> "MunznerProfile":
        """Profile seen from the far endpoint (t -> t* - t)."""
        return MunznerProfile(self.g, self.N, tuple(reversed(self.mults)))


@dataclass(frozen=True)
class GeometryEntry:
    """One worked geometry: profile plus base-manifold focal data."""

    id: str
    base_dim: int
    fiber_dim: int
    profile: MunznerProfile
    d_at_0: int
    d_at_tstar: int
    description: str = field(default="", compare=False)

    def __post_init__(self):
        if self.fiber_dim not in (0, 1, 3):
            raise ValueError("fiber dimension must be 0, 1 or 3")
        if self.base_dim != self.profile.N - self.fiber_dim:
            raise ValueError("base_dim must equal N - fiber_dim")
        n = self.base_dim
        if self.profile.m_left != n - self.d_at_0 - 1:
            raise ValueError("left multiplicity inconsistent with d_at_0")
        if self.profile.m_right != n - self.d_at_tstar - 1:
            raise ValueError("right multiplicity inconsistent with d_at_tstar")
        if self.d_at_0 > n - 2 or self.d_at_tstar > n - 2:
            raise ValueError("focal varieties must have codimension >= 2")

    @property
    def p_f(self) -> float:
        """Critical exponent threshold (n-d+2)/(n-d-2), +inf when d = n-2."""
        d = min(self.d_at_0, self.d_at_tstar)
        n = self.base_dim
        if d == n - 2:
            return math.inf
        return (n - d + 2) / (n - d - 2)

    def to_json_dict(self) -> dict:
        p = self.profile
        pf = self.p_f
        return {
            "id": self.id,
            "g": p.g,
            "N": p.N,
            "mults": list(p.mults),
            "base_dim": self.base_dim,
            "fiber_dim": self.fiber_dim,
            "d_at_0": self.d_at_0,
            "d_at_tstar": self.d_at_tstar,
            "p_f": "inf" if math.isinf(pf) else pf,
        }


def h_eval(profile: MunznerProfile, t) -> float:
    """Mean-curvature profile sum_k m_k cot(t + k pi/g) on (0, t*).

    Accepts a scalar or an array of interior points; raises on points at or
    beyond the singular endpoints.
    """
    import numpy as np

    ts = np.asarray(t, dtype=float)
    if np.any(ts <= 0.0) or np.any(ts >= profile.t_star):
        raise ValueError("t must lie strictly inside (0, t*)")
    out = np.zeros_like(ts)
    step = math.pi / profile.g
    for k, m in enumerate(profile.mults):
        out = out + m / np.tan(ts + k * step)
    if np.isscalar(t) or ts.ndim == 0:
        return float(out)
    return out


def closed_form_mu(entry: GeometryEntry, i: int) -> float:
    """Restricted-eigenvalue closed form g*i*(g*i + N - 1)."""
    if i < 1:
        raise ValueError("eigenvalue index starts at 1")
    g, N = entry.profile.g, entry.profile.N
    return float(g * i * (g * i + N - 1))


def validate_exponent(entry: GeometryEntry, q: float) -> bool:
    """True iff 1 < q < p_f, the range where the branch theory applies."""
    if q <= 1.0:
        raise ValueError("exponent must exceed 1")
    if not q < entry.p_f:
        return False
    # The oscillation condition (m+1)/2 < (q+1)/(q-1) at both endpoints is
    # implied by q < p_f; guard against catalog data that would break it.
    for m_side in (entry.profile.m_left, entry.profile.m_right):
        assert (m_side + 1) / 2 < (q + 1) / (q - 1), (
            f"shooting condition fails at multiplicity {m_side} for q={q}"
        )
    return True


# ---------------------------------------------------------------------------
# Entry builders.  Parameters follow the transitive group actions; the id
# string doubles as the CLI token.
# ---------------------------------------------------------------------------

def sphere_radial(n: int) -> GeometryEntry:
    """Round S^n with distance-to-a-point level sets (g=1)."""
    if n < 2:
        raise ValueError("need n >= 2")
    return GeometryEntry(
        id=f"sphere_radial({n})",
        base_dim=n,
        fiber_dim=0,
        profile=MunznerProfile(1, n, (n - 1,)),
        d_at_0=0,
        d_at_tstar=0,
        description=f"geodesic spheres about antipodal points in S^{n}",
    )


def s3_torus() -> GeometryEntry:
    """Clifford-torus family on S^3 invariant under T^2 (g=2)."""
    return GeometryEntry(
        id="s3_torus",
        base_dim=3,
        fiber_dim=0,
        profile=MunznerProfile(2, 3, (1, 1)),
        d_at_0=1,
        d_at_tstar=1,
        description="torus-invariant family on S^3, both focal circles",
    )


def s4_o3o2() -> GeometryEntry:
    """O(3)xO(2)-invariant family on S^4 (g=2, mults 1 and 2)."""
    return GeometryEntry(
        id="s4_o3o2",
        base_dim=4,
        fiber_dim=0,
        profile=MunznerProfile(2, 4, (1, 2)),
        d_at_0=2,
        d_at_tstar=1,
        description="O(3)xO(2)-invariant family on S^4",
    )


def cpn_un(n: int) -> GeometryEntry:
    """Distance to a point in CP^n, U(n)-invariant, lifted to S^{2n+1}."""
    if n < 2:
        raise ValueError("need n >= 2")
    return GeometryEntry(
        id=f"cpn_un({n})",
        base_dim=2 * n,
        fiber_dim=1,
        profile=MunznerProfile(2, 2 * n + 1, (2 * n - 1, 1)),
        d_at_0=0,
        d_at_tstar=2 * n - 2,
        description=f"geodesic spheres about a point in CP^{n}, focal CP^{n - 1}",
    )


def cpn_ukul(k: int, l: int) -> GeometryEntry:
    """U(k)xU(l)-invariant family on CP^n, n = k+l-1, lifted to the sphere."""
    if k < 1 or l < 1 or k + l < 3:
        raise ValueError("need k, l >= 1 with k + l >= 3")
    n = k + l - 1
    return GeometryEntry(
        id=f"cpn_ukul({k},{l})",
        base_dim=2 * n,
        fiber_dim=1,
        profile=MunznerProfile(2, 2 * n + 1, (2 * l - 1, 2 * k - 1)),
        d_at_0=2 * k - 2,
        d_at_tstar=2 * l - 2,
        description=f"U({k})xU({l})-invariant family on CP^{n}, focal CP^{k - 1} and CP^{l - 1}",
    )


def cpn_son1(n: int) -> GeometryEntry:
    """SO(n+1)-invariant family on CP^n (g=4), lifted to S^{2n+1}."""
    if n < 2:
        raise ValueError("need n >= 2")
    return GeometryEntry(
        id=f"cpn_son1({n})",
        base_dim=2 * n,
        fiber_dim=1,
        profile=MunznerProfile(4, 2 * n + 1, (n - 1, 1, n - 1, 1)),
        d_at_0=n,
        d_at_tstar=2 * n - 2,
        description=f"SO({n + 1})-invariant family on CP^{n}, focal RP^{n} and a complex quadric",
    )


def hpn_spn(n: int) -> GeometryEntry:
    """Distance to a point in HP^n, Sp(n)-invariant, lifted to S^{4n+3}."""
    if n < 1:
        raise ValueError("need n >= 1")
    return GeometryEntry(
        id=f"hpn_spn({n})",
        base_dim=4 * n,
        fiber_dim=3,
        profile=MunznerProfile(2, 4 * n + 3, (4 * n - 1, 3)),
        d_at_0=0,
        d_at_tstar=4 * n - 4,
        description=f"geodesic spheres about a point in HP^{n}, focal HP^{n - 1}",
    )


def hpn_spkspl(k: int, l: int) -> GeometryEntry:
    """Sp(k)xSp(l)-invariant family on HP^n, n = k+l-1."""
    if k < 1 or l < 1 or k + l < 3:
        raise ValueError("need k, l >= 1 with k + l >= 3")
    n = k + l - 1
    return GeometryEntry(
        id=f"hpn_spkspl({k},{l})",
        base_dim=4 * n,
        fiber_dim=3,
        profile=MunznerProfile(2, 4 * n + 3, (4 * l - 1, 4 * k - 1)),
        d_at_0=4 * k - 4,
        d_at_tstar=4 * l - 4,
        description=f"Sp({k})xSp({l})-invariant family on HP^{n}, focal HP^{k - 1} and HP^{l - 1}",
    )


def hpn_un1(n: int) -> GeometryEntry:
    """U(n+1)-invariant family on HP^n (g=4), lifted to S^{4n+3}."""
    if n < 2:
        raise ValueError("need n >= 2")
    return GeometryEntry(
        id=f"hpn_un1({n})",
        base_dim=4 * n,
        fiber_dim=3,
        profile=MunznerProfile(4, 4 * n + 3, (2 * n - 1, 2, 2 * n - 1, 2)),
        d_at_0=2 * n,
        d_at_tstar=4 * n - 3,
        description=f"U({n + 1})-invariant family on HP^{n}, focal CP^{n} and a flag-type orbit",
    )


def hp_ot(n: int) -> GeometryEntry:
    """Inhomogeneous degree-4 family on HP^{2n+1} from the quaternionic-pairing quartic."""
    if n < 1:
        raise ValueError("need n >= 1")
    return GeometryEntry(
        id=f"hp_ot({n})",
        base_dim=8 * n + 4,
        fiber_dim=3,
        profile=MunznerProfile(4, 8 * n + 7, (3, 4 * n, 3, 4 * n)),
        d_at_0=8 * n,
        d_at_tstar=4 * n + 3,
        description=f"inhomogeneous quartic family on HP^{2 * n + 1}, multiplicities (3, {4 * n})",
    )


_BUILDERS = {
    "sphere_radial": (sphere_radial, 1),
    "s3_torus": (s3_torus, 0),
    "s4_o3o2": (s4_o3o2, 0),
    "cpn_un": (cpn_un, 1),
    "cpn_ukul": (cpn_ukul, 2),
    "cpn_son1": (cpn_son1, 1),
    "hpn_spn": (hpn_spn, 1),
    "hpn_spkspl": (hpn_spkspl, 2),
    "hpn_un1": (hpn_un1, 1),
    "hp_ot": (hp_ot, 1),
}


def catalog() -> list[GeometryEntry]:
    """Default instances of every family, smallest proper parameters."""
    return [
        sphere_radial(3),
        s3_torus(),
        s4_o3o2(),
        cpn_un(2),
        cpn_ukul(2, 2),
        cpn_son1(2),
        hpn_spn(2),
        hpn_spkspl(2, 2),
        hpn_un1(2),
        hp_ot(1),
    ]


def get_entry(name: str) -> GeometryEntry:
    """Resolve an id token like 's3_torus' or 'cpn_un(2)' to an entry."""
    name = name.strip()
    if "(" in name:
        head, _, tail = name.partition("(")
        if not tail.endswith(")"):
            raise KeyError(f"malformed entry name {name!r}")
        args = [int(a) for a in tail[:-1].split(",") if a.strip()]
    else:
        head, args = name, []
    if head not in _BUILDERS:
        raise KeyError(f"unknown entry {name!r}")
    builder, arity = _BUILDERS[head]
    if len(args) != arity:
        raise KeyError(f"entry {head!r} takes {arity} integer parameter(s)")
    return builder(*args)
