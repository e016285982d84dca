"""H-type algebras and the solvable NA groups built on them.

An algebra is v + z with bracket mapping v x v into z, encoded by its
structure coefficients.  The group N = exp(v + z) carries the gauge
(|X|^4/16 + |Z|^2)^(1/4); the group S = NA adds the height coordinate
a > 0 acting by anisotropic dilations.  The degenerate abelian case with
q = 1 reproduces the hyperbolic upper half-plane under (Z, a) <-> (x, y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class HTypeAlgebra:
    """Structure data of v + z: dimensions p = dim v, q = dim z and the
    bracket coefficients c[i, j, k] with [e_i, e_j] = sum_k c[i,j,k] f_k."""

    p: int
    q: int
    bracket_coeffs: np.ndarray = field(repr=False)
    label: str = ""

    @property
    def nu(self) -> float:
        """Homogeneous dimension p/2 + q."""
        return self.p / 2.0 + self.q

    def bracket(self, X, Xp):
        """[X, X'] in z coordinates."""
        if self.p == 0:
            return np.zeros(self.q)
        return np.einsum("i,j,ijk->k", X, Xp, self.bracket_coeffs)

    def bracket_batch(self, X, Xp):
        if self.p == 0:
            return np.zeros((X.shape[0], self.q))
        return np.einsum("ni,nj,ijk->nk", X, Xp, self.bracket_coeffs)

    def j_z(self, Z, X):
        """The map J_Z applied to X, defined by <J_Z X, X'> = <Z, [X, X']>."""
        if self.p == 0:
            return np.zeros(0)
        return np.einsum("i,k,ijk->j", X, Z, self.bracket_coeffs)

    def j_z_batch(self, Z, X):
        if self.p == 0:
            return np.zeros((Z.shape[0], 0))
        return np.einsum("ni,nk,ijk->nj", X, Z, self.bracket_coeffs)


def degenerate_abelian(q: int) -> HTypeAlgebra:
    """Abelian algebra with v = 0 and dim z = q; nu = q."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return HTypeAlgebra(0, q, np.zeros((0, 0, q)), label=f"dr-abelian:{q}")


def heisenberg(d: int) -> HTypeAlgebra:
    """Heisenberg algebra of dimension 2d + 1: p = 2d, q = 1, symplectic
    bracket [e_i, e_{d+i}] = f_1, so that J_Z is |Z| times the standard
    complex structure and J_Z^2 = -|Z|^2 I exactly."""
    if d < 1:
        raise ValueError("d must be >= 1")
    p = 2 * d
    c = np.zeros((p, p, 1))
    for i in range(d):
        c[i, d + i, 0] = 1.0
        c[d + i, i, 0] = -1.0
    return HTypeAlgebra(p, 1, c, label=f"dr-heisenberg:{d}")


def make_algebra(spec: str) -> HTypeAlgebra:
    """Parse 'dr-abelian:q' or 'dr-heisenberg:d' (also accepts 'h2' as the
    abelian q = 1 backend)."""
    if spec == "h2":
        return degenerate_abelian(1)
    kind, _, dim = spec.partition(":")
    if kind == "dr-abelian":
        return degenerate_abelian(int(dim))
    if kind == "dr-heisenberg":
        return heisenberg(int(dim))
    raise ValueError(f"unknown algebra spec {spec!r}")


def validate_algebra(alg: HTypeAlgebra, samples: int = 10_000, seed: int = 0) -> dict:
    """Max residuals of the four defining identities over random draws:
    antisymmetry of the bracket, the relation <J_Z X, X'> = <Z, [X, X']>,
    J_Z^2 = -|Z|^2 I, and <J_Z X, J_Z Y> = |Z|^2 <X, Y>."""
    rng = np.random.default_rng(seed)
    p, q = alg.p, alg.q
    X = rng.standard_normal((samples, p))
    Xp = rng.standard_normal((samples, p))
    Z = rng.standard_normal((samples, q))
    res = {}
    br = alg.bracket_batch(X, Xp)
    res["antisymmetry"] = float(np.abs(br + alg.bracket_batch(Xp, X)).max())
    jzx = alg.j_z_batch(Z, X)
    lhs = np.einsum("ni,ni->n", jzx, Xp)
    rhs = np.einsum("nk,nk->n", Z, br)
    res["defining_relation"] = float(np.abs(lhs - rhs).max())
    z2 = np.einsum("nk,nk->n", Z, Z)
    jj = alg.j_z_batch(Z, jzx)
    res["h_type"] = float(np.abs(jj + z2[:, None] * X).max()) if p else 0.0
    Y = rng.standard_normal((samples, p))
    jzy = alg.j_z_batch(Z, Y)
    pl = np.einsum("ni,ni->n", jzx, jzy) - z2 * np.einsum("ni,ni->n", X, Y)
    res["polarisation"] = float(np.abs(pl).max())
    return res


# ------------------------------------------------------------------ points

@dataclass(frozen=True, eq=False)
class NPoint:
    X: np.ndarray
    Z: np.ndarray


@dataclass(frozen=True, eq=False)
class SPoint:
    X: np.ndarray
    Z: np.ndarray
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("height a must be positive")

    @property
    def n_part(self) -> NPoint:
        return NPoint(self.X, self.Z)


@dataclass(frozen=True, eq=False)
class UnitTangent:
    X: np.ndarray
    Z: np.ndarray
    t: float


def npoint(alg: HTypeAlgebra, X=(), Z=()) -> NPoint:
    X = np.atleast_1d(np.asarray(X, dtype=float)).reshape(-1)
    Z = np.atleast_1d(np.asarray(Z, dtype=float)).reshape(-1)
    if X.shape != (alg.p,) or Z.shape != (alg.q,):
        raise ValueError(f"expected dimensions ({alg.p},), ({alg.q},)")
    return NPoint(X, Z)


def spoint(alg: HTypeAlgebra, X=(), Z=(), a: float = 1.0) -> SPoint:
    n = npoint(alg, X, Z)
    return SPoint(n.X, n.Z, float(a))


def identity(alg: HTypeAlgebra) -> SPoint:
    return SPoint(np.zeros(alg.p), np.zeros(alg.q), 1.0)


def identity_n(alg: HTypeAlgebra) -> NPoint:
    return NPoint(np.zeros(alg.p), np.zeros(alg.q))


def unit_tangent(alg: HTypeAlgebra, X, Z, t: float) -> UnitTangent:
    """Tangent vector at the identity, renormalized if within 1e-12 of unit
    length, rejected otherwise."""
    n = npoint(alg, X, Z)
    norm = math.sqrt(float(n.X @ n.X) + float(n.Z @ n.Z) + t * t)
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"tangent vector must be unit, |v| = {norm}")
    return UnitTangent(n.X / norm, n.Z / norm, t / norm)


def random_downward_tangents(alg: HTypeAlgebra, count: int, rng) -> tuple:
    """Arrays (X, Z, t) of ``count`` unit tangents drawn uniformly from the
    hemisphere t < 0."""
    dim = alg.p + alg.q + 1
    v = rng.standard_normal((count, dim))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    v[:, -1] = -np.abs(v[:, -1])
    return v[:, : alg.p], v[:, alg.p : alg.p + alg.q], v[:, -1]


# --------------------------------------------------------------- group laws

def n_mul(alg: HTypeAlgebra, n1: NPoint, n2: NPoint) -> NPoint:
    return NPoint(n1.X + n2.X, n1.Z + n2.Z + 0.5 * alg.bracket(n1.X, n2.X))


def n_inv(n: NPoint) -> NPoint:
    return NPoint(-n.X, -n.Z)


def na_mul(alg: HTypeAlgebra, x: SPoint, y: SPoint) -> SPoint:
    rs = math.sqrt(x.a)
    return SPoint(
        x.X + rs * y.X,
        x.Z + x.a * y.Z + 0.5 * rs * alg.bracket(x.X, y.X),
        x.a * y.a,
    )


def na_inv(x: SPoint) -> SPoint:
    return SPoint(-x.X / math.sqrt(x.a), -x.Z / x.a, 1.0 / x.a)


# ------------------------------------------------------------------- gauge

def gauge(n: NPoint) -> float:
    x4 = float(n.X @ n.X) ** 2
    return (x4 / 16.0 + float(n.Z @ n.Z)) ** 0.25


def gauge_batch(X, Z):
    x4 = np.einsum("ni,ni->n", X, X) ** 2
    return (x4 / 16.0 + np.einsum("nk,nk->n", Z, Z)) ** 0.25


def dist_n(alg: HTypeAlgebra, n1: NPoint, n2: NPoint) -> float:
    return gauge(n_mul(alg, n_inv(n1), n2))


def dilate(a: float, n: NPoint) -> NPoint:
    """Anisotropic dilation (sqrt(a) X, a Z); scales the gauge by sqrt(a)."""
    return NPoint(math.sqrt(a) * n.X, a * n.Z)


# ---------------------------------------------------------------- distances

def dist_from_identity(alg: HTypeAlgebra, x: SPoint) -> float:
    """Radial distance of (X, Z, a) from (0, 0, 1)."""
    x2 = float(x.X @ x.X)
    z2 = float(x.Z @ x.Z)
    if x2 == 0.0 and z2 == 0.0:
        return abs(math.log(x.a))
    rs = math.sqrt(x.a)
    A = math.cosh(math.log(rs)) + x2 / (8.0 * rs)
    c2 = A * A + z2 / (4.0 * x.a)
    return 2.0 * math.acosh(math.sqrt(max(c2, 1.0)))


def dist_from_identity_batch(alg: HTypeAlgebra, X, Z, a):
    x2 = np.einsum("ni,ni->n", X, X)
    z2 = np.einsum("nk,nk->n", Z, Z)
    rs = np.sqrt(a)
    A = np.cosh(np.log(rs)) + x2 / (8.0 * rs)
    c2 = np.maximum(A * A + z2 / (4.0 * a), 1.0)
    out = 2.0 * np.arccosh(np.sqrt(c2))
    flat = (x2 == 0.0) & (z2 == 0.0)
    if flat.any():
        out = np.where(flat, np.abs(np.log(a)), out)
    return out


def dist_s(alg: HTypeAlgebra, x: SPoint, y: SPoint) -> float:
    return dist_from_identity(alg, na_mul(alg, na_inv(x), y))


# ---------------------------------------------------------------- geodesics

def geodesic(alg: HTypeAlgebra, v: UnitTangent, tau: float) -> SPoint:
    """Unit-speed geodesic from the identity with initial velocity v,
    evaluated at time tau >= 0 (v must point non-upward, t <= 0)."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    X, Z, a = geodesic_batch(
        alg, v.X[None, :], v.Z[None, :], np.array([v.t]), np.array([float(tau)])
    )
    return SPoint(X[0], Z[0], float(a[0]))


def geodesic_batch(alg: HTypeAlgebra, X, Z, t, tau):
    theta = np.tanh(tau / 2.0)
    z2 = np.einsum("nk,nk->n", Z, Z)
    chi = (1.0 - t * theta) ** 2 + z2 * theta**2
    jzx = alg.j_z_batch(Z, X)
    coef_x = 2.0 * theta * (1.0 - t * theta) / chi
    coef_j = 2.0 * theta**2 / chi
    Xout = coef_x[:, None] * X - coef_j[:, None] * jzx
    Zout = (2.0 * theta / chi)[:, None] * Z
    aout = (1.0 - theta**2) / chi
    return Xout, Zout, aout


def height(x: SPoint) -> float:
    return x.a


# ------------------------------------------------ boundary shadow machinery

def alpha_bounds(h: float) -> tuple:
    """Gauge envelope (alpha_1, alpha_2) = ((1-h)^(1/2), (1-h^2)^(1/4)) of
    the boundary shadow at height h in (0, 1)."""
    if not 0.0 < h < 1.0:
        raise ValueError("h must lie in (0, 1)")
    return math.sqrt(1.0 - h), (1.0 - h * h) ** 0.25


def shadow_boundary(alg: HTypeAlgebra, h: float, X_dir, Z) -> tuple:
    """Boundary point of the downward-geodesic region at height h.

    The horizontal unit tangent is (X, Z, 0) with X = sqrt(1-|Z|^2) X_dir;
    returns the N-part (2aX - 2b J_Z X, 2aZ) of the boundary point together
    with its fourth gauge power, which equals
    (1-h)^2 + 4(1-h)h |Z|^2/(1+|Z|^2).
    """
    if not 0.0 < h < 1.0:
        raise ValueError("h must lie in (0, 1)")
    Z = np.atleast_1d(np.asarray(Z, dtype=float)).reshape(-1)
    if Z.shape != (alg.q,):
        raise ValueError(f"Z must have dimension {alg.q}")
    z2 = float(Z @ Z)
    if z2 > 1.0 + 1e-12:
        raise ValueError("|Z| must be <= 1 for a horizontal unit tangent")
    z2 = min(z2, 1.0)
    if alg.p == 0:
        if abs(z2 - 1.0) > 1e-12:
            raise ValueError("degenerate algebra requires |Z| = 1")
        X = np.zeros(0)
    else:
        X_dir = np.asarray(X_dir, dtype=float).reshape(-1)
        if X_dir.shape != (alg.p,):
            raise ValueError(f"X_dir must have dimension {alg.p}")
        nrm = float(np.linalg.norm(X_dir))
        if abs(nrm - 1.0) > 1e-12 and z2 < 1.0:
            raise ValueError("X_dir must be a unit vector")
        X = math.sqrt(max(0.0, 1.0 - z2)) * (X_dir / nrm if nrm > 0 else X_dir)
    theta2 = (1.0 - h) / (1.0 + h * z2)
    theta = math.sqrt(theta2)
    chi = (1.0 + z2) / (1.0 + h * z2)
    a_c = theta / chi
    b_c = theta2 / chi
    n = NPoint(2.0 * a_c * X - 2.0 * b_c * alg.j_z(Z, X), 2.0 * a_c * Z)
    return n, gauge(n) ** 4
