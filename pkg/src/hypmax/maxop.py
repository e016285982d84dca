"""Discretized uncentred maximal operators over the set families.

The operator value at a point is the supremum, over the finite lattice of
family members containing it, of the average of |f| on the member.
Averages use closed-form denominators (ball/half-ball/trigonon/rectangle
areas, cylinder volumes) and grid integrals in the numerator, so each
value is a certified lower bound for the continuum supremum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import drsets, hyp2
from .drsets import AdmissibleCylinder, Cylinder
from .htype import HTypeAlgebra
from .hyp2 import H2Set, HPoint, SetKind
from .measure import SampleGrid, membership_mask
from .report import ExperimentReport

H2_KINDS = {
    "ball": SetKind.BALL,
    "half_ball": SetKind.HALF_BALL,
    "trigonon": SetKind.TRIGONON,
    "rectangle": SetKind.RECTANGLE,
    "modified_half_ball": SetKind.MODIFIED_HALF_BALL,
}


@dataclass
class FamilySpec:
    """Finite lattice of family members.

    Geometric half-plane kinds enumerate centers (x, y) against a radius
    ladder; the admissible kinds enumerate integer log-heights and integer
    radii >= 2.  Cylinder families need the algebra and the unit-ball
    volume omega for their closed-form denominators.
    """

    kind: str
    centers: Optional[np.ndarray] = None
    radii: Optional[np.ndarray] = None
    xs: Optional[np.ndarray] = None
    js: Optional[np.ndarray] = None
    alg: Optional[HTypeAlgebra] = None
    n_centers: Optional[list] = None
    omega: Optional[float] = None

    def members(self):
        if self.kind in H2_KINDS:
            kind = H2_KINDS[self.kind]
            for cx, cy in self.centers:
                for R in self.radii:
                    yield H2Set(kind, HPoint(float(cx), float(cy)), float(R))
        elif self.kind == "admissible_rectangle":
            for x in self.xs:
                for j in self.js:
                    for K in self.radii:
                        yield hyp2.admissible_rectangle(float(x), int(j), int(K))
        elif self.kind == "cylinder":
            for n0 in self.n_centers:
                for a0 in self.xs:
                    for R in self.radii:
                        yield Cylinder(n0, float(a0), float(R))
        elif self.kind == "admissible_cylinder":
            for n0 in self.n_centers:
                for j in self.js:
                    for R in self.radii:
                        yield AdmissibleCylinder(n0, int(j), int(R))
        else:
            raise ValueError(f"unknown family kind {self.kind!r}")

    def member_area(self, s) -> float:
        if isinstance(s, H2Set):
            return hyp2.area(s)
        return drsets.cylinder_volume(self.alg, s, self.omega)


def radius_ladder(r_min: float, steps: int) -> np.ndarray:
    """Radii r_min + k log 2 for k = 0..steps-1 (geometric in e^R)."""
    return r_min + math.log(2.0) * np.arange(steps)


def grid_centers(grid: SampleGrid, max_per_axis: int = 24) -> np.ndarray:
    """(m, 2) array of lattice centers subsampled from the grid cells."""
    xs = np.unique(grid.x)
    ys = np.unique(grid.y)
    xs = xs[:: max(1, len(xs) // max_per_axis)]
    ys = ys[:: max(1, len(ys) // max_per_axis)]
    Xg, Yg = np.meshgrid(xs, ys, indexing="ij")
    return np.column_stack([Xg.ravel(), Yg.ravel()])


def admissible_family_for_grid(grid: SampleGrid, k_max: int, max_x: int = 64) -> FamilySpec:
    """Admissible rectangles whose lattice is induced by the grid: x on the
    cell lattice, j spanning the window heights, K = 2..k_max."""
    xs = np.unique(grid.x)
    xs = xs[:: max(1, len(xs) // max_x)]
    _, _, u_lo, u_hi = grid.window
    js = np.arange(math.floor(u_lo), math.ceil(u_hi) + 1)
    return FamilySpec("admissible_rectangle", xs=xs, js=js, radii=np.arange(2, k_max + 1))


@dataclass
class MaxField:
    """Operator values over all grid points, with per-point witness index
    into ``members``."""

    values: np.ndarray
    witness_idx: np.ndarray
    members: list


@dataclass
class MaxResult:
    value: float
    witness: Optional[object]
    empty: bool = False


def maximal_field(grid: SampleGrid, fam: FamilySpec) -> MaxField:
    wv = grid.weights * np.abs(grid.values)
    out = np.zeros(grid.size)
    widx = np.full(grid.size, -1, dtype=np.int64)
    members = []
    for idx, s in enumerate(fam.members()):
        members.append(s)
        mask = membership_mask(grid, s)
        integ = float(wv[mask].sum())
        if integ == 0.0:
            continue
        avg = integ / fam.member_area(s)
        better = mask & (avg > out)
        out[better] = avg
        widx[better] = idx
    return MaxField(out, widx, members)


def maximal_fn(grid: SampleGrid, x, fam: FamilySpec) -> MaxResult:
    """Operator value at one point with its witness set."""
    wv = grid.weights * np.abs(grid.values)
    best, best_s, hit = 0.0, None, False
    for s in fam.members():
        if isinstance(s, H2Set):
            inside = hyp2.contains(s, x)
        else:
            inside = drsets.cylinder_contains(fam.alg, s if isinstance(s, Cylinder) else s.as_cylinder(), x)
        if not inside:
            continue
        hit = True
        integ = float(wv[membership_mask(grid, s)].sum())
        avg = integ / fam.member_area(s)
        if avg > best:
            best, best_s = avg, s
    return MaxResult(best, best_s, empty=not hit)


def level_set_measure(grid: SampleGrid, fam: FamilySpec, alpha: float, fld: MaxField = None) -> float:
    """Grid measure of { max fn > alpha }; nonincreasing in alpha."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if fld is None:
        fld = maximal_field(grid, fam)
    return float(grid.weights[fld.values > alpha].sum())


def level_set_table(grid: SampleGrid, fam: FamilySpec, alphas) -> tuple:
    fld = maximal_field(grid, fam)
    rows = [(float(a), level_set_measure(grid, fam, a, fld)) for a in alphas]
    return rows, fld


# -------------------------------------------------------- L log L machinery

def llogl_lambda(nu: float) -> float:
    """The level-set bound's scale constant (e^nu - 1)(sqrt(e) - 1)/(4 e^{2 nu})."""
    return 0.25 * (math.exp(nu) - 1.0) * (math.sqrt(math.e) - 1.0) / math.exp(2.0 * nu)


def llogl_rhs(grid: SampleGrid, alpha: float, lam: float) -> float:
    """Weighted integral of (|f|/alpha) log(1 + |f|/(alpha lam))."""
    if alpha <= 0 or lam <= 0:
        raise ValueError("alpha and lambda must be positive")
    v = np.abs(grid.values) / alpha
    return float(np.sum(grid.weights * v * np.log1p(v / lam)))


def young_check(a: float, b: float, lam: float) -> tuple:
    """Margin of a b <= 2 lam e^{a/2} + 2 b log(b/lam + 1); (holds, margin)."""
    if min(a, b, lam) <= 0:
        raise ValueError("arguments must be positive")
    margin = 2.0 * lam * math.exp(a / 2.0) + 2.0 * b * math.log1p(b / lam) - a * b
    return margin >= 0.0, margin


def lp_norm(grid: SampleGrid, p: float) -> float:
    v = np.abs(grid.values)
    if math.isinf(p):
        return float(v.max(initial=0.0))
    if p < 1:
        raise ValueError("p must be in [1, inf]")
    return float(np.sum(grid.weights * v**p) ** (1.0 / p))


# ------------------------------------------------------ operator comparisons

def comparison_constants(r_hi: float = 40.0, n: int = 40_000) -> dict:
    """Sharp family-comparison constants, maximized numerically over R >= 1:

    K1 = sup |T_R| / |b_R|              (half-ball average vs trigonon)
    K2 = sup |b_{R+log 2}| / |T_R|      (trigonon average vs half ball)
    K3 = sup 2 e^{ceil(R)+2} / |b_R|    (half ball vs admissible rectangle hull)
    """
    R = np.linspace(1.0, r_hi, n)
    T = 2 * np.exp(R) * np.sqrt(1 - np.exp(-2 * R)) - 2 * np.arccos(np.exp(-R))
    b = 2 * np.pi * np.sinh(R / 2) ** 2
    b_shift = 2 * np.pi * np.sinh((R + math.log(2)) / 2) ** 2
    # hull area 2 e^{ceil(R)+2} <= 2 e^{R+3}, and e^R / sinh^2(R/2) peaks at R = 1
    k3 = 2.0 * math.exp(4.0) / (2.0 * math.pi * math.sinh(0.5) ** 2)
    return {
        "K1": float((T / b).max()),
        "K2": float((b_shift / T).max()),
        "K3": k3,
    }


def operator_compare(grid: SampleGrid, ladder_steps: int = 4, max_per_axis: int = 14) -> ExperimentReport:
    """Pointwise comparison of the half-ball, trigonon and admissible
    rectangle operators over one aligned lattice of centers.

    Asserts, with the constants of ``comparison_constants``:
    N^b <= K1 N^T, N^T <= K2 N^b and N^b <= K3 N^Q' across the grid.
    The radius ladders are arranged so each witness member has its
    comparison counterpart inside the opposing family.
    """
    centers = grid_centers(grid, max_per_axis)
    ladder = radius_ladder(1.0, ladder_steps + 1)  # one extra top rung
    sub = ladder[:-1]

    fam_b_sub = FamilySpec("half_ball", centers=centers, radii=sub)
    fam_b_top = FamilySpec("half_ball", centers=centers, radii=ladder[-1:])
    fam_t_sub = FamilySpec("trigonon", centers=centers, radii=sub)
    fam_t_top = FamilySpec("trigonon", centers=centers, radii=ladder[-1:])
    k_hull = math.ceil(float(sub[-1])) + 2
    fam_q = admissible_family_for_grid(grid, k_max=k_hull)

    nb_sub = maximal_field(grid, fam_b_sub).values
    nb = np.maximum(nb_sub, maximal_field(grid, fam_b_top).values)
    nt_sub = maximal_field(grid, fam_t_sub).values
    nt = np.maximum(nt_sub, maximal_field(grid, fam_t_top).values)
    nq = maximal_field(grid, fam_q).values

    K = comparison_constants()
    tol = 1e-9

    def worst_ratio(lhs, rhs):
        pos = rhs > 0
        if not pos.any():
            return 0.0
        return float((lhs[pos] / rhs[pos]).max())

    r1 = worst_ratio(nb, nt)
    r2 = worst_ratio(nt_sub, nb)
    r3 = worst_ratio(nb_sub, nq)

    rep = ExperimentReport(
        "operator_compare",
        meta={"ladder_steps": ladder_steps, "centers": len(centers)},
    )
    rep.add_table(
        "constants",
        ["name", "value"],
        [["K1", K["K1"]], ["K2", K["K2"]], ["K3", K["K3"]]],
    )
    rep.add_table(
        "worst_ratios",
        ["comparison", "observed", "bound"],
        [
            ["half_ball_vs_trigonon", r1, K["K1"]],
            ["trigonon_vs_half_ball", r2, K["K2"]],
            ["half_ball_vs_admissible", r3, K["K3"]],
        ],
    )
    rep.check("half_ball_le_K1_trigonon", K["K1"] * (1 + tol), r1, r1 <= K["K1"] * (1 + tol))
    rep.check("trigonon_le_K2_half_ball", K["K2"] * (1 + tol), r2, r2 <= K["K2"] * (1 + tol))
    rep.check("half_ball_le_K3_admissible", K["K3"] * (1 + tol), r3, r3 <= K["K3"] * (1 + tol))
    return rep
