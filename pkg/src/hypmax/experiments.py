"""Covering, overlap and counterexample experiments.

The pieces here exercise, at desk scale, the machinery behind the
boundedness results: greedy disjoint selection of same-horocycle
cylinders with the 5^nu union bound, maximal admissible families with
exponential overlap decay, the point-mass level-set growth that defeats
the weak (1,1) bound for trigona, and the modified half-ball packing
whose L^p sums diverge for p <= 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import drsets, htype as ht, hyp2, measure as ms
from .drsets import AdmissibleCylinder
from .htype import HTypeAlgebra, NPoint
from .hyp2 import HPoint
from .report import ExperimentReport


# ----------------------------------------------------------- family basics

@dataclass
class MaximalFamily:
    """Admissible cylinders, pairwise disjoint on each base horocycle and
    with no member containing another."""

    alg: HTypeAlgebra
    cylinders: list
    label: str = ""

    def base_logs(self):
        return sorted({c.base_log for c in self.cylinders})


def _certified_disjoint(alg, c1, c2) -> bool:
    # gauge triangle inequality: centers farther than the radius sum
    return ht.dist_n(alg, c1.n0, c2.n0) >= c1.base_radius + c2.base_radius


def _probe_points(alg, c, n_dirs: int, rng):
    """Points just inside the base ball of c at gauge (1 - 1e-9) * radius:
    the +-coordinate-axis extremes plus random directions."""
    axes = np.vstack([np.eye(alg.p + alg.q), -np.eye(alg.p + alg.q)])
    rand = rng.standard_normal((n_dirs, alg.p + alg.q))
    dirs = np.vstack([axes, rand])
    X, Z = dirs[:, : alg.p], dirs[:, alg.p :]
    g = ht.gauge_batch(X, Z)
    scale = ((1.0 - 1e-9) * c.base_radius / g) ** 2
    X = np.sqrt(scale)[:, None] * X
    Z = scale[:, None] * Z
    X0, Z0 = c.n0.X, c.n0.Z
    if alg.p:
        Zt = Z0[None, :] + Z + 0.5 * np.einsum("i,nj,ijk->nk", X0, X, alg.bracket_coeffs)
    else:
        Zt = Z0[None, :] + Z
    return X0[None, :] + X, Zt


def _refutes_containment(alg, inner, outer, n_dirs: int, rng) -> bool:
    """True when a certified point of ``inner`` lies outside ``outer``."""
    if inner.base_radius > outer.base_radius + 1e-12:
        return True
    if inner.base_height < outer.base_height - 1e-12:
        return True  # inner reaches below the outer base
    X, Z = _probe_points(alg, inner, n_dirs, rng)
    X0, Z0 = outer.n0.X, outer.n0.Z
    Xd = X - X0[None, :]
    if alg.p:
        Zd = Z - Z0[None, :] - 0.5 * np.einsum("i,nj,ijk->nk", X0, X, alg.bracket_coeffs)
    else:
        Zd = Z - Z0[None, :]
    return bool((ht.gauge_batch(Xd, Zd) >= outer.base_radius).any())


def verify_maximal_family(fam: MaximalFamily, n_dirs: int = 24, seed: int = 0) -> list:
    """Exhaustive O(n^2) invariant check; returns human-readable violations."""
    rng = np.random.default_rng(seed)
    cyls = fam.cylinders
    out = []
    for i, ci in enumerate(cyls):
        for k, ck in enumerate(cyls):
            if i == k:
                continue
            if i < k and ci.base_log == ck.base_log:
                if not _certified_disjoint(fam.alg, ci, ck):
                    out.append(f"members {i},{k} share horocycle {ci.base_log} but overlap")
            if not _refutes_containment(fam.alg, ci, ck, n_dirs, rng):
                out.append(f"member {i} appears to be contained in member {k}")
    return out


# ---------------------------------------------------------- Vitali selection

def _union_base_measure(alg, cyls, samples: int, seed: int, method: str = "auto"):
    """Measure of the union of same-horocycle cylinders.

    All bases share one horocycle, so the union is (union of base balls)
    x (height tail) and only the N-Lebesgue measure of the base union is
    needed.  q = 1 abelian base balls are intervals and are merged
    exactly; otherwise Monte Carlo over a bounding box.  Returns
    (measure, stderr)."""
    u = cyls[0].base_height
    nu = alg.nu
    tail = u**-nu / nu
    if method == "exact" or (method == "auto" and alg.p == 0 and alg.q == 1):
        ivs = sorted((float(c.n0.Z[0]) - c.a0, float(c.n0.Z[0]) + c.a0) for c in cyls)
        total, cur_lo, cur_hi = 0.0, *ivs[0]
        for lo, hi in ivs[1:]:
            if lo > cur_hi:
                total += cur_hi - cur_lo
                cur_lo, cur_hi = lo, hi
            else:
                cur_hi = max(cur_hi, hi)
        total += cur_hi - cur_lo
        return total * tail, 0.0
    rng = np.random.default_rng(seed)
    x_los = np.array([[c.n0.X[i] - 2 * c.base_radius for i in range(alg.p)] for c in cyls])
    x_his = np.array([[c.n0.X[i] + 2 * c.base_radius for i in range(alg.p)] for c in cyls])
    pad = np.array(
        [[abs(np.linalg.norm(c.n0.X)) * c.base_radius + c.a0 for _ in range(alg.q)] for c in cyls]
    )
    z_ctr = np.array([c.n0.Z for c in cyls])
    lo = np.concatenate(
        [x_los.min(axis=0), (z_ctr - pad).min(axis=0)] if alg.p else [(z_ctr - pad).min(axis=0)]
    )
    hi = np.concatenate(
        [x_his.max(axis=0), (z_ctr + pad).max(axis=0)] if alg.p else [(z_ctr + pad).max(axis=0)]
    )
    pts = rng.uniform(lo, hi, (samples, alg.p + alg.q))
    X, Z = pts[:, : alg.p], pts[:, alg.p :]
    inside = np.zeros(samples, dtype=bool)
    for c in cyls:
        X0, Z0 = c.n0.X, c.n0.Z
        Xd = X - X0[None, :]
        if alg.p:
            Zd = Z - Z0[None, :] - 0.5 * np.einsum("i,nj,ijk->nk", X0, X, alg.bracket_coeffs)
        else:
            Zd = Z - Z0[None, :]
        inside |= ht.gauge_batch(Xd, Zd) < c.base_radius
    box = float(np.prod(hi - lo))
    frac = inside.mean()
    stderr = box * math.sqrt(frac * (1 - frac) / samples) * tail
    return box * frac * tail, stderr


def vitali_select(alg: HTypeAlgebra, family: list, samples: int = 100_000, seed: int = 0, omega: float = None):
    """Greedy largest-first disjoint subfamily of same-horocycle admissible
    cylinders, with the 5^nu union-measure bound report.

    Selection order is decreasing base radius with a lexicographic center
    tie-break; a candidate is kept when its base is certified disjoint
    (gauge triangle inequality) from every kept base.
    """
    if not family:
        raise ValueError("empty family")
    logs = {c.base_log for c in family}
    if len(logs) > 1:
        raise ValueError(f"bases on mixed horocycles: {sorted(logs)}")

    def key(c):
        return (-c.base_radius, tuple(c.n0.X), tuple(c.n0.Z))

    selected = []
    for c in sorted(family, key=key):
        if all(_certified_disjoint(alg, c, s) for s in selected):
            selected.append(c)

    if omega is None:
        omega = drsets.omega_n(alg) if alg.p == 0 else drsets.omega_n(alg, "mc", 400_000, seed).mean
    union_all, stderr = _union_base_measure(alg, family, samples, seed)
    union_sel = sum(drsets.cylinder_volume(alg, c, omega) for c in selected)
    bound = 5.0**alg.nu
    ratio = union_all / union_sel
    rep = ExperimentReport(
        "vitali_select",
        meta={"space": alg.label, "family_size": len(family), "seed": seed, "samples": samples},
    )
    rep.add_table(
        "measures",
        ["quantity", "value", "stderr"],
        [
            ["union_family", union_all, stderr],
            ["union_selected", union_sel, 0.0],
            ["ratio", ratio, stderr / union_sel],
        ],
    )
    rep.check("selected_pairwise_disjoint", 0, 0, _all_disjoint(alg, selected))
    rep.check("union_bound_5_nu", bound, ratio, union_all <= bound * union_sel + 3 * stderr)
    return selected, rep


def _all_disjoint(alg, cyls) -> bool:
    return all(
        _certified_disjoint(alg, cyls[i], cyls[k])
        for i in range(len(cyls))
        for k in range(i + 1, len(cyls))
    )


# ------------------------------------------------------ family construction

def random_horocycle_family(alg, count, base_log, rng, r_lo=2, r_hi=6, spread=8.0):
    """Random admissible cylinders with all bases on one horocycle."""
    out = []
    for _ in range(count):
        R = int(rng.integers(r_lo, r_hi + 1))
        n0 = NPoint(
            spread * rng.uniform(-1, 1, alg.p),
            spread * rng.uniform(-1, 1, alg.q),
        )
        out.append(AdmissibleCylinder(n0, base_log + R, R))
    return out


def random_admissible_cylinders(alg, count, rng, j_lo=-2, j_hi=2, r_lo=2, r_hi=6, spread=6.0):
    out = []
    for _ in range(count):
        out.append(
            AdmissibleCylinder(
                NPoint(spread * rng.uniform(-1, 1, alg.p), spread * rng.uniform(-1, 1, alg.q)),
                int(rng.integers(j_lo, j_hi + 1)),
                int(rng.integers(r_lo, r_hi + 1)),
            )
        )
    return out


def build_maximal_family(alg: HTypeAlgebra, generator, seed: int = 0, n_dirs: int = 24) -> MaximalFamily:
    """Prune a generated batch into a maximal family: drop duplicates and
    members not refutably outside another member, then run the greedy
    disjoint selection on each base horocycle."""
    rng = np.random.default_rng(seed)
    cyls = list(generator)
    # duplicates: identical lattice data and identical centers
    uniq = []
    for c in cyls:
        if not any(
            c.j == d.j and c.R == d.R and np.array_equal(c.n0.X, d.n0.X) and np.array_equal(c.n0.Z, d.n0.Z)
            for d in uniq
        ):
            uniq.append(c)
    # drop members that cannot be refuted as subsets of another member
    kept = []
    for i, c in enumerate(uniq):
        contained = False
        for k, d in enumerate(uniq):
            if i == k:
                continue
            if not _refutes_containment(alg, c, d, n_dirs, rng):
                # symmetric ties (identical geometry is impossible after
                # dedup): keep the earlier one
                if k < i or _refutes_containment(alg, d, c, n_dirs, rng):
                    contained = True
                    break
        if not contained:
            kept.append(c)
    # per-horocycle disjointification
    final = []
    for log_h in sorted({c.base_log for c in kept}):
        group = [c for c in kept if c.base_log == log_h]

        def key(c):
            return (-c.base_radius, tuple(c.n0.X), tuple(c.n0.Z))

        chosen = []
        for c in sorted(group, key=key):
            if all(_certified_disjoint(alg, c, s) for s in chosen):
                chosen.append(c)
        final.extend(chosen)
    return MaximalFamily(alg, final)


def stacked_chain(alg: HTypeAlgebra, depth: int) -> MaximalFamily:
    """Adversarial maximal family: ``depth`` cylinders with distinct base
    heights e^{-1}..e^{-depth}, all containing the identity, with centers
    staggered so no member contains another."""
    cyls = []
    for k in range(1, depth + 1):
        offset = (-1.0) ** k * (0.3 + 0.02 * k)
        n0 = NPoint(np.zeros(alg.p), np.full(alg.q, offset) / math.sqrt(alg.q))
        cyls.append(AdmissibleCylinder(n0, 1, k + 1))
    return MaximalFamily(alg, cyls, label=f"stacked_chain:{depth}")


# ----------------------------------------------------------- overlap decay

@dataclass
class OverlapProfile:
    nu: float
    omega_k: list  # (k, measure)
    g_measure: float

    @property
    def bound_constant(self) -> float:
        return math.exp(2 * self.nu) / (math.exp(self.nu) - 1.0)

    def bound_ok(self) -> bool:
        c = self.bound_constant
        return all(m <= c * self.g_measure * math.exp(-k) + 1e-9 * self.g_measure for k, m in self.omega_k)

    def max_overlap(self) -> int:
        return max((k for k, m in self.omega_k if m > 0), default=0)

    def lr_norm(self, r: float) -> float:
        return sum(k**r * m for k, m in self.omega_k) ** (1.0 / r)


def a_r_constant(nu: float, r: float) -> float:
    s = sum(k**r * math.exp(-k) for k in range(1, 500))
    return (math.exp(2 * nu) / (math.exp(nu) - 1.0) * s) ** (1.0 / r)


def overlap_profile_exact(fam: MaximalFamily) -> OverlapProfile:
    """Exact overlap measures for the abelian q = 1 backend via a sweep
    over the base-interval arrangement.

    Within one cell of the arrangement the active member set is constant,
    and the overlap count as a function of height is the number of member
    base heights below it, so each cell contributes closed-form slabs.
    """
    alg = fam.alg
    if alg.p != 0 or alg.q != 1:
        raise ValueError("exact sweep requires the abelian q = 1 backend")
    nu = alg.nu
    cyls = fam.cylinders
    if not cyls:
        return OverlapProfile(nu, [], 0.0)
    endpoints = sorted(
        {float(c.n0.Z[0]) - c.a0 for c in cyls} | {float(c.n0.Z[0]) + c.a0 for c in cyls}
    )
    acc: dict = {}
    g_total = 0.0
    for lo, hi in zip(endpoints[:-1], endpoints[1:]):
        mid, width = 0.5 * (lo + hi), hi - lo
        heights = sorted(
            c.base_height for c in cyls if abs(mid - float(c.n0.Z[0])) < c.a0
        )
        if not heights:
            continue
        if any(h2 - h1 < 1e-15 for h1, h2 in zip(heights, heights[1:])):
            raise ValueError("equal base heights overlap a cell; family not maximal")
        for k in range(1, len(heights) + 1):
            top = heights[k] ** -nu if k < len(heights) else 0.0
            slab = width * (heights[k - 1] ** -nu - top) / nu
            acc[k] = acc.get(k, 0.0) + slab
            g_total += slab
    return OverlapProfile(nu, sorted(acc.items()), g_total)


def overlap_profile(fam: MaximalFamily, grid: ms.SampleGrid) -> OverlapProfile:
    """Grid-tally overlap profile for any backend."""
    counts = np.zeros(grid.size, dtype=np.int64)
    for c in fam.cylinders:
        counts += drsets.cylinder_contains_batch(
            fam.alg, c.as_cylinder(), grid.X, grid.Z, grid.a
        )
    out = []
    for k in range(1, counts.max(initial=0) + 1):
        out.append((k, float(grid.weights[counts == k].sum())))
    return OverlapProfile(fam.alg.nu, out, float(grid.weights[counts >= 1].sum()))


def overlap_report(prof: OverlapProfile, r_values=(1, 2, 3)) -> ExperimentReport:
    rep = ExperimentReport("overlap_profile", meta={"nu": prof.nu})
    c = prof.bound_constant
    rows = [
        [k, m, c * prof.g_measure * math.exp(-k), m <= c * prof.g_measure * math.exp(-k) + 1e-9 * prof.g_measure]
        for k, m in prof.omega_k
    ]
    rep.add_table("omega_k", ["k", "measure", "bound", "pass"], rows)
    rep.check("decay_bound_all_k", c, float(prof.max_overlap()), prof.bound_ok())
    total = sum(m for _, m in prof.omega_k)
    rep.check("partition_of_union", prof.g_measure, total, abs(total - prof.g_measure) <= 1e-6 * max(prof.g_measure, 1.0))
    for r in r_values:
        lhs = prof.lr_norm(r)
        rhs = a_r_constant(prof.nu, r) * prof.g_measure ** (1.0 / r)
        rep.check(f"overlap_l{r}_norm", rhs, lhs, lhs <= rhs * (1 + 1e-9))
    return rep


# ------------------------------------------------- point-mass level growth

def _trig_area(R: float) -> float:
    return hyp2.trigonon_area(R)


def dirac_level_growth(
    m_values=range(6, 15), r_step: float = 0.125, r_cap: float = None, seed: int = 0
) -> ExperimentReport:
    """Level sets of the sharpest trigonon average seen by a unit point
    mass at the origin of the half-plane.

    The witness lattice has centers on the vertical axis at heights e^j
    and radii on a step-1/8 ladder; the level-set measure of
    eta(x) = sup { 1/|T| : T in lattice, T contains x and the origin }
    has a closed form via a band decomposition of the union, so the
    growth of alpha |E(alpha)| in log(1/alpha) is measured exactly.
    """
    omega = 2.0
    c1, C1 = drsets.sandwich_constants(ht.degenerate_abelian(1), omega)
    alphas = [2.0**-m for m in m_values]
    if r_cap is None:
        r_cap = math.log(1.0 / min(alphas)) + 3.0
    ladder = np.arange(1.0 + r_step, r_cap, r_step)
    areas = np.array([_trig_area(R) for R in ladder])
    kappa = omega * (math.sqrt(math.e - 1.0) - 1.0) * math.exp(-1.0) * (1.0 - math.exp(-1.0))

    rep = ExperimentReport(
        "dirac_level_growth",
        meta={"r_step": r_step, "r_cap": float(r_cap), "m_values": list(m_values)},
    )
    rows = []
    xs, ys = [], []
    witness_ok = True
    chain_ok = True
    any_chain = False
    for m, alpha in zip(m_values, alphas):
        idx = int(np.searchsorted(areas, 1.0 / alpha) - 1)
        if idx < 0:
            raise ValueError(f"no lattice trigonon below measure 1/alpha for m={m}")
        r_star = float(ladder[idx])
        if idx + 1 >= len(ladder):
            raise ValueError("radius ladder cap too small")
        J = math.ceil(r_star - 1e-9) - 1
        t_star = areas[idx]
        band = t_star - _trig_area(r_star - 1.0)
        e_meas = t_star + (J - 1) * band
        # maximal witnesses all have measure t_star; lattice-exact bracket
        lo_bracket = c1 / (C1 * math.e * alpha)
        witness_ok &= lo_bracket <= t_star < 1.0 / alpha
        # proof-formula radius and the stacked-chain checks
        r_alpha = math.floor(math.log(c1 / (C1**2 * math.e * alpha)))
        chain_row = ""
        if r_alpha > 2:
            any_chain = True
            diff = _trig_area(r_alpha) - _trig_area(r_alpha - 1)
            ok = diff >= kappa * math.exp(r_alpha)
            for j in range(1, r_alpha):
                w = HPoint(0.0, math.exp(j))
                ok &= hyp2.contains(hyp2.trigonon(w, float(r_alpha)), HPoint(0.0, 1.0))
                ok &= _trig_area(r_alpha) < 1.0 / alpha
                ok &= abs(hyp2.distance(w, HPoint(0.0, 1.0)) - j) < 1e-12
            chain_ok &= ok
            chain_row = "ok" if ok else "FAIL"
        xs.append(math.log(1.0 / alpha))
        ys.append(alpha * e_meas)
        rows.append(
            [m, alpha, r_alpha, r_star, J, e_meas, alpha * e_meas, t_star, lo_bracket, 1.0 / alpha, chain_row]
        )
    if not any_chain:
        raise ValueError("alpha ladder never reaches the chain regime (R_alpha > 2)")
    slope, intercept = np.polyfit(xs, ys, 1)
    fit = np.polyval([slope, intercept], xs)
    ss_res = float(np.sum((np.array(ys) - fit) ** 2))
    ss_tot = float(np.sum((np.array(ys) - np.mean(ys)) ** 2))
    r2 = 1.0 - ss_res / ss_tot
    rep.add_table(
        "levels",
        ["m", "alpha", "R_alpha", "R_star", "J", "E_measure", "alpha_E", "witness_measure",
         "witness_lo", "witness_hi", "chain"],
        rows,
    )
    rep.add_table("fit", ["slope", "intercept", "r_squared", "kappa"], [[float(slope), float(intercept), r2, kappa]])
    rep.check("slope_positive", 0.0, float(slope), slope > 0)
    rep.check("r_squared", 0.9, r2, r2 > 0.9)
    rep.check("witness_measures_in_bracket", 1.0, 1.0, bool(witness_ok))
    rep.check("chain_differences", 1.0, 1.0, bool(chain_ok))
    return rep


def dirac_witness_lattice(alpha: float, r_step: float = 0.125, r_cap: float = 12.0):
    """All lattice trigona containing the origin with measure below
    1/alpha, as (j, R) pairs, plus the subset maximal under inclusion."""
    ladder = np.arange(1.0 + r_step, r_cap, r_step)
    cand = []
    for R in ladder:
        if _trig_area(R) >= 1.0 / alpha:
            continue
        for j in range(1, math.ceil(R - 1e-9)):
            cand.append((j, float(R)))
    cand_arr = np.array(cand) if cand else np.zeros((0, 2))
    maximal = []
    for i, (j, R) in enumerate(cand):
        others = np.delete(cand_arr, i, axis=0)
        inside = (j <= others[:, 0]) & (j - R >= others[:, 0] - others[:, 1])
        if not inside.any():
            maximal.append((j, R))
    return cand, maximal


# ------------------------------------------------------------ half-ball packing

@dataclass
class PackingLevel:
    level: int
    rho: float
    n_count: int
    centers: np.ndarray = field(repr=False)
    e_measure: float

    @property
    def radius(self) -> float:
        return 2.0**self.level

    @property
    def center_height(self) -> float:
        return math.exp(-(2.0**self.level))


def packing_construct(max_level: int) -> list:
    """Equally spaced maximal rows of disjoint half balls, level by level:
    on the horocycle at height e^{-2^l}, n_l = floor(1/rho_l) + 1 translates
    of the half ball of radius 2^l spanning [-1, 1]."""
    if max_level > 6:
        raise ValueError("desk-scale packing supports levels up to 6")
    out = []
    for lev in range(max_level + 1):
        s = 2.0**lev
        rho = 2.0 * math.exp(-s) * math.tanh(s)
        n = int(math.floor(1.0 / rho)) + 1
        centers = np.linspace(-1.0, 1.0, n) if n > 1 else np.zeros(1)
        e_meas = n * 2.0 * math.pi * math.sinh(s / 2.0) ** 2
        out.append(PackingLevel(lev, rho, n, centers, e_meas))
    return out


def packing_report(levels, samples: int = 4000, seed: int = 0) -> ExperimentReport:
    rep = ExperimentReport("packing", meta={"levels": len(levels), "samples": samples, "seed": seed})
    rng = np.random.default_rng(seed)
    rows = []
    disjoint_ok = True
    for lv in levels:
        violations = 0
        if lv.n_count > 1:
            pairs = [(0, 1), (lv.n_count // 2, lv.n_count // 2 + 1), (lv.n_count - 2, lv.n_count - 1)]
            for i, k in {p for p in pairs if p[1] < lv.n_count}:
                b1 = hyp2.half_ball(HPoint(float(lv.centers[i]), lv.center_height), lv.radius)
                b2 = hyp2.half_ball(HPoint(float(lv.centers[k]), lv.center_height), lv.radius)
                x, y = _sample_halfball_h2(b1, samples, rng)
                violations += int(hyp2.contains_mask(b2, x, y).sum())
        disjoint_ok &= violations == 0
        rows.append([lv.level, lv.rho, lv.n_count, lv.e_measure, violations])
    rep.add_table("levels", ["level", "rho", "n", "E_measure", "disjoint_violations"], rows)
    rep.check("adjacent_half_balls_disjoint", 0, 0, disjoint_ok)
    # the two satellite balls at the top intersect: Euclidean center
    # distance 2 below the radius sum 2 sinh 1
    rep.check("satellite_lens_nonempty", 2 * math.sinh(1.0), 2.0, 2.0 < 2 * math.sinh(1.0))
    for lv in levels:
        if lv.level >= 2:
            ratio = math.log(lv.n_count) / 2.0**lv.level
            rep.check(f"growth_exponent_level_{lv.level}", 1.2, ratio, 0.8 <= ratio <= 1.2)
    return rep


def _sample_halfball_h2(s, count, rng):
    x_lo, x_hi, y_lo, y_hi = hyp2.bounding_box(s)
    xs = np.empty(0)
    ys = np.empty(0)
    while xs.size < count:
        x = rng.uniform(x_lo, x_hi, 4 * count)
        y = np.exp(rng.uniform(math.log(y_lo), math.log(y_hi), 4 * count))
        m = hyp2.contains_mask(s, x, y)
        xs = np.concatenate([xs, x[m]])
        ys = np.concatenate([ys, y[m]])
    return xs[:count], ys[:count]


# ------------------------------------------------ modified half-ball sums

def lens_region_measure(samples: int = 400_000, seed: int = 0):
    """Monte Carlo measure of the intersection of the two satellite balls
    of radius 1 at -1+i and 1+i."""
    b_left = hyp2.ball(HPoint(-1.0, 1.0), 1.0)
    b_right = hyp2.ball(HPoint(1.0, 1.0), 1.0)
    rng = np.random.default_rng(seed)
    box = (1.0 - math.sinh(1.0), math.sinh(1.0) - 1.0, math.exp(-1.0), math.e)
    x, y, total = ms.sample_h2_box(box, samples, rng)
    mask = hyp2.contains_mask(b_left, x, y) & hyp2.contains_mask(b_right, x, y)
    frac = float(mask.mean())
    return total * frac, total * math.sqrt(frac * (1 - frac) / samples)


def modified_lp_sums(
    p: float, max_level: int, samples: int = 200_000, check_points: int = 100, seed: int = 0
) -> ExperimentReport:
    """Partial L^p sums of the modified half-ball averages of the lens
    indicator over the packing levels, with per-level witness checks.

    Every point of a level-l half ball sees the witness modified half
    ball built on that member: the satellite ball of the witness sits at
    height 1 and contains the lens, so the average is at least
    c_l = |lens| / (|half ball| + |unit ball|).
    """
    if not 1.0 <= p <= 4.0:
        raise ValueError("p must lie in [1, 4]")
    if max_level > 4:
        raise ValueError("desk scale: levels 0..4")
    rng = np.random.default_rng(seed)
    lens, lens_err = lens_region_measure(samples, seed)
    levels = packing_construct(max_level)
    b_unit = 4.0 * math.pi * math.sinh(0.5) ** 2

    rows = []
    increments = []
    witness_ok = True
    for lv in levels:
        half = 2.0 * math.pi * math.sinh(lv.radius / 2.0) ** 2
        c_l = lens / (half + b_unit)
        inc = lv.e_measure * c_l**p
        increments.append(inc)
        # witness verification at sampled points of the level set
        members = rng.integers(0, lv.n_count, check_points)
        ok = True
        for i in set(members.tolist()):
            cx = float(lv.centers[i])
            member = hyp2.half_ball(HPoint(cx, lv.center_height), lv.radius)
            witness = hyp2.modified_half_ball(HPoint(cx, lv.center_height), lv.radius)
            n_pts = int((members == i).sum())
            x, y = _sample_halfball_h2(member, n_pts, rng)
            ok &= bool(hyp2.contains_mask(witness, x, y).all())
            # the lens sits inside the witness satellite ball
            lx, ly, _ = ms.sample_h2_box((1.0 - math.sinh(1.0), math.sinh(1.0) - 1.0, math.exp(-1.0), math.e), 200, rng)
            lm = hyp2.contains_mask(hyp2.ball(HPoint(-1.0, 1.0), 1.0), lx, ly) & hyp2.contains_mask(
                hyp2.ball(HPoint(1.0, 1.0), 1.0), lx, ly
            )
            ok &= bool(hyp2.contains_mask(witness, lx[lm], ly[lm]).all())
            avg_bound = lens / hyp2.area(witness)
            ok &= avg_bound >= c_l * (1.0 - 1e-12)
        witness_ok &= ok
        rows.append([lv.level, c_l, lv.e_measure, inc, "ok" if ok else "FAIL"])

    rep = ExperimentReport(
        "modified_lp_sums",
        meta={"p": p, "max_level": max_level, "seed": seed, "lens": lens, "lens_stderr": lens_err},
    )
    rep.add_table("levels", ["level", "c_l", "E_measure", "increment", "witness"], rows)
    rep.add_table("partial_sums", ["S_L"], [[float(np.cumsum(increments)[-1])]])
    rep.check("witness_bounds", 1.0, 1.0, bool(witness_ok))
    if p <= 1.0:
        grows = all(b >= a for a, b in zip(increments, increments[1:]))
        rep.check("increments_grow", 1.0, float(increments[-1] / increments[0]), grows)
    elif p <= 2.0:
        ratio = min(increments) / max(increments)
        rep.check("increments_bounded_below", 0.1, ratio, ratio >= 0.1)
    else:
        decay = increments[-1] / increments[0]
        rep.check("increments_decay", 1e-3, decay, decay < 1e-3)
    return rep
