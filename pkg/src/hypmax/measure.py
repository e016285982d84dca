"""Measure-weighted sample grids and seeded Monte Carlo volume estimation.

Grids are uniform lattices in the log-height coordinate u = log y (resp.
u = log a), where the Riemannian measure factorizes: on the half-plane a
cell [x0,x1] x [u0,u1] has exact measure (x1-x0)(e^{-u0} - e^{-u1}); on
an NA group the height factor is (e^{-nu u0} - e^{-nu u1})/nu.  Monte
Carlo sampling draws directly from the Riemannian measure restricted to
a coordinate box, so indicator estimates are plain binomial proportions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import drsets, hyp2
from .drsets import AdmissibleCylinder, Cylinder
from .htype import HTypeAlgebra
from .hyp2 import H2Set
from .report import VolumeEstimate


@dataclass
class SampleGrid:
    """Finite weighted point cloud with attached function values.

    ``space`` is 'h2' or 'na'.  For 'h2' the coordinates are x, y; for
    'na' they are X (n, p), Z (n, q) and heights a.  ``weights`` are the
    exact Riemannian cell measures.
    """

    space: str
    weights: np.ndarray
    values: np.ndarray
    window: tuple
    shape: tuple
    x: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None
    X: Optional[np.ndarray] = field(default=None, repr=False)
    Z: Optional[np.ndarray] = field(default=None, repr=False)
    a: Optional[np.ndarray] = None
    alg: Optional[HTypeAlgebra] = None

    @property
    def size(self) -> int:
        return self.weights.size

    def total_measure(self) -> float:
        return float(self.weights.sum())

    def set_values(self, f: Callable) -> "SampleGrid":
        """Attach samples of f; f receives coordinate arrays."""
        if self.space == "h2":
            self.values = np.asarray(f(self.x, self.y), dtype=float) * np.ones(self.size)
        else:
            self.values = np.asarray(f(self.X, self.Z, self.a), dtype=float) * np.ones(self.size)
        return self


@dataclass(frozen=True)
class IntegralResult:
    value: float
    truncated: bool


def _axis_centers(lo: float, hi: float, n: int):
    if not hi > lo:
        raise ValueError("degenerate window")
    edges = np.linspace(lo, hi, n + 1)
    return 0.5 * (edges[:-1] + edges[1:]), edges


def build_grid(space: str, window, resolution, alg: HTypeAlgebra = None) -> SampleGrid:
    """Uniform lattice with exact per-cell measure weights.

    For 'h2': window = (x_lo, x_hi, u_lo, u_hi), resolution = (nx, nu).
    For 'na': window = (x_boxes, z_boxes, (u_lo, u_hi)) with one (lo, hi)
    pair per coordinate of v and z, resolution likewise nested.
    """
    if space == "h2":
        (x_lo, x_hi, u_lo, u_hi), (nx, nu) = window, resolution
        xc, _ = _axis_centers(x_lo, x_hi, nx)
        uc, ue = _axis_centers(u_lo, u_hi, nu)
        dx = (x_hi - x_lo) / nx
        wu = np.exp(-ue[:-1]) - np.exp(-ue[1:])
        Xg, Ug = np.meshgrid(xc, uc, indexing="ij")
        Wg = np.broadcast_to((dx * wu)[None, :], Xg.shape)
        n = Xg.size
        return SampleGrid(
            space="h2",
            weights=Wg.reshape(n).copy(),
            values=np.zeros(n),
            window=tuple(window),
            shape=(nx, nu),
            x=Xg.reshape(n).copy(),
            y=np.exp(Ug.reshape(n)),
        )
    if space == "na":
        if alg is None:
            raise ValueError("na grid requires an algebra")
        x_boxes, z_boxes, (u_lo, u_hi) = window
        nx_list, nz_list, nu = resolution
        axes, steps = [], []
        for (lo, hi), n in zip(list(x_boxes) + list(z_boxes), list(nx_list) + list(nz_list)):
            c, _ = _axis_centers(lo, hi, n)
            axes.append(c)
            steps.append((hi - lo) / n)
        uc, ue = _axis_centers(u_lo, u_hi, nu)
        nu_dim = alg.nu
        wu = (np.exp(-nu_dim * ue[:-1]) - np.exp(-nu_dim * ue[1:])) / nu_dim
        grids = np.meshgrid(*axes, uc, indexing="ij")
        n = grids[0].size
        flat = [g.reshape(n) for g in grids]
        X = np.stack(flat[: alg.p], axis=1) if alg.p else np.zeros((n, 0))
        Z = np.stack(flat[alg.p : alg.p + alg.q], axis=1)
        # weight of a cell = product of horizontal steps times the height factor;
        # the u axis is last, so wu broadcasts along it
        cell = math.prod(steps) if steps else 1.0
        weights = (cell * np.broadcast_to(wu, grids[-1].shape)).reshape(n).copy()
        return SampleGrid(
            space="na",
            weights=weights,
            values=np.zeros(n),
            window=(tuple(map(tuple, x_boxes)), tuple(map(tuple, z_boxes)), (u_lo, u_hi)),
            shape=tuple(list(nx_list) + list(nz_list) + [nu]),
            X=X,
            Z=Z,
            a=np.exp(flat[-1]),
            alg=alg,
        )
    raise ValueError(f"unknown space {space!r}")


# ------------------------------------------------------------- integration

def membership_mask(grid: SampleGrid, s) -> np.ndarray:
    if isinstance(s, H2Set):
        if grid.space != "h2":
            raise ValueError("half-plane descriptor on a non-h2 grid")
        return hyp2.contains_mask(s, grid.x, grid.y)
    if isinstance(s, (Cylinder, AdmissibleCylinder)):
        if grid.space != "na":
            raise ValueError("cylinder descriptor on a non-na grid")
        c = s.as_cylinder() if isinstance(s, AdmissibleCylinder) else s
        return drsets.cylinder_contains_batch(grid.alg, c, grid.X, grid.Z, grid.a)
    raise TypeError(f"unsupported descriptor {type(s)}")


def _h2_box_contains(window, bbox) -> bool:
    x_lo, x_hi, u_lo, u_hi = window
    bx_lo, bx_hi, by_lo, by_hi = bbox
    return (
        bx_lo >= x_lo
        and bx_hi <= x_hi
        and by_lo >= math.exp(u_lo)
        and by_hi <= math.exp(u_hi)
    )


def is_truncated(grid: SampleGrid, s) -> bool:
    """True when the descriptor sticks out of the grid window."""
    if isinstance(s, H2Set):
        return not _h2_box_contains(grid.window, hyp2.bounding_box(s))
    # cylinders extend to infinite height, hence always exceed a finite window
    return True


def integrate_set(grid: SampleGrid, s) -> IntegralResult:
    """Sum of weight * value over cells whose centers lie in s."""
    mask = membership_mask(grid, s)
    val = float(np.sum(grid.weights * grid.values * mask))
    return IntegralResult(val, is_truncated(grid, s))


# -------------------------------------------------------------- Monte Carlo

def sample_h2_box(box, samples: int, rng) -> tuple:
    """Draw from the hyperbolic measure restricted to box = (x_lo, x_hi,
    y_lo, y_hi); y_hi may be inf.  Returns (x, y, box_measure)."""
    x_lo, x_hi, y_lo, y_hi = box
    inv_hi = 0.0 if math.isinf(y_hi) else 1.0 / y_hi
    x = rng.uniform(x_lo, x_hi, samples)
    v = rng.uniform(0.0, 1.0, samples)
    y = 1.0 / (1.0 / y_lo - v * (1.0 / y_lo - inv_hi))
    return x, y, (x_hi - x_lo) * (1.0 / y_lo - inv_hi)


def sample_na_box(alg: HTypeAlgebra, box, samples: int, rng) -> tuple:
    """Draw from the NA Haar measure restricted to box = (x_boxes, z_boxes,
    (a_lo, a_hi)); a_hi may be inf.  Returns (X, Z, a, box_measure)."""
    x_boxes, z_boxes, (a_lo, a_hi) = box
    nu = alg.nu
    X = np.column_stack([rng.uniform(lo, hi, samples) for lo, hi in x_boxes]) if alg.p else np.zeros((samples, 0))
    Z = np.column_stack([rng.uniform(lo, hi, samples) for lo, hi in z_boxes])
    hi_term = 0.0 if math.isinf(a_hi) else a_hi**-nu
    v = rng.uniform(0.0, 1.0, samples)
    a = (a_lo**-nu - v * (a_lo**-nu - hi_term)) ** (-1.0 / nu)
    horiz = math.prod(hi - lo for lo, hi in list(x_boxes) + list(z_boxes))
    return X, Z, a, horiz * (a_lo**-nu - hi_term) / nu


def mc_volume(space: str, s, box, samples: int, seed: int, alg: HTypeAlgebra = None) -> VolumeEstimate:
    """Seeded Monte Carlo volume of the descriptor s inside a coordinate
    box; exact-measure sampling makes the indicator a Bernoulli draw."""
    rng = np.random.default_rng(seed)
    if space == "h2":
        x, y, total = sample_h2_box(box, samples, rng)
        mask = hyp2.contains_mask(s, x, y)
    elif space == "na":
        if alg is None:
            raise ValueError("na sampling requires an algebra")
        X, Z, a, total = sample_na_box(alg, box, samples, rng)
        c = s.as_cylinder() if isinstance(s, AdmissibleCylinder) else s
        mask = drsets.cylinder_contains_batch(alg, c, X, Z, a)
    else:
        raise ValueError(f"unknown space {space!r}")
    frac = float(mask.mean())
    if frac == 0.0:
        warnings.warn("Monte Carlo produced zero hits; box likely misses the set")
    stderr = total * math.sqrt(frac * (1.0 - frac) / samples)
    return VolumeEstimate(total * frac, stderr, samples, seed)


def suggested_box_h2(s: H2Set, pad: float = 0.1) -> tuple:
    """Coordinate box containing s, padded so the estimate is nontrivial."""
    x_lo, x_hi, y_lo, y_hi = hyp2.bounding_box(s)
    w = x_hi - x_lo
    x_lo, x_hi = x_lo - pad * w, x_hi + pad * w
    y_lo = y_lo / (1.0 + pad)
    if not math.isinf(y_hi):
        y_hi = y_hi * (1.0 + pad)
    return (x_lo, x_hi, y_lo, y_hi)
