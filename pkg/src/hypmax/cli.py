"""Command-line driver: validation, area/volume tables, maximal-function
experiments, level-set bound tables, overlap/covering reports, packing
sums and SVG figures.

Configuration precedence is flags > config file > defaults; the config
file is flat ``key=value`` lines.  Every stochastic run requires a seed
(the default seed is 0) and reports are byte-identical for identical
(config, seed).  Exit status is 0 iff every asserted bound passes.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, drsets, experiments as ex, figures, htype as ht, hyp2, maxop as mx, measure as ms
from .hyp2 import HPoint
from .report import ExperimentReport

DEFAULTS = {
    "space": "h2",
    "family": "half_ball",
    "seed": 0,
    "samples": 200_000,
    "grid": "-4:4:-2:2:96:64",
    "alpha_ladder": "2^-1..2^-8",
    "R": "1",
    "profile": "ball",
    "levels": 4,
    "count": 40,
    "figure": "rectangle",
    "z": "1.5,2.0",
    "level": 0,
    "format": "json",
    "out": None,
    "nu": 1,
}


@dataclass
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.options[name]
        except KeyError:
            raise AttributeError(name)


def parse_grid(spec: str):
    parts = spec.split(":")
    if len(parts) != 6:
        raise ValueError("grid spec must be x0:x1:u0:u1:nx:nu")
    x0, x1, u0, u1 = map(float, parts[:4])
    nx, nu = int(parts[4]), int(parts[5])
    return (x0, x1, u0, u1), (nx, nu)


def parse_alpha_ladder(spec: str):
    """'2^-3..2^-10' gives the dyadic ladder; otherwise comma floats."""
    if ".." in spec:
        lo, hi = spec.split("..")
        m1 = int(lo.replace("2^", ""))
        m2 = int(hi.replace("2^", ""))
        ms_range = range(min(-m1, -m2), max(-m1, -m2) + 1)
        return [2.0**-m for m in ms_range], list(ms_range)
    vals = [float(v) for v in spec.split(",")]
    return vals, None


def load_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _profile_fn(name: str, support_scale: float = 1.0):
    if name == "ball":
        s = hyp2.ball(HPoint(0.0, 1.0), support_scale)
        return lambda x, y: hyp2.contains_mask(s, x, y).astype(float)
    if name == "rect":
        s = hyp2.rectangle(HPoint(0.0, 1.0), support_scale)
        return lambda x, y: hyp2.contains_mask(s, x, y).astype(float)
    if name == "height":
        return lambda x, y: np.minimum(1.0 / y, 20.0) * (np.abs(x) < 2.0) * (y < 4.0)
    raise ValueError(f"unknown profile {name!r}")


def _family_for(grid, name: str, k_max: int = 6):
    if name == "admissible_rectangle":
        return mx.admissible_family_for_grid(grid, k_max=k_max)
    centers = mx.grid_centers(grid, 12)
    return mx.FamilySpec(name, centers=centers, radii=mx.radius_ladder(1.0, 4))


# ------------------------------------------------------------- subcommands

def cmd_validate(cfg) -> ExperimentReport:
    alg = ht.make_algebra(cfg.space)
    res = ht.validate_algebra(alg, samples=min(int(cfg.samples), 20_000), seed=int(cfg.seed))
    rep = ExperimentReport("validate", meta=_meta(cfg))
    rep.add_table("residuals", ["identity", "residual"], [[k, v] for k, v in res.items()])
    rep.check("antisymmetry", 1e-12, res["antisymmetry"], res["antisymmetry"] < 1e-12)
    for key in ("defining_relation", "h_type", "polarisation"):
        rep.check(key, 1e-10, res[key], res[key] < 1e-10)
    return rep


def cmd_areas(cfg) -> ExperimentReport:
    rep = ExperimentReport("areas", meta=_meta(cfg))
    rows = []
    ok = True
    for R in [float(v) for v in str(cfg.R).split(",")]:
        z = HPoint(0.0, 1.0)
        ball = hyp2.area(hyp2.ball(z, R))
        half = hyp2.area(hyp2.half_ball(z, R))
        rows.append(
            [R, ball, half, hyp2.area(hyp2.trigonon(z, R)), hyp2.area(hyp2.rectangle(z, R)),
             hyp2.area(hyp2.modified_half_ball(z, max(R, 1.0)))]
        )
        ok &= half == 0.5 * ball
    rep.add_table("areas", ["R", "ball", "half_ball", "trigonon", "rectangle", "modified_half_ball"], rows)
    rep.check("half_ball_is_half_ball_area", 0.5, 0.5, ok)
    return rep


def cmd_volume(cfg) -> ExperimentReport:
    rep = ExperimentReport("volume", meta=_meta(cfg))
    seed, samples = int(cfg.seed), int(cfg.samples)
    rows = []
    ok = True
    if cfg.space == "h2":
        makers = {
            "ball": hyp2.ball,
            "half_ball": hyp2.half_ball,
            "trigonon": hyp2.trigonon,
            "rectangle": hyp2.rectangle,
        }
        for R in [float(v) for v in str(cfg.R).split(",")]:
            for name, mk in makers.items():
                s = mk(HPoint(0.0, 1.0), R)
                est = ms.mc_volume("h2", s, ms.suggested_box_h2(s), samples, seed)
                exact = hyp2.area(s)
                good = abs(est.mean - exact) <= 3 * est.stderr
                ok &= good
                rows.append([name, R, exact, est.mean, est.stderr, good])
    else:
        alg = ht.make_algebra(cfg.space)
        omega = drsets.omega_n(alg) if alg.p == 0 else drsets.omega_n(alg, "mc", samples, seed).mean
        for R in (2.0, 3.0):
            c = drsets.Cylinder(ht.identity_n(alg), 1.0, R)
            box = ([(-2.2, 2.2)] * alg.p, [(-1.2, 1.2)] * alg.q, (c.base_height, math.inf))
            est = ms.mc_volume("na", c, box, samples, seed, alg=alg)
            exact = drsets.cylinder_volume(alg, c, omega)
            good = abs(est.mean - exact) <= 3 * est.stderr
            ok &= good
            rows.append(["cylinder", R, exact, est.mean, est.stderr, good])
    rep.add_table("volumes", ["set", "R", "closed_form", "mc", "stderr", "pass"], rows)
    rep.check("mc_within_3_stderr", 3.0, 3.0, ok)
    return rep


def cmd_maxfn(cfg) -> ExperimentReport:
    window, res = parse_grid(cfg.grid)
    grid = ms.build_grid("h2", window, res)
    grid.set_values(_profile_fn(cfg.profile))
    fam = _family_for(grid, cfg.family)
    fld = mx.maximal_field(grid, fam)
    rep = ExperimentReport("maxfn", meta=_meta(cfg))
    rep.add_table("grid", ["window", "shape", "total_measure"], [[str(window), str(res), grid.total_measure()]])
    rep.add_table(
        "field",
        ["statistic", "value"],
        [
            ["sup", float(fld.values.max())],
            ["mean", float(fld.values.mean())],
            ["support_measure", float(grid.weights[fld.values > 0].sum())],
        ],
    )
    if cfg.profile in ("ball", "rect"):
        rep.check("indicator_average_le_one", 1.03, float(fld.values.max()), fld.values.max() <= 1.03)
    return rep


def cmd_levelset(cfg) -> ExperimentReport:
    if int(cfg.nu) != 1:
        raise ValueError("level-set tables are computed on the nu = 1 backend")
    window, res = parse_grid(cfg.grid)
    grid = ms.build_grid("h2", window, res)
    grid.set_values(_profile_fn(cfg.profile))
    k_max = max(4, math.ceil(math.log(1.0 / min(parse_alpha_ladder(cfg.alpha_ladder)[0]))) + 1)
    fam = mx.admissible_family_for_grid(grid, k_max=k_max)
    alphas, _ = parse_alpha_ladder(cfg.alpha_ladder)
    rows, _fld = mx.level_set_table(grid, fam, alphas)
    lam = mx.llogl_lambda(1.0)
    rep = ExperimentReport("levelset", meta=_meta(cfg))
    rep.add_table("grid", ["window", "shape", "total_measure"], [[str(window), str(res), grid.total_measure()]])
    table = []
    ok = True
    for alpha, measure_val in rows:
        rhs = 4.0 * mx.llogl_rhs(grid, alpha, lam)
        passed = measure_val <= rhs + 0.02 * max(rhs, 1.0)
        ok &= passed
        table.append([alpha, measure_val, rhs, passed])
    rep.add_table("levelset", ["alpha", "measure", "rhs_bound", "pass"], table)
    rep.check("llogl_bound", 4.0, lam, ok)
    return rep


def cmd_overlap(cfg) -> ExperimentReport:
    alg = ht.make_algebra(cfg.space if cfg.space != "h2" else "dr-abelian:1")
    rng = np.random.default_rng(int(cfg.seed))
    fam = ex.build_maximal_family(
        alg, ex.random_admissible_cylinders(alg, int(cfg.count), rng), seed=int(cfg.seed)
    )
    if alg.p == 0 and alg.q == 1:
        prof = ex.overlap_profile_exact(fam)
    else:
        grid = ms.build_grid(
            "na",
            ([(-8.0, 8.0)] * alg.p, [(-8.0, 8.0)] * alg.q, (-9.0, 3.0)),
            ([10] * alg.p, [12] * alg.q, 36),
            alg=alg,
        )
        prof = ex.overlap_profile(fam, grid)
    rep = ex.overlap_report(prof)
    rep.name = "overlap"
    rep.meta = _meta(cfg) | {"family_size": len(fam.cylinders)}
    return rep


def cmd_vitali(cfg) -> ExperimentReport:
    alg = ht.make_algebra(cfg.space if cfg.space != "h2" else "dr-abelian:1")
    rng = np.random.default_rng(int(cfg.seed))
    fam = ex.random_horocycle_family(alg, int(cfg.count), -2, rng)
    _sel, rep = ex.vitali_select(alg, fam, samples=int(cfg.samples), seed=int(cfg.seed))
    rep.meta = _meta(cfg)
    return rep


def cmd_eta(cfg) -> ExperimentReport:
    _, m_range = parse_alpha_ladder(cfg.alpha_ladder)
    if m_range is None:
        raise ValueError("eta requires a dyadic ladder like 2^-6..2^-14")
    rep = ex.dirac_level_growth(m_range, seed=int(cfg.seed))
    rep.meta = _meta(cfg) | rep.meta
    return rep


def cmd_pack(cfg) -> ExperimentReport:
    levels = ex.packing_construct(int(cfg.levels))
    rep = ex.packing_report(levels, seed=int(cfg.seed))
    rep.name = "pack"
    rep.meta = _meta(cfg)
    # the L^p increments are calibrated on the full desk-scale depth 0..4
    for p in (1.0, 2.0, 3.0):
        sub = ex.modified_lp_sums(
            p, 4, samples=int(cfg.samples), check_points=30, seed=int(cfg.seed)
        )
        for t in sub.tables:
            rep.tables.append(type(t)(f"p={p}:{t.name}", t.columns, t.rows))
        for a in sub.assertions:
            rep.check(f"p={p}:{a.name}", a.bound, a.observed, a.passed)
    return rep


def cmd_figures(cfg) -> str:
    params = {}
    if cfg.figure == "rectangle":
        zx, zy = (float(v) for v in str(cfg.z).split(","))
        params = {"z": (zx, zy), "R": float(str(cfg.R).split(",")[0])}
    elif cfg.figure == "halfballs":
        params = {"level": int(cfg.level)}
    elif cfg.figure == "packing":
        params = {"levels": int(cfg.levels)}
    return figures.emit_figure(cfg.figure, params)


COMMANDS = {
    "validate": cmd_validate,
    "areas": cmd_areas,
    "volume": cmd_volume,
    "maxfn": cmd_maxfn,
    "levelset": cmd_levelset,
    "overlap": cmd_overlap,
    "vitali": cmd_vitali,
    "eta": cmd_eta,
    "pack": cmd_pack,
}


def _meta(cfg) -> dict:
    return {
        "seed": int(cfg.seed),
        "version": __version__,
        "config": {k: cfg.options[k] for k in sorted(cfg.options) if cfg.options[k] is not None},
    }


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hypmax",
        description="Numerical experiments for half-ball maximal operators "
        "on the hyperbolic half-plane and NA group backends.",
        epilog="CSV output is one block per table. The levelset table has "
        "columns alpha,measure,rhs_bound,pass; every report ends with an "
        "assertions block name,bound,observed,pass. Values starting with a "
        "dash need the --flag=value form (e.g. --grid=-4:4:-2:2:96:64).",
    )
    ap.add_argument("subcommand", choices=list(COMMANDS) + ["figures"])
    ap.add_argument("--space", help="h2 | dr-abelian:q | dr-heisenberg:d")
    ap.add_argument("--family", help="set family for maxfn (half_ball, trigonon, rectangle, admissible_rectangle, ...)")
    ap.add_argument("--seed", type=int, help="RNG seed (required for reproducibility; default 0)")
    ap.add_argument("--samples", type=int, help="Monte Carlo sample count")
    ap.add_argument("--grid", help="grid window x0:x1:u0:u1:nx:nu (u = log y)")
    ap.add_argument("--alpha-ladder", dest="alpha_ladder", help="dyadic ladder 2^-a..2^-b or comma floats")
    ap.add_argument("--R", help="radius or comma list of radii")
    ap.add_argument("--profile", help="test function: ball | rect | height")
    ap.add_argument("--levels", type=int, help="max packing level")
    ap.add_argument("--count", type=int, help="generated family size")
    ap.add_argument("--figure", help="figure kind: rectangle | halfballs | packing")
    ap.add_argument("--z", help="figure center as x,y")
    ap.add_argument("--level", type=int, help="packing level for the halfballs figure")
    ap.add_argument("--nu", type=int, help="homogeneous dimension for levelset tables")
    ap.add_argument("--config", help="flat key=value config file")
    ap.add_argument("--out", help="output path (default: stdout, or $HYPMAX_OUT/<subcommand>.<ext>)")
    ap.add_argument("--format", choices=["json", "csv", "svg"], help="output format")
    return ap


def resolve_config(argv) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    sub = args.pop("subcommand")
    cfg_path = args.pop("config", None)
    opts = dict(DEFAULTS)
    if cfg_path:
        opts.update(load_config(cfg_path))
    opts.update({k: v for k, v in args.items() if v is not None})
    return RunConfig(sub, opts)


def run(cfg: RunConfig):
    """Execute one subcommand; returns (exit status, rendered output)."""
    if cfg.subcommand == "figures":
        body = cmd_figures(cfg)
        _write(cfg, body, "svg")
        return 0, body
    rep = COMMANDS[cfg.subcommand](cfg)
    fmt = cfg.format if cfg.format in ("json", "csv") else "json"
    body = rep.to_json() if fmt == "json" else rep.to_csv()
    _write(cfg, body, fmt)
    if not rep.all_pass:
        failures = [
            {"name": a.name, "bound": a.bound, "observed": a.observed} for a in rep.failures()
        ]
        print(json.dumps({"failed_assertions": failures}), file=sys.stderr)
        return 1, body
    return 0, body


def _write(cfg, body: str, ext: str) -> None:
    out = cfg.options.get("out")
    if out is None and os.environ.get("HYPMAX_OUT"):
        out = os.path.join(os.environ["HYPMAX_OUT"], f"{cfg.subcommand}.{ext}")
    if out:
        os.makedirs(os.path.dirname(out) or ".", exist_ok=True)
        with open(out, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body + "\n")


def main(argv=None) -> int:
    return run(resolve_config(argv))[0]


if __name__ == "__main__":
    sys.exit(main())
