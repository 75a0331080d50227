"""Command-line entry point ``e2surf``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys

from . import catenoid, helicoid
from .config import RunConfig, parse_config, parse_metric
from .errors import E2SurfError
from .export import export_curve, export_mesh
from .grid import sample_catenoid, sample_helicoid
from .group import MetricParams
from .verify import run_verification

log = logging.getLogger("e2surf")

# RunConfig fields that may be given as flags
_FLAG_KEYS = ("lambda1", "lambda2", "K", "c", "theta", "u_min", "u_max", "v_min", "v_max",
              "nu", "nv", "ode_tol", "quad_tol", "root_tol", "mesh", "csv", "report")


def _common(p: argparse.ArgumentParser, nested=False):
    if nested:
        # let flags given before a nested action survive its parse
        p.argument_default = argparse.SUPPRESS
    p.add_argument("--config", help="JSON configuration file; flags override it")
    p.add_argument("--lambda1", type=float)
    p.add_argument("--lambda2", type=float)
    p.add_argument("--u-min", dest="u_min", type=float)
    p.add_argument("--u-max", dest="u_max", type=float)
    p.add_argument("--v-min", dest="v_min", type=float)
    p.add_argument("--v-max", dest="v_max", type=float)
    p.add_argument("--nu", type=int)
    p.add_argument("--nv", type=int)
    p.add_argument("--ode-tol", dest="ode_tol", type=float)
    p.add_argument("--quad-tol", dest="quad_tol", type=float)
    p.add_argument("--root-tol", dest="root_tol", type=float)
    p.add_argument("--mesh", help="write the sampled surface as OBJ")
    p.add_argument("--csv", help="write a cross-section as CSV")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("-v", "--verbose", action="store_true")


def _family_args(p, family):
    if family in ("helicoid", None):
        p.add_argument("--K", type=float, help="helicoid parameter, 0 < |K| < 1")
    if family in ("catenoid", None):
        p.add_argument("--c", type=float, help="catenoid parameter, c > 0")
        p.add_argument("--theta", type=float, help="use this theta instead of solving for it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="e2surf", description="Minimal helicoids and catenoids in E(2)~.")
    sub = parser.add_subparsers(dest="command", required=True)

    for family in ("helicoid", "catenoid"):
        fp = sub.add_parser(family, help=f"solve and mesh a {family}")
        _common(fp)
        _family_args(fp, family)
        actions = fp.add_subparsers(dest="action")
        if family == "helicoid":
            sp = actions.add_parser("solve-period", help="find K for a given translation period")
            sp.add_argument("--T", type=float, required=True)
        else:
            sp = actions.add_parser("solve-theta", help="solve the period problem for theta")
            sp.add_argument("--c", type=float, required=True)
        _common(sp, nested=True)

    cs = sub.add_parser("cross-section", help="sample a horizontal section")
    _common(cs)
    cs.add_argument("--family", choices=("helicoid", "catenoid"))
    _family_args(cs, None)
    cs.add_argument("--height", type=float, default=0.0,
                    help="helicoid: the level x3; catenoid: mu, the level being lambda1*lambda2*mu")
    cs.add_argument("--samples", type=int, default=257)

    vp = sub.add_parser("verify", help="run the invariant suite and write a JSON report")
    _common(vp)
    vp.add_argument("--family", choices=("helicoid", "catenoid"))
    _family_args(vp, None)

    lp = sub.add_parser("limit-study", help="rescaled limits and shrinking sections for large c")
    _common(lp)
    lp.add_argument("--c-list", dest="c_list", type=float, nargs="+", default=[10.0, 50.0, 100.0])
    return parser


def _load(args, family=None) -> RunConfig:
    overrides = {k: getattr(args, k, None) for k in _FLAG_KEYS}
    fam = family or getattr(args, "family", None)
    if fam is not None:
        overrides["family"] = fam
    return parse_config(args.config, overrides)


def _metric_only(args) -> MetricParams:
    return parse_metric(getattr(args, "config", None),
                        {k: getattr(args, k, None) for k in ("lambda1", "lambda2")})


def _metric(cfg):
    return MetricParams(cfg.lambda1, cfg.lambda2)


def _emit(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_helicoid(args):
    if args.action == "solve-period":
        m = _metric_only(args)
        K = helicoid.solve_K_for_period(m, args.T)
        p = helicoid.solve_profile(m, K)
        _emit({"T": args.T, "K": K, "W": p.W, "period": p.period})
        return 0
    cfg = _load(args, "helicoid")
    p = helicoid.solve_profile(_metric(cfg), cfg.K, cfg.tol.ode)
    g = cfg.grid
    u_rng = (g.u_min if g.u_min is not None else -1.0, g.u_max if g.u_max is not None else 1.0)
    v_rng = (g.v_min if g.v_min is not None else 0.0, g.v_max if g.v_max is not None else 2 * p.W)
    if cfg.outputs.mesh:
        grid = sample_helicoid(p, u_rng, v_rng, g.nu, g.nv)
        export_mesh(grid, cfg.outputs.mesh)
        log.info("wrote %s", cfg.outputs.mesh)
    _emit({"K": p.K, "W": p.W, "x3W": p.x3W, "period": p.period})
    return 0


def cmd_catenoid(args):
    if args.action == "solve-theta":
        m = _metric_only(args)
        theta = catenoid.solve_theta_tilde(m, args.c)
        H = catenoid.H_value(catenoid.omega_check(m, args.c, theta), m)
        _emit({"c": args.c, "theta": theta, "H": H})
        return 0
    cfg = _load(args, "catenoid")
    m = _metric(cfg)
    theta = cfg.theta if cfg.theta is not None else catenoid.solve_theta_tilde(m, cfg.c, cfg.tol.root)
    p = catenoid.solve_profile(catenoid.omega_check(m, cfg.c, theta), m, cfg.tol.ode)
    g = cfg.grid
    u_rng = (g.u_min if g.u_min is not None else 0.0, g.u_max if g.u_max is not None else 2 * p.U)
    v_rng = (g.v_min if g.v_min is not None else -1.0, g.v_max if g.v_max is not None else 1.0)
    if cfg.outputs.mesh:
        grid = sample_catenoid(p, u_rng, v_rng, g.nu, g.nv)
        export_mesh(grid, cfg.outputs.mesh)
        log.info("wrote %s", cfg.outputs.mesh)
    Z = catenoid.lattice_vector(p)
    _emit({"c": p.c, "theta": theta, "U": p.U, "H": p.Hval, "Z": [Z.real, Z.imag]})
    return 0


def cmd_cross_section(args):
    cfg = _load(args)
    m = _metric(cfg)
    if cfg.family == "helicoid":
        p = helicoid.solve_profile(m, cfg.K, cfg.tol.ode)
        sec = helicoid.cross_section(p, args.height)
        us = [-1 + 2 * i / (args.samples - 1) for i in range(args.samples)]
        pts = [helicoid.immerse(p, u, sec.v0).as_array() for u in us]
        summary = {"k1": sec.k1, "k2": sec.k2, "v0": sec.v0}
    else:
        theta = cfg.theta if cfg.theta is not None else catenoid.solve_theta_tilde(m, cfg.c, cfg.tol.root)
        p = catenoid.solve_profile(catenoid.omega_check(m, cfg.c, theta), m, cfg.tol.ode)
        cs = catenoid.cross_section(p, args.height, args.samples)
        us, pts = cs.u, cs.points
        conv = catenoid.convexity_check(cs)
        summary = {"mu": args.height, "convex": conv.passed, "winding": catenoid.winding_number(cs)}
    if cfg.outputs.csv:
        export_curve(us, pts, cfg.outputs.csv)
    _emit(summary)
    return 0


def cmd_verify(args):
    cfg = _load(args)
    report = run_verification(cfg)
    if not cfg.outputs.report:
        _emit(report.to_dict())
    for r in report.records:
        log.info("%s %s value=%.3e tol=%.1e", "PASS" if r.passed else "FAIL", r.name, r.value, r.tol)
    print(f"{report.n_pass} passed, {report.n_fail} failed", file=sys.stderr)
    return 0 if report.ok else 1


def cmd_limit_study(args):
    m = _metric_only(args)
    limits = catenoid.limit_study(m, args.c_list)
    shrink = catenoid.intersection_shrink_study(m, args.c_list)
    rows = [{"c": a.c, "theta_tilde": a.theta_tilde, "deviation": a.deviation,
             "section_radius": b.max_radius, "radius_bound": b.bound}
            for a, b in zip(limits, shrink)]
    _emit({"lambda": [m.lambda1, m.lambda2], "rows": rows,
           "pi/2 - theta_tilde(last)": math.pi / 2 - limits[-1].theta_tilde})
    return 0


_COMMANDS = {
    "helicoid": cmd_helicoid,
    "catenoid": cmd_catenoid,
    "cross-section": cmd_cross_section,
    "verify": cmd_verify,
    "limit-study": cmd_limit_study,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except E2SurfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
