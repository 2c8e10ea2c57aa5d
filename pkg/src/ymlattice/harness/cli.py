"""Command-line interface: ``ymlattice <subcommand> [options]``."""

import argparse
import logging
import os
import sys

import numpy as np

from ..clebsch import check_bracket_correspondence, check_gamma_symplecto, project_R0
from ..elliptic import decompose_cotangent, decompose_tangent
from ..errors import ConfigError, YMLatticeError
from ..gauge import PhasePointT, smooth_connection
from ..dynamics import evolve_R, evolve_T
from ..lattice import build_torus
from ..symplectic import builtin_observables, poisson_T
from .config import RunConfig, describe_keys, load_config
from .snapshot import read_snapshot, write_snapshot
from .suite import render_report, run_suite, suite_passed

log = logging.getLogger("ymlattice")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value configuration file")
    common.add_argument("--seed", type=int, metavar="U64", help="override the configured seed")
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--quiet", action="store_true", help="print only the summary")
    common.add_argument("--jobs", type=int, default=1, metavar="K", help="run suite items concurrently")

    p = _Parser(
        prog="ymlattice",
        description="Lattice Yang-Mills phase spaces: verification suite and tools.",
        epilog="configuration keys:\n" + describe_keys(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    sub.add_parser("verify", parents=[common], help="run the invariant suite (exit 1 on any failure)")
    sub.add_parser("evolve-r", parents=[common], help="leapfrog run of the (A, p) system, writes CSV")
    sub.add_parser("evolve-t", parents=[common], help="midpoint run of the (E, B) system, writes CSV")
    b = sub.add_parser("bracket", parents=[common], help="Poisson bracket of two built-in observables")
    b.add_argument("f", help="observable name")
    b.add_argument("g", help="observable name")
    b.add_argument("--point", nargs=3, metavar=("A", "E", "B"), help="snapshot files of the point")
    sub.add_parser("clebsch-check", parents=[common], help="gamma^* Omega = sigma and bracket correspondence")
    d = sub.add_parser("decompose", parents=[common], help="orthogonal split of a 1- or 2-cochain snapshot")
    d.add_argument("snapshot", help="cochain to split")
    d.add_argument("--connection", required=True, metavar="PATH", help="connection snapshot")
    return p


def _config(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    over = {}
    if args.seed is not None:
        over["seed"] = args.seed
    if args.out is not None:
        over["out_dir"] = args.out
    return cfg.with_overrides(**over) if over else cfg


def _outpath(cfg, name):
    os.makedirs(cfg.out_dir, exist_ok=True)
    return os.path.join(cfg.out_dir, name)


def _say(args, text):
    if not args.quiet:
        print(text)


def cmd_verify(args, cfg):
    results = run_suite(cfg, jobs=max(1, args.jobs))
    report = render_report(results, cfg)
    if args.out:
        with open(_outpath(cfg, "verify_report.txt"), "w", encoding="utf-8") as fh:
            fh.write(report)
    if args.quiet:
        print(report.rstrip().splitlines()[-1])
    else:
        sys.stdout.write(report)
    return 0 if suite_passed(results) else 1


def _initial_R(cfg):
    L = cfg.lattice_n
    cx = build_torus(L, L, L, cfg.h)
    rng = np.random.default_rng([cfg.seed, 201])
    A = smooth_connection(cx, cfg.algebra_n, 0.5, seed=cfg.seed)
    p = project_R0(A, 0.3 * cx.random(1, cfg.algebra_n, seed=rng), cfg.cg_tol).p
    return A, p


def cmd_evolve_r(args, cfg):
    A, p = _initial_R(cfg)
    A1, p1, rec = evolve_R(A, p, cfg.dt, cfg.steps)
    path = _outpath(cfg, "evolve_r.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        rec.to_csv(fh)
    write_snapshot(_outpath(cfg, "A.yms"), A1)
    write_snapshot(_outpath(cfg, "p.yms"), p1)
    _say(args, f"wrote {path}; relative energy drift {rec.energy_drift():.3e}")
    return 0


def _random_T(cfg):
    L = cfg.lattice_n
    cx = build_torus(L, L, L, cfg.h)
    rng = np.random.default_rng([cfg.seed, 202])
    n = cfg.algebra_n
    return PhasePointT(cx.random(1, n, seed=rng, scale=0.5), cx.random(1, n, seed=rng), cx.random(2, n, seed=rng))


def cmd_evolve_t(args, cfg):
    pt, rec = evolve_T(_random_T(cfg), cfg.dt, cfg.steps, cfg.convention)
    path = _outpath(cfg, "evolve_t.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        rec.to_csv(fh)
    write_snapshot(_outpath(cfg, "E.yms"), pt.E)
    write_snapshot(_outpath(cfg, "B.yms"), pt.B)
    _say(args, f"wrote {path}; relative energy drift {rec.energy_drift():.3e}")
    return 0


def cmd_bracket(args, cfg):
    if args.point:
        A, E, B = (read_snapshot(f, cfg.h) for f in args.point)
        pt = PhasePointT(A, E, B)
    else:
        pt = _random_T(cfg)
    obs = {o.name: o for o in builtin_observables(pt.A, seed=cfg.seed)}
    for name in (args.f, args.g):
        if name not in obs:
            print(f"unknown observable {name!r}; choose from {', '.join(obs)}", file=sys.stderr)
            return 2
    print(f"{{{args.f}, {args.g}}} = {poisson_T(obs[args.f], obs[args.g], pt):.17g}")
    return 0


def cmd_clebsch(args, cfg):
    L = cfg.lattice_n
    cx = build_torus(L, L, L, cfg.h)
    rng = np.random.default_rng([cfg.seed, 203])
    A = cx.random(1, cfg.algebra_n, seed=rng, scale=0.5)
    p = project_R0(A, cx.random(1, cfg.algebra_n, seed=rng), cfg.cg_tol).p
    r = check_gamma_symplecto(A, p, trials=32, seed=cfg.seed, tol=cfg.cg_tol)
    ok = r <= 1e-7
    _say(args, f"gamma^* Omega - sigma: {r:.3e} ({'PASS' if ok else 'FAIL'})")
    obs = builtin_observables(A, seed=cfg.seed)
    for i, f in enumerate(obs):
        for g in obs[i + 1 :]:
            v = check_bracket_correspondence(f, g, A, p, cfg.cg_tol)
            ok &= v <= 1e-7
            _say(args, f"bracket correspondence {f.name}, {g.name}: {v:.3e}")
    print("clebsch-check: " + ("PASS" if ok else "FAIL"))
    return 0 if ok else 1


def cmd_decompose(args, cfg):
    A = read_snapshot(args.connection, cfg.h)
    c = read_snapshot(args.snapshot, cfg.h)
    if c.degree == 1:
        parts = decompose_tangent(A, c, cfg.cg_tol)
        names = ("xi.yms", "y.yms")
    elif c.degree == 2:
        parts = decompose_cotangent(A, c, cfg.cg_tol)
        names = ("lam.yms", "w.yms")
    else:
        print("decompose needs a 1- or 2-cochain", file=sys.stderr)
        return 2
    for part, name in zip(parts, names):
        write_snapshot(_outpath(cfg, name), part)
    _say(args, "wrote " + ", ".join(_outpath(cfg, nm) for nm in names))
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "evolve-r": cmd_evolve_r,
    "evolve-t": cmd_evolve_t,
    "bracket": cmd_bracket,
    "clebsch-check": cmd_clebsch,
    "decompose": cmd_decompose,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s")
    try:
        cfg = _config(args)
    except (ConfigError, OSError) as exc:
        print(f"ymlattice: {exc}", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args, cfg)
    except (YMLatticeError, OSError) as exc:
        print(f"ymlattice: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
