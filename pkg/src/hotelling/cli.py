"""Command-line entry point.

Exit codes: 0 success, 1 invalid input, 2 numeric/assertion failure (including
a failed certificate), 3 scan cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from hotelling import constructors, density
from hotelling.game import Mode, Profile
from hotelling.solver import ANALYTIC, DeltaMode, Grid, best_response, epsilon_of
from hotelling.verify import KINDS, GridSpec, ScanCapExceeded, bound_certificate, scan_min_epsilon, write_scan_csv


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    subcommand: str
    dist: str | None = None
    m: int = 3
    delta: float = 1e-6
    mode: str = "distinct"
    grid: int = 200
    seed: int = 0
    gamma: float = 0.01
    out: str | None = None
    format: str = "json"


def load_density(src: str):
    """A named density, a JSON file path, or an inline JSON object."""
    if src in density.NAMED:
        return density.NAMED[src]()
    if src.startswith("logtail:"):
        return constructors.log_tail_full(float(src.split(":", 1)[1]))
    if src.lstrip().startswith("{"):
        return density.loads(src)
    if os.path.exists(src):
        with open(src, encoding="utf-8") as fh:
            return density.loads(fh.read())
    raise UsageError(f"cannot interpret density source {src!r}")


def load_profile(src: str, delta: float, mode: str) -> Profile:
    if os.path.exists(src):
        with open(src, encoding="utf-8") as fh:
            src = fh.read()
    data = json.loads(src)
    if isinstance(data, dict):
        return Profile.from_dict(data)
    return Profile(tuple(data), delta, Mode(mode))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _method(args):
    return ANALYTIC if args.method == "analytic" else Grid(args.n)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hotelling", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp, need_dist=True):
        if need_dist:
            sp.add_argument("--dist", required=True,
                            help="uniform | sawtooth | logtail:<gamma> | JSON file | inline JSON")
        sp.add_argument("--out", default=None)

    d = sub.add_parser("dist", help="emit a density as JSON")
    common(d, need_dist=False)
    g = d.add_mutually_exclusive_group(required=True)
    g.add_argument("--name", choices=sorted(density.NAMED))
    g.add_argument("--gamma", type=float, help="full log-tail density with this gamma")
    g.add_argument("--random-seed", type=int)
    g.add_argument("--list", action="store_true")
    d.add_argument("--k", type=int, default=6)

    s = sub.add_parser("solve", help="construct a profile")
    common(s)
    s.add_argument("--algo", required=True, choices=("equipartition", "sixth", "seventh", "median"))
    s.add_argument("--m", type=int, default=3)
    s.add_argument("--delta", type=float, default=1e-6)

    for name in ("epsilon", "best-response"):
        e = sub.add_parser(name, help="measure epsilon" if name == "epsilon" else "best deviation")
        common(e)
        e.add_argument("--profile", required=True, help="JSON list/object or path")
        e.add_argument("--delta", type=float, default=1e-6)
        e.add_argument("--mode", choices=("distinct", "shared"), default="distinct")
        e.add_argument("--delta-mode", choices=("limit", "finite"), default="limit")
        e.add_argument("--method", choices=("analytic", "grid"), default="analytic")
        e.add_argument("--n", type=int, default=100001)
        if name == "best-response":
            e.add_argument("--candidate", type=int, required=True, help="0-based sorted index")

    sc = sub.add_parser("scan", help="minimum epsilon over grid profiles")
    common(sc)
    sc.add_argument("--m", type=int, default=3)
    sc.add_argument("--grid", type=int, default=200)
    sc.add_argument("--spacing", choices=("uniform", "log"), default="uniform")
    sc.add_argument("--mode", choices=("distinct", "shared"), default="distinct")
    sc.add_argument("--format", choices=("json", "csv"), default="json")
    sc.add_argument("--cap", type=int, default=10**7)

    c = sub.add_parser("certify", help="run a bound certificate")
    c.add_argument("--out", default=None)
    c.add_argument("--kind", required=True, choices=KINDS)
    c.add_argument("--trials", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--k", type=int, default=6, help="segments of the random densities")
    c.add_argument("--m", type=int, default=3)
    c.add_argument("--gamma", type=float, default=0.01)
    c.add_argument("--grid", type=int, default=None)

    x = sub.add_parser("export-plot", help="(z, f(z), F(z)) samples as CSV")
    common(x)
    x.add_argument("--n", type=int, default=1001)
    return p


def _run(args) -> int:
    cmd = args.subcommand
    if cmd == "dist":
        if args.list:
            _emit(_dumps(sorted(density.NAMED)), args.out)
            return 0
        if args.name:
            dist = density.NAMED[args.name]()
        elif args.gamma is not None:
            dist = constructors.log_tail_full(args.gamma)
        else:
            dist = density.random_density(args.random_seed, args.k)
        _emit(_dumps(density.density_to_dict(dist)), args.out)
        return 0

    if cmd == "certify":
        cert = bound_certificate(args.kind, trials=args.trials, seed=args.seed, k=args.k,
                                 m=args.m, gamma=args.gamma, grid=args.grid)
        _emit(_dumps(cert.to_dict()), args.out)
        return 0 if cert.passed else 2

    dist = load_density(args.dist)
    if cmd == "solve":
        algo = args.algo
        if algo == "equipartition":
            prof = constructors.equipartition(dist, args.m)
        elif algo == "sixth":
            prof = constructors.three_candidate_sixth(dist, args.delta)
        elif algo == "seventh":
            prof = constructors.variant_seventh(dist)
        else:
            prof = constructors.median_pair(dist, args.delta)
        _emit(_dumps(prof.to_dict()), args.out)
    elif cmd in ("epsilon", "best-response"):
        prof = load_profile(args.profile, args.delta, args.mode)
        if cmd == "epsilon":
            rep = epsilon_of(dist, prof, _method(args), DeltaMode(args.delta_mode))
            _emit(_dumps(rep.to_dict()), args.out)
        else:
            out = best_response(dist, prof, args.candidate, _method(args), DeltaMode(args.delta_mode))
            _emit(_dumps(out.to_dict()), args.out)
    elif cmd == "scan":
        res = scan_min_epsilon(dist, args.m, GridSpec(args.grid, args.spacing), Mode(args.mode),
                               cap=args.cap, keep_table=args.format == "csv")
        if args.format == "csv":
            if not args.out:
                raise UsageError("csv output needs --out")
            write_scan_csv(res, args.out)
        else:
            _emit(_dumps(res.to_dict()), args.out)
    elif cmd == "export-plot":
        z = np.arange(args.n) / (args.n - 1)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["z", "f", "F"])
        for zi, fi, Fi in zip(z, dist.pdf(z), dist.cdf(z)):
            w.writerow([repr(float(zi)), repr(float(fi)), repr(float(Fi))])
        _emit(buf.getvalue(), args.out)
    return 0


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _run(args)
    except ScanCapExceeded as exc:
        print(f"hotelling: {exc}", file=sys.stderr)
        return 3
    except (AssertionError, ArithmeticError) as exc:
        print(f"hotelling: numeric failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as exc:
        print(f"hotelling: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
