"""Command-line front end.

Exit codes: 0 success, 1 verification or decode failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .broadcast import (
    BroadcastScheme,
    ThetaBudgetError,
    UncoveredRegimeError,
    broadcast_simulate,
    build_broadcast_scheme,
    compute_theta,
    optimal_broadcast_cost,
)
from .codes import MODES, LinearCode, NotSubcodeError, enumerate_k_cores, is_mrsc
from .gf import FieldError, field_of_order, make_field
from .linalg import FieldMatrix
from .mrsc import (
    ConstructionError,
    SandwichSpec,
    construct_linearized_mrsc,
    construct_random_mrsc,
    construct_sandwiched_linearized,
    construct_sandwiched_random,
    construct_striped_mrsc,
)
from .scenarios import ScenarioConfig, run_scenario
from .update import P2PScheme, build_p2p_scheme, p2p_simulate, striped_vector

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
MRSC_METHODS = ("random", "linearized", "striped", "sandwich-random", "sandwich-linearized")


class Failure(Exception):
    """A verification or decode failure; carries the report to print."""

    def __init__(self, report: dict):
        super().__init__(report.get("error", "failure"))
        self.report = report


def _load(path: str) -> dict:
    return json.loads(Path(path).read_text())


def _save(path: str | None, obj: dict) -> None:
    if path:
        Path(path).write_text(json.dumps(obj, indent=1))


def _emit(args, report: dict) -> None:
    if args.json:
        print(json.dumps(report, indent=1, default=str))
        return
    width = max(len(k) for k in report) if report else 0
    for k, v in report.items():
        if isinstance(v, dict):
            v = json.dumps(v, default=str)
        print(f"{k:<{width}}  {v}")


# ----------------------------------------------------------------------
# handlers
# ----------------------------------------------------------------------

def cmd_field_show(args) -> dict:
    if args.q is not None:
        F = field_of_order(args.q)
    else:
        F = make_field(args.p, args.m, args.modulus)
    return {"field": repr(F), "p": F.p, "m": F.m, "order": F.order,
            "modulus": list(F.modulus), "generator": F.generator,
            "x_primitive": F.m > 1 and F.is_primitive(F.p)}


def cmd_verify_mrsc(args) -> dict:
    C = LinearCode.from_json(_load(args.code))
    C0 = LinearCode.from_json(_load(args.super))
    v = is_mrsc(C, C0, args.mode, workers=args.threads)
    report = {"is_mrsc": v.is_mrsc, "mode": v.mode, "n": C.n, "k": C.k, "t": C0.k,
              "subsets_checked": v.subsets_checked,
              "witness": list(v.witness.indices) if v.witness is not None else None}
    if v.per_mode:
        report["per_mode"] = v.per_mode
    if not v.is_mrsc:
        raise Failure(report)
    return report


def cmd_cores(args) -> dict:
    C = LinearCode.from_json(_load(args.code))
    cores = [list(S.indices) for S in enumerate_k_cores(C, args.k)]
    return {"n": C.n, "k": args.k, "count": len(cores), "cores": cores[: args.limit]}


def cmd_mrsc_build(args) -> dict:
    C0 = LinearCode.from_json(_load(args.input))
    m = args.method
    if m == "random":
        C = construct_random_mrsc(C0, args.k, seed=args.seed, max_tries=args.max_tries,
                                  workers=args.threads)
    elif m == "linearized":
        C = construct_linearized_mrsc(C0, args.k)
    elif m == "striped":
        a = striped_vector(C0.generator)
        if a is None:
            raise ValueError("striped method needs the supercode generator diag(a, ..., a)")
        if args.k % 2:
            raise ValueError("striped construction gives even dimension 2eps")
        C = construct_striped_mrsc(a, C0.k, args.k // 2, C0.field)
    else:
        if not args.sub:
            raise ValueError(f"{m} needs --sub")
        spec = SandwichSpec(C0, LinearCode.from_json(_load(args.sub)), args.k)
        if m == "sandwich-random":
            C = construct_sandwiched_random(spec, seed=args.seed, max_tries=args.max_tries,
                                            extension_degree=args.extension_degree,
                                            workers=args.threads)
        else:
            C = construct_sandwiched_linearized(spec)
    out = C.to_json()
    _save(args.out, out)
    return {"method": m, "seed": args.seed, "field": repr(C.field), "n": C.n, "k": C.k,
            "certificate": C.certificate.to_json() if C.certificate else None, "out": args.out}


def cmd_p2p_build(args) -> dict:
    A = FieldMatrix.from_json(_load(args.A))
    scheme = build_p2p_scheme(A, args.eps, args.method, seed=args.seed,
                              max_tries=args.max_tries, workers=args.threads)
    _save(args.out, scheme.to_json())
    return {"method": scheme.method, "seed": args.seed, "field": repr(scheme.field),
            "cost": scheme.cost, "bound": scheme.bound,
            "certificate": scheme.certificate.to_json() if scheme.certificate else None,
            "out": args.out}


def cmd_p2p_simulate(args) -> dict:
    scheme = P2PScheme.from_json(_load(args.scheme))
    rep = p2p_simulate(scheme, args.trials, args.seed).to_json()
    if rep["failed"]:
        raise Failure(rep)
    return rep


def _matrices(args):
    return FieldMatrix.from_json(_load(args.A)), FieldMatrix.from_json(_load(args.B))


def cmd_bcast_theta(args) -> dict:
    A, B = _matrices(args)
    report = compute_theta(A, B, args.eps, budget=args.budget, workers=args.threads).to_json()
    opt = optimal_broadcast_cost(A, B, args.eps, budget=args.budget, workers=args.threads)
    report.update(regime=opt.regime, optimal_cost=opt.cost, individual_cost=opt.individual)
    return report


def cmd_bcast_build(args) -> dict:
    A, B = _matrices(args)
    scheme = build_broadcast_scheme(A, B, args.eps, args.seed, route=args.route,
                                    extension_degree=args.extension_degree,
                                    max_tries=args.max_tries, budget=args.budget,
                                    workers=args.threads)
    _save(args.out, scheme.to_json())
    return {"regime": scheme.regime, "seed": args.seed, "field": repr(scheme.field),
            "theta": scheme.theta, "cost": scheme.cost,
            "individual_cost": scheme.individual_cost,
            "saving_percent": round(100 * scheme.saving, 3),
            "certificates": {k: v.to_json() for k, v in scheme.certificates.items()},
            "out": args.out}


def cmd_bcast_simulate(args) -> dict:
    scheme = BroadcastScheme.from_json(_load(args.scheme))
    sim = broadcast_simulate(scheme, args.trials, args.seed)
    rep = sim.to_json()
    rep["saving_percent"] = round(100 * scheme.saving, 3)
    if not sim.ok:
        raise Failure(rep)
    return rep


def cmd_scenario_run(args) -> dict:
    cfg = ScenarioConfig.load(args.config)
    if args.trials is not None:
        cfg.trials = args.trials
    if args.seed is not None:
        cfg.seed = args.seed
    cfg.workers = args.threads
    report = run_scenario(cfg)
    out = report.to_json()
    if not report.ok:
        raise Failure(out)
    return out


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=1, help="worker processes for subset scans")

    parser = argparse.ArgumentParser(prog="sparse-update", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def leaf(sub, name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    g = groups.add_parser("field").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "show", cmd_field_show, "describe a finite field")
    p.add_argument("--q", type=int)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--modulus", type=int, nargs="+")

    g = groups.add_parser("codes").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "verify-mrsc", cmd_verify_mrsc, "check that a code is an MRSC of a supercode")
    p.add_argument("--code", required=True)
    p.add_argument("--super", required=True)
    p.add_argument("--mode", choices=MODES + ("all",), default="definition1")
    p = leaf(g, "cores", cmd_cores, "list the k-cores of a code's dual")
    p.add_argument("--code", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--limit", type=int, default=50)

    g = groups.add_parser("mrsc").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "build", cmd_mrsc_build, "construct a maximally recoverable subcode")
    p.add_argument("--method", choices=MRSC_METHODS, default="random")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--sub")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-tries", type=int, default=100)
    p.add_argument("--extension-degree", type=int, default=1)
    p.add_argument("--out")

    g = groups.add_parser("p2p").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "build", cmd_p2p_build, "build a point-to-point update scheme")
    p.add_argument("--A", required=True)
    p.add_argument("--eps", type=int, required=True)
    p.add_argument("--method", default="auto", choices=("auto", "random", "linearized", "striped"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-tries", type=int, default=100)
    p.add_argument("--out")
    p = leaf(g, "simulate", cmd_p2p_simulate, "run random sparse updates through a scheme")
    p.add_argument("--scheme", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    g = groups.add_parser("bcast").add_subparsers(dest="cmd", required=True)
    for name, func, help_ in (("theta", cmd_bcast_theta, "compute theta and the optimal cost"),
                              ("build", cmd_bcast_build, "build a two-receiver broadcast scheme")):
        p = leaf(g, name, func, help_)
        p.add_argument("--A", required=True)
        p.add_argument("--B", required=True)
        p.add_argument("--eps", type=int, required=True)
        p.add_argument("--budget", type=int, default=500_000)
        if name == "build":
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--route", choices=("random", "linearized"), default="random")
            p.add_argument("--extension-degree", type=int, default=1)
            p.add_argument("--max-tries", type=int, default=100)
            p.add_argument("--out")
    p = leaf(g, "simulate", cmd_bcast_simulate, "run random sparse updates through both receivers")
    p.add_argument("--scheme", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    g = groups.add_parser("scenario").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "run", cmd_scenario_run, "run a storage scenario end to end")
    p.add_argument("--config", required=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        report = args.func(args)
    except Failure as f:
        _emit(args, f.report)
        return EXIT_FAIL
    except ConstructionError as e:
        _emit(args, {"error": str(e),
                     "witness": list(e.witness.indices) if e.witness is not None else None,
                     "violations": e.violations})
        return EXIT_FAIL
    except (ValueError, FieldError, NotSubcodeError, ThetaBudgetError, UncoveredRegimeError,
            KeyError, TypeError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    _emit(args, report)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
