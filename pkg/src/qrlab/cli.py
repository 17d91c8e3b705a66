"""Command-line front door.

Subcommand style, no interactive mode.  Every report is a single JSON
document embedding the tool version, the full parameter echo, the results
with their rigor flags, and the wall-clock time; byte-identical for a
fixed config and seed apart from the wall-clock field.  Exit codes:
0 success/pass, 2 validation error, 3 property violation (a checked
theorem or bound failed), 4 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

import numpy as np

from . import __version__
from . import collimation as coll
from . import dynamics as dyn
from . import experiments as exp
from . import io as qio
from . import logic as lg
from . import qrnum
from .errors import NumericError, PropertyViolation, QrlabError, ValidationError
from .states import Condition, singlet_state

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PROPERTY = 3
EXIT_NUMERIC = 4


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _add_output_options(p: argparse.ArgumentParser):
    p.add_argument("--output", default=None, help="write the JSON report here (default: stdout)")
    p.add_argument("--csv", default=None, help="optional CSV of per-run values")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qrlab",
        description="qr-number laboratory: ranges, logic, collimation, experiments",
    )
    ap.add_argument("--version", action="version", version=f"qrlab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a qr-number at a state")
    p.add_argument("--qr", help="qr-number expression file")
    p.add_argument("--op", help="operator file (shortcut for a linear section)")
    p.add_argument("--condition", help="condition file (with --op)")
    p.add_argument("--state", required=True)
    _add_output_options(p)

    p = sub.add_parser("range", help="range interval of a qr-number over its extent")
    p.add_argument("--qr")
    p.add_argument("--op")
    p.add_argument("--condition")
    p.add_argument("--samples", type=_positive_int, default=2000)
    p.add_argument("--seed", type=int, required=True)
    _add_output_options(p)

    p = sub.add_parser("collimate", help="eps-sharp (optionally strict) collimation report")
    p.add_argument("--op", required=True)
    p.add_argument("--condition", required=True)
    p.add_argument("--interval", nargs=2, type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--samples", type=_positive_int, default=600)
    p.add_argument("--seed", type=int, required=True)
    _add_output_options(p)

    p = sub.add_parser("locate", help="eps-location of an operator in an interval")
    p.add_argument("--op", required=True)
    p.add_argument("--condition", required=True)
    p.add_argument("--interval", nargs=2, type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    _add_output_options(p)

    p = sub.add_parser("heisenberg", help="qr-number Heisenberg inequality check")
    p.add_argument("--op-a", required=True)
    p.add_argument("--op-b", required=True)
    p.add_argument("--interval-a", nargs=2, type=float, required=True)
    p.add_argument("--interval-b", nargs=2, type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--condition", required=True)
    p.add_argument("--samples", type=_positive_int, default=600)
    p.add_argument("--seed", type=int, required=True)
    _add_output_options(p)

    p = sub.add_parser("logic", help="Heyting-algebra checks on a ball poset")
    p.add_argument("--poset", required=True)
    p.add_argument("--check", choices=["lem", "laws"], required=True)
    _add_output_options(p)

    p = sub.add_parser("dynamics", help="Hamilton vs Heisenberg-averaged evolution")
    p.add_argument("--model", choices=["free", "harmonic", "quartic"], required=True)
    p.add_argument("--lam", type=float, default=0.0)
    p.add_argument("--dim", type=int, default=60)
    p.add_argument("--center", required=True, help="center state file")
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--dt", type=float, default=0.005)
    p.add_argument("--samples", type=_positive_int, default=20)
    p.add_argument("--seed", type=int, required=True)
    _add_output_options(p)

    p = sub.add_parser("bell", help="deterministic Bell-Bohm correlation run")
    p.add_argument("--uL", nargs=3, type=float, required=True)
    p.add_argument("--uR", nargs=3, type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--pairs", type=_positive_int, required=True)
    p.add_argument("--fraction", type=float, default=0.1)
    p.add_argument("--center", default=None, help="preparation state file (default: singlet)")
    p.add_argument("--seed", type=int, required=True)
    _add_output_options(p)

    p = sub.add_parser("chsh", help="CHSH combination of Bell-Bohm correlations")
    p.add_argument("--a", nargs=3, type=float, required=True)
    p.add_argument("--a2", nargs=3, type=float, required=True)
    p.add_argument("--b", nargs=3, type=float, required=True)
    p.add_argument("--b2", nargs=3, type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--pairs", type=_positive_int, required=True)
    p.add_argument("--fraction", type=float, default=0.1)
    p.add_argument("--center", default=None)
    p.add_argument("--seed", type=int, required=True)
    _add_output_options(p)

    p = sub.add_parser("dichotomic", help="Born-rule ensemble statistics for a projector")
    p.add_argument("--projector", required=True)
    p.add_argument("--center", required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--runs", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _add_output_options(p)

    p = sub.add_parser("lueders", help="collapse-rule approximation bound")
    p.add_argument("--op-a", required=True)
    p.add_argument("--interval", nargs=2, type=float, required=True)
    p.add_argument("--op-b", required=True)
    p.add_argument("--center", required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--u-condition", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--K", type=float, default=1.0)
    p.add_argument("--samples", type=_positive_int, default=400)
    p.add_argument("--seed", type=int, required=True)
    _add_output_options(p)

    p = sub.add_parser("slit", help="double-slit location structure")
    p.add_argument("--grid-dim", type=int, default=200)
    p.add_argument("--grid-lo", type=float, default=-10.0)
    p.add_argument("--grid-hi", type=float, default=10.0)
    p.add_argument("--peaks", nargs=2, type=float, default=[3.0, -3.0])
    p.add_argument("--width", type=float, default=0.5)
    p.add_argument("--radius", type=float, default=0.01)
    p.add_argument("--i-plus", nargs=2, type=float, default=[2.0, 4.0])
    p.add_argument("--i-minus", nargs=2, type=float, default=[-4.0, -2.0])
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--samples", type=_positive_int, default=600)
    p.add_argument("--seed", type=int, required=True)
    _add_output_options(p)

    return ap


def _load_section(args) -> qrnum.QrNumber:
    if args.qr:
        return qio.load_qrnumber(args.qr)
    if args.op and args.condition:
        return qrnum.QrNumber.linear(
            qio.load_operator(args.op), qio.load_condition(args.condition)
        )
    raise ValidationError("provide --qr, or --op together with --condition")


def _run_eval(args):
    section = _load_section(args)
    rho = qio.load_state(args.state)
    return {"value": qrnum.eval_at(section, rho)}, EXIT_OK


def _run_range(args):
    section = _load_section(args)
    r = qrnum.eval_range(section, samples=args.samples, seed=args.seed)
    return qio.range_to_dict(r), EXIT_OK


def _run_collimate(args):
    op = qio.load_operator(args.op)
    w = qio.load_condition(args.condition)
    fn = coll.is_strictly_eps_sharp if args.strict else coll.is_eps_sharp
    report = fn(op, args.interval, args.eps, w, samples=args.samples, seed=args.seed)
    return qio.collimation_report_to_dict(report), EXIT_OK


def _run_locate(args):
    op = qio.load_operator(args.op)
    w = qio.load_condition(args.condition)
    located = coll.is_eps_located(op, args.interval, args.eps, w)
    return {"located": located, "eps": args.eps, "interval": list(args.interval)}, EXIT_OK


def _run_heisenberg(args):
    a = qio.load_operator(args.op_a)
    b = qio.load_operator(args.op_b)
    w = qio.load_condition(args.condition)
    rec = coll.heisenberg_check(
        a, b, args.interval_a, args.interval_b, args.eps, w,
        samples=args.samples, seed=args.seed,
    )
    result = {
        "both_sharp": rec.both_sharp,
        "lhs": rec.lhs,
        "rhs": rec.rhs,
        "satisfied": rec.satisfied,
        "commutator_inf": rec.commutator_inf,
    }
    code = EXIT_PROPERTY if (rec.both_sharp and not rec.satisfied) else EXIT_OK
    return result, code


def _run_logic(args):
    poset = qio.load_poset(args.poset)
    if args.check == "lem":
        witness = lg.lem_counterexample(poset)
        if witness is None:
            return {"lem_holds": True, "witness": None}, EXIT_OK
        names = ",".join(poset.labels[i] for i in sorted(witness.members))
        return {"lem_holds": False, "witness": f"U={{{names}}}"}, EXIT_OK
    downsets = [lg.TruthValue(poset, s) for s in poset.downsets()]
    triples = 0
    for u in downsets:
        for v in downsets:
            imp = lg.implies(u, v)
            for wtv in downsets:
                triples += 1
                if (lg.meet(wtv, u).members <= v.members) != (wtv.members <= imp.members):
                    return {"laws_hold": False, "triples": triples}, EXIT_PROPERTY
                lhs = lg.meet(u, lg.join(v, wtv))
                rhs = lg.join(lg.meet(u, v), lg.meet(u, wtv))
                if lhs != rhs:
                    return {"laws_hold": False, "triples": triples}, EXIT_PROPERTY
    return {"laws_hold": True, "triples": triples}, EXIT_OK


def _run_dynamics(args):
    model = dyn.ModelSpec(args.dim, args.model, lam=args.lam)
    center = qio.load_state(args.center)
    w = Condition.ball(center, args.radius)
    grid = dyn.time_grid(args.t_max, args.dt)
    ham = dyn.qr_hamilton_evolve(model, w, grid, samples=args.samples, seed=args.seed)
    hei = dyn.heisenberg_average_evolve(model, w, grid, samples=args.samples, seed=args.seed)
    comparison = dyn.compare_evolutions(ham, hei)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["sample_id", "t", "q_hamilton", "p_hamilton", "q_heisenberg", "p_heisenberg"]
            )
            for s in range(ham.n_samples):
                for k, t in enumerate(grid):
                    writer.writerow(
                        [s, t, ham.q[s, k], ham.p[s, k], hei.q[s, k], hei.p[s, k]]
                    )
    result = {
        "sup_dev": comparison.sup_dev,
        "linear_equal": comparison.linear_equal,
        "dev_at_end": float(comparison.dev_curve[-1]),
        "truncation_diag": hei.truncation_diag,
        "truncation_warn": hei.truncation_warn,
        "samples": ham.n_samples,
        "grid_points": int(len(grid)),
    }
    return result, EXIT_OK


def _ensemble(args, pairs_attr: str):
    center = qio.load_state(args.center) if args.center else singlet_state()
    return exp.EnsembleSpec(
        center=center,
        epsilon=args.eps if hasattr(args, "eps") else args.delta,
        pairs=getattr(args, pairs_attr),
        seed=args.seed,
        ontic_fraction=getattr(args, "fraction", 0.0),
    )


def _report_result(report: exp.ExperimentReport, csv_path=None):
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["run", "value"])
            for i, v in enumerate(np.asarray(report.values)):
                writer.writerow([i, v])
    return qio.experiment_report_to_dict(report)


def _run_bell(args):
    report = exp.bell_bohm(args.uL, args.uR, _ensemble(args, "pairs"))
    code = EXIT_OK if report.passed else EXIT_PROPERTY
    return _report_result(report, args.csv), code


def _run_chsh(args):
    res = exp.chsh(args.a, args.a2, args.b, args.b2, _ensemble(args, "pairs"))
    return {"S": res.s_value, "correlations": res.correlations}, EXIT_OK


def _run_dichotomic(args):
    proj = qio.load_operator(args.projector)
    spec = exp.EnsembleSpec(
        center=qio.load_state(args.center),
        epsilon=args.delta,
        pairs=args.runs,
        seed=args.seed,
        ontic_fraction=0.0,
    )
    report = exp.dichotomic_ensemble(proj, spec)
    code = EXIT_OK if report.passed else EXIT_PROPERTY
    return _report_result(report, args.csv), code


def _run_lueders(args):
    a = qio.load_operator(args.op_a)
    b = qio.load_operator(args.op_b)
    center = qio.load_state(args.center)
    w = Condition.ball(center, args.delta)
    u = qio.load_condition(args.u_condition)
    report = exp.lueders_experiment(
        a, args.interval, b, w, u, args.eps, k_const=args.K,
        samples=args.samples, seed=args.seed,
    )
    out = _report_result(report, args.csv)
    out["deviation"] = report.extra["deviation"]
    code = EXIT_OK if report.passed else EXIT_PROPERTY
    return out, code


def _run_slit(args):
    z_op, psi = exp.double_slit_instance(
        args.grid_dim, args.grid_lo, args.grid_hi, tuple(args.peaks), args.width
    )
    w = Condition.ball(psi, args.radius)
    rep = exp.double_slit_location(
        z_op, args.i_plus, args.i_minus, w, args.eps,
        samples=args.samples, seed=args.seed,
    )
    result = {
        "located_union": rep.located_union,
        "located_plus": rep.located_plus,
        "located_minus": rep.located_minus,
        "z_range": qio.range_to_dict(rep.z_range),
        "masses": rep.masses,
    }
    return result, EXIT_OK


_RUNNERS = {
    "eval": _run_eval,
    "range": _run_range,
    "collimate": _run_collimate,
    "locate": _run_locate,
    "heisenberg": _run_heisenberg,
    "logic": _run_logic,
    "dynamics": _run_dynamics,
    "bell": _run_bell,
    "chsh": _run_chsh,
    "dichotomic": _run_dichotomic,
    "lueders": _run_lueders,
    "slit": _run_slit,
}


def _params_echo(args) -> dict:
    skip = {"command", "output", "csv"}
    return {
        k: v for k, v in sorted(vars(args).items()) if k not in skip
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        result, code = _RUNNERS[args.command](args)
    except ValidationError as err:
        print(json.dumps({"error": "validation", "detail": str(err)}), file=sys.stderr)
        return EXIT_VALIDATION
    except PropertyViolation as err:
        print(json.dumps({"error": "property", "detail": str(err)}), file=sys.stderr)
        return EXIT_PROPERTY
    except NumericError as err:
        print(json.dumps({"error": "numeric", "detail": str(err)}), file=sys.stderr)
        return EXIT_NUMERIC
    except QrlabError as err:  # pragma: no cover
        print(json.dumps({"error": "other", "detail": str(err)}), file=sys.stderr)
        return EXIT_VALIDATION
    report = {
        "version": __version__,
        "command": args.command,
        "params": _params_echo(args),
        "result": result,
        "wall_clock_s": time.monotonic() - started,
    }
    text = json.dumps(report, sort_keys=True, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
