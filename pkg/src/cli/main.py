"""
Command-line entry point: ``bootperc <subcommand> [options]``.

Every subcommand writes CSV to stdout (or ``--output``) and logs to stderr.
Exit codes: 0 success, 1 usage error, 2 budget or convergence limit,
3 invariant breach.
"""

import argparse
import logging
import sys
from typing import Callable, List, Optional, Sequence

from src.bounds.audit import sandwich_audit
from src.bounds.binomial import binomial_cdf, exact_binomial_tail, median_check
from src.bounds.inequalities import (
    central_binomial_lower,
    chernoff_upper,
    reverse_chernoff_lower,
    small_p_tail_upper,
    weighted_tail_upper,
)
from src.bounds.theorems import dreg_condition_check, theorem1_bounds, torus_condition
from src.cli.output import (
    audit_row,
    bound_row,
    classes_frame,
    critical_row,
    estimates_frame,
    get_writer,
    partition_row,
    probes_frame,
    profile_frame,
    rows_frame,
)
from src.cli.verification import SUITES, run_suites
from src.core.config import get_settings
from src.core.exceptions import (
    BootstrapError,
    ConvergenceError,
    GraphSpecError,
    InvariantBreachError,
)
from src.core.models import ExperimentConfig, WeightedBinomialSpec
from src.engine.dynamics import run_to_fixpoint, stabilization_report
from src.engine.schedules import parse_schedule
from src.graphs.builder import build_graph, write_adjacency_file
from src.graphs.families import Graph, HypercubeGraph
from src.graphs.geometry import components, sphere, sphere_neighbor_profile, sphere_sizes
from src.partitions.audit import independence_audit
from src.partitions.builders import general_sphere_partition, hypercube_sphere_partition
from src.partitions.verifier import verify_hypercube_partition, verify_partition
from src.sampling.estimator import get_estimator
from src.sampling.rng import sample_initial

logger = logging.getLogger(__name__)

BOUND_MODES = (
    "theorem1",
    "sandwich",
    "chernoff",
    "reverse-chernoff",
    "layer4",
    "small-p",
    "central-binomial",
    "tail",
    "median",
    "dreg",
    "torus-condition",
)


class UsageParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _seed(args: argparse.Namespace) -> int:
    return get_settings().seed if args.seed is None else args.seed


def _graph_and_schedule(args: argparse.Namespace):
    g = build_graph(args.graph)
    return g, parse_schedule(args.rule, g)


# ============= Estimation Commands =============


def cmd_scan(args: argparse.Namespace) -> int:
    config = ExperimentConfig(
        graph=args.graph,
        schedule=args.rule,
        p=args.p,
        p_grid=args.p_grid,
        trials=args.trials,
        seed=_seed(args),
        output=args.output,
        workers=args.workers or get_settings().workers,
        coupled=not args.uncoupled,
    )
    try:
        p_values = config.p_values()
    except ValueError as e:
        raise GraphSpecError(str(e)) from e
    g, sched = _graph_and_schedule(args)
    estimates = get_estimator(g, config.workers).scan(
        sched, p_values, config.trials, config.seed, coupled=config.coupled
    )
    get_writer().write(estimates_frame(estimates), config.output)
    return 0


def cmd_pc(args: argparse.Namespace) -> int:
    g, sched = _graph_and_schedule(args)
    estimate = get_estimator(g, args.workers).estimate_pc(
        sched, args.trials, args.tol, _seed(args), args.target, args.method
    )
    writer = get_writer()
    writer.write(rows_frame([critical_row(g.spec, sched.label, estimate)]), args.output)
    if args.probe_log:
        writer.write(probes_frame(estimate.probes), args.probe_log)
    if not estimate.converged:
        logger.warning(f"pc bracket wider than tol: {estimate.reason}")
        return ConvergenceError.exit_code
    return 0


def cmd_window(args: argparse.Namespace) -> int:
    g, sched = _graph_and_schedule(args)
    window = get_estimator(g, args.workers).estimate_window(
        sched, args.alpha, args.trials, args.tol, _seed(args), args.method
    )
    row = {
        "graph": g.spec,
        "schedule": sched.label,
        "alpha": window.alpha,
        "p_alpha": window.lower.pc_hat,
        "p_one_minus_alpha": window.upper.pc_hat,
        "width": window.width,
        "converged": window.lower.converged and window.upper.converged,
    }
    get_writer().write(rows_frame([row]), args.output)
    return 0 if row["converged"] else ConvergenceError.exit_code


# ============= Bounds =============


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise GraphSpecError(f"{args.mode} needs {', '.join(missing)}")


def _single(values: Optional[List[int]], flag: str) -> int:
    if not values or len(values) != 1:
        raise GraphSpecError(f"{flag} takes a single integer here")
    return values[0]


def cmd_bounds(args: argparse.Namespace) -> int:
    mode = args.mode
    writer = get_writer()

    if mode == "theorem1":
        _require(args, "n")
        rows = []
        for n in args.n:
            b = theorem1_bounds(n, args.lambda_lo, args.lambda_hi)
            rows.append(
                {
                    "n": n,
                    "lambda_lo": b.lambda_lo,
                    "lambda_hi": b.lambda_hi,
                    "p_lower": b.p_lower,
                    "p_upper": b.p_upper,
                }
            )
        writer.write(rows_frame(rows), args.output)
        return 0

    if mode == "sandwich":
        frame = sandwich_audit(
            n_values=range(10, args.n_max + 1),
            n_min=10 if args.n_min is None else args.n_min,
            mc_samples=args.mc_samples,
            seed=_seed(args),
        )
        writer.write(frame, args.output)
        return InvariantBreachError.exit_code if frame["violated"].any() else 0

    if mode == "tail":
        _require(args, "n", "p", "m")
        n = _single(args.n, "--n")
        row = {
            "n": n,
            "p": args.p,
            "m": args.m,
            "tail_at_least_m": exact_binomial_tail(n, args.p, args.m),
            "cdf_at_most_m": binomial_cdf(n, args.p, args.m),
        }
        writer.write(rows_frame([row]), args.output)
        return 0

    if mode == "median":
        _require(args, "n", "p")
        check = median_check(_single(args.n, "--n"), args.p)
        row = {"n": check.n, "p": check.p, "below": check.below, "above": check.above}
        writer.write(rows_frame([{**row, "holds": check.holds}]), args.output)
        return 0

    if mode in ("dreg", "torus-condition"):
        _require(args, "k")
        if mode == "dreg":
            _require(args, "graph")
            g = build_graph(args.graph)
            profile = sphere_neighbor_profile(g, args.k, args.samples, _seed(args))
            report = dreg_condition_check(g.degree, args.k, g.num_vertices, profile, args.omega)
        else:
            _require(args, "n", "dims")
            report = torus_condition(_single(args.n, "--n"), args.dims, args.k, args.omega)
        row = {
            "log_n": report.log_n,
            "log_bound_exponent": report.log_bound_exponent,
            "size_ok": report.size_ok,
            "size_margin": report.size_margin,
            "max_f": report.max_f,
            "smallness_limit": report.smallness_limit,
            "smallness_ok": report.smallness_ok,
            "ok": report.ok,
        }
        writer.write(rows_frame([row]), args.output)
        return 0

    if mode == "chernoff":
        _require(args, "n", "p", "t")
        result = chernoff_upper(_single(args.n, "--n"), args.p, args.t, args.side)
    elif mode == "reverse-chernoff":
        _require(args, "n", "delta")
        result = reverse_chernoff_lower(_single(args.n, "--n"), args.delta, args.c, args.n_min)
    elif mode == "layer4":
        _require(args, "d", "p", "t")
        spec = WeightedBinomialSpec(layer_sizes=args.d, p=args.p)
        result = weighted_tail_upper(spec, int(args.t))
    elif mode == "small-p":
        _require(args, "n", "p", "m")
        result = small_p_tail_upper(_single(args.n, "--n"), args.p, args.m)
    else:
        _require(args, "n", "m")
        result = central_binomial_lower(_single(args.n, "--n"), args.m)
    writer.write(rows_frame([bound_row(result)]), args.output)
    return 0


# ============= Geometry and Partitions =============


def _sphere_partition(g: Graph, x: int, k: int, samples: Optional[int], seed: int):
    """Partition S(x,k) with the hypercube construction on Q_n, the greedy one elsewhere."""
    if isinstance(g, HypercubeGraph):
        partition = hypercube_sphere_partition(g.n, x, k)
        return partition, verify_hypercube_partition(g.n, x, k, partition)
    profile = sphere_neighbor_profile(g, k, samples, seed)
    partition = general_sphere_partition(g, x, k, profile)
    return partition, verify_partition(g, sphere(g, x, k).tolist(), partition)


def cmd_partition(args: argparse.Namespace) -> int:
    if args.graph is None and args.n is None:
        raise GraphSpecError("partition needs --graph or --n")
    g = build_graph(args.graph or f"hypercube:{args.n}")
    partition, verdict = _sphere_partition(g, args.x, args.k, args.samples, _seed(args))
    writer = get_writer()
    row = partition_row(g.spec, args.x, args.k, partition, verdict)
    writer.write(rows_frame([row]), args.output)
    if args.emit_classes:
        writer.write(classes_frame(partition), args.emit_classes)
    return 0 if verdict.ok else InvariantBreachError.exit_code


def cmd_audit(args: argparse.Namespace) -> int:
    g = build_graph(args.graph)
    partition, _ = _sphere_partition(g, args.x, args.k, args.samples, _seed(args))
    if not partition.classes:
        raise GraphSpecError(f"S({args.x}, {args.k}) is empty on {g.spec}")
    if args.class_index is None:
        members = max(partition.classes, key=len)
    elif 0 <= args.class_index < partition.num_classes:
        members = partition.classes[args.class_index]
    else:
        raise GraphSpecError(f"class index must lie in [0, {partition.num_classes})")
    sched = parse_schedule(args.rule, g)
    report = independence_audit(g, members, args.rounds, args.p, args.trials, _seed(args), sched)
    get_writer().write(rows_frame([audit_row(g.spec, report)]), args.output)
    return 0


def cmd_profile(args: argparse.Namespace) -> int:
    g = build_graph(args.graph)
    profile = sphere_neighbor_profile(g, args.k, args.samples, _seed(args))
    get_writer().write(profile_frame(profile), args.output)
    return 0


def cmd_graph(args: argparse.Namespace) -> int:
    g = build_graph(args.graph)
    row = {
        "graph": g.spec,
        "family": g.family,
        "num_vertices": g.num_vertices,
        "degree": g.degree,
        "components": int(components(g).max()) + 1,
        "sphere_sizes": " ".join(str(s) for s in sphere_sizes(g, args.x)),
    }
    if args.write:
        write_adjacency_file(g, args.write)
    get_writer().write(rows_frame([row]), args.output)
    return 0


# ============= Dynamics =============


def cmd_trace(args: argparse.Namespace) -> int:
    g, sched = _graph_and_schedule(args)
    if args.initial is not None:
        initial = args.initial
    elif args.p is not None:
        initial = sample_initial(g, args.p, _seed(args), args.trial)
    else:
        raise GraphSpecError("trace needs --initial or --p")
    writer = get_writer()
    if args.stabilization:
        report = stabilization_report(g, initial, sched)
        writer.write(rows_frame([vars(report)]), args.output)
        return 0
    trace = run_to_fixpoint(g, initial, sched, args.max_rounds)
    logger.info(
        f"{sched.label} on {g.spec}: fixpoint after {trace.rounds_to_fixpoint} rounds, "
        f"percolated={trace.percolated}"
    )
    writer.write(trace.to_frame(), args.output)
    return 0


# ============= Verification =============


def cmd_verify(args: argparse.Namespace) -> int:
    frame = run_suites(args.suite, _seed(args))
    get_writer().write(frame, args.output)
    return 0 if frame["passed"].all() else InvariantBreachError.exit_code


# ============= Parser =============


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=None, help="Master seed (default BOOTPERC_SEED)"
    )
    common.add_argument("--workers", type=int, default=None, help="Threads for trial blocks")
    common.add_argument("--output", default=None, help="Write CSV here instead of stdout")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")

    graph = argparse.ArgumentParser(add_help=False)
    graph.add_argument(
        "--graph", required=True, help="e.g. hypercube:10, torus:5^3, file:prism.adj"
    )
    graph.add_argument(
        "--rule",
        "--schedule",
        dest="rule",
        default="majority",
        help="majority, constant:<r> or bootk:<r>,<k>,<t>; t may be auto or eps=<x>",
    )

    critical = argparse.ArgumentParser(add_help=False)
    critical.add_argument("--trials", type=int, default=2000, help="Base trials per probe")
    critical.add_argument("--tol", type=float, default=0.01)
    critical.add_argument("--method", choices=["bisection", "quantile"], default="bisection")

    parser = UsageParser(prog="bootperc", description="Bootstrap percolation experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=UsageParser)

    scan = sub.add_parser("scan", parents=[common, graph], help="Percolation probability over p")
    scan.add_argument("--p", type=float, default=None)
    scan.add_argument("--p-grid", default=None, help="lo:hi:step, inclusive")
    scan.add_argument("--trials", type=int, default=500)
    scan.add_argument("--uncoupled", action="store_true", help="Independent stream per p")
    scan.set_defaults(handler=cmd_scan)

    pc = sub.add_parser("pc", parents=[common, graph, critical], help="Critical probability")
    pc.add_argument("--target", type=float, default=0.5)
    pc.add_argument("--probe-log", default=None, help="CSV file for the probe log")
    pc.set_defaults(handler=cmd_pc)

    window = sub.add_parser("window", parents=[common, graph, critical], help="Critical window")
    window.add_argument("--alpha", type=float, default=0.1)
    window.set_defaults(handler=cmd_window)

    bounds = sub.add_parser("bounds", parents=[common], help="Bound tables")
    modes = bounds.add_mutually_exclusive_group(required=True)
    for mode in BOUND_MODES:
        modes.add_argument(f"--{mode}", dest="mode", action="store_const", const=mode)
    bounds.add_argument("--n", type=_ints, default=None, help="Integer or comma list")
    bounds.add_argument("--p", type=float, default=None)
    bounds.add_argument("--t", type=float, default=None)
    bounds.add_argument("--m", type=int, default=None)
    bounds.add_argument("--d", type=_ints, default=None, help="Layer sizes d_1,...,d_k")
    bounds.add_argument("--delta", type=float, default=None)
    bounds.add_argument("--c", type=float, default=0.0)
    bounds.add_argument("--side", choices=["upper", "lower"], default="upper")
    bounds.add_argument("--n-min", type=int, default=None)
    bounds.add_argument("--n-max", type=int, default=30)
    bounds.add_argument("--mc-samples", type=int, default=0)
    bounds.add_argument("--lambda-lo", type=float, default=-2.0)
    bounds.add_argument("--lambda-hi", type=float, default=0.5)
    bounds.add_argument("--graph", default=None)
    bounds.add_argument("--k", type=int, default=None)
    bounds.add_argument("--dims", type=int, default=None)
    bounds.add_argument("--omega", type=float, default=1.0)
    bounds.add_argument("--samples", type=int, default=None)
    bounds.set_defaults(handler=cmd_bounds)

    partition = sub.add_parser("partition", parents=[common], help="Sphere partitions")
    partition.add_argument("--graph", default=None)
    partition.add_argument("--n", type=int, default=None, help="Shorthand for hypercube:<n>")
    partition.add_argument("--x", type=int, default=0)
    partition.add_argument("--k", type=int, required=True)
    partition.add_argument("--samples", type=int, default=None)
    partition.add_argument(
        "--emit-classes", metavar="PATH", default=None, help="Write a vertex,class CSV"
    )
    partition.set_defaults(handler=cmd_partition)

    audit = sub.add_parser("audit", parents=[common, graph], help="Independence audit")
    audit.add_argument("--x", type=int, default=0)
    audit.add_argument("--k", type=int, required=True)
    audit.add_argument("--class-index", type=int, default=None)
    audit.add_argument("--rounds", type=int, default=1)
    audit.add_argument("--p", type=float, required=True)
    audit.add_argument("--trials", type=int, default=2000)
    audit.add_argument("--samples", type=int, default=None)
    audit.set_defaults(handler=cmd_audit)

    profile = sub.add_parser("profile", parents=[common], help="Sphere-neighbour profile")
    profile.add_argument("--graph", required=True)
    profile.add_argument("--k", type=int, required=True)
    profile.add_argument("--samples", type=int, default=None)
    profile.set_defaults(handler=cmd_profile)

    info = sub.add_parser("graph", parents=[common], help="Graph summary and export")
    info.add_argument("--graph", required=True)
    info.add_argument("--x", type=int, default=0)
    info.add_argument("--write", default=None, help="Write an adjacency file")
    info.set_defaults(handler=cmd_graph)

    trace = sub.add_parser("trace", parents=[common, graph], help="One run, round by round")
    trace.add_argument("--initial", type=_ints, default=None, help="Comma-separated vertex ids")
    trace.add_argument("--p", type=float, default=None)
    trace.add_argument("--trial", type=int, default=0)
    trace.add_argument("--max-rounds", type=int, default=None)
    trace.add_argument("--stabilization", action="store_true")
    trace.set_defaults(handler=cmd_trace)

    verify = sub.add_parser("verify", parents=[common], help="Invariant suites")
    verify.add_argument("--suite", choices=["all", *SUITES], default="all")
    verify.set_defaults(handler=cmd_verify)

    return parser


def configure_logging(level: Optional[str]) -> None:
    logging.basicConfig(
        level=(level or get_settings().log_level).upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except BootstrapError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except ValueError as e:
        # pydantic ValidationError is a ValueError
        logger.error(f"Invalid arguments: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
