"""Command-line interface for cactus multipacking tools."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from collections.abc import Callable, Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any, NoReturn

from cactus_multipacking.benchmark import bench_linear
from cactus_multipacking.campaign import run_campaign
from cactus_multipacking.config import (
    DEFAULT_NODE_LIMIT,
    BenchConfig,
    CampaignConfig,
    OracleBudget,
)
from cactus_multipacking.dot_export import export_dot
from cactus_multipacking.exact_oracles import (
    Broadcast,
    exact_domination,
    exact_gamma_b,
    exact_mp,
    lp_fractional,
    verify_broadcast,
    verify_fractional_weights,
)
from cactus_multipacking.exceptions import (
    CactusMPError,
    GraphInputError,
    InvariantViolation,
)
from cactus_multipacking.graph_core import Graph, radius_center, validate_cactus
from cactus_multipacking.graph_families import RandomCactusParams, gen_gk, random_cactus
from cactus_multipacking.graph_io import format_graph, load_graph
from cactus_multipacking.hyperbolicity import delta_hyperbolicity
from cactus_multipacking.multipack_construct import (
    approx_broadcast,
    approx_multipacking,
    approx_to_json,
    verify_multipacking,
)
from cactus_multipacking.rational_lp import format_rational, parse_rational
from cactus_multipacking.utils import setup_signal_handler, write_output

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"

# Exit codes
EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2


class UsageError(CactusMPError):
    """Bad command-line usage."""


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting with status 2."""

    def error(self, message: str) -> NoReturn:
        """Print usage and raise UsageError."""
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        msg = f"expected comma-separated integers, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from e


def _fraction(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as e:
        msg = f"expected a rational like 1/2, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from e


def _powers(text: str) -> Broadcast:
    """Parse ``v:p,v:p`` into a broadcast."""
    powers: dict[int, int] = {}
    try:
        for item in text.split(","):
            if not item.strip():
                continue
            v, p = item.split(":")
            powers[int(v)] = int(p)
    except ValueError as e:
        msg = f"expected vertex:power pairs like 6:4,21:4, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from e
    return Broadcast(powers)


def _dump(obj: Any, fmt: str = "json") -> str:  # noqa: ANN401
    """Render a result object as JSON or as ``key: value`` lines."""
    if fmt == "text" and isinstance(obj, dict):
        return "".join(f"{k}: {json.dumps(v)}\n" for k, v in obj.items())
    return json.dumps(obj, indent=2) + "\n"


def _budget(args: argparse.Namespace) -> OracleBudget:
    return OracleBudget(args.budget)


def _load(args: argparse.Namespace) -> Graph:
    return load_graph(args.graph)


# Subcommand handlers: each returns an exit code.


def cmd_gen(args: argparse.Namespace) -> int:
    """Generate G_k or a seeded random cactus."""
    if args.family == "gk":
        g = gen_gk(args.k).graph
    else:
        params = RandomCactusParams(
            n=args.n,
            cycle_prob=args.cycle_prob,
            max_cycle_len=args.max_cycle_len,
            seed=args.seed,
        )
        g = random_cactus(params)
    logger.info("Generated graph with %d vertices and %d edges", g.n, g.m)
    write_output(format_graph(g, args.format), args.output)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    """Print the cactus certificate."""
    g = _load(args)
    cert = validate_cactus(g)
    obj = {
        "is_cactus": cert.is_cactus,
        "blocks": [{"kind": b.kind, "vertices": list(b.vertices)} for b in cert.blocks],
        "witness": None if cert.witness is None else [list(c) for c in cert.witness],
    }
    write_output(_dump(obj, args.format), args.output)
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    """Radius, diameter, centers and cactus verdict."""
    g = _load(args)
    cert = validate_cactus(g)
    report = radius_center(g, args.method, cert)
    obj = {
        "n": g.n,
        "m": g.m,
        "is_cactus": cert.is_cactus,
        "cycles": len(cert.cycles),
        "radius": report.radius,
        "diameter": report.diameter,
        "centers": list(report.centers),
        "eccentricities": list(report.eccentricities),
    }
    write_output(_dump(obj, args.format), args.output)
    return EXIT_OK


def cmd_approx(args: argparse.Namespace) -> int:
    """Run the multipacking construction (optionally with the radial broadcast)."""
    g = _load(args)
    if args.broadcast:
        cert = approx_broadcast(g)
        obj = cert.to_json()
        verified = cert.multipacking.verified
    else:
        mp, trace = approx_multipacking(g)
        obj = approx_to_json(mp, trace)
        verified = mp.verified
    write_output(_dump(obj, args.format), args.output)
    if not verified:
        logger.error("Constructed set is not a multipacking")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_exact(args: argparse.Namespace) -> int:
    """Exact MP, gamma_b or domination number."""
    g = _load(args)
    budget = _budget(args)
    if args.quantity == "mp":
        obj = exact_mp(g, budget).to_json()
    elif args.quantity == "gb":
        obj = exact_gamma_b(g, budget).to_json()
    else:
        obj = exact_domination(g, budget).to_json()
    if obj["status"] != "exact":
        logger.warning(
            "Budget of %d nodes exhausted; reporting bounds", budget.node_limit
        )
    write_output(_dump(obj, args.format), args.output)
    return EXIT_OK


def cmd_lp(args: argparse.Namespace) -> int:
    """Solve the fractional broadcast LP exactly."""
    g = _load(args)
    write_output(_dump(lp_fractional(g).to_json(), args.format), args.output)
    return EXIT_OK


def cmd_weights_check(args: argparse.Namespace) -> int:
    """Check a fractional multipacking read from a JSON weights file."""
    g = _load(args)
    try:
        raw = json.loads(Path(args.weights).read_text())
        weights = {int(v): parse_rational(str(x)) for v, x in raw.items()}
    except (OSError, ValueError, AttributeError, ZeroDivisionError) as e:
        msg = f"cannot read weights from {args.weights}: {e}"
        raise GraphInputError(msg) from e
    check = verify_fractional_weights(g, weights)
    obj: dict[str, Any] = {
        "feasible": check.feasible,
        "value": format_rational(check.value),
        "violation": None,
    }
    if check.violation is not None:
        v, r, load = check.violation
        obj["violation"] = {"vertex": v, "radius": r, "load": format_rational(load)}
    write_output(_dump(obj, args.format), args.output)
    return EXIT_OK


def cmd_hyperbolicity(args: argparse.Namespace) -> int:
    """Exact four-point delta."""
    g = _load(args)
    write_output(_dump(delta_hyperbolicity(g).to_json(), args.format), args.output)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    """Verify a multipacking or a broadcast given on the command line."""
    g = _load(args)
    obj: dict[str, Any]
    if args.kind == "mp":
        if args.set is None:
            msg = "verify mp needs --set"
            raise UsageError(msg)
        for v in args.set:
            if not 0 <= v < g.n:
                msg = f"vertex {v} is not in the graph"
                raise GraphInputError(msg)
        check = verify_multipacking(g, args.set)
        obj = {"ok": check.ok, "size": len(set(args.set)), "violation": None}
        if check.violation is not None:
            v, s, count = check.violation
            obj["violation"] = {"vertex": v, "radius": s, "count": count}
    else:
        if args.powers is None:
            msg = "verify broadcast needs --powers"
            raise UsageError(msg)
        bc = verify_broadcast(g, args.powers)
        obj = {
            "dominating": bc.dominating,
            "efficient": bc.efficient,
            "cost": bc.cost,
            "undominated": list(bc.undominated),
        }
    write_output(_dump(obj, args.format), args.output)
    return EXIT_OK


def _campaign_config(args: argparse.Namespace) -> CampaignConfig:
    base = CampaignConfig.from_json(args.config) if args.config else CampaignConfig()
    overrides: dict[str, Any] = {
        "gk_range": None if args.gk is None else tuple(args.gk),
        "random_count": args.random_count,
        "random_min_n": args.min_n,
        "random_max_n": args.max_n,
        "cycle_prob": args.cycle_prob,
        "max_cycle_len": args.max_cycle_len,
        "seed": args.seed,
        "threads": args.threads,
        "budget": None if args.budget is None else OracleBudget(args.budget),
    }
    if args.trees_only:
        overrides["trees_only"] = True
    if args.no_exact:
        overrides["run_exact"] = False
    given = {k: v for k, v in overrides.items() if v is not None}
    return dataclasses.replace(base, **given)


def cmd_campaign(args: argparse.Namespace) -> int:
    """Run a bound-checking campaign; exit 2 on any violation."""
    config = _campaign_config(args)
    setup_signal_handler()
    report = run_campaign(config, args.timeout_rows)
    text = report.to_csv() if args.format == "csv" else _dump(report.to_json())
    write_output(text, args.output)
    if args.csv is not None:
        write_output(report.to_csv(), args.csv)
    if report.violations:
        for instance, message in report.violations:
            logger.error("Violation in %s: %s", instance, message)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    """Time the construction; exit 2 if time per vertex grows too fast."""
    config = BenchConfig(
        sizes=tuple(args.sizes),
        seed=args.seed,
        cycle_prob=args.cycle_prob,
        max_cycle_len=args.max_cycle_len,
        verify=args.verify,
        repeats=args.repeats,
        max_growth=args.max_growth,
    )
    setup_signal_handler()
    report = bench_linear(config)
    text = report.to_text() if args.format == "text" else _dump(report.to_json())
    write_output(text, args.output)
    if not report.ok:
        logger.error("Time per vertex grew beyond %.1fx", config.max_growth)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_dot(args: argparse.Namespace) -> int:
    """Render the graph as DOT with optional highlights."""
    g = _load(args)
    members: list[int] = list(args.set or [])
    if args.approx:
        members = list(approx_multipacking(g)[0].members)
    write_output(export_dot(g, members, args.powers), args.output)
    return EXIT_OK


def _add_graph_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "graph",
        nargs="?",
        default="-",
        help="Graph file (JSON or edge list); '-' reads stdin",
    )


def _add_format(parser: argparse.ArgumentParser, choices: Sequence[str]) -> None:
    parser.add_argument(
        "--format", choices=list(choices), default=choices[0], help="Output format"
    )


def _add_generator_args(
    parser: argparse.ArgumentParser, defaults: bool = True
) -> None:
    """Flags shared by every command that grows random cacti."""
    parser.add_argument(
        "--seed", type=int, default=0 if defaults else None, help="Random seed"
    )
    parser.add_argument(
        "--cycle-prob",
        type=_fraction,
        default=Fraction(1, 2) if defaults else None,
        help="Probability of attaching a cycle instead of an edge",
    )
    parser.add_argument(
        "--max-cycle-len",
        type=int,
        default=7 if defaults else None,
        help="Longest attached cycle",
    )


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per tool."""
    parser = _Parser(
        prog="cactus-mp",
        description="Multipacking and broadcast domination tools for cactus graphs",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument(
        "-o", "--output", type=Path, help="Write the result here instead of stdout"
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument(
        "-v", "--verbose", action="store_true", help="Debug logging"
    )
    verbosity.add_argument(
        "-q", "--quiet", action="store_true", help="Warnings and errors only"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(
        name: str, handler: Callable[[argparse.Namespace], int], help_text: str
    ) -> argparse.ArgumentParser:
        p = sub.add_parser(
            name, help=help_text, formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )
        p.set_defaults(handler=handler)
        return p

    p = add("gen", cmd_gen, "Generate a graph")
    p.add_argument("family", choices=["gk", "random"])
    p.add_argument("--k", type=int, default=1, help="Index of G_k")
    p.add_argument("--n", type=int, default=20, help="Vertices of the random cactus")
    _add_generator_args(p)
    _add_format(p, ["json", "edgelist"])

    p = add("validate", cmd_validate, "Cactus certificate")
    _add_graph_arg(p)
    _add_format(p, ["json", "text"])

    p = add("stats", cmd_stats, "Radius, diameter and centers")
    _add_graph_arg(p)
    p.add_argument("--method", choices=["auto", "brute", "linear"], default="auto")
    _add_format(p, ["json", "text"])

    p = add("approx", cmd_approx, "Linear-time multipacking construction")
    _add_graph_arg(p)
    p.add_argument(
        "--broadcast", action="store_true", help="Also give the radial broadcast"
    )
    _add_format(p, ["json", "text"])

    p = add("exact", cmd_exact, "Exact MP, gamma_b or domination number")
    p.add_argument("quantity", choices=["mp", "gb", "dom"])
    _add_graph_arg(p)
    p.add_argument(
        "--budget", type=int, default=DEFAULT_NODE_LIMIT, help="Search node limit"
    )
    _add_format(p, ["json", "text"])

    p = add("lp", cmd_lp, "Fractional broadcast LP and its dual")
    _add_graph_arg(p)
    _add_format(p, ["json", "text"])

    p = add("weights-check", cmd_weights_check, "Check fractional multipacking weights")
    p.add_argument("weights", help="JSON object mapping vertex ids to rationals")
    _add_graph_arg(p)
    _add_format(p, ["json", "text"])

    p = add("hyperbolicity", cmd_hyperbolicity, "Gromov delta (four-point condition)")
    _add_graph_arg(p)
    _add_format(p, ["json", "text"])

    p = add("verify", cmd_verify, "Verify a multipacking or a broadcast")
    p.add_argument("kind", choices=["mp", "broadcast"])
    _add_graph_arg(p)
    p.add_argument("--set", type=_int_list, help="Comma-separated vertex ids")
    p.add_argument("--powers", type=_powers, help="Comma-separated vertex:power pairs")
    _add_format(p, ["json", "text"])

    p = add("campaign", cmd_campaign, "Bound-checking campaign")
    p.add_argument("--config", type=Path, help="JSON campaign configuration")
    p.add_argument("--gk", type=_int_list, help="G_k indices, e.g. 1,2,3")
    p.add_argument("--random-count", type=int, help="Number of random cacti")
    p.add_argument("--min-n", type=int, help="Smallest random size")
    p.add_argument("--max-n", type=int, help="Largest random size")
    _add_generator_args(p, defaults=False)
    p.add_argument("--budget", type=int, help="Search node limit per oracle")
    p.add_argument("--threads", type=int, help="Worker processes")
    p.add_argument("--trees-only", action="store_true", help="Random trees only")
    p.add_argument("--no-exact", action="store_true", help="Skip the exact oracles")
    p.add_argument(
        "--timeout-rows",
        type=float,
        help="Stop starting new rows after this many seconds",
    )
    p.add_argument("--csv", type=Path, help="Also write the CSV table here")
    _add_format(p, ["json", "csv"])

    p = add("bench", cmd_bench, "Time the construction on random cacti")
    p.add_argument(
        "--sizes", type=_int_list, default=[10_000, 100_000], help="Ascending sizes"
    )
    _add_generator_args(p)
    p.add_argument("--repeats", type=int, default=1, help="Best of this many runs")
    p.add_argument(
        "--max-growth", type=float, default=3.0, help="Allowed time/n growth"
    )
    p.add_argument(
        "--verify",
        action=argparse.BooleanOptionalAction,
        default=False,
        help="Separately time the quadratic verification",
    )
    _add_format(p, ["json", "text"])

    p = add("dot", cmd_dot, "Graphviz DOT export")
    _add_graph_arg(p)
    p.add_argument("--set", type=_int_list, help="Multipacking members to box")
    p.add_argument(
        "--powers", type=_powers, help="Broadcast towers as vertex:power pairs"
    )
    p.add_argument(
        "--approx", action="store_true", help="Box the constructed multipacking"
    )
    _add_format(p, ["dot"])
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point for the cactus-mp CLI.

    Returns:
        Exit code (0 for success, 1 for input or usage errors, 2 when an
        invariant or bound is violated).
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        logging.basicConfig(format=LOG_FORMAT, datefmt=LOG_DATEFMT, stream=sys.stderr)
        logger.error("Usage error: %s", e)
        return EXIT_INPUT

    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        datefmt=LOG_DATEFMT,
        stream=sys.stderr,
        force=True,
    )

    try:
        code: int = args.handler(args)
    except InvariantViolation as e:
        logger.error("Invariant violated: %s", e)
        return EXIT_VIOLATION
    except CactusMPError as e:
        logger.error("Error: %s", e)
        logger.error("Error type: %s", type(e).__name__)
        return EXIT_INPUT
    except KeyboardInterrupt:
        logger.info("Stopped by user")
        return EXIT_OK
    return code


if __name__ == "__main__":
    sys.exit(main())
