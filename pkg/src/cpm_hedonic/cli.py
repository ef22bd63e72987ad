"""Command-line entry point: ``cpm-hedonic <subcommand> ...``.

Exit codes: 0 success, 2 usage error, 3 unreadable or unwritable file,
4 invalid value (fraction, probability, method), 5 malformed input data.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench
from .dynamics import DynamicsConfig
from .evalmetrics import ari, write_records
from .graph import EdgeListError, Graph, Partition, PartitionFormatError, dump_edge_list, dump_partition, load_edge_list, load_partition
from .metagraph import build_metagraph, to_dot, to_json
from .potential import Resolution, partition_potential
from .robustness import equilibrium_gamma_range, robustness_report
from .synthgen import NoiseSpec, SappmSpec, generate, perturb

EXIT_USAGE, EXIT_IO, EXIT_VALUE, EXIT_DATA = 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from None


def _graph(args) -> Graph:
    if not args.graph:
        raise CliError(EXIT_USAGE, "--graph is required")
    try:
        return load_edge_list(_read(args.graph))
    except EdgeListError as exc:
        raise CliError(EXIT_DATA, f"{args.graph}: {exc}") from None


def _partition(path: str, graph: Graph | None, K: int | None) -> Partition:
    """Load a partition; with a graph and no ``--k``, use n slots so any node may isolate."""
    try:
        part = load_partition(_read(path), K)
    except PartitionFormatError as exc:
        raise CliError(EXIT_DATA, f"{path}: {exc}") from None
    if graph is not None and part.n != graph.n:
        raise CliError(EXIT_DATA, f"{path}: partition covers {part.n} nodes, graph has {graph.n}")
    if graph is not None and K is None and part.K < graph.n:
        part = Partition(part.sigma, graph.n)
    return part


def _gamma(text: str | None, graph: Graph) -> Resolution:
    try:
        return bench.resolve_gamma(graph, text)
    except (ValueError, TypeError) as exc:
        raise CliError(EXIT_VALUE, f"invalid --gamma {text!r}: {exc}") from None


def _list(text: str | None, conv, flag: str) -> list | None:
    if text is None:
        return None
    try:
        return [conv(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(EXIT_VALUE, f"invalid {flag} {text!r}") from None


def _dynamics(args) -> DynamicsConfig:
    try:
        return DynamicsConfig(node_rule=args.node_rule, selection=args.selection or "queue")
    except ValueError as exc:
        raise CliError(EXIT_VALUE, str(exc)) from None


# -- subcommands ---------------------------------------------------------------

def cmd_generate(args) -> int:
    try:
        spec = SappmSpec(args.k, args.n_per_community, args.p, args.lam, args.seed)
        noise = NoiseSpec(args.eta, args.seed) if args.eta is not None else None
    except ValueError as exc:
        raise CliError(EXIT_VALUE, str(exc)) from None
    graph, truth = generate(spec)
    if args.out is None:
        payload = {"spec": json.loads(spec.to_json()), "edges": graph.edges(), "truth": truth.sigma}
        if noise is not None:
            payload["initial"] = perturb(truth, noise).sigma
        _write(None, json.dumps(payload) + "\n")
        return 0
    _write(args.out + ".edges", dump_edge_list(graph))
    _write(args.out + ".truth", dump_partition(truth))
    _write(args.out + ".spec.json", spec.to_json() + "\n")
    if noise is not None:
        _write(args.out + ".init", dump_partition(perturb(truth, noise)))
    return 0


def cmd_detect(args) -> int:
    graph = _graph(args)
    if args.partition:
        init = _partition(args.partition, graph, args.k)
    else:
        init = Partition.singletons(graph.n, args.k if args.k is not None else max(graph.n, 1))
    gamma = _gamma(args.gamma, graph)
    method = args.method
    if args.selection == "global-best" and method == "dynamics-queue":
        method = "dynamics-best"
    try:
        out, moves, evals, ms = bench.run_method(method, graph, init, gamma, _dynamics(args))
    except ValueError as exc:
        raise CliError(EXIT_VALUE, str(exc)) from None
    if args.out:
        _write(args.out, dump_partition(out))
    record = {
        "method": method,
        "gamma": str(gamma),
        "moves": moves,
        "evals": evals,
        "runtime_ms": ms,
        "potential": str(partition_potential(graph, out, gamma)),
        "robustness": robustness_report(graph, out)["robustness_float"],
        "partition": out.sigma,
        "blocks": [list(b) for b in out.blocks()],
    }
    sys.stdout.write(json.dumps(record) + "\n")
    return 0


def cmd_robustness(args) -> int:
    graph = _graph(args)
    if not args.partition:
        raise CliError(EXIT_USAGE, "--partition is required")
    part = _partition(args.partition, graph, args.k)
    _write(args.out, json.dumps(robustness_report(graph, part), indent=1) + "\n")
    return 0


def cmd_gamma_range(args) -> int:
    graph = _graph(args)
    if not args.partition:
        raise CliError(EXIT_USAGE, "--partition is required")
    part = _partition(args.partition, graph, args.k)
    _write(args.out, f"{equilibrium_gamma_range(graph, part)}\n")
    return 0


def cmd_metagraph(args) -> int:
    graph = _graph(args)
    gamma = _gamma(args.gamma, graph) if args.gamma is not None else None
    try:
        meta = build_metagraph(graph)
    except ValueError as exc:
        raise CliError(EXIT_VALUE, str(exc)) from None
    text = to_dot(meta, gamma) if args.format == "dot" else to_json(meta, gamma) + "\n"
    _write(args.out, text)
    return 0


def cmd_ari(args) -> int:
    a = _partition(args.first, None, None)
    b = _partition(args.second, None, None)
    if a.n != b.n:
        raise CliError(EXIT_DATA, f"partitions cover {a.n} and {b.n} nodes")
    _write(args.out, f"{ari(a, b)!r}\n")
    return 0


def cmd_track(args) -> int:
    overrides: dict = {}
    for flag, key, conv in (("--k", "K", int), ("--p", "p", float), ("--lambda", "lam", float),
                            ("--eta", "eta", float), ("--method", "methods", str)):
        vals = _list(getattr(args, key), conv, flag)
        if vals is not None:
            overrides[key] = tuple(vals)
    if args.n_per_community is not None:
        overrides.update(N=args.n_per_community, n_total=None)
    if args.samples is not None:
        overrides["samples"] = args.samples
    overrides["seed"] = args.seed
    overrides["gamma"] = args.gamma
    overrides["dynamics"] = _dynamics(args)
    try:
        jobs = args.jobs if args.jobs is not None else bench.default_jobs()
        grid = bench.full_grid(**overrides) if args.full_grid else bench.ExperimentGrid(**overrides)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise CliError(EXIT_VALUE, str(exc)) from None
    records = bench.track(grid, jobs=jobs)
    _write(args.out, write_records(records))
    if args.emit_plot_data:
        try:
            with open(args.emit_plot_data, "w", newline="") as fh:
                bench.write_plot_data(records, fh)
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write {args.emit_plot_data}: {exc}") from None
    return 0


def _probability(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpm-hedonic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph=True, partition=True):
        if graph:
            p.add_argument("--graph", help="edge list file")
        if partition:
            p.add_argument("--partition", help="partition file (JSON array or one slot per line)")
            p.add_argument("--k", type=int, help="number of slots (default: number of nodes)")
        p.add_argument("--out", help="output path (default: stdout)")

    def rules(p):
        p.add_argument("--node-rule", choices=("best", "better"), default="best")
        p.add_argument("--selection", choices=("queue", "global-best"))

    p = sub.add_parser("generate", help="sample a planted-partition graph")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n-per-community", type=int, default=50)
    p.add_argument("--p", type=_probability, default=0.1)
    p.add_argument("--lambda", dest="lam", type=_probability, default=0.3)
    p.add_argument("--eta", help="also write a perturbed initial partition")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output prefix; writes .edges, .truth, .spec.json (and .init)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("detect", help="run a method from an initial partition")
    common(p)
    p.add_argument("--gamma", help="resolution b/c or decimal (default: edge density)")
    p.add_argument("--method", choices=bench.METHODS, default="dynamics-queue")
    rules(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("robustness", help="robust-node report as JSON")
    common(p)
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("gamma-range", help="resolution interval where the partition is stable")
    common(p)
    p.set_defaults(func=cmd_gamma_range)

    p = sub.add_parser("metagraph", help="export the partition metagraph of a small graph")
    common(p, partition=False)
    p.add_argument("--gamma", help="orient edges at this resolution")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_metagraph)

    p = sub.add_parser("ari", help="adjusted Rand index of two partition files")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ari)

    p = sub.add_parser("track", help="community-tracking sweep, CSV output")
    p.add_argument("--k", dest="K", help="comma-separated community counts")
    p.add_argument("--n-per-community", type=int)
    p.add_argument("--p", help="comma-separated intra probabilities")
    p.add_argument("--lambda", dest="lam", help="comma-separated difficulty values")
    p.add_argument("--eta", help="comma-separated noise levels")
    p.add_argument("--method", dest="methods", help="comma-separated methods: " + ", ".join(bench.METHODS))
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gamma", help="fixed resolution (default: each graph's edge density)")
    p.add_argument("--jobs", type=int, help=f"worker processes (default: ${bench.JOBS_ENV} or 1)")
    p.add_argument("--full-grid", action="store_true", help="full-size grid, n=1020 and 100 samples per cell (slow)")
    p.add_argument("--emit-plot-data", metavar="PATH", help="also write aggregated mean/CI table")
    p.add_argument("--out", help="CSV path (default: stdout)")
    rules(p)
    p.set_defaults(func=cmd_track)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"cpm-hedonic: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
