"""Command line entry point: ``cnfgraph <subcommand> ...``.

Exit status is 0 on success, 2 on invalid input, 3 when a size cap is hit
while processing a single instance.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

from . import analytics, bounds, harness, pruning
from .errors import CapExceeded, ValidationError
from .graph import (
    DEFAULT_CAP_PAIRS,
    ClauseSystem,
    dumps_instance,
    format_edge_list,
    loads_instance,
    mask_histogram,
    materialize,
    parse_edge_list,
)
from .random_model import ModelParams, choose_clause_count, sample_cnf

EXIT_VALIDATION = 2
EXIT_CAP = 3


def _dump(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def _load_instance(path: str) -> tuple[ClauseSystem, dict]:
    text = _read(path)
    cs = loads_instance(text)
    return cs, json.loads(text)


def _params_from_args(args: argparse.Namespace, seed: int) -> ModelParams:
    return ModelParams(
        d=args.d, p=args.p, n_left=args.n_left, n_right=args.n_right,
        n_clauses=args.n_clauses, seed=seed, allow_degenerate=args.allow_degenerate,
    )


def _config_from_args(args: argparse.Namespace) -> harness.ExperimentConfig:
    try:
        return harness.ExperimentConfig(
            params=_params_from_args(args, args.seed),
            replicates=args.replicates,
            threshold_safety=args.safety,
            epsilon=args.epsilon,
            band=None if args.band <= 0 else args.band,
            outputs=args.format,
            master_seed=args.seed,
            cap_pairs=args.cap_pairs,
            cap_sos_bits=args.cap_sos_bits,
            jobs=args.jobs,
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def cmd_gen(args: argparse.Namespace) -> None:
    params = _params_from_args(args, args.seed)
    cs = sample_cnf(params)
    _emit(dumps_instance(cs, params, args.seed), args.out)


def cmd_stats(args: argparse.Namespace) -> None:
    cs, _ = _load_instance(args.instance)
    deg = analytics.degrees(cs, cap_sos_bits=args.cap_sos_bits)
    width = max(1, (cs.n + 3) // 4)

    def hist(side: str) -> dict[str, int]:
        h = mask_histogram(cs, side)
        return {format(m, "x").rjust(width, "0"): c for m, c in sorted(h.entries.items())}

    doc: dict[str, Any] = {
        "n": cs.n,
        "n_left": cs.n_left,
        "n_right": cs.n_right,
        "edge_count": int(deg.sum()),
        "average_degree": float(deg.sum()) / cs.n_left if cs.n_left else None,
        "left_histogram": hist("left"),
        "right_histogram": hist("right"),
    }
    if not args.summary:
        doc["degrees"] = [int(x) for x in deg]
    _emit(_dump(doc), args.out)


def cmd_count_k22(args: argparse.Namespace) -> None:
    cs, _ = _load_instance(args.instance)
    report = analytics.count_k22(cs, method=args.method, cap_sos_bits=args.cap_sos_bits)
    _emit(_dump(report.to_dict(summary=args.summary)), args.out)


def cmd_prune(args: argparse.Namespace) -> None:
    cs, doc = _load_instance(args.instance)
    if args.threshold is not None:
        threshold = args.threshold
    elif "params" in doc:
        params = ModelParams.from_dict(doc["params"], allow_degenerate=True)
        threshold = pruning.default_threshold(params, args.safety)
    else:
        raise ValidationError("--threshold is required when the instance has no params")
    result = pruning.prune(cs, threshold, prune_right=args.prune_right,
                           cap_sos_bits=args.cap_sos_bits)
    if args.edge_list:
        g = materialize(result.restricted, args.cap_pairs)
        Path(args.edge_list).write_text(format_edge_list(g))
    _emit(_dump(result.to_dict()), args.out)


def cmd_certify(args: argparse.Namespace) -> None:
    text = _read(args.input)
    doc: dict[str, Any] = {}
    if text.lstrip().startswith("{"):
        cs = loads_instance(text)
        g = materialize(cs, args.cap_pairs)
        doc["n"] = cs.n
        doc["distinct_neighborhoods"] = analytics.distinct_neighborhood_count(cs, args.min_degree)
    else:
        g = parse_edge_list(text)
        doc["distinct_neighborhoods"] = analytics.distinct_neighborhood_count(g, args.min_degree)
    doc["lower_bound"] = bounds.cnf_size_lower_bound(g)
    if "n" in doc:
        doc["consistent"] = doc["lower_bound"] <= doc["n"] and doc["distinct_neighborhoods"] <= 2 ** doc["n"]
    _emit(_dump(doc), args.out)


def cmd_expect(args: argparse.Namespace) -> None:
    if args.n_clauses is not None:
        n = args.n_clauses
    elif args.d is not None:
        n = choose_clause_count(args.p, args.n_right, args.d)
    else:
        raise ValidationError("give --n-clauses or --d")
    if (args.M is None) != (args.mu is None):
        raise ValidationError("--M and --mu go together")
    ex = bounds.expectations(args.n_left, args.n_right, args.p, n, args.M, args.mu)
    _emit(_dump(ex.to_dict()), args.out)


def cmd_experiment(args: argparse.Namespace) -> None:
    report = harness.run_experiment(_config_from_args(args))
    _emit(report.to_csv() if args.format == "csv" else report.to_json(), args.out)


def cmd_compare_models(args: argparse.Namespace) -> None:
    result = harness.compare_models(_config_from_args(args))
    _emit(result.to_csv() if args.format == "csv" else _dump(result.to_dict()), args.out)


def _add_model_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--p", type=float, required=required, help="per-bit probability")
    p.add_argument("--d", type=float, help="target average degree (derives the clause count)")
    p.add_argument("--n-left", type=int, required=required)
    p.add_argument("--n-right", type=int, required=required)
    p.add_argument("--n-clauses", type=int, help="explicit clause count")
    p.add_argument("--allow-degenerate", action="store_true", help="accept p = 0 or p = 1")


def _add_experiment_args(p: argparse.ArgumentParser) -> None:
    _add_model_args(p)
    p.add_argument("--replicates", type=int, default=10)
    p.add_argument("--safety", type=float, default=pruning.DEFAULT_SAFETY)
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--band", type=float, default=harness.DEFAULT_BAND,
                   help="degree band factor; <= 0 derives it from --epsilon")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cnfgraph", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0, help="instance or master seed")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--cap-pairs", type=int, default=DEFAULT_CAP_PAIRS)
    parser.add_argument("--cap-sos-bits", type=int, default=analytics.DEFAULT_CAP_SOS_BITS)
    parser.add_argument("--jobs", type=int, default=1, help="worker threads for replicates")
    parser.add_argument("-o", "--out", help="write output here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a clause system and write a JSON instance")
    _add_model_args(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="degrees and mask histograms")
    p.add_argument("instance")
    p.add_argument("--summary", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("count-k22", help="exact K_{2,2} count and participation")
    p.add_argument("instance")
    p.add_argument("--summary", action="store_true")
    p.add_argument("--method", choices=("auto", "sos", "pairs"), default="auto")
    p.set_defaults(func=cmd_count_k22)

    p = sub.add_parser("prune", help="prune to a K_{2,2}-free graph")
    p.add_argument("instance")
    p.add_argument("--threshold", type=int)
    p.add_argument("--safety", type=float, default=pruning.DEFAULT_SAFETY)
    p.add_argument("--prune-right", action="store_true")
    p.add_argument("--edge-list", help="also write the pruned graph as an edge list")
    p.set_defaults(func=cmd_prune)

    p = sub.add_parser("certify", help="distinct neighborhoods and clause-count lower bound")
    p.add_argument("input", help="JSON instance or edge-list file")
    p.add_argument("--min-degree", type=int, default=0)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("expect", help="closed-form expectations")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--d", type=float)
    p.add_argument("--n-left", type=int, required=True)
    p.add_argument("--n-right", type=int, required=True)
    p.add_argument("--n-clauses", type=int)
    p.add_argument("--M", type=int, help="sample count for the Hoeffding bound")
    p.add_argument("--mu", type=float, help="deviation fraction for the Hoeffding bound")
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("experiment", help="replicated experiment report")
    _add_experiment_args(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("compare-models", help="clause model vs independent-edge baseline")
    _add_experiment_args(p)
    p.set_defaults(func=cmd_compare_models)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    return 0


if __name__ == "__main__":
    sys.exit(main())
