"""Command line interface: ``symlat <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

from . import __version__
from .classes import CLASS_NAMES, GroupError, classify, in_class, supremum
from .coloured_graph import GraphError, cg_join, cg_meet, enumerate_coloured_graphs
from .gaussian import GaussianData, MLENonexistenceError, fit_rcon, read_matrix, read_table
from .io import load_graph, render_text
from .partition import model_count
from .search import SearchError, brute_force_duals, dual_accept_B, dual_reject_B, eh_search, enumerate_Pi_lattice

log = logging.getLogger("symlat")

EXIT_OK, EXIT_ERROR, EXIT_NO_MLE = 0, 1, 2


class CliError(Exception):
    pass


def _emit(args, payload, text: str | None = None) -> None:
    if args.format == "json" or text is None:
        out = json.dumps(payload, sort_keys=True, indent=None if args.compact else 2)
    else:
        out = text
    if args.output:
        Path(args.output).write_text(out + "\n", encoding="utf-8")
    else:
        print(out)


def _graph_text(g) -> str:
    return render_text(g)


def _labels(n: int) -> list[int]:
    if n < 1:
        raise CliError("--n must be positive")
    return list(range(1, n + 1))


def _load_data(args) -> GaussianData:
    if getattr(args, "data", None):
        return GaussianData.from_csv(args.data, args.divisor)
    if getattr(args, "cov", None):
        if args.n is None:
            raise CliError("--cov needs --n")
        labels, S = read_matrix(args.cov)
        return GaussianData.from_covariance(S, args.n, labels, args.divisor)
    raise CliError("need --data or --cov")


def _coerce_labels(data: GaussianData, vertices) -> GaussianData:
    # CSV headers are strings; integer vertex labels match them by value
    if set(data.labels) == set(vertices):
        return data
    by_str = {str(v): v for v in vertices}
    if set(by_str) == set(data.labels):
        return GaussianData(tuple(by_str[x] for x in data.labels), data.S, data.n, data.dof, data.samples)
    raise CliError(f"graph vertices {list(vertices)} do not match data columns {list(data.labels)}")


# --------------------------------------------------------------------------
# commands


def cmd_count(args) -> int:
    c = model_count(args.n)
    _emit(args, {"n": args.n, "count": c}, str(c))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    labels = _labels(args.n)
    gen = enumerate_coloured_graphs(labels, allow_large=args.allow_large)
    if args.cls != "all":
        gen = (g for g in gen if in_class(g, args.cls))
    if args.count_only:
        c = sum(1 for _ in gen)
        _emit(args, {"n": args.n, "class": args.cls, "count": c}, str(c))
        return EXIT_OK
    stream = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        for g in gen:
            stream.write(json.dumps(g.to_dict(), sort_keys=True) + "\n")
    finally:
        if args.output:
            stream.close()
    return EXIT_OK


def _summary(n: int, jobs: int, allow_large: bool) -> dict:
    graphs = enumerate_coloured_graphs(_labels(n), allow_large=allow_large)
    counts: Counter = Counter()
    total = 0
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            results = ex.map(classify, graphs, chunksize=256)
            for r in results:
                total += 1
                counts.update(k for k, v in r.items() if v)
    else:
        for g in graphs:
            total += 1
            counts.update(k for k, v in classify(g).items() if v)
    return {"n": n, "all": total, **{k: counts[k] for k in CLASS_NAMES}}


def cmd_classify(args) -> int:
    if args.graph:
        g = load_graph(args.graph, args.normalize)
        res = classify(g)
        _emit(args, res, " ".join(f"{k}={'yes' if v else 'no'}" for k, v in res.items()))
        return EXIT_OK
    if args.n is None or not args.summary:
        raise CliError("give a graph file, or --n <k> --summary")
    res = _summary(args.n, args.jobs, args.allow_large)
    _emit(args, res, " ".join(f"{k}={res[k]}" for k in ("all",) + CLASS_NAMES))
    return EXIT_OK


def _lattice_op(op):
    def run(args) -> int:
        a = load_graph(args.a, args.normalize)
        b = load_graph(args.b, args.normalize)
        g = op(a, b)
        _emit(args, g.to_dict(), _graph_text(g))
        return EXIT_OK

    return run


def cmd_sup(args) -> int:
    g = supremum(load_graph(args.graph, args.normalize), args.cls)
    _emit(args, g.to_dict(), _graph_text(g))
    return EXIT_OK


def cmd_fit(args) -> int:
    g = load_graph(args.graph, args.normalize)
    data = _coerce_labels(_load_data(args), g.vertices)
    try:
        fit = fit_rcon(g, data, penalty_n=args.penalty_n)
    except MLENonexistenceError as exc:
        raise CliError(f"maximum likelihood estimate does not exist: {exc}") from None
    d = fit.to_dict()
    text = "\n".join(f"{k}: {v}" for k, v in d.items())
    _emit(args, d, text)
    return EXIT_OK if fit.converged else EXIT_ERROR


def cmd_duals(args) -> int:
    g = load_graph(args.graph, args.normalize)
    if args.cls == "B":
        out = dual_accept_B(g) if args.direction == "a" else dual_reject_B(g)
    else:
        out = brute_force_duals(enumerate_Pi_lattice(g.vertices), [g], args.direction)
    _emit(args, [h.to_dict() for h in out], "\n\n".join(_graph_text(h) for h in out))
    return EXIT_OK


def cmd_search(args) -> int:
    if not 0 < args.alpha < 1:
        raise CliError("--alpha must lie in (0, 1)")
    labels, X = read_table(args.data)
    data = GaussianData.from_samples(X, labels, args.divisor)
    trace = eh_search(args.cls, data, alpha=args.alpha, order_seed=args.seed, jobs=args.jobs)
    payload = trace.to_dict()
    if args.format == "text":
        lines = [f"stages: {[(len(s.candidates), s.accepted) for s in trace.stages]}",
                 f"models tested: {trace.total_tested}", "minimally accepted:"]
        for g in trace.min_accepted:
            f = trace.fits.get(g)
            lines.append(_graph_text(g) + (f"\nBIC {f.bic:.4f}  p={f.p_value:.4f}" if f else ""))
        _emit(args, payload, "\n".join(lines))
    else:
        _emit(args, payload)
    if any(r.startswith("nonexistent MLE") for r in trace.flags.values()):
        return EXIT_NO_MLE
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", "-o", help="write the report to this file")
    common.add_argument("--compact", action="store_true", help="single-line JSON")
    common.add_argument("--normalize", action="store_true", help="accept graph files not in canonical order")
    common.add_argument("--allow-large", action="store_true", help="lift the enumeration size guard")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="symlat", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("count", parents=[common], help="number of coloured graphs on n vertices")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("enumerate", parents=[common], help="list coloured graphs on n vertices")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--class", dest="cls", choices=("all",) + CLASS_NAMES, default="all")
    s.add_argument("--count-only", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("classify", parents=[common], help="class membership of a graph, or class sizes")
    s.add_argument("graph", nargs="?")
    s.add_argument("--n", type=int)
    s.add_argument("--summary", action="store_true")
    s.set_defaults(func=cmd_classify)

    for name, op in (("meet", cg_meet), ("join", cg_join)):
        s = sub.add_parser(name, parents=[common], help=f"lattice {name} of two graphs")
        s.add_argument("a")
        s.add_argument("b")
        s.set_defaults(func=_lattice_op(op))

    s = sub.add_parser("sup", parents=[common], help="least model of a class above a graph")
    s.add_argument("--class", dest="cls", choices=CLASS_NAMES, required=True)
    s.add_argument("graph")
    s.set_defaults(func=cmd_sup)

    s = sub.add_parser("fit", parents=[common], help="fit the RCON model of a graph")
    s.add_argument("graph")
    s.add_argument("--data")
    s.add_argument("--cov")
    s.add_argument("--n", type=int)
    s.add_argument("--divisor", choices=("n", "n-1"), default="n-1")
    s.add_argument("--penalty-n", type=int, help="sample size used in the BIC penalty (default: n)")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("duals", parents=[common], help="acceptance or rejection dual of a graph")
    s.add_argument("--class", dest="cls", choices=("B", "Pi"), required=True)
    s.add_argument("--direction", choices=("a", "r"), required=True)
    s.add_argument("graph")
    s.add_argument("--data", help="ignored; accepted for symmetry with search")
    s.set_defaults(func=cmd_duals)

    s = sub.add_parser("search", parents=[common], help="Edwards-Havranek model search")
    s.add_argument("--class", dest="cls", choices=("B", "Pi"), required=True)
    s.add_argument("--data", required=True)
    s.add_argument("--alpha", type=float, default=0.05)
    s.add_argument("--seed", type=int, help="shuffle evaluation order within stages")
    s.add_argument("--divisor", choices=("n", "n-1"), default="n-1")
    s.set_defaults(func=cmd_search)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.jobs < 1:
        print("symlat: error: --jobs must be positive", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (CliError, GraphError, GroupError, SearchError, ValueError, FileNotFoundError) as exc:
        print(f"symlat: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
