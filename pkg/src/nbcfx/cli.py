"""Command-line interface.

Exit status: 0 success, 1 usage error, 2 no counterfactual exists,
3 file or parse error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bench import (
    DEFAULT_CLAUSE_CAP,
    records_to_csv,
    run_bench,
    summarize,
    summary_to_csv,
)
from .encoder import CnfFormula, encode_function, from_wcnf, to_dimacs
from .errors import NoCounterfactualExists, ParseError
from .explain import CnfCache, Classifier, ExplainOptions, report_to_json
from .mcs import McsProblem, enumerate_mcs
from .model import generate_synthetic, parse_instance, parse_model, predict, serialize_model
from .odd import compile_model, negate, to_dot

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_COUNTERFACTUAL = 2
EXIT_FILE = 3

logger = logging.getLogger("nbcfx")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nbcfx", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a random synthetic model")
    g.add_argument("--features", type=_positive_int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out")

    c = sub.add_parser("compile", help="compile a model and report the diagram size")
    c.add_argument("--model", required=True)
    c.add_argument("--order", help="feature names or 1-based positions, comma-separated")
    c.add_argument("--dot", help="write Graphviz source here")

    e = sub.add_parser("encode", help="write the DIMACS clauses of the classifier")
    e.add_argument("--model", required=True)
    e.add_argument("--order")
    e.add_argument("--out")
    e.add_argument("--negated", action="store_true", help="encode the negated classifier")

    pr = sub.add_parser("predict", help="classify one instance")
    pr.add_argument("--model", required=True)
    pr.add_argument("--instance", required=True)

    x = sub.add_parser("explain", help="counterfactual explanations for one instance")
    x.add_argument("--model", required=True)
    x.add_argument("--instance", required=True)
    x.add_argument("--order")
    x.add_argument("--immutable", help="feature names that may not change")
    x.add_argument("--costs", help="NAME=RATIONAL pairs, comma-separated")
    x.add_argument("--max-mcs", type=_positive_int)
    x.add_argument("--cache-dir", help="reuse clause files across runs")
    x.add_argument("--timings", action="store_true", help="include elapsed time")
    x.add_argument("--out")

    m = sub.add_parser("mcs", help="enumerate MCSs of a WCNF with unit soft clauses")
    m.add_argument("--wcnf", required=True)
    m.add_argument("--max-mcs", type=_positive_int)

    b = sub.add_parser("bench", help="synthetic benchmark over feature counts")
    b.add_argument("--sizes", type=_int_list, required=True)
    b.add_argument("--per-size", type=_positive_int, required=True)
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--out", required=True, help="CSV of per-model rows")
    b.add_argument("--clause-cap", type=_positive_int, default=DEFAULT_CLAUSE_CAP)
    b.add_argument("--timings", action="store_true", help="include timing columns")
    b.add_argument("--no-plots", action="store_true")
    return p


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text, stdout):
    if path is None:
        stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise ParseError(f"cannot write {path}: {exc.strerror}") from None


def _load_model(path):
    return parse_model(_read(path))


def _resolve(model, token):
    token = token.strip()
    if token in model.feature_names:
        return model.index(token)
    if token.isdigit() and 1 <= int(token) <= model.n:
        return int(token) - 1
    raise UsageError(f"unknown feature {token!r}")


def _ordering(model, text):
    if not text:
        return None
    order = [_resolve(model, t) for t in text.split(",")]
    if sorted(order) != list(range(model.n)):
        raise UsageError("--order must list every feature exactly once")
    return order


def _instance(model, text):
    try:
        return parse_instance(text, model.n)
    except ParseError as exc:
        raise UsageError(str(exc)) from None


def _costs(model, text):
    costs = {}
    for item in filter(None, (t.strip() for t in (text or "").split(","))):
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"cost {item!r} is not NAME=VALUE")
        try:
            q = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad cost value {value!r}") from None
        if q <= 0:
            raise UsageError(f"cost of {name} must be positive")
        costs[_resolve(model, name) + 1] = q
    return costs


def _cmd_gen(args, out):
    _write(args.out, serialize_model(generate_synthetic(args.features, args.seed)), out)


def _cmd_compile(args, out):
    model = _load_model(args.model)
    d = compile_model(model, _ordering(model, args.order))
    if args.dot:
        _write(args.dot, to_dot(d, model.feature_names), out)
    out.write(f"nodes {d.size()}\n")


def _cmd_encode(args, out):
    model = _load_model(args.model)
    d = compile_model(model, _ordering(model, args.order))
    f = encode_function(negate(d) if args.negated else d)
    _write(args.out, to_dimacs(f), out)
    if args.out:
        out.write(f"clauses {len(f)}\n")


def _cmd_predict(args, out):
    model = _load_model(args.model)
    out.write(f"{predict(model, _instance(model, args.instance))}\n")


def _cmd_explain(args, out):
    model = _load_model(args.model)
    x = _instance(model, args.instance)
    immutable = frozenset(
        _resolve(model, t) + 1 for t in (args.immutable or "").split(",") if t.strip()
    )
    options = ExplainOptions(immutable, _costs(model, args.costs), args.max_mcs)
    cache = CnfCache(args.cache_dir) if args.cache_dir else None
    clf = Classifier.build(model, _ordering(model, args.order), cache)
    report = clf.explain(x, options)
    _write(args.out, report_to_json(report, model.feature_names, args.timings), out)


def _cmd_mcs(args, out):
    w = from_wcnf(_read(args.wcnf))
    for c in w.soft:
        if len(c) != 1:
            raise ParseError(f"soft clause {list(c)} is not a unit clause")
    try:
        problem = McsProblem(
            CnfFormula(w.n_vars, w.hard),
            tuple(c[0] for c in w.soft),
            costs={abs(c[0]): wt for c, wt in zip(w.soft, w.weights) if wt != 1},
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    result = enumerate_mcs(problem, args.max_mcs)
    for m in result:
        out.write(" ".join(map(str, m.sorted())) + "\n")
    out.write(f"c mcs {len(result)} complete {str(result.complete).lower()}\n")


def _cmd_bench(args, out):
    try:
        records = run_bench(args.sizes, args.per_size, args.seed, args.clause_cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = summarize(records)
    csv_path = Path(args.out)
    _write(csv_path, records_to_csv(records, args.timings), out)
    stem = csv_path.with_suffix("")
    _write(f"{stem}_summary.csv", summary_to_csv(rows, args.timings), out)
    if not args.no_plots:
        from .plotting import plot_bench_summary, plot_mcs_scatter

        plot_bench_summary(rows, f"{stem}.png")
        plot_mcs_scatter(records, f"{stem}_mcs.png")
    out.write(summary_to_csv(rows, args.timings))


COMMANDS = {
    "gen": _cmd_gen,
    "compile": _cmd_compile,
    "encode": _cmd_encode,
    "predict": _cmd_predict,
    "explain": _cmd_explain,
    "mcs": _cmd_mcs,
    "bench": _cmd_bench,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=stderr,
    )
    try:
        COMMANDS[args.command](args, stdout)
    except UsageError as exc:
        print(f"nbcfx {args.command}: {exc}", file=stderr)
        return EXIT_USAGE
    except NoCounterfactualExists as exc:
        print(f"nbcfx {args.command}: no counterfactual exists ({exc})", file=stderr)
        return EXIT_NO_COUNTERFACTUAL
    except ParseError as exc:
        print(f"nbcfx {args.command}: {exc}", file=stderr)
        return EXIT_FILE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
