"""Command-line interface: ``enumerate``, ``catalan``, ``compute``, ``verify``, ``export``.

Exit status is 0 on success, 1 when a verification or an engine comparison
fails, and 2 for usage, parse and bound errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Sequence

from .algebra import AlgebraError
from .engine import ENGINES, AlgebraSystem, psi
from .export import hasse_adapted, hasse_words, to_dot
from .partitions import (
    PartitionError,
    catalan_decomposition,
    catalan_number,
    enumerate_adapted,
    filter_by_label,
)
from .replica.models import ModelMismatch
from .replica.space import TruncatedReplicaSpace, default_truncation, psi_oracle
from .schema import fraction_json, load_json, load_models, load_queries, load_specs
from .verify import SUITES, run_suite
from .words import MotzkinWordError, enumerate_reduced, parse_word

log = logging.getLogger("motzkin_functionals")

DEFAULT_BOUNDS = {
    "enumerate_n": 12,
    "catalan_n": 10,
    "export_n": 12,
    "product_n": 7,
    "max_dimension": 10**6,
}

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class BoundExceeded(ValueError):
    pass


class UsageError(ValueError):
    pass


def load_bounds(path: str | None) -> dict[str, int]:
    bounds = dict(DEFAULT_BOUNDS)
    if path is None:
        return bounds
    doc = load_json(path)
    if not isinstance(doc, dict):
        raise UsageError(f"{path}: the config must be a JSON object")
    for key, value in doc.get("bounds", doc).items():
        if key not in bounds:
            raise UsageError(f"{path}: unknown bound {key!r}; known: {sorted(bounds)}")
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise UsageError(f"{path}: bound {key!r} must be a positive integer")
        if value != bounds[key]:
            log.warning("overriding bound %s: %d -> %d", key, bounds[key], value)
        bounds[key] = value
    return bounds


def _bound(bounds, key: str, value: int, what: str) -> None:
    if value > bounds[key]:
        raise BoundExceeded(f"{what} {value} exceeds the bound {bounds[key]} ({key}; raise it with --config)")


def parse_labels(text: str) -> tuple:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            raise UsageError(f"empty label in {text!r}")
        out.append(int(tok) if tok.lstrip("-").isdigit() else tok)
    return tuple(out)


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------- commands

def cmd_enumerate(args, bounds) -> int:
    if args.words:
        if args.n is None:
            raise UsageError("--words needs -n")
        _bound(bounds, "enumerate_n", args.n, "n")
        words = enumerate_reduced(args.n)
        if args.format == "json":
            _emit(args, _dump([w.to_json() for w in words]))
        else:
            _emit(args, "".join(f"{w}\n" for w in words))
        return EXIT_OK
    if args.word is None:
        raise UsageError("--partitions and --labeled-partitions need -w WORD")
    w = parse_word(args.word)
    if not len(w):
        raise UsageError("the word must be nonempty")
    _bound(bounds, "enumerate_n", len(w), "word length")
    parts = enumerate_adapted(w, irreducible_only=args.irreducible)
    if args.labeled_partitions:
        if args.labels is None:
            raise UsageError("--labeled-partitions needs --labels")
        labels = parse_labels(args.labels)
        if len(labels) != len(w):
            raise UsageError(f"{len(labels)} labels for a word of length {len(w)}")
        parts = filter_by_label(parts, labels, args.mode)
    if args.format == "json":
        _emit(args, _dump([p.partition.to_json() for p in parts]))
    else:
        _emit(args, "".join(f"{p.partition}\n" for p in parts))
    return EXIT_OK


def cmd_catalan(args, bounds) -> int:
    _bound(bounds, "catalan_n", args.n, "n")
    table = catalan_decomposition(args.n)
    total = sum(c for _, c in table)
    closed = catalan_number(args.n)
    if args.format == "json":
        _emit(args, _dump({
            "n": args.n,
            "table": [{"word": str(w), "c": c} for w, c in table],
            "total": total,
            "catalan": closed,
        }))
    else:
        width = max(len(str(w)) for w, _ in table)
        lines = [f"{str(w):<{width}}  {c}" for w, c in table]
        lines.append(f"total {total}  C_{args.n} = {closed}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if total == closed else EXIT_FAIL


def _value_json(x, with_float: bool):
    return fraction_json(x, with_float)


def cmd_compute(args, bounds) -> int:
    specs = load_specs(args.spec)
    system = AlgebraSystem(specs)
    queries = load_queries(args.queries, specs)
    engines = list(ENGINES) + ["oracle"] if args.engine == "all" else [args.engine]
    models = None
    if args.models:
        models = load_models(args.models)
        by_label = {m.label: m for m in models}
        for s in specs:
            if s.label not in by_label:
                raise UsageError(f"no matrix model for algebra {s.label!r}")
            by_label[s.label].check_against(s)
    elif args.engine == "oracle":
        raise UsageError("--engine oracle needs --models")
    else:
        engines = [e for e in engines if e != "oracle"]
    status = EXIT_OK
    results = []
    for q in queries:
        if len(q.args) > system.max_order():
            raise AlgebraError(
                f"query {q.name} has order {len(q.args)} but the moment tables stop at {system.max_order()}"
            )
        values = {}
        for e in engines:
            if e == "oracle":
                N = default_truncation(q.word) if len(q.word) else 1
                space = TruncatedReplicaSpace(models, N, exact=not args.float_oracle,
                                              max_dimension=bounds["max_dimension"])
                values[e] = psi_oracle(space, q.word, q.args) if len(q.word) else Fraction(1)
            else:
                values[e] = psi(system, q.word, q.args, e)
        entry = {"name": q.name, "word": str(q.word), "values": {
            e: _value_json(v, args.float) for e, v in values.items()
        }}
        if len(engines) > 1:
            exact = [v for v in values.values() if isinstance(v, Fraction)]
            inexact = [v for v in values.values() if not isinstance(v, Fraction)]
            agree = len(set(exact)) <= 1 and all(
                abs(float(v) - float(exact[0] if exact else inexact[0])) <= 1e-9 for v in inexact
            )
            entry["verdict"] = ("AGREE (exact)" if not inexact else "AGREE (within 1e-9)") if agree else "DISAGREE"
            if not agree:
                status = EXIT_FAIL
        results.append(entry)
    if args.format == "json":
        _emit(args, _dump({"results": results}))
    else:
        lines = []
        for r in results:
            vals = []
            for e, v in r["values"].items():
                if isinstance(v, dict):
                    v = f"{v['exact']} ({v['float']:.12g})" if "exact" in v else f"{v['float']:.12g}"
                vals.append(f"{e}={v}")
            tail = f"  {r['verdict']}" if "verdict" in r else ""
            lines.append(f"{r['name']}  {r['word']}  " + "  ".join(vals) + tail)
        _emit(args, "".join(line + "\n" for line in lines))
    return status


def cmd_verify(args, bounds) -> int:
    if args.n is not None and args.suite in ("products", "cumulants", "oracle"):
        _bound(bounds, "product_n", args.n, "n")
    elif args.n is not None:
        _bound(bounds, "enumerate_n", args.n, "n")
    results = run_suite(args.suite, args.n, args.seed, args.trials)
    ok = all(r.passed for r in results)
    if args.format == "json":
        _emit(args, _dump({
            "suite": args.suite,
            "seed": args.seed,
            "passed": ok,
            "properties": [r.to_json() for r in results],
        }))
    else:
        lines = [f"suite {args.suite}  seed {args.seed}"]
        for r in results:
            lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  ({r.checked} checked)")
            if not r.passed:
                lines.append(f"      counterexample: {r.counterexample}")
        lines.append("all properties passed" if ok else "verification FAILED")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_export(args, bounds) -> int:
    if args.target == "hasse-words":
        if args.n is None:
            raise UsageError("hasse-words needs -n")
        _bound(bounds, "export_n", args.n, "n")
        diagram = hasse_words(args.n)
    else:
        if args.word is None:
            raise UsageError("hasse-adapted needs -w WORD")
        w = parse_word(args.word)
        if not len(w):
            raise UsageError("the word must be nonempty")
        _bound(bounds, "export_n", len(w), "word length")
        diagram = hasse_adapted(w, args.irreducible)
    _emit(args, to_dot(diagram) if args.format == "dot" else _dump(diagram))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="motzkin-functionals",
        description="Motzkin words, adapted noncrossing partitions and path-indexed moment functionals.",
    )
    parser.add_argument("--config", help="JSON file overriding the default size bounds")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("text", "json")):
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("-o", "--output", help="write to this file instead of stdout")

    p = sub.add_parser("enumerate", help="list reduced words or adapted partitions")
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--words", action="store_true", help="the reduced Motzkin words of length n")
    what.add_argument("--partitions", action="store_true", help="the adapted partitions of a word")
    what.add_argument("--labeled-partitions", action="store_true", help="adapted partitions passing a labeling")
    p.add_argument("-n", type=int)
    p.add_argument("-w", "--word")
    p.add_argument("--irreducible", action="store_true")
    p.add_argument("--labels", help="comma-separated labels, e.g. 1,2,1")
    p.add_argument("--mode", choices=("monotone-chains", "all-chains"), default="monotone-chains")
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("catalan", help="Catalan number split over reduced words")
    p.add_argument("n", type=int)
    common(p)
    p.set_defaults(func=cmd_catalan)

    p = sub.add_parser("compute", help="evaluate queries against moment tables")
    p.add_argument("--spec", required=True, help="moment-table JSON")
    p.add_argument("--queries", required=True, help="query JSON")
    p.add_argument("--models", help="matrix-model JSON for the tensor oracle")
    p.add_argument("--engine", choices=sorted(ENGINES) + ["oracle", "all"], default="partition")
    p.add_argument("--float", action="store_true", help="also print decimal approximations")
    p.add_argument("--float-oracle", action="store_true", help="run the tensor oracle in floating point")
    common(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="run a seeded property suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("-n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="Hasse diagrams as DOT or JSON")
    p.add_argument("target", choices=("hasse-words", "hasse-adapted"))
    p.add_argument("-n", type=int)
    p.add_argument("-w", "--word")
    p.add_argument("--irreducible", action="store_true")
    common(p, formats=("dot", "json"))
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(format="%(levelname)s: %(message)s", level=logging.WARNING)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        bounds = load_bounds(args.config)
        return args.func(args, bounds)
    except (UsageError, BoundExceeded, MotzkinWordError, PartitionError, AlgebraError,
            ModelMismatch, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
