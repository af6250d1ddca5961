"""Command-line entry point: ``sphord <subcommand> ...``.

Operation errors go to stderr as ``{"error": code, "detail": ...}`` with exit
status 1; usage errors exit with status 2 (argparse).  ``-`` names stdin or
stdout wherever a structure file is expected.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import backforth
from .dense import DenseOracle, density_witness, format_rational, parse_rational
from .errors import SphordError
from .logic.semantics import decide, decide_by_order_types, qf_sat
from .logic.syntax import parse
from .order import (
    FiniteSphericalOrder,
    are_isomorphic,
    cardinality_formula,
    check_axioms,
    derive,
    enumerate_all_orders,
)
from .spectra import ExpansionSpec, ehrenfeucht_catalog, hasse, spectrum


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read_order(path: str) -> FiniteSphericalOrder:
    return FiniteSphericalOrder.from_json(_read_text(path))


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _seed(text: str) -> int | None:
    if text.lower() in ("none", "default"):
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer or 'none', got {text!r}") from None


def _formula_text(text: str) -> str:
    return sys.stdin.read() if text == "-" else text


# -- subcommands ---------------------------------------------------------------------


def cmd_generate(args) -> int:
    labels = args.labels.split(",") if args.labels else [str(i) for i in range(1, args.m + 1)]
    if args.labels and len(labels) != args.m:
        raise SphordError(f"--labels has {len(labels)} entries, --m is {args.m}")
    order = derive(args.n, labels)
    _write_text(args.output, order.to_json() + "\n")
    return 0


def cmd_check(args) -> int:
    report = check_axioms(_read_order(args.file), signed_rotation=args.signed_rotation)
    if args.json:
        _emit(report.to_dict())
        return 0
    for name, r in report.results.items():
        line = f"{name}: {'pass' if r.passed else 'FAIL'} ({r.examined} checked)"
        if not r.passed:
            line += f" counterexample {r.counterexample}"
        print(line)
    print("all axioms pass" if report.ok else "failed: " + ", ".join(report.failed()))
    return 0


def cmd_count(args) -> int:
    size = cardinality_formula(args.n, args.m)
    if args.json:
        _emit({"n": args.n, "m": args.m, "size": size})
    else:
        print(size)
    return 0


def cmd_iso(args) -> int:
    a, b = _read_order(args.a), _read_order(args.b)
    if a.n != b.n:
        raise SphordError(f"arity mismatch: {a.n} vs {b.n}")
    f = are_isomorphic(a, b)
    if args.json:
        _emit({"isomorphic": f is not None, "map": None if f is None else {str(k): str(v) for k, v in f.items()}})
    elif f is None:
        print("not isomorphic")
    else:
        print("isomorphic: " + " ".join(f"{k}->{v}" for k, v in f.items()))
    return 0


def cmd_unique(args) -> int:
    classes = enumerate_all_orders(args.n, args.m, signed_rotation=args.signed_rotation)
    sizes = [len(c) for c in classes]
    if args.json:
        _emit({"n": args.n, "m": args.m, "classes": len(classes), "relations_per_class": sizes})
    else:
        print(f"{len(classes)} isomorphism class(es); relations per class: {sizes}")
    return 0


def cmd_witness(args) -> int:
    oracle = DenseOracle(args.n, args.seed)
    t = tuple(parse_rational(x) for x in args.tuple.split(","))
    b = density_witness(oracle, t)
    if args.json:
        _emit({"tuple": [format_rational(x) for x in t], "witness": format_rational(b)})
    else:
        print(format_rational(b))
    return 0


def cmd_backforth(args) -> int:
    a = DenseOracle(args.n, args.seed_a)
    b = DenseOracle(args.n, args.seed_b)

    def on_step(p):
        if args.verify:
            backforth.verify_last_pair(p)
        if args.trace:
            print(backforth.trace_line(p.history[-1]), flush=True)

    p = backforth.run(a, b, args.steps, search_bound=args.search_bound, on_step=on_step)
    summary = {
        "n": args.n,
        "steps": p.steps,
        "seed_a": args.seed_a,
        "seed_b": args.seed_b,
        "coverage_ok": backforth.coverage_ok(p),
        "verified": bool(args.verify),
    }
    if args.json:
        summary["pairs"] = p.to_dict()["pairs"]
        _emit(summary)
    elif not args.trace:
        print(f"{p.steps} pairs, coverage {'ok' if summary['coverage_ok'] else 'FAILED'}")
    return 0


def cmd_decide(args) -> int:
    sigma = parse(_formula_text(args.formula), args.n)
    fn = decide_by_order_types if args.method == "order-types" else decide
    value = fn(args.n, sigma, max_quantifiers=args.max_quantifiers)
    if args.json:
        _emit({"n": args.n, "method": args.method, "value": value})
    else:
        print("true" if value else "false")
    return 0


def cmd_sat(args) -> int:
    phi = parse(_formula_text(args.formula), args.n)
    d = qf_sat(args.n, phi)
    if args.json:
        _emit({"sat": d is not None, "diagram": None if d is None else d.to_dict()})
    elif d is None:
        print("UNSAT")
    else:
        print(f"SAT {d}")
    return 0


def cmd_spectrum(args) -> int:
    if args.ehrenfeucht is not None:
        spec = ExpansionSpec.ehrenfeucht(args.n, args.ehrenfeucht)
    else:
        spec = ExpansionSpec.constants(args.n, args.counts or [], infinitely_many_types=args.infinite)
    result = spectrum(spec)
    if args.json:
        _emit({"n": args.n, "spectrum": result.to_json()})
    else:
        print(result)
    return 0


def cmd_catalog(args) -> int:
    cat = ehrenfeucht_catalog(args.n, args.m)
    if args.json:
        _emit(cat.to_dict())
    else:
        for e in cat.entries:
            tag = e.kind if e.index is None else f"{e.kind}[{e.index}]"
            print(f"{tag}: {e.description}")
    return 0


def cmd_hasse(args) -> int:
    _write_text(args.output, hasse(args.kind))
    return 0


# -- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sphord", description="Finite and dense n-spherical orders.")
    p.add_argument("--json", action="store_true", help="structured output")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="structured output")
        sp.set_defaults(func=fn)
        return sp

    sp = add("generate", cmd_generate, "write derive(n, labels) as a structure file")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--labels", help="comma-separated labels in increasing order (default 1..m)")
    sp.add_argument("-o", "--output", default="-")

    sp = add("check", cmd_check, "verify nso1-nso4 on a structure file")
    sp.add_argument("file")
    sp.add_argument("--signed-rotation", action="store_true", help="orientation-aware rotation law")

    sp = add("count", cmd_count, "closed-form relation size")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)

    sp = add("iso", cmd_iso, "search for an isomorphism between two structure files")
    sp.add_argument("a")
    sp.add_argument("b")

    sp = add("unique", cmd_unique, "enumerate all orders on m points up to isomorphism")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--signed-rotation", action="store_true")

    sp = add("witness", cmd_witness, "density witness in the rational model")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--tuple", required=True, help="comma-separated rationals, e.g. 0,1/2,3")
    sp.add_argument("--seed", type=_seed, default=None)

    sp = add("backforth", cmd_backforth, "grow a partial isomorphism between two oracles")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--seed-a", type=_seed, default=None)
    sp.add_argument("--seed-b", type=_seed, default=None)
    sp.add_argument("--search-bound", type=int, default=backforth.DEFAULT_SEARCH_BOUND)
    sp.add_argument("--trace", action="store_true", help="one JSON line per added pair")
    sp.add_argument("--verify", action="store_true", help="check preservation after every step")

    sp = add("decide", cmd_decide, "truth of a sentence in the dense theory")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--method", choices=("diagrams", "order-types"), default="diagrams")
    sp.add_argument("--max-quantifiers", type=int, default=6)
    sp.add_argument("formula")

    sp = add("sat", cmd_sat, "satisfiability of a quantifier-free formula")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("formula")

    sp = add("spectrum", cmd_spectrum, "countable spectrum of an expansion")
    sp.add_argument("--n", type=int, required=True)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--counts", type=_int_list, help="r_k for k in 0,2,3,...,n-1")
    group.add_argument("--ehrenfeucht", type=int, metavar="M")
    sp.add_argument("--infinite", action="store_true", help="infinitely many nonisolated 1-types")

    sp = add("catalog", cmd_catalog, "countable models of the Ehrenfeucht expansion")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)

    sp = add("hasse", cmd_hasse, "RK Hasse diagram as DOT")
    sp.add_argument("--kind", required=True, help="T1, T2, limit(k), or a product like T1*limit(3)")
    sp.add_argument("-o", "--output", default="-")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SphordError as exc:
        print(json.dumps({"error": exc.code, "detail": str(exc)}), file=sys.stderr)
        return 1
    except OSError as exc:
        print(json.dumps({"error": "io", "detail": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
