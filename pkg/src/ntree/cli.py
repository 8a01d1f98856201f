"""The ``ntree`` command line."""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time

from .analysis import (
    build_colored_tree,
    discriminant_of,
    oracle_resultant_exponent,
    qo_by_tree_report,
    qo_oracle,
    resultant_exponent,
)
from .errors import InternalInconsistency, NTreeError
from .pgood import to_pgood
from .polyring import parse_poly
from .sections import SectionForest, curve_sections, reconstruct, section_forest
from .tree import build_tree, from_json_obj, render


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fmt(vec):
    vec = tuple(vec)
    if len(vec) == 1:
        return str(vec[0])
    return "(" + ",".join(str(v) for v in vec) + ")"


def _verdict(match):
    return "match" if match else "MISMATCH"


def _poly(args, text=None):
    if args.d is None:
        raise UsageError("the dimension flag -d is required for polynomial input")
    return parse_poly(args.poly if text is None else text, args.d)


def _tree_input(args):
    if getattr(args, "tree_file", None):
        with open(args.tree_file) as fh:
            return from_json_obj(json.load(fh))
    if args.poly is None:
        raise UsageError("give a polynomial or --tree FILE")
    return to_pgood(build_tree(_poly(args)))


def cmd_tree(args, out):
    t = build_tree(_poly(args))
    if args.pgood:
        t = to_pgood(t)
    out.write(render(t, args.format) + "\n")


def cmd_pgood(args, out):
    t = to_pgood(build_tree(_poly(args)))
    out.write(render(t, args.format) + "\n")


def cmd_qo(args, out):
    f = _poly(args)
    v = qo_by_tree_report(f)
    out.write(("quasi-ordinary" if v.qo else f"not quasi-ordinary: {v.reason}") + "\n")
    if args.oracle:
        o = qo_oracle(f)
        text = "quasi-ordinary" if o.qo else ("not reduced" if o.non_reduced else "not quasi-ordinary")
        out.write(f"oracle: {text}, {_verdict(o.qo == v.qo)}\n")


def cmd_disc(args, out):
    f = _poly(args)
    D = discriminant_of(f)
    if not args.oracle:
        out.write(f"formula: {_fmt(D)}\n")
        return
    o = qo_oracle(f)
    shown = _fmt(o.exponent) if o.exponent is not None else "none"
    out.write(f"formula: {_fmt(D)}, oracle: {shown}, {_verdict(o.exponent == D)}\n")


def cmd_res(args, out):
    f = parse_poly(args.f, args.d)
    g = parse_poly(args.g, args.d)
    e = resultant_exponent(build_colored_tree(f, g))
    if not args.oracle:
        out.write(f"exponent: {_fmt(e)}\n")
        return
    o = oracle_resultant_exponent(f, g)
    shown = _fmt(o) if o is not None else "none"
    out.write(f"exponent: {_fmt(e)}, oracle: {shown}, {_verdict(o == e)}\n")


def _write_forest(forest: SectionForest, out, fmt):
    if fmt == "json":
        out.write(json.dumps(forest.to_json_obj(), sort_keys=True) + "\n")
        return
    out.write(f"# section in x{forest.variable + 1}: {len(forest.entries)} distinct tree(s)\n")
    for t, c in forest.entries:
        out.write(f"## {c} x\n{render(t, fmt)}\n")


def cmd_sections(args, out):
    t = _tree_input(args)
    if not 1 <= args.i <= t.dim:
        raise UsageError(f"-i must lie between 1 and {t.dim}")
    _write_forest(section_forest(t, args.i - 1), out, args.format)


def cmd_curve_sections(args, out):
    t = _tree_input(args)
    forests = curve_sections(t)
    if args.format == "json":
        out.write(json.dumps([fo.to_json_obj() for fo in forests], sort_keys=True) + "\n")
        return
    for fo in forests:
        _write_forest(fo, out, args.format)


def cmd_reconstruct(args, out):
    forests = []
    for path in args.files:
        with open(path) as fh:
            obj = json.load(fh)
        for item in obj if isinstance(obj, list) else [obj]:
            forests.append(SectionForest.from_json_obj(item))
    t = reconstruct(forests)
    out.write(render(t, args.format) + "\n")


def _pow(var, k):
    return var if k == 1 else f"{var}^{k}"


def bench_family(seed=0, max_degree=12):
    """Products of z^2 - x1^a x2^b with increasing exponents (quasi-ordinary), d = 2."""
    rng = random.Random(seed)
    rows = []
    for deg in range(2, max_degree + 1, 2):
        factors = []
        a, b = 0, 0
        for _ in range(deg // 2):
            a += rng.randint(1, 2)
            b += rng.randint(1, 2)
            if a % 2 == 0 and b % 2 == 0:
                b += 1
            factors.append(f"(z^2-{_pow('x1', a)}*{_pow('x2', b)})")
        rows.append("*".join(factors))
    return rows


def _bench_rows(seed, max_degree):
    discriminant_of(parse_poly("z^2-x1^3*x2", 2))  # warm caches and imports before timing
    for text in bench_family(seed, max_degree):
        f = parse_poly(text, 2)
        t0 = time.perf_counter()
        try:
            D = discriminant_of(f)
        except NTreeError:
            D = None
        t1 = time.perf_counter()
        o = qo_oracle(f)
        t2 = time.perf_counter()
        ok = D is not None and o.exponent == D
        yield [
            text, f.z_degree(), 2,
            int((t1 - t0) * 1e6), int((t2 - t1) * 1e6),
            _fmt(D) if D is not None else "none",
            _verdict(ok),
        ]


BENCH_COLUMNS = ["input", "z-degree", "d", "formula_micros", "oracle_micros", "exponent", "match"]


def cmd_bench(args, out):
    if args.out is None:
        writer = csv.writer(out)
        writer.writerow(BENCH_COLUMNS)
        writer.writerows(_bench_rows(args.seed, args.max_degree))
        return
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCH_COLUMNS)
        writer.writerows(_bench_rows(args.seed, args.max_degree))


def make_parser():
    p = _Parser(prog="ntree", description="Decorated Newton trees over the rationals.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def poly_cmd(name, help_text, func, formats=("ascii", "json", "dot")):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("-d", type=int, required=True, help="number of x-variables")
        sp.add_argument("poly")
        if formats:
            sp.add_argument("--format", choices=formats, default="ascii")
        sp.set_defaults(func=func)
        return sp

    sp = poly_cmd("tree", "build and render the decorated tree", cmd_tree)
    sp.add_argument("--pgood", action="store_true", help="normalize to P-good form first")
    poly_cmd("pgood", "render the P-good tree", cmd_pgood)
    sp = poly_cmd("qo", "decide quasi-ordinarity by the tree", cmd_qo, formats=())
    sp.add_argument("--oracle", action="store_true")
    sp = poly_cmd("disc", "discriminant exponent from the tree", cmd_disc, formats=())
    sp.add_argument("--oracle", action="store_true")

    sp = sub.add_parser("res", help="resultant exponent of two polynomials")
    sp.add_argument("-d", type=int, required=True)
    sp.add_argument("f")
    sp.add_argument("g")
    sp.add_argument("--oracle", action="store_true")
    sp.set_defaults(func=cmd_res)

    for name, func, help_text in (
        ("sections", cmd_sections, "transversal section forest in one variable"),
        ("curve-sections", cmd_curve_sections, "all curve transversal sections"),
    ):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("-d", type=int)
        sp.add_argument("poly", nargs="?")
        sp.add_argument("--tree", dest="tree_file", help="read a tree in JSON form instead")
        sp.add_argument("--format", choices=("ascii", "json", "dot"), default="ascii")
        if name == "sections":
            sp.add_argument("-i", type=int, required=True, help="1-based index of the constant variable")
        sp.set_defaults(func=func)

    sp = sub.add_parser("reconstruct", help="rebuild a tree from curve-section forests (JSON)")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--format", choices=("ascii", "json", "dot"), default="ascii")
    sp.set_defaults(func=cmd_reconstruct)

    sp = sub.add_parser("bench", help="formula versus determinant timings (CSV)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-degree", type=int, default=12)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bench)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = make_parser().parse_args(argv)
        args.func(args, out)
        return 0
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 1
    except NTreeError as exc:
        err.write(f"error: {exc.name}: {exc}\n")
        if type(exc).__name__ == "NonRationalRoots":
            err.write("hint: a linear substitution of the x-variables may make the roots rational\n")
        return 2
    except InternalInconsistency as exc:
        err.write(f"internal inconsistency: {exc}\n")
        return 3
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
