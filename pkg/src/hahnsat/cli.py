"""Batch front end: realize types from type files, run quantifier
elimination, extract valuation bases, take pseudo-limits, query interval
codings of tree nodes, and re-verify witnesses.

Type files are UTF-8 text, one construct per line:

    # comment
    param <name> = <series literal>
    formula <formula text>
    generator <builtin> <args...>

Built-in generators: `beta <upper> <lower>` (the family (k+1)*lower < x,
(k+1)*x < upper), `scalar_cut <scalar> <param>` (binary approximants of the
scalar, scaled by the parameter), and `immediate-tail` (the strictly
narrowing tail 1 + t^(1/2) + t^(2/3) + ...).  Explicit formula lines are
emitted before generator output, in file order.
"""

import argparse
import math
import sys
from fractions import Fraction

from .engine import (
    Budgets,
    realize_type,
    render_inconclusive_report,
)
from .errors import (
    BudgetExhausted,
    NotFinitelySatisfiable,
    ParseError,
)
from .formulas import PartialType, doag_qe, eval_formula, format_formula, \
    parse_formula
from .scalars import approx_interval, parse_scalar
from .series import format_series, parse_series
from .trees import find_path_bounded, node_interval, path_from_real, \
    tree_from_notation
from .valbasis import PseudoSequence, check_pseudo_cauchy, pseudo_limit, \
    valuation_basis

TYPE_VAR = "x"


# ---------------------------------------------------------------------------
# type files


def _beta_generator(upper: str, lower: str):
    def emit(i):
        k = i // 2
        if i % 2 == 0:
            return parse_formula(f"{k + 1}*{lower} < {TYPE_VAR}")
        return parse_formula(f"{k + 1}*{TYPE_VAR} < {upper}")

    return emit


def _scalar_cut_generator(literal: str, param: str):
    scalar = parse_scalar(literal)

    def emit(i):
        k = i // 2
        lo, hi = approx_interval(scalar, k + 2)
        if i % 2 == 0:
            p = math.floor(lo * 2 ** k)
            return parse_formula(f"{p}*{param} < {2 ** k}*{TYPE_VAR}")
        p = math.floor(hi * 2 ** k)
        return parse_formula(f"{2 ** k}*{TYPE_VAR} < {p + 1}*{param}")

    return emit


def _immediate_tail_generator():
    def a_text(k):
        return " + ".join(["1"] + [f"t^({j}/{j + 1})"
                                   for j in range(1, k + 1)])

    def emit(i):
        k = i // 2 + 1
        if i % 2 == 0:
            return parse_formula(f"{a_text(k - 1)} < {TYPE_VAR}")
        return parse_formula(
            f"{TYPE_VAR} < {a_text(k - 1)} + 2*t^({k}/{k + 1})")

    return emit


def _build_generator(name: str, args: list, params: dict):
    if name == "beta":
        if len(args) != 2:
            raise ParseError("generator beta needs: <upper> <lower>", 1)
        for p in args:
            if p not in params:
                raise ParseError(f"generator references unknown param {p!r}",
                                 1)
        return _beta_generator(args[0], args[1])
    if name == "scalar_cut":
        if len(args) != 2:
            raise ParseError("generator scalar_cut needs: <scalar> <param>",
                             1)
        if args[1] not in params:
            raise ParseError(
                f"generator references unknown param {args[1]!r}", 1)
        return _scalar_cut_generator(args[0], args[1])
    if name == "immediate-tail":
        if args:
            raise ParseError("generator immediate-tail takes no arguments", 1)
        return _immediate_tail_generator()
    raise ParseError(f"unknown generator {name!r}", 1)


def load_type_file(path: str, dim: int):
    """Parse a type file into (PartialType, parameter environment)."""
    params: dict = {}
    formulas: list = []
    generator = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                if line.startswith("param "):
                    body = line[len("param "):]
                    if "=" not in body:
                        raise ParseError("param line needs '='", 1)
                    name, text = body.split("=", 1)
                    params[name.strip()] = parse_series(text.strip(), dim)
                elif line.startswith("formula "):
                    formulas.append(parse_formula(line[len("formula "):]))
                elif line.startswith("generator "):
                    if generator is not None:
                        raise ParseError("only one generator line allowed", 1)
                    fields = line.split()
                    generator = _build_generator(fields[1], fields[2:],
                                                 params)
                else:
                    raise ParseError(f"unknown construct {line.split()[0]!r}",
                                     1)
            except ParseError as e:
                raise ParseError(f"{path}:{lineno}: {e}", lineno) from None
    if not formulas and generator is None:
        raise ParseError(f"{path}: no formulas and no generator", 1)

    head = list(formulas)

    def emit(i):
        if i < len(head):
            return head[i]
        if generator is None:
            return None
        return generator(i - len(head))

    return PartialType(emit, TYPE_VAR, tuple(params)), params


# ---------------------------------------------------------------------------
# commands


def _emit_output(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _budgets(args) -> Budgets:
    return Budgets(height_budget=args.height,
                   exponent_denominator_budget=args.denom,
                   formula_prefix_budget=args.prefix,
                   precision_budget=args.precision)


def cmd_realize(args) -> int:
    budgets = _budgets(args)
    tau, params = load_type_file(args.file, args.dim)
    try:
        result = realize_type(tau, params, mode=args.mode, budgets=budgets)
    except NotFinitelySatisfiable as e:
        lines = ["== NOT FINITELY SATISFIABLE =="]
        lines.extend(e.witness or (str(e),))
        _emit_output("\n".join(lines) + "\n", args.out)
        return 2
    except BudgetExhausted as e:
        _emit_output(render_inconclusive_report(e, args.mode, budgets),
                     args.out)
        return 3
    _emit_output(result.report, args.out)
    return 0


def cmd_qe(args) -> int:
    f = parse_formula(args.formula)
    _emit_output(format_formula(doag_qe(f)) + "\n", args.out)
    return 0


def cmd_basis(args) -> int:
    gs = [parse_series(part.strip(), args.dim)
          for part in args.series.split(",")]
    basis = valuation_basis(gs)
    text = ", ".join(format_series(g) for g in basis.generators)
    _emit_output(text + "\n", args.out)
    return 0


def cmd_pseudo_limit(args) -> int:
    items = [parse_series(part.strip(), args.dim)
             for part in args.series.split(",")]
    seq = PseudoSequence.explicit(items)
    if not check_pseudo_cauchy(seq, len(items)):
        print("error: prefix is not pseudo-Cauchy", file=sys.stderr)
        return 1
    _emit_output(format_series(pseudo_limit(seq, len(items))) + "\n",
                 args.out)
    return 0


def cmd_tree(args) -> int:
    if args.tree_command == "interval":
        _emit_output(str(node_interval(args.node)) + "\n", args.out)
        return 0
    tree = tree_from_notation(args.tree)
    if args.tree_command == "path":
        path = path_from_real(tree, Fraction(args.real), args.depth)
        _emit_output("\n".join(path[1:]) + "\n", args.out)
        return 0
    found = find_path_bounded(tree, args.depth)
    _emit_output((found if found is not None else "none") + "\n", args.out)
    return 0


def cmd_eval(args) -> int:
    tau, params = load_type_file(args.file, args.dim)
    witness = parse_series(args.at, args.dim)
    env = dict(params)
    env[tau.var] = witness
    lines = []
    for i in range(args.prefix):
        f = tau.emit(i)
        if f is None:
            continue
        ok = eval_formula(f, env, args.dim)
        lines.append(f"{'PASS' if ok else 'FAIL'}  {format_formula(f)}")
    _emit_output("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# argument wiring


def _add_budget_flags(p):
    defaults = Budgets()
    p.add_argument("--height", type=int,
                   default=defaults.height_budget,
                   help="comparison-enumeration generations")
    p.add_argument("--denom", type=int,
                   default=defaults.exponent_denominator_budget,
                   help="largest exponent denominator probed (field mode)")
    p.add_argument("--prefix", type=int,
                   default=defaults.formula_prefix_budget,
                   help="enumerated formulas decided per completion")
    p.add_argument("--precision", type=int,
                   default=defaults.precision_budget,
                   help="digit resolution, in bits")


def _add_common(p, budgets=False):
    p.add_argument("--dim", type=int, default=2,
                   help="exponent dimension of the series model")
    p.add_argument("--out", default=None, help="write output to a file")
    if budgets:
        _add_budget_flags(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hahnsat",
        description="Exact cut classification and type realization over "
                    "finite-support Hahn series.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("realize", help="realize a type file")
    p.add_argument("file", help="type file")
    p.add_argument("--mode", choices=("group", "field"), default="group")
    _add_common(p, budgets=True)
    p.set_defaults(fn=cmd_realize)

    p = sub.add_parser("qe", help="eliminate quantifiers from a formula")
    p.add_argument("formula")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_qe)

    p = sub.add_parser("basis", help="valuation basis of comma-separated "
                                     "series")
    p.add_argument("series")
    _add_common(p)
    p.set_defaults(fn=cmd_basis)

    p = sub.add_parser("pseudo-limit", help="pseudo-limit of a "
                                            "comma-separated prefix")
    p.add_argument("series")
    _add_common(p)
    p.set_defaults(fn=cmd_pseudo_limit)

    p = sub.add_parser("tree", help="interval coding and path search")
    tsub = p.add_subparsers(dest="tree_command", required=True)
    q = tsub.add_parser("interval", help="dyadic interval of a node")
    q.add_argument("node")
    q.add_argument("--out", default=None)
    q = tsub.add_parser("path", help="tree path of a rational real")
    q.add_argument("tree", help="full | single:<bits> | seeded:<n> | nodes")
    q.add_argument("real")
    q.add_argument("depth", type=int)
    q.add_argument("--out", default=None)
    q = tsub.add_parser("search", help="leftmost surviving node at a depth")
    q.add_argument("tree")
    q.add_argument("depth", type=int)
    q.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_tree)

    p = sub.add_parser("eval", help="re-verify a witness against a type "
                                    "file")
    p.add_argument("file")
    p.add_argument("--at", required=True, help="series literal to test")
    p.add_argument("--prefix", type=int, default=Budgets().formula_prefix_budget)
    _add_common(p)
    p.set_defaults(fn=cmd_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    try:
        return args.fn(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
