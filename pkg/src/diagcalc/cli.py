"""Command-line frontend with stable, canonically ordered text output.

Exit codes: 0 success, 1 input error, 2 verification failure, 3 bound
exceeded.  Errors are printed to stderr as one line ``error[CODE]: message``.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import diag, egf, partitions, verify, weyl
from .errors import BoundError, ParseError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2
EXIT_BOUND = 3


def _parse_weyl_polynomial(text: str) -> weyl.NormalForm:
    """Sum of words separated by standalone "+", each with an optional leading
    integer coefficient, e.g. "a+ a a+ + a+" or "2 a+ a"."""
    groups: list[list[str]] = [[]]
    for token in text.split():
        if token == "+" and groups[-1]:
            groups.append([])
        else:
            groups[-1].append(token)
    if not groups[-1]:
        raise ParseError("empty summand in operator expression")
    total = weyl.NormalForm.zero()
    for group in groups:
        coeff = 1
        if group and group[0].lstrip("-").isdigit():
            coeff = int(group[0])
            group = group[1:]
        word = weyl.parse_word(" ".join(group))
        total = total + coeff * weyl.normal_order(word)
    if total.is_zero():
        raise ParseError("operator expression is zero")
    return total


def _matrix_table(rows: list[list]) -> str:
    width = max((len(str(v)) for row in rows for v in row), default=1)
    return "\n".join("[ " + "  ".join(str(v).rjust(width) for v in row) for row in rows)


def _cmd_stirling(args) -> int:
    omega = _parse_weyl_polynomial(args.omega)
    matrix = weyl.stirling_matrix(omega, args.rows)
    if args.format == "csv":
        print(matrix.to_csv())
    elif args.format == "json":
        print(matrix.to_json())
    else:
        print(_matrix_table(matrix.padded_rows()))
    return EXIT_OK


def _cmd_normal_order(args) -> int:
    word = weyl.parse_word(args.word)
    print(weyl.normal_order(word, args.power).to_lines())
    return EXIT_OK


def _cmd_rook(args) -> int:
    word = weyl.parse_word(args.word)
    numbers = weyl.rook_numbers(weyl.rook_board(word))
    print("rook numbers:", " ".join(str(v) for v in numbers))
    print(weyl.rook_normal_form(word).to_lines())
    return EXIT_OK


def _cmd_bell(args) -> int:
    poly = partitions.complete_bell(args.n)
    pieces = []
    for alpha, coeff in poly.items():
        mono = diag.format_lvy(alpha.counts, (), 0)
        pieces.append(mono if coeff == 1 else f"{coeff} {mono}")
    print(" + ".join(pieces) if pieces else "0")
    return EXIT_OK


def _cmd_faa(args) -> int:
    try:
        counts = [int(tok) for tok in args.alpha.split(",")] if args.alpha.strip() else []
    except ValueError as exc:
        raise ParseError(f"invalid type {args.alpha!r}") from exc
    print(partitions.faa_di_bruno(counts))
    return EXIT_OK


def _cmd_partitions(args) -> int:
    stream = (
        partitions.enumerate_ordered_partitions(args.n)
        if args.ordered
        else partitions.enumerate_partitions(args.n)
    )
    for p in stream:
        print(partitions.format_partition(p))
    return EXIT_OK


def _cmd_imatrix(args) -> int:
    p1 = partitions.parse_ordered_partition(args.p1)
    p2 = partitions.parse_ordered_partition(args.p2)
    print(diag.format_matrix(partitions.intersection_matrix(p1, p2)))
    return EXIT_OK


def _cmd_diagrams(args) -> int:
    if args.labelled:
        tally = verify.labelled_multiplicities(args.order)
        items = sorted(tally.items(), key=lambda kv: kv[0].sort_key())
    else:
        tally = verify.diagram_multiplicities(args.order)
        items = sorted(tally.items(), key=lambda kv: kv[0].sort_key())
    for d, mult in items:
        print(f"{diag.format_matrix(d)}\t{mult}")
    if args.dot:
        graphs = [
            diag.to_dot(d, name=f"d{i}") for i, (d, _) in enumerate(items, start=1)
        ]
        with open(args.dot, "w", encoding="utf-8") as handle:
            handle.write("\n".join(graphs) + "\n")
    return EXIT_OK


def _cmd_expand(args) -> int:
    poly = (
        verify.expand_direct(args.order)
        if args.mode == "direct"
        else verify.expand_by_diagrams(args.order)
    )
    print(poly.to_text())
    return EXIT_OK


def _cmd_coproduct(args) -> int:
    m = diag.parse_matrix(args.matrix)
    tensor = diag.delta_ws(m) if args.side == "ws" else diag.delta_bs(m)
    for (a, b), c in tensor.items_sorted():
        print(f"{c}\t{diag.format_matrix(a)}\t{diag.format_matrix(b)}")
    return EXIT_OK


def _cmd_antipode(args) -> int:
    m = diag.parse_matrix(args.matrix)
    result = diag.antipode(m, side=args.side)
    for d, c in result.items_sorted():
        print(f"{c}\t{diag.format_matrix(d)}")
    return EXIT_OK


def _cmd_product(args) -> int:
    m1 = diag.parse_matrix(args.m1)
    m2 = diag.parse_matrix(args.m2)
    print(diag.format_matrix(diag.star(m1, m2)))
    return EXIT_OK


def _cmd_hadamard(args) -> int:
    f = egf.parse_series(args.f, args.order)
    g = egf.parse_series(args.g, args.order)
    print(egf.hadamard(f, g).to_json())
    return EXIT_OK


def _cmd_group(args) -> int:
    f = egf.parse_series(args.f, args.order)
    try:
        exponent = Fraction(args.lam)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"invalid exponent {args.lam!r}") from exc
    matrix = egf.one_param_power(egf.substitution_matrix(f), exponent)
    print(matrix.to_csv())
    return EXIT_OK


def _cmd_hopf_check(args) -> int:
    report = verify.hopf_axiom_suite(args.max_weight, args.samples, args.seed)
    print(report.to_json())
    return EXIT_OK if report.all_passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diagcalc",
        description="Exact calculus of boson normal ordering, generalized "
        "Stirling matrices, set partitions and diagram Hopf algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stirling", help="generalized Stirling matrix of an operator")
    p.add_argument("--omega", required=True, help='word or sum of words, e.g. "a+ a a+ + a+"')
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p.set_defaults(func=_cmd_stirling)

    p = sub.add_parser("normal-order", help="normal form of a word power")
    p.add_argument("--word", required=True)
    p.add_argument("--power", type=int, default=1)
    p.set_defaults(func=_cmd_normal_order)

    p = sub.add_parser("rook", help="rook numbers of a word's board")
    p.add_argument("--word", required=True)
    p.set_defaults(func=_cmd_rook)

    p = sub.add_parser("bell", help="complete Bell polynomial")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_bell)

    p = sub.add_parser("faa", help="Faa di Bruno coefficient of a type")
    p.add_argument("--alpha", required=True, help='comma-separated multiplicities, e.g. "0,0,2"')
    p.set_defaults(func=_cmd_faa)

    p = sub.add_parser("partitions", help="enumerate set partitions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ordered", action="store_true")
    p.set_defaults(func=_cmd_partitions)

    p = sub.add_parser("imatrix", help="intersection matrix of two ordered partitions")
    p.add_argument("--p1", required=True)
    p.add_argument("--p2", required=True)
    p.set_defaults(func=_cmd_imatrix)

    p = sub.add_parser("diagrams", help="diagrams of a given edge count with multiplicities")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--labelled", action="store_true")
    p.add_argument("--dot", metavar="FILE", help="also write Graphviz output to FILE")
    p.set_defaults(func=_cmd_diagrams)

    p = sub.add_parser("expand", help="two-alphabet expansion up to a given order")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--mode", choices=["direct", "diagram"], required=True)
    p.set_defaults(func=_cmd_expand)

    p = sub.add_parser("coproduct", help="row or column coproduct of a packed matrix")
    p.add_argument("--matrix", required=True, help='rows separated by ";", e.g. "2 0;0 2;1 1"')
    p.add_argument("--side", choices=["ws", "bs"], required=True)
    p.set_defaults(func=_cmd_coproduct)

    p = sub.add_parser("antipode", help="antipode of a packed matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--side", choices=["ws", "bs"], default="ws")
    p.set_defaults(func=_cmd_antipode)

    p = sub.add_parser("product", help="star product of two packed matrices")
    p.add_argument("--m1", required=True)
    p.add_argument("--m2", required=True)
    p.set_defaults(func=_cmd_product)

    p = sub.add_parser("hadamard", help="coefficient-wise product of two series")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=_cmd_hadamard)

    p = sub.add_parser("group", help="rational power of a substitution matrix")
    p.add_argument("--f", required=True, help='series with f(0)=0, f\'(0)=1, e.g. "exp(x)-1"')
    p.add_argument("--lambda", dest="lam", required=True, help='rational exponent, e.g. "-1" or "1/2"')
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=_cmd_group)

    p = sub.add_parser("hopf-check", help="run the Hopf axiom suite")
    p.add_argument("--max-weight", type=int, default=4)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_hopf_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error[E_PARSE]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BoundError as exc:
        print(f"error[E_BOUND]: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (ValueError, TypeError) as exc:
        print(f"error[E_INPUT]: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
