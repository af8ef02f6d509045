"""Command-line front end.

Subcommands: check-config, bracket, mul, table, suite, deriv
check|decompose, cocycle check|trivialize|verify.  Exit codes: 0 all
good, 1 a checked property failed, 2 usage or config trouble.  All
numeric I/O is exact rational text.
"""

from __future__ import annotations

import argparse
import csv
import random
import re
import sys
import time
from fractions import Fraction

from .indices import AlgebraConfig, ConfigError, parse_config_text
from .algebra import (
    AlgebraElement, LiteralError, bracket_closed, bracket_operator,
    format_basis_index, format_element, multiply, parse_basis_index,
    parse_element, sample_index, structure_rows, window_indices,
)
from .derivations import (
    AmbiguousError, DerivationDecomposer, LatticeHom, LinearOperator,
    ResidualError, ad, check_derivation, diagonal_derivation,
    outer_lower_partial,
)
from .cohomology import (
    CoboundaryCocycle, LinearFunctional, TableCocycle, check_cocycle,
    trivialize, verify_trivialization,
)
from .suite import render_report, run_suites


class UsageError(ValueError):
    pass


def load_config(path: str) -> AlgebraConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


# -- operator specs ---------------------------------------------------

_OP_START = re.compile(r"^\s*(?:(-?\d+(?:/\d+)?)\s*\*?\s*)?(ad|dmu|dt)\b(.*)$", re.S)


def parse_operator_spec(config: AlgebraConfig, text: str) -> LinearOperator:
    """Mini-language: '+'-joined terms of "[scalar] ad <element>",
    "[scalar] dmu <value per generator>", "[scalar] dt <index>"."""
    chunks: list[str] = []
    for piece in text.split("+"):
        if _OP_START.match(piece):
            chunks.append(piece)
        elif chunks:
            chunks[-1] += "+" + piece  # '+' inside an ad element literal
        else:
            raise UsageError(f"cannot parse operator term {piece.strip()!r}")
    parts = []
    for chunk in chunks:
        m = _OP_START.match(chunk)
        if not m:
            raise UsageError(f"cannot parse operator term {chunk.strip()!r}")
        scalar = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        kind = m.group(2)
        rest = m.group(3).strip()
        if kind == "ad":
            op = ad(parse_element(config, rest))
        elif kind == "dmu":
            values = rest.split()
            if len(values) != len(config.lattice.generators):
                raise UsageError("dmu needs one rational per gamma generator")
            op = diagonal_derivation(LatticeHom(config, [Fraction(v) for v in values]))
        else:
            op = outer_lower_partial(config, config.shape.parse_index_token(rest))
        parts.append((scalar, op))
    if not parts:
        raise UsageError("empty operator spec")
    return LinearOperator.combine(config, parts)


# -- cocycle / functional files ---------------------------------------

def _content_lines(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line


def load_functional(config: AlgebraConfig, path: str) -> LinearFunctional:
    table = {}
    for lineno, line in _content_lines(path):
        fields = line.split()
        if len(fields) != 2:
            raise UsageError(f"{path}:{lineno}: expected 'basis-literal value'")
        idx = parse_basis_index(config, fields[0])
        table[idx] = Fraction(fields[1])
    return LinearFunctional(config, table=table, tag=path)


def load_table_cocycle(config: AlgebraConfig, path: str) -> TableCocycle:
    entries = {}
    for lineno, line in _content_lines(path):
        fields = line.split()
        if len(fields) != 3:
            raise UsageError(
                f"{path}:{lineno}: expected 'basis-literal basis-literal value'")
        iu = parse_basis_index(config, fields[0])
        iv = parse_basis_index(config, fields[1])
        key = (iu, iv)
        value = Fraction(fields[2])
        if key in entries and entries[key] != value:
            raise UsageError(f"{path}:{lineno}: conflicting duplicate pair")
        entries[key] = value
    return TableCocycle(config, entries)


def load_cocycle(config: AlgebraConfig, args):
    if getattr(args, "table", None):
        return load_table_cocycle(config, args.table)
    if getattr(args, "coboundary", None):
        return CoboundaryCocycle(load_functional(config, args.coboundary))
    raise UsageError("provide --table or --coboundary")


def _open_out(path):
    return open(path, "w", encoding="utf-8", newline="") if path else None


# -- subcommands ------------------------------------------------------

def cmd_check_config(args) -> int:
    config = load_config(args.config)
    shape = config.shape
    blocks = " ".join(str(x) for x in shape.ell)
    print(f"ok: blocks {blocks}, vector length {shape.dim}, "
          f"{len(config.lattice.generators)} generators, "
          f"j0 {'naturals' if config.j0_naturals else 'zero'}")
    return 0


def cmd_bracket(args) -> int:
    config = load_config(args.config)
    u = parse_element(config, args.lhs)
    v = parse_element(config, args.rhs)
    result = bracket_closed(u, v)
    if args.oracle:
        check = bracket_operator(u, v)
        if check != result:
            print("route disagreement:", file=sys.stderr)
            print(f"  closed:   {format_element(result)}", file=sys.stderr)
            print(f"  operator: {format_element(check)}", file=sys.stderr)
            return 1
    print(format_element(result))
    return 0


def cmd_mul(args) -> int:
    config = load_config(args.config)
    u = parse_element(config, args.lhs)
    v = parse_element(config, args.rhs)
    print(format_element(multiply(u, v)))
    return 0


def cmd_table(args) -> int:
    config = load_config(args.config)
    rows = structure_rows(config, args.radius)
    out = _open_out(args.out)
    try:
        writer = csv.writer(out or sys.stdout, lineterminator="\n")
        writer.writerow(["lhs_index", "rhs_index", "result_term_index", "coefficient"])
        writer.writerows(rows)
    finally:
        if out:
            out.close()
    return 0


def cmd_suite(args) -> int:
    config = load_config(args.config)
    start = time.monotonic()
    results = run_suites(config, args.seed, args.samples)
    report = render_report(config, args.seed, args.samples, results)
    out = _open_out(args.out)
    try:
        (out or sys.stdout).write(report)
    finally:
        if out:
            out.close()
    print(f"duration: {time.monotonic() - start:.2f}s", file=sys.stderr)
    return 0 if all(r.passed for r in results) else 1


def cmd_deriv_check(args) -> int:
    config = load_config(args.config)
    op = parse_operator_spec(config, args.op)
    rng = random.Random(args.seed)
    pairs = [(sample_index(config, rng), sample_index(config, rng))
             for _ in range(args.samples)]
    report = check_derivation(op, pairs)
    if report.passed:
        print(f"PASS derivation-law ({report.checked} samples)")
        return 0
    iu, iv, lhs, rhs = report.failures[0]
    print(f"FAIL derivation-law ({report.checked} samples)")
    print(f"  witness: {format_basis_index(iu)} , {format_basis_index(iv)}")
    print(f"  action on bracket: {format_element(lhs)}")
    print(f"  bracket of actions: {format_element(rhs)}")
    return 1


def cmd_deriv_decompose(args) -> int:
    config = load_config(args.config)
    op = parse_operator_spec(config, args.op)
    window = window_indices(config, args.radius)
    inner = window_indices(config, args.inner_radius)
    decomposer = DerivationDecomposer(config, window, inner)
    try:
        result = decomposer.decompose(op)
    except ResidualError as err:
        print(f"residual: {err}")
        return 1
    except AmbiguousError as err:
        print(f"ambiguous: {err}")
        return 1
    print("outer:")
    for p, c in sorted(result.outer_coeffs.items()):
        print(f"  dt {config.shape.index_token(p)}: {c}")
    if result.hom is None:
        print("hom: none")
    else:
        print(f"hom: {' '.join(str(v) for v in result.hom.values)}")
    print(f"inner: {format_element(result.inner)}")
    print("residual: zero")
    return 0


def cmd_cocycle_check(args) -> int:
    config = load_config(args.config)
    psi = load_cocycle(config, args)
    rng = random.Random(args.seed)
    triples = [tuple(sample_index(config, rng) for _ in range(3))
               for _ in range(args.triples)]
    report = check_cocycle(psi, triples)
    if report.passed:
        print(f"PASS cocycle-axioms ({report.pairs_checked} pairs, "
              f"{report.triples_checked} triples)")
        return 0
    print(f"FAIL cocycle-axioms ({report.pairs_checked} pairs, "
          f"{report.triples_checked} triples)")
    if report.skew_failures:
        a, b = report.skew_failures[0]
        print(f"  skew witness: {format_basis_index(a)} , {format_basis_index(b)}")
    if report.sum_failures:
        a, b, c, total = report.sum_failures[0]
        print(f"  sum witness: {format_basis_index(a)} , {format_basis_index(b)} , "
              f"{format_basis_index(c)} -> {total}")
    return 1


def cmd_cocycle_trivialize(args) -> int:
    config = load_config(args.config)
    psi = load_cocycle(config, args)
    probe = config.shape.parse_index_token(args.probe) if args.probe else None
    functional = trivialize(psi, probe)
    window = window_indices(config, args.radius)
    out = _open_out(args.out)
    try:
        target = out or sys.stdout
        for idx in window:
            value = functional.eval_basis(idx)
            if value:
                target.write(f"{format_basis_index(idx)} {value}\n")
    finally:
        if out:
            out.close()
    return 0


def cmd_cocycle_verify(args) -> int:
    config = load_config(args.config)
    psi = load_cocycle(config, args)
    functional = load_functional(config, args.functional)
    window = window_indices(config, args.radius)
    pairs = [(window[i], window[j])
             for i in range(len(window)) for j in range(i, len(window))]
    report = verify_trivialization(psi, functional, pairs)
    if report.passed:
        print(f"PASS trivialization ({report.checked} pairs)")
        return 0
    iu, iv, lhs, rhs = report.failures[0]
    print(f"FAIL trivialization ({report.checked} pairs)")
    print(f"  witness: {format_basis_index(iu)} , {format_basis_index(iv)} "
          f"-> form {lhs}, functional-on-bracket {rhs}")
    return 1


# -- wiring -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contactk",
        description="Exact contact Lie algebra workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p):
        p.add_argument("--config", required=True, help="configuration file path")
        return p

    with_config(sub.add_parser("check-config", help="validate a configuration file")
                ).set_defaults(fn=cmd_check_config)

    p = with_config(sub.add_parser("bracket", help="bracket of two element literals"))
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against the operator route")
    p.set_defaults(fn=cmd_bracket)

    p = with_config(sub.add_parser("mul", help="product of two element literals"))
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.set_defaults(fn=cmd_mul)

    p = with_config(sub.add_parser("table", help="structure-constant CSV over a window"))
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_table)

    p = with_config(sub.add_parser("suite", help="seeded property suites"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_suite)

    deriv = sub.add_parser("deriv", help="derivation checks").add_subparsers(
        dest="subcommand", required=True)
    p = with_config(deriv.add_parser("check", help="Leibniz law on sampled pairs"))
    p.add_argument("--op", required=True, help="operator spec")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(fn=cmd_deriv_check)
    p = with_config(deriv.add_parser("decompose", help="window decomposition"))
    p.add_argument("--op", required=True, help="operator spec")
    p.add_argument("--radius", type=int, default=2, help="window radius")
    p.add_argument("--inner-radius", type=int, default=1,
                   help="adjoint support radius")
    p.set_defaults(fn=cmd_deriv_decompose)

    cocycle = sub.add_parser("cocycle", help="2-cocycle tools").add_subparsers(
        dest="subcommand", required=True)
    p = with_config(cocycle.add_parser("check", help="axioms on sampled triples"))
    p.add_argument("--table", help="cocycle table file")
    p.add_argument("--coboundary", help="functional file defining a coboundary")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--triples", type=int, default=50)
    p.set_defaults(fn=cmd_cocycle_check)
    p = with_config(cocycle.add_parser("trivialize", help="construct a trivializing functional"))
    p.add_argument("--table", help="cocycle table file")
    p.add_argument("--coboundary", help="functional file defining a coboundary")
    p.add_argument("--probe", help="probe index token (default: automatic)")
    p.add_argument("--radius", type=int, default=2, help="emission window radius")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_cocycle_trivialize)
    p = with_config(cocycle.add_parser("verify", help="compare a form with a functional"))
    p.add_argument("--table", help="cocycle table file")
    p.add_argument("--coboundary", help="functional file defining a coboundary")
    p.add_argument("--functional", required=True, help="functional file to verify")
    p.add_argument("--radius", type=int, default=2, help="window radius")
    p.set_defaults(fn=cmd_cocycle_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, LiteralError, UsageError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
