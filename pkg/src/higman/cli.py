"""Command line entry point: ``higman <verb> ...``.

Exit status: 0 success / verified, 1 verdict failure (violation, not
surjective, not stable, undetermined), 2 malformed input.
"""
from __future__ import annotations

import argparse
import sys

from . import endo, textio
from .endo import CounterexampleFailure, InsufficientDepth, NullConvergenceViolation
from .fmap import DomainError, apply, standard_projection
from .invsystem import classify, normalize, square_holds, validate
from .prolimit import StableElement, Truncation, metric, truncate
from .stallings import NotSurjective, fold, split_basis
from .word import WordParseError, format_word, parse_word


class VerdictFailure(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _element(path: str):
    e = textio.parse_element(_read(path))
    if not isinstance(e, (Truncation, StableElement)):
        raise textio.ParseError("expected an element", 1)
    return e


def cmd_reduce(args, out):
    out.append(format_word(parse_word(" ".join(args.word))))


def cmd_project(args, out):
    w = parse_word(" ".join(args.word))
    out.append(format_word(apply(standard_projection(args.i, args.j), w)))


def cmd_metric(args, out):
    x, y = _element(args.a), _element(args.b)
    depth = args.depth
    if depth is None and not (isinstance(x, StableElement) and isinstance(y, StableElement)):
        depth = min(e.depth for e in (x, y) if isinstance(e, Truncation))
    lower, upper = metric(x, y, depth)
    if args.quiet:
        out.append(f"{lower} {upper}")
        return
    out.append(f"lower {lower}")
    out.append(f"upper {upper}")
    out.append("exact yes" if lower == upper else f"exact no (depth {depth})")


def cmd_fold(args, out):
    words = textio.parse_words(_read(args.file))
    rank = args.rank if args.rank is not None else max((w.rank for w in words), default=0)
    g = fold(words, rank)
    if args.quiet:
        out.append("rose" if g.is_rose() else "proper")
        return
    out.append(f"vertices {g.n_vertices} edges {len(g.edges)} subgroup-rank {g.subgroup_rank}")
    out.append(str(g))


def cmd_split(args, out):
    f = textio.parse_map(_read(args.file))
    try:
        sp = split_basis(f)
    except NotSurjective as exc:
        out.append(f"not surjective: {exc}")
        raise VerdictFailure from None
    if args.quiet:
        out.append(f"B {len(sp.b_part)} K {len(sp.k_part)}")
        return
    out += ["B " + format_word(b) for b in sp.b_part]
    out += ["K " + format_word(k) for k in sp.k_part]
    out.append("section")
    out.append(str(sp.section).rstrip("\n"))
    out += ["move " + str(m) for m in sp.trace.moves]


def _checked_system(path: str, out):
    s = textio.parse_system(_read(path))
    bad = validate(s)
    if bad:
        out += ["violation " + str(v) for v in bad]
        raise VerdictFailure
    return s


def cmd_normalize(args, out):
    s = _checked_system(args.file, out)
    norm = normalize(s)
    if args.report == "signature":
        out += [f"level {n}: B {b} K {k}" for n, (b, k) in enumerate(norm.signature, 1)]
    elif args.report == "isos":
        for n, theta in enumerate(norm.level_isos, 1):
            out.append(f"theta {n}")
            out.append(str(theta).rstrip("\n"))
    else:
        for n in range(2, s.levels + 1):
            ok = square_holds(s, norm.level_isos, n)
            out.append(f"square {n}: {'ok' if ok else 'FAIL'}")


def cmd_classify(args, out):
    s = _checked_system(args.file, out)
    verdict = classify(s, args.window)
    out.append(str(verdict))
    if verdict.kind == "Undetermined":
        raise VerdictFailure


def cmd_endo_eval(args, out):
    if args.counterexample is not None:
        table = endo.counterexample_table(args.counterexample)
        element_path = args.files[0] if args.files else None
    else:
        if len(args.files) != 2:
            raise SystemExit("endo-eval needs <endofile> <elementfile> or --counterexample J <elementfile>")
        table = textio.parse_endo(_read(args.files[0]))
        element_path = args.files[1]
    if element_path is None:
        raise SystemExit("endo-eval needs an element file")
    g = _element(element_path)
    if isinstance(g, StableElement):
        g = truncate(g, table.table_depth)
    depth = args.depth if args.depth is not None else min(table.table_depth, g.depth) - table.shift_bound
    if depth < 1:
        raise InsufficientDepth(1 + table.shift_bound)
    endo.verify_null_convergence(table)
    out.append(str(endo.evaluate(table, g, depth, check=True)).rstrip("\n"))


def cmd_endo_verify(args, out):
    table = textio.parse_endo(_read(args.table)) if args.table else None
    try:
        report = endo.verify_counterexample(args.counterexample, table)
    except CounterexampleFailure as exc:
        out.append(f"FAILED: {exc}")
        raise VerdictFailure from None
    if args.quiet:
        out.append("verified")
    else:
        out.append(str(report).rstrip("\n"))


def cmd_convert(args, out):
    out.append(textio.format_any(textio.parse_any(_read(args.file))).rstrip("\n"))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="higman", description=__doc__.splitlines()[0])
    p.add_argument("--quiet", action="store_true", help="verdict-only output")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("reduce", help="freely reduce a word")
    s.add_argument("word", nargs="+")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("project", help="apply P_{i,j} to a word")
    s.add_argument("i", type=int)
    s.add_argument("j", type=int)
    s.add_argument("word", nargs="+")
    s.set_defaults(func=cmd_project)

    s = sub.add_parser("metric", help="distance between two elements")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--depth", type=int)
    s.set_defaults(func=cmd_metric)

    s = sub.add_parser("fold", help="folded subgroup graph of a word list")
    s.add_argument("file")
    s.add_argument("--rank", type=int)
    s.set_defaults(func=cmd_fold)

    s = sub.add_parser("split", help="basis splitting of a surjective map")
    s.add_argument("file")
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("normalize", help="carry a system onto standard projections")
    s.add_argument("file")
    s.add_argument("--report", choices=["signature", "isos", "squares"], default="signature")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("classify", help="free of finite rank vs universal limit")
    s.add_argument("file")
    s.add_argument("--window", type=int, default=3)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("endo-eval", help="evaluate an endomorphism table on an element")
    s.add_argument("files", nargs="*", help="[endofile] elementfile")
    s.add_argument("--counterexample", type=int, metavar="J")
    s.add_argument("--depth", type=int)
    s.set_defaults(func=cmd_endo_eval)

    s = sub.add_parser("endo-verify", help="verify the counterexample identities")
    s.add_argument("--counterexample", type=int, metavar="J", required=True)
    s.add_argument("--table", help="check this table instead of the built-in one")
    s.set_defaults(func=cmd_endo_verify)

    s = sub.add_parser("convert", help="parse a file and print its canonical form")
    s.add_argument("file")
    s.set_defaults(func=cmd_convert)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out: list = []
    status = 0
    try:
        args.func(args, out)
    except VerdictFailure:
        status = 1
    except (NullConvergenceViolation, NotSurjective) as exc:
        out.append(f"violation: {exc}")
        status = 1
    except (textio.ParseError, WordParseError, DomainError, InsufficientDepth, OSError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        status = 2
    except SystemExit as exc:
        stderr.write(f"error: {exc}\n")
        status = 2
    if out:
        stdout.write("\n".join(out) + "\n")
    return status


def main():
    sys.exit(run())
