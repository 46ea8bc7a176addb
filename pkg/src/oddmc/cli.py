"""Command-line frontend.

Exit codes: 0 success / SAT / true; 1 UNSAT / false / invalid;
2 input error; 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import check_class, count_assignments, model_check
from .errors import OddmcError, ResourceLimitError
from .fo import parse_formula
from .formats import (
    parse_classnfa,
    parse_lambda_string,
    parse_odd,
    parse_struct,
    serialize_classnfa,
    serialize_lambda_string,
    serialize_odd,
    serialize_struct,
)
from .odd import binarize_odd, default_binary_encoding, odd_with_width, pad_to_length
from .oracle import count_brute, derive_structure
from .structural import (
    StructuralTuple,
    hypercube_class,
    hypercube_tuple,
    string_to_tuple,
    tuple_to_string,
    validate_structural,
)

EXIT_OK = 0
EXIT_NO = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise OddmcError(f"cannot read {path}: {e}") from e


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_struct(path: str) -> StructuralTuple:
    return parse_struct(_read(path))


def _vars(spec: str) -> list[str]:
    spec = spec.strip()
    return [v.strip() for v in spec.split(",") if v.strip()] if spec else []


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oddmc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="validate an .odd or .struct file")
    v.add_argument("file")

    c = sub.add_parser("check", help="does some structure in the class satisfy the sentence")
    c.add_argument("--class", dest="class_file", required=True)
    c.add_argument("--formula", required=True)
    c.add_argument("--witness", help="write a SAT witness structure here")

    for name in ("count", "oracle-count"):
        q = sub.add_parser(name, help=f"{name} satisfying assignments on one structure")
        q.add_argument("--structure", required=True)
        q.add_argument("--formula", required=True)
        q.add_argument("--vars", default="")

    m = sub.add_parser("model-check", help="does one structure satisfy the sentence")
    m.add_argument("--structure", required=True)
    m.add_argument("--formula", required=True)

    g = sub.add_parser("gen", help="generate example inputs")
    gsub = g.add_subparsers(dest="family", required=True)
    gh = gsub.add_parser("hypercube")
    gh.add_argument("--k", type=int, required=True)
    gh.add_argument("--out")
    gh.add_argument("--class", dest="emit_class", action="store_true",
                    help="write the hypercube class automaton instead of one tuple")

    pd = sub.add_parser("pad", help="pad an ODD to a longer length")
    pd.add_argument("--in", dest="infile", required=True)
    pd.add_argument("--length", type=int, required=True)
    pd.add_argument("--out")

    b = sub.add_parser("binarize", help="re-encode an .odd or .struct over the binary alphabet")
    b.add_argument("--in", dest="infile", required=True)
    b.add_argument("--out")

    e = sub.add_parser("encode", help="structural tuple to layer-tuple string")
    e.add_argument("--structure", required=True)
    e.add_argument("--out")

    d = sub.add_parser("decode", help="layer-tuple string to structural tuple")
    d.add_argument("--in", dest="infile", required=True)
    d.add_argument("--out")

    return p


def _cmd_validate(args) -> int:
    text = _read(args.file)
    head = next(
        (ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")),
        "",
    )
    try:
        if head == "STRUCTURE":
            validate_structural(parse_struct(text))
        else:
            parse_odd(text)
    except ResourceLimitError:
        raise
    except OddmcError as e:
        print(f"invalid: {e}", file=sys.stderr)
        return EXIT_NO
    print("valid")
    return EXIT_OK


def _cmd_check(args) -> int:
    ca = parse_classnfa(_read(args.class_file))
    sentence = parse_formula(_read(args.formula), ca.vocabulary)
    result = check_class(ca, sentence)
    print(result.verdict)
    if result.is_sat and args.witness:
        _write(args.witness, serialize_struct(result.witness))
    return EXIT_OK if result.is_sat else EXIT_NO


def _cmd_count(args, brute: bool) -> int:
    t = _load_struct(args.structure)
    f = parse_formula(_read(args.formula), t.vocabulary)
    ctx = _vars(args.vars)
    if brute:
        validate_structural(t)
        n = count_brute(derive_structure(t), f, ctx)
    else:
        n = count_assignments(t, f, ctx)
    print(n)
    return EXIT_OK


def _cmd_model_check(args) -> int:
    t = _load_struct(args.structure)
    sentence = parse_formula(_read(args.formula), t.vocabulary)
    holds = model_check(t, sentence)
    print("true" if holds else "false")
    return EXIT_OK if holds else EXIT_NO


def _cmd_gen(args) -> int:
    if args.family != "hypercube":
        raise OddmcError(f"unknown generator {args.family!r}")
    if args.emit_class:
        _write(args.out, serialize_classnfa(hypercube_class()))
    else:
        _write(args.out, serialize_struct(hypercube_tuple(args.k)))
    return EXIT_OK


def _cmd_pad(args) -> int:
    d = parse_odd(_read(args.infile))
    _write(args.out, serialize_odd(pad_to_length(d, args.length)))
    return EXIT_OK


def _cmd_binarize(args) -> int:
    text = _read(args.infile)
    head = next(
        (ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")),
        "",
    )
    if head == "STRUCTURE":
        t = _load_struct(args.infile)
        encoding = default_binary_encoding(t.alphabet)
        parts = [binarize_odd(d, encoding) for d in t.odds]
        width = max(d.width_bound for d in parts)
        parts = [odd_with_width(d, width) for d in parts]
        out = StructuralTuple(parts[0], tuple(parts[1:]), t.vocabulary, width)
        _write(args.out, serialize_struct(out))
    else:
        d = parse_odd(text)
        _write(args.out, serialize_odd(binarize_odd(d)))
    return EXIT_OK


def _cmd_encode(args) -> int:
    t = _load_struct(args.structure)
    s = tuple_to_string(t)
    _write(args.out, serialize_lambda_string(s, t.vocabulary, t.alphabet, t.width))
    return EXIT_OK


def _cmd_decode(args) -> int:
    cols, vocab, alphabet, width = parse_lambda_string(_read(args.infile))
    t = string_to_tuple(cols, alphabet, width, vocab)
    _write(args.out, serialize_struct(t))
    return EXIT_OK


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code not in (0, None) else EXIT_OK
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "count":
            return _cmd_count(args, brute=False)
        if args.command == "oracle-count":
            return _cmd_count(args, brute=True)
        if args.command == "model-check":
            return _cmd_model_check(args)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "pad":
            return _cmd_pad(args)
        if args.command == "binarize":
            return _cmd_binarize(args)
        if args.command == "encode":
            return _cmd_encode(args)
        if args.command == "decode":
            return _cmd_decode(args)
        raise OddmcError(f"unknown command {args.command!r}")
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (OddmcError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run_cli())
