"""Command-line front end.

Exit codes: 0 zero / equal / identity (or success), 1 nonzero / not-equal /
not-identity, 2 usage or parse error, 3 oracle budget exceeded.
"""

import argparse
import json
import sys
from fractions import Fraction

from .circuit import bp_to_circuit, circuit_to_bp, format_bp, format_circuit, parse_bp, parse_circuit
from .errors import BudgetExceeded, ParseError
from .oracle import DEFAULT_MONOMIALS, DEFAULT_SYMBOLS, expand_circuit, simulate_word
from .pit import PitParams, pit
from .polyring import ZZ, PrimeField
from .slp import SLPBuilder, expand, format_slp, parse_slp, slp_equal
from .wreath import circuit_to_wordslp, cwp, parse_group


class UsageError(Exception):
    pass


def parse_ring(text):
    if text.lower() == "z":
        return ZZ
    if text.lower().startswith("fp:"):
        try:
            return PrimeField(int(text[3:]))
        except ValueError as exc:
            raise UsageError(f"bad ring {text!r}: {exc}") from None
    raise UsageError(f"bad ring {text!r}; use z or fp:<p>")


def parse_fraction(text):
    try:
        num, den = text.split("/") if "/" in text else (text, "1")
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad fraction {text!r}; use num/den") from None


def read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _keywords(text):
    out = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.add(line.split()[0])
            if "->" in line:
                out.add("->")
    return out


def detect(text):
    """'bp', 'slp' or 'circuit'."""
    kw = _keywords(text)
    if kw & {"EDGE", "SOURCE", "SINK", "NODE"}:
        return "bp"
    if "->" in kw or kw & {"DIM", "ALPHABET", "START"}:
        return "slp"
    return "circuit"


def load_circuit(path):
    text = read(path)
    kind = detect(text)
    if kind == "bp":
        return bp_to_circuit(parse_bp(text))
    if kind == "slp":
        raise UsageError(f"{path}: expected a circuit or branching program, got an SLP")
    return parse_circuit(text)


def load_slp(path):
    text = read(path)
    if detect(text) != "slp":
        raise UsageError(f"{path}: expected an SLP")
    return parse_slp(text)


def load_word(path):
    """A word SLP, or a plain whitespace-separated word (empty -> None)."""
    text = read(path)
    if detect(text) == "slp":
        return parse_slp(text), None
    tokens = []
    for line in text.splitlines():
        tokens.extend(line.split("#", 1)[0].split())
    return None, tokens


def params_from(args):
    return PitParams(parse_fraction(args.epsilon), args.trials, args.seed, parse_ring(args.ring))


def emit(args, payload, human):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def cmd_pit(args):
    res = pit(load_circuit(args.file), params_from(args))
    emit(args, res.to_dict(), res.verdict)
    return 0 if res.zero else 1


def cmd_slp_eq(args):
    res = slp_equal(load_slp(args.first), load_slp(args.second), params_from(args))
    emit(args, res.to_dict(), res.verdict)
    return 0 if res.equal else 1


def cmd_cwp(args):
    spec = parse_group(args.group)
    slp, tokens = load_word(args.file)
    if slp is None and tokens:
        b = SLPBuilder(1, prefix="W")
        slp = b.build(b.concat(b.terminal(s) for s in tokens), spec.alphabet())
    res = cwp(slp, spec, params_from(args))
    emit(args, res.to_dict(), res.verdict)
    return 0 if res.identity else 1


def _picture_text(arr):
    if arr.ndim == 1:
        sep = "" if all(len(s) == 1 for s in arr) else " "
        return sep.join(arr)
    if arr.ndim == 2:
        sep = "" if all(len(s) == 1 for s in arr.flat) else " "
        return "\n".join(sep.join(row) for row in arr)
    return json.dumps(arr.tolist())


def cmd_expand(args):
    text = read(args.file)
    if detect(text) == "slp":
        arr = expand(parse_slp(text), args.budget or DEFAULT_SYMBOLS)
        emit(args, {"shape": list(arr.shape), "picture": arr.tolist()}, _picture_text(arr))
        return 0
    c = bp_to_circuit(parse_bp(text)) if detect(text) == "bp" else parse_circuit(text)
    ring = parse_ring(args.ring)
    modulus = None if ring is ZZ else ring.p
    poly = expand_circuit(c, args.budget or DEFAULT_MONOMIALS, modulus)
    emit(args, {"polynomial": str(poly), "monomials": len(poly)}, str(poly))
    return 0


def cmd_simulate(args):
    spec = parse_group(args.group)
    budget = args.budget or DEFAULT_SYMBOLS
    slp, tokens = load_word(args.file)
    word = list(expand(slp, budget)) if slp is not None else tokens
    elem = simulate_word(word, spec, budget)
    payload = elem.to_dict()
    payload["group"] = str(spec)
    print(json.dumps(payload, sort_keys=True))
    return 0 if elem.is_identity() else 1


def cmd_convert(args):
    text = read(args.file)
    kind = detect(text)
    if kind == "slp":
        raise UsageError("convert takes a circuit or branching program")
    c = parse_bp(text) if kind == "bp" else parse_circuit(text)
    if args.to == "bp":
        out = format_bp(circuit_to_bp(c) if kind == "circuit" else c)
    elif args.to == "circuit":
        out = format_circuit(bp_to_circuit(c) if kind == "bp" else c)
    else:
        out = format_slp(circuit_to_wordslp(bp_to_circuit(c) if kind == "bp" else c))
    sys.stdout.write(out)
    return 0


def _pit_options(p):
    p.add_argument("--ring", default="z", help="z or fp:<p> (default z)")
    p.add_argument("--epsilon", default="1/2", help="per-trial rejection probability, num/den")
    p.add_argument("--trials", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")


def build_parser():
    ap = argparse.ArgumentParser(prog="skewpit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pit", help="test a circuit or branching program for zero")
    p.add_argument("file")
    _pit_options(p)
    p.set_defaults(func=cmd_pit)

    p = sub.add_parser("slp-eq", help="compare two SLP-compressed pictures")
    p.add_argument("first")
    p.add_argument("second")
    _pit_options(p)
    p.set_defaults(func=cmd_slp_eq)

    p = sub.add_parser("cwp", help="compressed word problem in G wr Z^k")
    p.add_argument("file")
    p.add_argument("--group", default="Z wr Z")
    _pit_options(p)
    p.set_defaults(func=cmd_cwp)

    p = sub.add_parser("expand", help="expand a circuit, BP or SLP explicitly")
    p.add_argument("file")
    p.add_argument("--ring", default="z")
    p.add_argument("--budget", type=int, default=None,
                   help=f"monomials ({DEFAULT_MONOMIALS}) or picture cells ({DEFAULT_SYMBOLS})")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("simulate", help="multiply out a word in G wr Z^k")
    p.add_argument("file")
    p.add_argument("--group", default="Z wr Z")
    p.add_argument("--budget", type=int, default=None, help=f"word symbols ({DEFAULT_SYMBOLS})")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("convert", help="convert between circuit, BP and word SLP")
    p.add_argument("file")
    p.add_argument("--to", choices=("bp", "circuit", "wordslp"), required=True)
    p.set_defaults(func=cmd_convert)
    return ap


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ParseError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
