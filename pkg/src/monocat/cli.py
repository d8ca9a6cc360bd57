"""Command-line front end.

Expression grammar (whitespace-insensitive)::

    expr := term (";" term)*
    term := atom ("*" atom)*
    atom := "id(" nat ")" | "eta(" nat "," nat ")" | "eps(" nat "," nat ")" | "(" expr ")"

";" composes diagrams left to right (the left operand is applied first),
"*" places diagrams side by side.  Note this is the opposite order to
function-style composition.

Exit codes: 0 success (or Equal), 10 equality unknown, 1 failed suite
check, 2 usage, parse, or shape errors.  MONOCAT_MAX_STATES overrides the
default search state budget; explicit flags win over the environment.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .rewrite import (
    DEFAULT_CAPS,
    NotEqualShape,
    SearchCaps,
    enum_hom,
    equal,
    explore,
)
from .suite import SuiteConfig, run_all
from .terms import (
    Mode,
    MonocatError,
    Term,
    canonical,
    compose,
    eps,
    eta,
    gen_count,
    gen_term,
    identity,
    render,
    tensor,
)
from .vect import RATIONALS, FunctorSpec, PrimeField, TooLarge, eval_term


class ParseError(MonocatError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(id|eta|eps)|(\d+)|([();,*]))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            at = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[at]!r}", at)
        name, nat, punct = m.groups()
        at = m.start(1) if name else m.start(2) if nat else m.start(3)
        if name:
            out.append(("name", name, at))
        elif nat:
            out.append(("nat", int(nat), at))
        else:
            out.append((punct, punct, at))
        pos = m.end()
    out.append(("eof", None, len(text)))
    return out


def parse_expr(text: str) -> Term:
    """Parse the expression grammar into a term."""
    tokens = _tokenize(text)
    idx = 0

    def peek():
        return tokens[idx]

    def take(kind):
        nonlocal idx
        tok = tokens[idx]
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        idx += 1
        return tok

    def parse_nat() -> int:
        return take("nat")[1]

    def parse_atom() -> Term:
        tok = peek()
        if tok[0] == "(":
            take("(")
            t = parse_expression()
            take(")")
            return t
        if tok[0] == "name":
            take("name")
            take("(")
            if tok[1] == "id":
                n = parse_nat()
                take(")")
                return identity(n)
            m = parse_nat()
            take(",")
            n = parse_nat()
            take(")")
            return gen_term(eta(m, n) if tok[1] == "eta" else eps(m, n))
        raise ParseError(f"expected an atom, found {tok[1]!r}", tok[2])

    def parse_tensor() -> Term:
        t = parse_atom()
        while peek()[0] == "*":
            take("*")
            t = tensor(t, parse_atom())
        return t

    def parse_expression() -> Term:
        t = parse_tensor()
        while peek()[0] == ";":
            take(";")
            t = compose(t, parse_tensor())
        return t

    t = parse_expression()
    take("eof")
    return t


# -- argument plumbing ---------------------------------------------------------


def _add_caps_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=["C", "D"], default="C")
    p.add_argument("--max-gens", type=int, default=DEFAULT_CAPS.max_gen_count)
    p.add_argument("--max-width", type=int, default=DEFAULT_CAPS.max_width)
    p.add_argument("--max-n", type=int, default=DEFAULT_CAPS.max_index_n)
    p.add_argument("--max-states", type=int, default=None)


def _caps_of(args) -> SearchCaps:
    max_states = args.max_states
    if max_states is None:
        env = os.environ.get("MONOCAT_MAX_STATES")
        max_states = int(env) if env else DEFAULT_CAPS.max_states
    return SearchCaps(args.max_gens, args.max_width, args.max_n, max_states)


def _field_of(text: str):
    if text == "q":
        return RATIONALS
    if text == "p":
        return PrimeField()
    if text.startswith("p:"):
        return PrimeField(int(text[2:]))
    raise ValueError(f"unknown field {text!r} (use q, p, or p:PRIME)")


def _functor_of(args) -> FunctorSpec:
    field = _field_of(args.field)
    phi = args.phi
    if phi == "identity":
        return FunctorSpec.identity(args.dim, field)
    if phi.startswith("random:"):
        return FunctorSpec.random(args.dim, int(phi.split(":", 1)[1]), field)
    if phi.startswith("file:"):
        spec = FunctorSpec.from_file(phi.split(":", 1)[1], field)
        if spec.d != args.dim:
            raise ValueError(f"pairing file has d={spec.d}, --dim says {args.dim}")
        return spec
    raise ValueError(f"unknown --phi {phi!r} (use identity, random:SEED, or file:PATH)")


def _term_info(t: Term) -> dict:
    return {
        "term": render(t),
        "source": t.source,
        "target": t.target,
        "gen_count": gen_count(t),
    }


def _step_dict(step, term=None) -> dict:
    out = {
        "rule": step.rule.value,
        "direction": step.direction.value,
        "binding": {k: v for k, v in step.binding},
    }
    if term is not None:
        out["term"] = render(term)
    return out


# -- commands ------------------------------------------------------------------


def _cmd_parse(args) -> int:
    t = parse_expr(args.expr)
    if args.json:
        print(json.dumps(_term_info(t), indent=2))
    else:
        info = _term_info(t)
        print(info["term"])
        print(f"source: {info['source']}  target: {info['target']}  generators: {info['gen_count']}")
    return 0


def _cmd_normalize(args) -> int:
    t = canonical(parse_expr(args.expr))
    if args.json:
        print(json.dumps(_term_info(t), indent=2))
    else:
        print(render(t))
    return 0


def _cmd_eq(args) -> int:
    a = parse_expr(args.a)
    b = parse_expr(args.b)
    caps = _caps_of(args)
    witness = equal(a, b, Mode[args.mode], caps)
    if witness is None:
        if args.json:
            print(json.dumps({"status": "unknown"}, indent=2))
        else:
            print("unknown (search budget exhausted; equality not decided)")
        return 10
    path = [
        _step_dict(step, term)
        for step, term in zip(witness.steps, witness.terms[1:])
    ]
    if args.json:
        print(json.dumps({"status": "equal", "path_length": len(witness), "path": path}, indent=2))
    else:
        print(f"equal (path length {len(witness)})")
        for k, step in enumerate(witness.steps):
            print(f"  {step.describe()}  ->  {render(witness.terms[k + 1])}")
    return 0


def _cmd_eval(args) -> int:
    t = parse_expr(args.expr)
    spec = _functor_of(args)
    mat = eval_term(spec, t, max_dim=args.max_dim)
    if args.json:
        print(
            json.dumps(
                {
                    "rows": mat.rows,
                    "cols": mat.cols,
                    "entries": [[str(x) for x in row] for row in mat.entries],
                },
                indent=2,
            )
        )
    else:
        print(mat)
    return 0


def _cmd_explore(args) -> int:
    t = parse_expr(args.expr)
    caps = _caps_of(args)
    report = explore(t, Mode[args.mode], caps)
    payload = {
        "start": render(report.start),
        "mode": report.mode.value,
        "states_visited": report.states_visited,
        "identity_found": report.identity_found,
        "min_gen_count_seen": report.min_gen_count_seen,
        "truncated": report.truncated,
    }
    if report.witness_path is not None:
        payload["witness_path"] = [render(x) for x in report.witness_path]
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for k, v in payload.items():
            print(f"{k}: {v}")
    return 0


def _cmd_homset(args) -> int:
    caps = _caps_of(args)
    reps = enum_hom(args.m, args.n, Mode[args.mode], caps)
    if args.json:
        print(json.dumps({"classes": [render(t) for t in reps]}, indent=2))
    else:
        print(f"{len(reps)} classes")
        for t in reps:
            print(f"  {render(t)}")
    return 0


def _cmd_suite(args) -> int:
    if args.config:
        with open(args.config) as fh:
            cfg = SuiteConfig.from_dict(json.load(fh))
    else:
        cfg = SuiteConfig()
    report = run_all(cfg)
    if args.json:
        print(report.to_json(zero_timings=args.no_timings))
    else:
        for c in report.checks:
            print(f"{c.name:26s} {c.status}")
        print("result:", "FAIL" if report.failed else "ok")
    return 1 if report.failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monocat",
        description="slice-term rewriting, bounded word-problem search, and exact matrix evaluation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse an expression and report its shape")
    p.add_argument("expr")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("normalize", help="print the interchange normal form")
    p.add_argument("expr")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("eq", help="bounded equality of two terms")
    p.add_argument("a")
    p.add_argument("b")
    _add_caps_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_eq)

    p = sub.add_parser("eval", help="evaluate a term to an exact matrix")
    p.add_argument("expr")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--phi", default="identity", help="identity | random:SEED | file:PATH")
    p.add_argument("--field", default="q", help="q | p | p:PRIME")
    p.add_argument("--max-dim", type=int, default=2**20)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("explore", help="breadth-first closure of a term's rewrite class")
    p.add_argument("expr")
    _add_caps_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_explore)

    p = sub.add_parser("homset", help="enumerate rewrite classes between two widths")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    _add_caps_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_homset)

    p = sub.add_parser("suite", help="run the full evidence suite")
    p.add_argument("--config", default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-timings", action="store_true")
    p.set_defaults(func=_cmd_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (MonocatError, NotEqualShape, TooLarge, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
