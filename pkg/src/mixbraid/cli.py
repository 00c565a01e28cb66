"""Command-line front end: ``mixbraid <subcommand> ...``.

Exit codes: 0 success, 1 domain error or failed ``--assert``, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Any, Sequence

from . import diagram as dg
from . import garside
from .invariants import FUNCTIONALS, check_axioms, link_invariant, random_samples, winding_profile
from .moves import MoveCertificate, apply_l_move, destabilize, find_destabilizations, sigma_conjugate, stabilize
from .search import DEFAULT_MOVES, PRIMITIVE_MOVES, SEARCHABLE_MOVES, SearchBudget, equivalence_search, verify_certificate
from .words import BraidWord, WordError, a_to_b, b_to_a, embed, format_classical, parse_word

MOVE_SETS = {
    "default": DEFAULT_MOVES,
    "primitive": PRIMITIVE_MOVES,
    "l-moves": PRIMITIVE_MOVES | {"L_o", "L_u"},
    "all": SEARCHABLE_MOVES,
}


class Failed(Exception):
    """An --assert check did not hold."""


def _word_json(u: BraidWord) -> dict[str, Any]:
    return {"g": u.g, "n": u.n, "word": str(u), "letters": [list(x) for x in u.letters]}


def _read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    return Path(source).read_text()


def _load_diagram(args: argparse.Namespace) -> dg.MixedDiagram:
    if args.example:
        return dg.load_example(args.example)
    if not args.file:
        raise WordError("give a diagram file (or - for stdin) or --example")
    return dg.parse_diagram(_read_text(args.file))


def _emit(args: argparse.Namespace, text: str, payload: dict[str, Any]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


# -- subcommands ------------------------------------------------------------------------


def cmd_parse(args: argparse.Namespace) -> None:
    u = parse_word(args.word)
    _emit(args, str(u), _word_json(u))


def cmd_nf(args: argparse.Namespace) -> None:
    u = parse_word(args.word)
    nf = garside.serialize(garside.normal_form(u))
    _emit(args, nf, {"normal_form": nf, **_word_json(u)})


def cmd_eq(args: argparse.Namespace) -> None:
    u, v = parse_word(args.u), parse_word(args.v)
    same = garside.equal(u, v)
    _emit(args, "equal" if same else "not equal", {"equal": same})
    if args.check and not same:
        raise Failed("words are not equal")


def cmd_convert(args: argparse.Namespace) -> None:
    u = parse_word(args.word)
    out = a_to_b(u) if args.to == "b" else b_to_a(u)
    _emit(args, str(out), _word_json(out))


def cmd_embed(args: argparse.Namespace) -> None:
    u = parse_word(args.word)
    w = embed(u)
    text = format_classical(w, u.g + u.n)
    _emit(args, text, {"strands": u.g + u.n, "word": list(w)})


def cmd_lmove(args: argparse.Namespace) -> None:
    u = parse_word(args.word)
    out = apply_l_move(u, args.split, args.index, args.sign, args.kind)
    _emit(args, str(out), _word_json(out))


def cmd_stab(args: argparse.Namespace) -> None:
    u = parse_word(args.word)
    if args.undo:
        if args.split is None:
            sites = find_destabilizations(u)
            if not sites:
                raise WordError("no destabilization site")
            split, sign = sites[0]
        else:
            split, sign = args.split, args.sign
        out = destabilize(u, split, sign)
    else:
        out = stabilize(u, args.split if args.split is not None else len(u), args.sign)
    _emit(args, str(out), _word_json(out))


def cmd_conj(args: argparse.Namespace) -> None:
    u = parse_word(args.word)
    out = sigma_conjugate(u, args.index, args.sign)
    _emit(args, str(out), _word_json(out))


def cmd_close(args: argparse.Namespace) -> None:
    if args.geometric:
        d = dg.close_geometric(dg.parse_geometric(args.braid))
    else:
        d = dg.close_algebraic(parse_word(args.braid))
    text = dg.format_diagram(d).rstrip("\n")
    _emit(args, text, {"diagram": text, "components": dg.component_count(d)})


def cmd_braid(args: argparse.Namespace) -> None:
    d = _load_diagram(args)
    b = dg.braid(d, default_label=args.label)
    _emit(args, str(b), {"g": b.g, "layout": "".join(b.layout), "word": list(b.word), "braid": str(b)})


def cmd_algebraize(args: argparse.Namespace) -> None:
    if args.diagram:
        b = dg.braid(dg.parse_diagram(_read_text(args.braid)))
    else:
        b = dg.parse_geometric(args.braid)
    u = dg.algebraize(b)
    _emit(args, str(u), _word_json(u))


def cmd_invariant(args: argparse.Namespace) -> None:
    u = parse_word(args.word)
    f = FUNCTIONALS[args.functional](u.g)
    value = link_invariant(u, f)
    wp = winding_profile(u)
    text = str(value) if not args.winding else f"{value}\nwinding {wp}"
    _emit(args, text, {"invariant": str(value), "winding": [list(v) for v in wp.vectors]})


def cmd_axioms(args: argparse.Namespace) -> None:
    rng = random.Random(args.seed)
    samples = random_samples(args.g, args.max_n, args.samples, args.max_len, rng)
    report = check_axioms(FUNCTIONALS[args.functional](args.g), samples)
    counts = report.counts()
    lines = [f"axiom ({a}): {ok}/{total} {'pass' if ok == total else 'FAIL'}" for a, (ok, total) in sorted(counts.items())]
    _emit(
        args,
        "\n".join(lines),
        {"functional": report.functional, "counts": {str(a): list(c) for a, c in counts.items()}, "failed": sorted(report.failed_axioms())},
    )
    if args.check and not report.passed():
        raise Failed("axioms failed: " + ", ".join(map(str, sorted(report.failed_axioms()))))


def cmd_search(args: argparse.Namespace) -> None:
    u, v = parse_word(args.u), parse_word(args.v)
    budget = SearchBudget(
        max_depth=args.depth,
        max_n=args.max_n,
        max_states=args.states,
        move_set=MOVE_SETS[args.moves],
        workers=args.workers,
    )
    outcome = equivalence_search(u, v, budget)
    payload = {
        "status": outcome.status,
        "depth": outcome.depth,
        "states": outcome.states_explored,
        "certificate": outcome.certificate.serialize() if outcome.certificate else None,
    }
    _emit(args, outcome.report().rstrip("\n"), payload)
    if args.check and not outcome.found:
        raise Failed("no certificate within budget")


def cmd_replay(args: argparse.Namespace) -> None:
    cert = MoveCertificate.parse(_read_text(args.file))
    end = cert.replay()
    ok = cert.end is None or verify_certificate(cert)
    _emit(args, f"{end}\n{'verified' if ok else 'end mismatch'}", {"end": str(end), "verified": ok})
    if args.check and not ok:
        raise Failed("certificate does not reach its stated end")


# -- argument parsing ---------------------------------------------------------------------


def _sign(text: str) -> int:
    value = int(text)
    if value not in (1, -1):
        raise argparse.ArgumentTypeError("sign must be 1 or -1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixbraid",
        description="Mixed braid groups B_{g,n}: words, moves, diagrams, invariants and equivalence search.",
        epilog='Words look like "g=2 n=1; a1 a2^-1 s1". Diagrams are files of cap/cup/x+/x- rows.',
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    p = add("parse", cmd_parse, "parse a word and print it in canonical spelling")
    p.add_argument("word")
    p = add("nf", cmd_nf, "left normal form of a word")
    p.add_argument("word")
    p = add("eq", cmd_eq, "decide equality of two words in B_{g,n}")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--assert", dest="check", action="store_true", help="exit 1 unless equal")
    p = add("convert", cmd_convert, "rewrite between handle (a) and loop (b) generators")
    p.add_argument("word")
    p.add_argument("--to", choices=("a", "b"), required=True)
    p = add("embed", cmd_embed, "image in the classical braid group on g+n strands")
    p.add_argument("word")
    p = add("lmove", cmd_lmove, "apply an algebraic L-move")
    p.add_argument("word")
    p.add_argument("--split", type=int, required=True, help="number of letters before the move point")
    p.add_argument("--index", type=int, default=1, help="first moving strand of the added loop")
    p.add_argument("--sign", type=_sign, default=1)
    p.add_argument("--kind", choices=("o", "u"), default="o")
    p = add("stab", cmd_stab, "stabilize (or with --undo destabilize) a word")
    p.add_argument("word")
    p.add_argument("--split", type=int, default=None)
    p.add_argument("--sign", type=_sign, default=1)
    p.add_argument("--undo", action="store_true")
    p = add("conj", cmd_conj, "conjugate by sigma_i^sign")
    p.add_argument("word")
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--sign", type=_sign, default=1)
    p = add("close", cmd_close, "closure diagram of an algebraic or geometric braid")
    p.add_argument("braid", help='word, or with --geometric "layout=FoF; s1 s2^-1"')
    p.add_argument("--geometric", action="store_true")
    p = add("braid", cmd_braid, "braid a diagram into a geometric mixed braid")
    p.add_argument("file", nargs="?", help="diagram file, - for stdin")
    p.add_argument("--example", choices=dg.EXAMPLES)
    p.add_argument("--label", choices=("o", "u"), default="o", help="label for free up-arcs without a hint")
    p = add("algebraize", cmd_algebraize, "algebraic mixed braid for a geometric one")
    p.add_argument("braid", help='geometric braid "layout=...; ...", or a diagram file with --diagram')
    p.add_argument("--diagram", action="store_true")
    p = add("invariant", cmd_invariant, "link invariant of the closure")
    p.add_argument("word")
    p.add_argument("--functional", choices=sorted(FUNCTIONALS), default="homology")
    p.add_argument("--winding", action="store_true", help="also print the winding profile")
    p = add("axioms", cmd_axioms, "check the Markov functional axioms on random samples")
    p.add_argument("--functional", choices=sorted(FUNCTIONALS), default="homology")
    p.add_argument("--g", type=int, default=2)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--assert", dest="check", action="store_true", help="exit 1 if any axiom fails")
    p = add("search", cmd_search, "bounded search for a move certificate between two words")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--depth", type=int, default=16)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--states", type=int, default=100_000)
    p.add_argument("--moves", choices=sorted(MOVE_SETS), default="default")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--assert", dest="check", action="store_true", help="exit 1 unless a certificate is found")
    p = add("replay", cmd_replay, "replay a certificate file and check its end word")
    p.add_argument("file", help="certificate file, - for stdin")
    p.add_argument("--assert", dest="check", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except Failed as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 1
    except (WordError, dg.DiagramError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
