"""Command-line front end.

Exit status carries decisions: 0 yes/success, 1 no, 2 bad input,
3 budget exceeded, 4 validation failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import random
import subprocess
import sys
from pathlib import Path

from . import automata as fa
from . import conjugates as cj
from . import grammars as gr
from . import oracles
from . import vfree as vf
from .errors import GeoconjError, MalformedInputError, PreconditionError, ResourceError, ValidationError
from .free_subsets import benois_saturate
from .words import Alphabet, format_word, free_reduce, parse_word

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_BUDGET, EXIT_INVALID = 0, 1, 2, 3, 4


# -- loading -------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc.strerror}") from None


def _load_language(arg: str):
    """An automaton file, a literal word set ``{w1,w2}``, or ``*`` for all words."""
    arg = arg.strip()
    if arg == "*":
        return None
    if arg.startswith("{") and arg.endswith("}"):
        words = [parse_word(t.strip()) for t in arg[1:-1].split(",") if t.strip()] if arg[1:-1].strip() else []
        gens = tuple(sorted({x.lower() for w in words for x in w}))
        return fa.from_words(Alphabet(gens or ("a",)), words)
    return fa.parse_nfa(_read(arg))


def _load_languages(args, *values: str) -> list[fa.Nfa]:
    loaded = [_load_language(v) for v in values]
    alphabet = Alphabet.of(args.alphabet) if args.alphabet else None
    for nfa in loaded:
        if nfa is not None and nfa.alphabet.generators:
            alphabet = nfa.alphabet if alphabet is None else alphabet.union(nfa.alphabet)
    if alphabet is None:
        raise MalformedInputError("cannot infer an alphabet; pass --alphabet")
    alphabet = Alphabet(tuple(sorted(alphabet.generators)), alphabet.markers)
    return [fa.universal(alphabet) if n is None else fa.with_alphabet(n, alphabet) for n in loaded]


def _load_group(args) -> tuple[vf.VfStructure, vf.VfConfig]:
    s, cfg = vf.parse_structure(_read(args.group))
    s.cayley.budget = args.budget
    return s, cfg


# -- output --------------------------------------------------------------------


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_nfa(args, nfa: fa.Nfa):
    _emit(args, fa.to_dot(nfa) if args.format == "dot" else fa.to_text(nfa))


def _emit_cfg(args, g: gr.Cfg):
    if args.format == "dot":
        raise MalformedInputError("grammars are exported as text only")
    _emit(args, gr.to_text(g))


def _decision(flag: bool) -> int:
    print("YES" if flag else "NO")
    return EXIT_YES if flag else EXIT_NO


# -- commands ------------------------------------------------------------------


def cmd_reduce(args):
    print(format_word(free_reduce(parse_word(args.word))))
    return EXIT_YES


def cmd_benois(args):
    (nfa,) = _load_languages(args, args.nfa)
    _emit_nfa(args, benois_saturate(nfa))
    return EXIT_YES


def cmd_alpha(args):
    k, l = _load_languages(args, args.k, args.l)
    result = cj.alpha(k, l)
    for label in result.provenance:
        logging.info("branch %s", label)
    _emit_cfg(args, result.grammar)
    return EXIT_YES


def cmd_powers(args):
    (k,) = _load_languages(args, args.k)
    k = fa.with_alphabet(k, k.alphabet.union(Alphabet(tuple(sorted({x.lower() for x in args.u})))))
    _emit_cfg(args, cj.alpha_powers(k, parse_word(args.u, k.alphabet)))
    return EXIT_YES


def cmd_dgcp(args):
    k0, k1, k2 = _load_languages(args, args.k0, args.k1, args.k2)
    answer = cj.dgcp(k0, k1, k2)
    code = _decision(answer)
    if answer and args.witness:
        found = oracles.dgcp_witness_search(k0, k1, k2, args.bound)
        if found:
            u, x, y = (format_word(w) for w in found)
            print(f"witness: u = {u}, y = {y}, u^-1 y u = {x}")
        else:
            print(f"no witness up to length {args.bound}")
    return code


def cmd_gcp(args):
    k, l0 = _load_languages(args, args.k, args.l0)
    x = parse_word(args.x)
    alphabet = k.alphabet.union(Alphabet(tuple(sorted({c.lower() for c in x}))))
    return _decision(cj.gcp(x, fa.with_alphabet(k, alphabet), fa.with_alphabet(l0, alphabet)))


def cmd_nf(args):
    s, _ = _load_group(args)
    print(s.format(s.evaluate(parse_word(args.word, s.alphabet))))
    return EXIT_YES


def _config(args, cfg: vf.VfConfig) -> vf.VfConfig:
    return vf.VfConfig(
        args.ftc if args.ftc is not None else cfg.ftc,
        args.cone_radius if getattr(args, "cone_radius", None) is not None else cfg.cone_radius,
        cfg.lam,
        cfg.eps,
    )


def cmd_geo(args):
    s, cfg = _load_group(args)
    k = fa.with_alphabet(_load_language(args.k) or fa.universal(s.alphabet), s.alphabet)
    _emit_nfa(args, vf.geo_of_rational(s, k, _config(args, cfg)))
    return EXIT_YES


def cmd_transducer(args):
    s, cfg = _load_group(args)
    _emit(args, vf.build_transducer(s, _config(args, cfg)).to_text())
    return EXIT_YES


def cmd_enumerate(args):
    if args.nfa:
        (nfa,) = _load_languages(args, args.nfa)
        words = fa.enumerate_words(nfa, args.max_len)
    else:
        words = gr.cfg_enumerate(gr.parse_cfg(_read(args.cfg)), args.max_len)
    _emit(args, "".join(format_word(w) + "\n" for w in words))
    return EXIT_YES


def cmd_check(args):
    suite = Path(__file__).resolve().parents[2] / "tests" / "test_acceptance.py"
    if not suite.exists():
        raise MalformedInputError(f"acceptance suite not found at {suite}")
    env = dict(os.environ, GEOCONJ_SEED=str(args.seed))
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-s", str(suite)], env=env)
    return EXIT_YES if proc.returncode == 0 else EXIT_NO


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("txt", "dot"), default="txt")
    common.add_argument("--out", help="write the result to this file")
    common.add_argument("--seed", type=int, default=20240601)
    common.add_argument("--budget", type=int, default=vf.DEFAULT_BUDGET, help="node budget for searches")
    common.add_argument("--alphabet", help="extra generators, e.g. a,b")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="geoconj", description="Conjugacy and geodesic computations in free and virtually free groups.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    add("reduce", cmd_reduce, "free reduction of a word").add_argument("--word", required=True)
    add("benois", cmd_benois, "automaton of reduced words of a rational subset").add_argument("--nfa", required=True)
    sp = add("alpha", cmd_alpha, "grammar for all conjugates of K by elements of L")
    sp.add_argument("--k", required=True)
    sp.add_argument("--l", required=True)
    sp = add("powers", cmd_powers, "grammar for conjugates of K by powers of u")
    sp.add_argument("--k", required=True)
    sp.add_argument("--u", required=True)
    sp = add("dgcp", cmd_dgcp, "is some element of K1 a K0-conjugate of an element of K2?")
    sp.add_argument("--k0", required=True)
    sp.add_argument("--k1", required=True)
    sp.add_argument("--k2", required=True)
    sp.add_argument("--witness", action="store_true")
    sp.add_argument("--bound", type=int, default=6)
    sp = add("gcp", cmd_gcp, "is z^-1 x z in K for some z in L0?")
    sp.add_argument("--x", required=True)
    sp.add_argument("--k", required=True)
    sp.add_argument("--l0", required=True)
    sp = add("nf", cmd_nf, "normal form of a word in a virtually free group")
    sp.add_argument("--group", required=True)
    sp.add_argument("--word", required=True)
    sp = add("geo", cmd_geo, "geodesic words of a rational subset of a virtually free group")
    sp.add_argument("--group", required=True)
    sp.add_argument("--k", required=True)
    sp.add_argument("--ftc", type=int)
    sp.add_argument("--cone-radius", type=int)
    sp = add("transducer", cmd_transducer, "export the geodesic transducer")
    sp.add_argument("--group", required=True)
    sp.add_argument("--ftc", type=int)
    sp = add("enumerate", cmd_enumerate, "list words of an automaton or grammar")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--nfa")
    src.add_argument("--cfg")
    sp.add_argument("--max-len", type=int, default=6)
    sp = add("check", cmd_check, "run the acceptance suite")
    sp.add_argument("--suite", choices=("acceptance",), default="acceptance")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    random.seed(args.seed)
    cj.MONOID_BUDGET = args.budget
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (MalformedInputError, PreconditionError, GeoconjError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
