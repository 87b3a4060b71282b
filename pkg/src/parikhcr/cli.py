"""Command-line front end: construct, rewrite, check, index, member, nw.

Exit codes: 0 pass, 1 check failed or operation error, 2 inconclusive,
64 usage error, 65 parse error.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass

from .construct_abelian import (
    ConstructionInfeasible,
    construct_abelian,
)
from .construct_monoid import UnsupportedCase, construct_monoid
from .construct_two_letter import construct_two_letter
from .fileformats import StsFormatError, format_sts, parse_sts
from .monoids import MonFormatError, parse_mon
from .rewrite import (
    LEFTMOST_LONGEST,
    LEFTMOST_SHORTEST,
    RIGHTMOST,
    BudgetExhausted,
    Strategy,
    check_invariance,
    classify,
    confluence_sampling,
    enumerate_irreducible,
    irreducible_words,
    is_locally_confluent,
    normal_form,
    random_word,
)
from .verify import niemann_waldmann
from .words import Word

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_PARSE = 65


@dataclass
class RunConfig:
    step_budget: int = 10_000_000
    max_enum_len: int = 24
    seed: int = 0
    relax_upper_bound: bool = False
    strategy: Strategy = LEFTMOST_SHORTEST

    def __post_init__(self):
        if self.step_budget <= 0 or self.max_enum_len <= 0:
            raise ValueError("budgets must be positive")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="parikhcr", description=__doc__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=int, default=10_000_000)
        p.add_argument("--max-len", type=int, default=24)
        p.add_argument("--strategy", default="leftmost_shortest")
        p.add_argument("--report", choices=["text", "tsv"], default="text")

    p = sub.add_parser("construct", help="build a system from a .mon file")
    p.add_argument("monoid")
    p.add_argument("--mode", choices=["auto", "abelian", "two-letter", "monoid"],
                   default="auto")
    p.add_argument("--out")
    p.add_argument("--relax-upper-bound", action="store_true")
    p.add_argument("--no-alphabet-reduction", action="store_true")
    common(p)

    p = sub.add_parser("rewrite", help="reduce a word to normal form")
    p.add_argument("system")
    p.add_argument("word")
    p.add_argument("--trace", action="store_true")
    common(p)

    p = sub.add_parser("check", help="run checks against a system")
    p.add_argument("system")
    p.add_argument("--confluence", action="store_true")
    p.add_argument("--classify", action="store_true")
    p.add_argument("--invariance", metavar="MONFILE")
    p.add_argument("--trials", type=int, default=200)
    common(p)

    p = sub.add_parser("index", help="count congruence classes")
    p.add_argument("system")
    p.add_argument("--max-count", type=int, default=1_000_000)
    common(p)

    p = sub.add_parser("member", help="decide membership in a recognized language")
    p.add_argument("system")
    p.add_argument("monoid")
    p.add_argument("--accept", required=True,
                   help="comma-separated accepted element indices")
    p.add_argument("word")
    common(p)

    p = sub.add_parser("nw", help="emit the reference parity system")
    p.add_argument("m", type=int)
    p.add_argument("--out")
    common(p)
    return parser


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_system(path: str):
    return parse_sts(_read(path))


def _load_hom(path: str):
    monoid, hom = parse_mon(_read(path))
    if hom is None:
        raise MonFormatError(0, "monoid file has no hom lines")
    return monoid, hom


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _dispatch(args)
    except (MonFormatError, StsFormatError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"parse error: cannot read {exc.filename}", file=sys.stderr)
        return EXIT_PARSE
    except (UnsupportedCase, ConstructionInfeasible, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def _dispatch(args) -> int:
    handler = {
        "construct": _cmd_construct,
        "rewrite": _cmd_rewrite,
        "check": _cmd_check,
        "index": _cmd_index,
        "member": _cmd_member,
        "nw": _cmd_nw,
    }[args.cmd]
    return handler(args)


def _cmd_construct(args) -> int:
    _, hom = _load_hom(args.monoid)
    if args.mode == "abelian":
        artifact = construct_abelian(hom,
                                     relax_upper_bound=args.relax_upper_bound)
    elif args.mode == "two-letter":
        artifact = construct_two_letter(hom)
    else:
        artifact = construct_monoid(
            hom, reduce_alphabet=not args.no_alphabet_reduction
        )
    for line in artifact.summary_lines():
        print(line)
    system = artifact.system
    if system.is_explicit:
        flags = classify(system)
        print(
            f"classification: parikh_reducing={flags.parikh_reducing} "
            f"subword_reducing={flags.subword_reducing} "
            f"length_reducing={flags.length_reducing}"
        )
    else:
        print(
            "classification: schematic system; every instantiated rule is "
            "Parikh-reducing by construction (see `check` for sampling)"
        )
    text = format_sts(system)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_rewrite(args) -> int:
    system = _load_system(args.system)
    strategy = Strategy.parse(args.strategy)
    try:
        word = system.alphabet.word(args.word)
    except ValueError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    trace: list[str] = []

    def on_step(letters, match):
        line = f"@{match.start} {match.family} len {match.length}->{len(match.replacement)}"
        if match.note:
            line += f" ({match.note})"
        trace.append(line)

    try:
        nf = normal_form(system, word, strategy, args.budget,
                         on_step=on_step if args.trace else None)
    except BudgetExhausted as exc:
        for line in trace:
            print(line)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    for line in trace:
        print(line)
    print(nf.text())
    return EXIT_OK


def _cmd_check(args) -> int:
    system = _load_system(args.system)
    results = []
    if args.confluence:
        if system.is_explicit:
            ok, pair = is_locally_confluent(system, budget=args.budget)
            detail = "" if ok else (
                f"unresolved pair {pair.left.text()!r} / {pair.right.text()!r}"
                f" from witness {pair.witness.text()!r}"
            )
            results.append(("confluence", "pass" if ok else "fail", detail))
        else:
            sampler = lambda rng: random_word(system.alphabet, 120, rng)
            strategies = [LEFTMOST_SHORTEST, LEFTMOST_LONGEST, RIGHTMOST]
            ok, ce = confluence_sampling(system, sampler, args.trials,
                                         strategies, args.budget)
            detail = f"sampled, {args.trials} trials"
            if not ok:
                detail = f"diverging word {ce[0].text()!r}"
            results.append(("confluence", "pass" if ok else "fail", detail))
    if args.classify:
        if system.is_explicit:
            flags = classify(system)
            results.append(
                ("classify", "pass",
                 f"parikh_reducing={flags.parikh_reducing} "
                 f"subword_reducing={flags.subword_reducing} "
                 f"length_reducing={flags.length_reducing}")
            )
        else:
            results.append(
                ("classify", "inconclusive",
                 "schematic system: instances checked at application time")
            )
    if args.invariance:
        _, hom = _load_hom(args.invariance)
        ok = check_invariance(system, hom, samples=args.trials,
                              rng=random.Random(args.seed))
        detail = "exact" if system.is_explicit else "sampled"
        results.append(("invariance", "pass" if ok else "fail", detail))
    if not results:
        print("nothing to check (pass --confluence/--classify/--invariance)",
              file=sys.stderr)
        return EXIT_USAGE
    for name, status, detail in results:
        if args.report == "tsv":
            print(f"{name}\t{status}\t{detail}")
        else:
            print(f"{name}: {status}" + (f" ({detail})" if detail else ""))
    if any(status == "fail" for _, status, _ in results):
        return EXIT_FAIL
    if any(status == "inconclusive" for _, status, _ in results):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _cmd_index(args) -> int:
    system = _load_system(args.system)
    count, complete = enumerate_irreducible(system, args.max_len,
                                            args.max_count)
    if complete:
        if args.report == "tsv":
            print(f"index\t{count}\tcomplete")
        else:
            print(count)
        return EXIT_OK
    if args.report == "tsv":
        print(f"index\t>={count}\tinconclusive")
    else:
        print(f"inconclusive: at least {count} classes up to length {args.max_len}")
    return EXIT_INCONCLUSIVE


def _cmd_member(args) -> int:
    system = _load_system(args.system)
    _, hom = _load_hom(args.monoid)
    accept = set()
    for chunk in args.accept.split(","):
        chunk = chunk.strip()
        if chunk:
            accept.add(int(chunk))
    bad = [g for g in accept if not 0 <= g < hom.codomain.size]
    if bad:
        print(f"usage error: accepted elements {bad} out of range",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        word = hom.alphabet.word(args.word)
    except ValueError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    member = hom.evaluate(word) in accept

    words, complete = irreducible_words(system, args.max_len, 200000)
    if complete:
        accepted_nfs = {
            w for w in words if hom.evaluate(Word(system.alphabet, w)) in accept
        }
        nf = normal_form(system, Word(system.alphabet, word.letters),
                         budget=args.budget)
        if (nf.letters in accepted_nfs) != member:
            print("error: normal-form membership disagrees with evaluation",
                  file=sys.stderr)
            return EXIT_FAIL
    print("true" if member else "false")
    return EXIT_OK


def _cmd_nw(args) -> int:
    system = niemann_waldmann(args.m)
    text = format_sts(system)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
