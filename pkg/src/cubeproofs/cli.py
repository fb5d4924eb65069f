"""Command-line surface.

Exit codes: 0 success, 1 verified failure (bad proof, enumeration problem),
2 usage or parse error.  Set the QUIET environment variable to suppress
progress lines; results always print.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .extraction import ExtractionError, Extractor, ProofTooLarge, rewrite_as_cubes
from .presentations import (
    PresentationError,
    SubgroupSpec,
    TRIVIAL_SUBGROUP,
    read_presentation,
)
from .proofwords import (
    ProofWordError,
    cube_product_value,
    format_proofword,
    bracket_concat,
    parse_proofword,
    proof_stats,
    residue,
    to_cubes,
    validate,
    value,
)
from .search import TrialConfig, parse_config, run_campaign
from .todd_coxeter import (
    EnumerationError,
    certify_exponent3,
    enumerate_cosets,
)
from .words import Alphabet, WordError, base_words, format_word, free_reduce, parse_word

USAGE_ERROR = 2
FAILURE = 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (WordError, ProofWordError, PresentationError, EnumerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ExtractionError, ProofTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILURE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubeproofs",
        description="verify, transform and search for proof-words expressing "
        "commutators of commutators as products of cubes",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("verify", help="check a proof-word against a target word")
    p.add_argument("--proof", required=True, type=Path)
    p.add_argument("--target", required=True)
    p.add_argument("--presentation", type=Path)
    p.add_argument("--subgroup", help="subgroup generator letters, e.g. xyz")
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("stats", help="print proof-word statistics")
    p.add_argument("--proof", required=True, type=Path)
    p.set_defaults(func=cmd_stats)

    p = subs.add_parser("basewords", help="list canonical base-words")
    p.add_argument("--min", type=int, default=1)
    p.add_argument("--max", type=int, default=2)
    p.add_argument("--rank", type=int, default=4)
    p.set_defaults(func=cmd_basewords)

    p = subs.add_parser("enumerate", help="run a coset enumeration")
    p.add_argument("--presentation", required=True, type=Path)
    p.add_argument("--subgroup")
    p.add_argument("--strategy", default="hlt", choices=("hlt", "felsch", "hybrid"))
    p.add_argument("--max-cosets", type=int, default=1_000_000)
    p.add_argument("--dump", type=Path, help="write the live coset table here")
    p.set_defaults(func=cmd_enumerate)

    p = subs.add_parser("extract", help="extract a proof-word for a target")
    p.add_argument("--presentation", required=True, type=Path)
    p.add_argument("--target", required=True)
    p.add_argument("--subgroup")
    p.add_argument("--strategy", default="hlt", choices=("hlt", "felsch", "hybrid"))
    p.add_argument("--max-cosets", type=int, default=1_000_000)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_extract)

    p = subs.add_parser("rewrite", help="rewrite a trivial word as cubes")
    p.add_argument("--presentation", required=True, type=Path)
    p.add_argument("--word", required=True)
    p.add_argument("--max-cosets", type=int, default=1_000_000)
    p.set_defaults(func=cmd_rewrite)

    p = subs.add_parser("cubes", help="print the cube product of a relator-only proof")
    p.add_argument("--proof", required=True, type=Path)
    p.set_defaults(func=cmd_cubes)

    p = subs.add_parser("search", help="run a randomized search campaign")
    p.add_argument("--config", type=Path, help="key=value config file")
    p.add_argument("--seed")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("campaign"))
    p.add_argument("--min-len", type=int)
    p.add_argument("--max-len", type=int)
    p.add_argument("--exclude-len1", action="store_true", default=None)
    p.add_argument("--relators", type=int)
    p.add_argument("--subgroup-rank", type=int)
    p.add_argument("--strategy", choices=("hlt", "felsch", "hybrid"))
    p.add_argument("--max-cosets", type=int)
    p.add_argument("--threshold", type=float)
    p.set_defaults(func=cmd_search)

    return parser


def _read_proof(path: Path):
    return parse_proofword(path.read_text())


def _subgroup(arg: Optional[str], file_sub, alphabet: Alphabet) -> SubgroupSpec:
    if arg is not None:
        return SubgroupSpec.from_letters(arg, alphabet)
    return file_sub if file_sub is not None else TRIVIAL_SUBGROUP


def _progress(msg: str) -> None:
    if not os.environ.get("QUIET"):
        print(msg, file=sys.stderr)


def cmd_verify(args) -> int:
    proof = _read_proof(args.proof)
    target = free_reduce(parse_word(args.target))
    stats = proof_stats(proof)
    print(
        f"{stats.relator_count} relators, length {stats.total_relator_length}, "
        f"{stats.conj_pair_count} pairs"
    )
    print(f"value {format_word(value(proof))}")
    print(f"residue {format_word(residue(proof))}")
    ok = value(proof) == target
    if not ok:
        print(f"MISMATCH: target {format_word(target)}")
    if args.presentation:
        pres, file_sub = read_presentation(args.presentation)
        sub = _subgroup(args.subgroup, file_sub, pres.alphabet)
        report = validate(proof, pres, sub)
        for v in report.violations:
            print(f"invalid: {v}")
        for w in report.warnings:
            print(f"warning: {w}")
        ok = ok and report.ok
    print("OK" if ok else "FAIL")
    return 0 if ok else FAILURE


def cmd_stats(args) -> int:
    s = proof_stats(_read_proof(args.proof))
    print(
        f"{s.relator_count} relators, length {s.total_relator_length}, "
        f"{s.conj_pair_count} pairs, {s.subgen_count} subgroup letters"
    )
    return 0


def cmd_basewords(args) -> int:
    if not 1 <= args.min <= args.max:
        print("error: need 1 <= min <= max", file=sys.stderr)
        return USAGE_ERROR
    alphabet = Alphabet.of_rank(args.rank)
    for w in base_words(alphabet, args.min, args.max):
        print(format_word(w, alphabet))
    return 0


def cmd_enumerate(args) -> int:
    pres, file_sub = read_presentation(args.presentation)
    sub = _subgroup(args.subgroup, file_sub, pres.alphabet)
    table, result, _ = enumerate_cosets(pres, sub, args.strategy, args.max_cosets)
    if not result.closed:
        print(f"not closed within {args.max_cosets} cosets (defined {result.total_defined})")
        return FAILURE
    print(f"index {result.index}")
    print(f"total {result.total_defined}")
    print(f"ratio {result.ratio:.3f}")
    print(f"exponent3 {'yes' if certify_exponent3(table) else 'no'}")
    if args.dump:
        with args.dump.open("w") as fh:
            table.dump(fh)
        _progress(f"table written to {args.dump}")
    return 0


def cmd_extract(args) -> int:
    pres, file_sub = read_presentation(args.presentation)
    sub = _subgroup(args.subgroup, file_sub, pres.alphabet)
    target = free_reduce(parse_word(args.target, pres.alphabet))
    _progress("enumerating...")
    table, result, ledger = enumerate_cosets(pres, sub, args.strategy, args.max_cosets)
    if not result.closed:
        print("error: enumeration did not close", file=sys.stderr)
        return FAILURE
    _progress(f"index {result.index}; extracting...")
    proof = Extractor(table, ledger).extract(target)
    text = format_proofword(proof, pres.alphabet)
    if args.out:
        args.out.write_text(text + "\n")
        _progress(f"proof written to {args.out}")
    else:
        print(text)
    return 0


def cmd_rewrite(args) -> int:
    pres, _ = read_presentation(args.presentation)
    word = parse_word(args.word, pres.alphabet)
    cp = rewrite_as_cubes(word, pres, max_cosets=args.max_cosets)
    for base, conj in cp:
        print(f"{format_word(base, pres.alphabet)} ^3 {format_word(conj, pres.alphabet)}")
    return 0


def cmd_cubes(args) -> int:
    proof = _read_proof(args.proof)
    cp = to_cubes(proof)
    if cube_product_value(cp) != value(proof):
        print("error: cube product does not reproduce the proof value", file=sys.stderr)
        return FAILURE
    for base, conj in cp:
        print(f"{format_word(base)} ^3 {format_word(conj)}")
    return 0


def cmd_search(args) -> int:
    cfg = parse_config(args.config.read_text()) if args.config else TrialConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.min_len is not None:
        overrides["min_base_len"] = args.min_len
    if args.max_len is not None:
        overrides["max_base_len"] = args.max_len
    if args.exclude_len1 is not None:
        overrides["exclude_length_one"] = args.exclude_len1
    if args.relators is not None:
        overrides["relator_count"] = args.relators
    if args.subgroup_rank is not None:
        overrides["subgroup_rank"] = args.subgroup_rank
    if args.strategy is not None:
        overrides["strategy"] = args.strategy
    if args.max_cosets is not None:
        overrides["max_cosets"] = args.max_cosets
    if args.threshold is not None:
        overrides["efficiency_threshold"] = args.threshold
    if overrides:
        from dataclasses import replace

        cfg = replace(cfg, **overrides)
    summary = run_campaign(cfg, args.trials, args.out, workers=args.workers)
    print(f"trials {summary.trials}, accepted {summary.accepted}")
    for label, entry in sorted(summary.best.items()):
        print(
            f"best {label}: {entry.cube_count} cubes, length {entry.relator_length}, "
            f"proof {entry.proof_digest}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
