"""Randomised search for short cube products.

Each trial draws a random cube presentation of the rank-4 exponent-3 group,
enumerates the cosets of a subgroup generated by the first few letters,
keeps only presentations that define the group and enumerate efficiently,
and then, for each configured conjugate of C = [[x,y],[z,w]]:

1. extracts a proof-word (conjugated relators + bracketed subgroup letters),
2. shuffles the brackets into a tail block,
3. rewrites the tail's subgroup word as cubes inside the subgroup's own
   exponent-3 presentation and splices that in,
4. distributes the conjugation into an explicit cube product,

verifying the final product by free reduction.  Trials are deterministic
functions of (seed, trial index); a campaign appends one record per trial
to a JSON-lines ledger and keeps the best proof per target on disk.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import fixtures
from .extraction import Extractor, ExtractionError, ProofTooLarge
from .presentations import (
    Presentation,
    SubgroupSpec,
    TRIVIAL_SUBGROUP,
    expected_index,
    random_presentation,
)
from .proofwords import (
    SUB,
    CubeProduct,
    ProofWord,
    cube_product_value,
    format_proofword,
    parse_proofword,
    proof_stats,
    shuffle_subgens,
    splice,
    to_cubes,
    value,
)
from .todd_coxeter import certify_exponent3, enumerate_cosets
from .words import (
    DEFAULT_ALPHABET,
    Word,
    base_words,
    commutator_of_commutators,
    conjugate,
    format_word,
    free_reduce,
    parse_word,
)

GROUP_RANK = 4


def default_target_conjugators() -> tuple[Word, ...]:
    """The 16 concatenations {e,W}{e,Z}{e,w}{e,z}, in that order.

    This is a guess at a sensible target family (the conjugates C, C^W,
    C^WZ, C^WZw and friends); campaigns may configure any other set.
    """
    w, z = 4, 3
    choices = (((), (-w,)), ((), (-z,)), ((), (w,)), ((), (z,)))
    return tuple(a + b + c + d for a, b, c, d in iproduct(*choices))


@dataclass(frozen=True)
class TrialConfig:
    seed: int | str = 0
    min_base_len: int = 1
    max_base_len: int = 8
    exclude_length_one: bool = False
    relator_count: int = 16
    subgroup_rank: int = 3
    strategy: str = "hlt"
    max_cosets: int = 200_000
    efficiency_threshold: float = 3.0
    max_proof_items: int = 1_000_000
    target_conjugators: tuple[Word, ...] = field(default_factory=default_target_conjugators)

    def __post_init__(self) -> None:
        if self.efficiency_threshold < 1.0:
            raise ValueError("efficiency threshold must be >= 1.0")
        if not 0 <= self.subgroup_rank <= 3:
            raise ValueError("subgroup rank must be in 0..3")
        lo = 2 if self.exclude_length_one else 1
        if not lo <= self.min_base_len <= self.max_base_len:
            raise ValueError("bad base length range")


@dataclass(frozen=True)
class TargetScore:
    conjugator: str
    ok: bool
    cube_count: Optional[int] = None
    relator_length: Optional[int] = None
    conj_pairs: Optional[int] = None
    proof_digest: Optional[str] = None
    proof_text: Optional[str] = None
    note: str = ""

    def record(self) -> dict:
        d = asdict(self)
        d.pop("proof_text")
        return d


@dataclass(frozen=True)
class TrialResult:
    seed: str
    trial_index: int
    presentation_digest: str
    presentation_text: str
    closed: bool
    index: Optional[int]
    total_defined: int
    ratio: Optional[float]
    accepted: bool
    reject_reason: str = ""
    targets: tuple[TargetScore, ...] = ()

    def record(self) -> str:
        d = {
            "seed": self.seed,
            "trial": self.trial_index,
            "presentation": self.presentation_digest,
            "closed": self.closed,
            "index": self.index,
            "total": self.total_defined,
            "ratio": self.ratio,
            "accepted": self.accepted,
            "reject": self.reject_reason,
            "targets": [t.record() for t in self.targets],
        }
        return json.dumps(d, sort_keys=True, separators=(",", ":"))


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:12]


@lru_cache(maxsize=8)
def _pool(rank: int, lo: int, hi: int) -> tuple[Word, ...]:
    from .words import Alphabet

    return tuple(base_words(Alphabet.of_rank(rank), lo, hi))


@lru_cache(maxsize=4)
def _subgroup_extractor(rank: int, max_items: int) -> Optional[Extractor]:
    """Closed trivial-subgroup enumeration of the subgroup's own group.

    Felsch keeps the deduction graph shallow, which keeps the proofs this
    extractor produces small."""
    if rank == 0:
        return None
    pres = fixtures.burnside_presentation(rank)
    table, result, ledger = enumerate_cosets(
        pres, TRIVIAL_SUBGROUP, strategy="felsch", max_cosets=100_000
    )
    if not result.closed:
        raise ExtractionError(f"bundled rank-{rank} presentation failed to close")
    return Extractor(table, ledger, max_items)


def cube_pipeline(
    extractor: Extractor,
    target: Word,
    sub_extractor: Optional[Extractor],
) -> tuple[CubeProduct, ProofWord]:
    """Extract, shuffle, splice in a cube proof of the residue, and
    distribute conjugation.  Returns the cube product and the relator-only
    proof-word it came from; both are verified by free reduction."""
    proof = extractor.extract(target)
    proof = shuffle_subgens(proof)
    t = len(proof.items)
    while t > 0 and proof.items[t - 1][0] == SUB:
        t -= 1
    tail = proof.items[t:]
    if tail and sub_extractor is None:
        raise ExtractionError("proof has subgroup letters but no subgroup presentation")
    replacement = sub_extractor.extract(value(ProofWord(tail))) if tail else ProofWord()
    spliced = splice(proof, replacement)
    cp = to_cubes(spliced)
    got = cube_product_value(cp)
    if got != free_reduce(target):
        raise ExtractionError("cube product failed free-reduction verification")
    if len(cp) < 2:
        raise ExtractionError(
            "cube product with fewer than two cubes for a nontrivial commutator word"
        )
    return cp, spliced


def run_trial(cfg: TrialConfig, trial_index: int) -> TrialResult:
    """Deterministic in (cfg.seed, trial_index)."""
    rng_seed = f"{cfg.seed}:{trial_index}"
    lo = max(cfg.min_base_len, 2) if cfg.exclude_length_one else cfg.min_base_len
    pool = _pool(GROUP_RANK, lo, cfg.max_base_len)
    pres = random_presentation(pool, cfg.relator_count, rng_seed, DEFAULT_ALPHABET)
    pres_text = _presentation_text(pres)
    digest = _digest(pres_text)
    sub = SubgroupSpec.first_generators(cfg.subgroup_rank)

    table, result, ledger = enumerate_cosets(pres, sub, cfg.strategy, cfg.max_cosets)
    base = dict(
        seed=str(cfg.seed),
        trial_index=trial_index,
        presentation_digest=digest,
        presentation_text=pres_text,
        closed=result.closed,
        index=result.index if result.closed else None,
        total_defined=result.total_defined,
        ratio=round(result.ratio, 4) if result.closed else None,
    )
    if not result.closed:
        return TrialResult(**base, accepted=False, reject_reason="did not close")
    want = expected_index(GROUP_RANK, cfg.subgroup_rank)
    if result.index != want:
        return TrialResult(
            **base, accepted=False, reject_reason=f"index {result.index} != {want}"
        )
    if result.ratio > cfg.efficiency_threshold:
        return TrialResult(
            **base,
            accepted=False,
            reject_reason=f"ratio {result.ratio:.2f} > {cfg.efficiency_threshold}",
        )
    if not certify_exponent3(table):
        return TrialResult(**base, accepted=False, reject_reason="exponent-3 certificate failed")

    extractor = Extractor(table, ledger, cfg.max_proof_items)
    sub_extractor = _subgroup_extractor(cfg.subgroup_rank, cfg.max_proof_items)
    C = commutator_of_commutators()
    scores = []
    for u in cfg.target_conjugators:
        label = format_word(u)
        target = conjugate(C, u)
        try:
            cp, spliced = cube_pipeline(extractor, target, sub_extractor)
        except (ExtractionError, ProofTooLarge) as exc:
            scores.append(TargetScore(conjugator=label, ok=False, note=str(exc)))
            continue
        stats = proof_stats(spliced)
        text = format_proofword(spliced)
        scores.append(
            TargetScore(
                conjugator=label,
                ok=True,
                cube_count=len(cp),
                relator_length=stats.total_relator_length,
                conj_pairs=stats.conj_pair_count,
                proof_digest=_digest(text),
                proof_text=text,
            )
        )
    return TrialResult(**base, accepted=True, targets=tuple(scores))


def _presentation_text(pres: Presentation) -> str:
    lines = [f"gens {pres.alphabet.rank}"]
    lines += [f"base {format_word(b, pres.alphabet)}" for b in pres.relator_bases]
    return "\n".join(lines) + "\n"


# -- campaign persistence ---------------------------------------------------


@dataclass
class BestEntry:
    cube_count: int
    relator_length: int
    proof_digest: str
    seed: str
    trial_index: int

    def better_than(self, other: Optional["BestEntry"]) -> bool:
        if other is None:
            return True
        return (self.cube_count, self.relator_length) < (
            other.cube_count,
            other.relator_length,
        )


@dataclass
class CampaignSummary:
    trials: int
    accepted: int
    best: dict[str, BestEntry]


def run_campaign(
    cfg: TrialConfig,
    n_trials: int,
    out_dir: str | Path,
    workers: int = 1,
    quiet: Optional[bool] = None,
) -> CampaignSummary:
    """Run trials 0..n_trials-1, appending one JSON record per trial to
    ``trials.jsonl`` and writing each accepted proof to ``proofs/`` named by
    content digest.  ``best.json`` tracks the best proof per target, ordered
    by cube count then total relator length.  A single writer (this process)
    performs all persistence; workers only compute."""
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    if quiet is None:
        quiet = bool(os.environ.get("QUIET"))
    out = Path(out_dir)
    (out / "proofs").mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(format_config(cfg))
    best = _load_best(out / "best.json")
    accepted = 0
    with (out / "trials.jsonl").open("a") as ledger_file:
        for res in _map_trials(cfg, n_trials, workers):
            try:
                ledger_file.write(res.record() + "\n")
                ledger_file.flush()
                if res.accepted:
                    accepted += 1
                    _persist_proofs(out, res, best)
            except OSError as exc:
                if not quiet:
                    print(f"trial {res.trial_index}: persistence failed: {exc}")
            if not quiet:
                note = "accepted" if res.accepted else res.reject_reason
                counts = [t.cube_count for t in res.targets if t.ok]
                extra = f" best-cubes {min(counts)}" if counts else ""
                print(f"trial {res.trial_index}: {note}{extra}")
    _write_best(out / "best.json", best)
    return CampaignSummary(trials=n_trials, accepted=accepted, best=best)


def _map_trials(cfg: TrialConfig, n: int, workers: int) -> Iterable[TrialResult]:
    if workers <= 1:
        for i in range(n):
            yield run_trial(cfg, i)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(run_trial, [cfg] * n, range(n))


def _persist_proofs(out: Path, res: TrialResult, best: dict[str, BestEntry]) -> None:
    for t in res.targets:
        if not t.ok or t.proof_text is None:
            continue
        reloaded = value(parse_proofword(t.proof_text))
        target = conjugate(commutator_of_commutators(), parse_word(t.conjugator))
        if reloaded != target:
            raise ExtractionError(f"persisted proof for {t.conjugator!r} fails re-verification")
        (out / "proofs" / f"{t.proof_digest}.pw").write_text(t.proof_text + "\n")
        entry = BestEntry(
            cube_count=t.cube_count,
            relator_length=t.relator_length,
            proof_digest=t.proof_digest,
            seed=res.seed,
            trial_index=res.trial_index,
        )
        key = t.conjugator or "1"
        if entry.better_than(best.get(key)):
            best[key] = entry


def _load_best(path: Path) -> dict[str, BestEntry]:
    if not path.exists():
        return {}
    raw = json.loads(path.read_text())
    return {k: BestEntry(**v) for k, v in raw.items()}


def _write_best(path: Path, best: dict[str, BestEntry]) -> None:
    path.write_text(
        json.dumps({k: asdict(v) for k, v in sorted(best.items())}, indent=2, sort_keys=True)
        + "\n"
    )


# -- plain-text config files -------------------------------------------------

_CONFIG_FIELDS = {
    "seed": str,
    "min_base_len": int,
    "max_base_len": int,
    "exclude_length_one": lambda s: s.lower() in ("1", "true", "yes"),
    "relator_count": int,
    "subgroup_rank": int,
    "strategy": str,
    "max_cosets": int,
    "efficiency_threshold": float,
    "max_proof_items": int,
}


def format_config(cfg: TrialConfig) -> str:
    lines = [f"{name}={getattr(cfg, name)}" for name in _CONFIG_FIELDS]
    lines.append(
        "target_conjugators=" + ",".join(format_word(u) for u in cfg.target_conjugators)
    )
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> TrialConfig:
    kwargs: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if not sep:
            raise ValueError(f"config line {lineno}: expected key=value")
        if key == "target_conjugators":
            kwargs[key] = tuple(parse_word(part) for part in val.split(","))
        elif key in _CONFIG_FIELDS:
            kwargs[key] = _CONFIG_FIELDS[key](val)
        else:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
    return TrialConfig(**kwargs)
