"""Presentations whose relators are cubes of base-words, subgroup
specifications, Burnside group orders, and randomised presentation
generation.

File format (byte-exact round trip)::

    gens 4
    base Yw
    base xZw
    sub xyz        # optional, at most once

Lines starting with ``#`` and blank lines are ignored when reading and
never written.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .words import (
    Alphabet,
    Gen,
    Word,
    format_word,
    invert,
    is_cyclically_reduced,
    parse_word,
    rotate,
)


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    """Generators plus relator base-words; each relator is base**3."""

    alphabet: Alphabet
    relator_bases: tuple[Word, ...]

    def __post_init__(self) -> None:
        for base in self.relator_bases:
            if not base:
                raise PresentationError("empty relator base")
            if not is_cyclically_reduced(base):
                raise PresentationError(
                    f"relator base {format_word(base, self.alphabet)} not cyclically reduced"
                )
            if any(abs(g) > self.alphabet.rank for g in base):
                raise PresentationError("relator base uses a letter outside the alphabet")

    @property
    def relators(self) -> tuple[Word, ...]:
        return tuple(base * 3 for base in self.relator_bases)


@dataclass(frozen=True)
class SubgroupSpec:
    """Subgroup generated by single-letter words, e.g. <x,y,z>."""

    generators: tuple[Word, ...] = ()

    def __post_init__(self) -> None:
        seen = set()
        for w in self.generators:
            if len(w) != 1:
                raise PresentationError("subgroup generators must be single letters")
            if abs(w[0]) in seen:
                raise PresentationError("duplicate subgroup generator")
            seen.add(abs(w[0]))

    @staticmethod
    def from_letters(letters: str, alphabet: Alphabet) -> "SubgroupSpec":
        return SubgroupSpec(tuple((alphabet.gen(ch),) for ch in letters))

    @staticmethod
    def first_generators(rank: int) -> "SubgroupSpec":
        return SubgroupSpec(tuple((i,) for i in range(1, rank + 1)))

    @property
    def rank(self) -> int:
        return len(self.generators)


TRIVIAL_SUBGROUP = SubgroupSpec()


@dataclass(frozen=True)
class BurnsideParams:
    """Order data for the largest rank-r group of exponent three."""

    r: int
    s: int = field(init=False)
    order: int = field(init=False)

    def __post_init__(self) -> None:
        if self.r < 0:
            raise PresentationError("rank must be >= 0")
        object.__setattr__(self, "s", self.r * (self.r * self.r + 5) // 6)
        object.__setattr__(self, "order", 3**self.s)


def expected_order(r: int) -> int:
    """3**(r(r^2+5)/6), the order of the free exponent-3 group of rank r."""
    return BurnsideParams(r).order


def expected_index(group_rank: int, subgroup_rank: int) -> int:
    if subgroup_rank > group_rank:
        raise PresentationError("subgroup rank exceeds group rank")
    return expected_order(group_rank) // expected_order(subgroup_rank)


def random_presentation(
    pool: Sequence[Word],
    count: int,
    rng_seed: int | str,
    alphabet: Alphabet | None = None,
) -> Presentation:
    """Pick `count` distinct pool words, each independently inverted with
    probability 1/2 and rotated by a uniform offset.  Deterministic for a
    fixed seed."""
    if count > len(pool):
        raise PresentationError(f"count {count} exceeds pool size {len(pool)}")
    if alphabet is None:
        rank = max(abs(g) for w in pool for g in w)
        alphabet = Alphabet.of_rank(rank)
    rng = random.Random(str(rng_seed))
    bases = []
    for base in rng.sample(list(pool), count):
        if rng.random() < 0.5:
            base = invert(base)
        bases.append(rotate(base, rng.randrange(len(base))))
    return Presentation(alphabet, tuple(bases))


def write_presentation(
    path: str | Path, pres: Presentation, sub: Optional[SubgroupSpec] = None
) -> None:
    lines = [f"gens {pres.alphabet.rank}"]
    lines += [f"base {format_word(b, pres.alphabet)}" for b in pres.relator_bases]
    if sub is not None and sub.generators:
        lines.append("sub " + "".join(pres.alphabet.letter(w[0]) for w in sub.generators))
    Path(path).write_text("\n".join(lines) + "\n")


def read_presentation(path: str | Path) -> tuple[Presentation, Optional[SubgroupSpec]]:
    alphabet: Optional[Alphabet] = None
    bases: list[Word] = []
    sub: Optional[SubgroupSpec] = None
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            keyword, _, rest = line.partition(" ")
            if keyword == "gens":
                alphabet = Alphabet.of_rank(int(rest))
            elif keyword == "base":
                if alphabet is None:
                    raise PresentationError("'base' before 'gens'")
                bases.append(parse_word(rest, alphabet))
            elif keyword == "sub":
                if alphabet is None:
                    raise PresentationError("'sub' before 'gens'")
                if sub is not None:
                    raise PresentationError("duplicate 'sub' line")
                sub = SubgroupSpec.from_letters(rest.strip(), alphabet)
            else:
                raise PresentationError(f"unknown keyword {keyword!r}")
        except (ValueError, PresentationError) as exc:
            raise PresentationError(f"{path}:{lineno}: {exc}") from None
    if alphabet is None:
        raise PresentationError(f"{path}: missing 'gens' line")
    return Presentation(alphabet, tuple(bases)), sub
