"""Proof-words: interleaved conjugator letters, parenthesised relator
instances and bracketed subgroup generators.

A proof-word freely reduces (delimiters dropped) to the word it proves.
Relator instances may be rotations of a presentation relator or of its
inverse; brackets hold exactly one letter.  Grammar, bit-exact::

    proofword := item*
    item      := LETTER | '(' LETTER+ ')' | '[' LETTER ']'

with whitespace ignored everywhere between tokens and nesting forbidden.

Items are tagged tuples: ``("c", g)`` conjugator letter, ``("r", word)``
relator instance, ``("s", g)`` subgroup generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .words import (
    Alphabet,
    DEFAULT_ALPHABET,
    Gen,
    Word,
    canonical_rep,
    concat,
    free_reduce,
    format_word,
    invert,
    is_reduced,
)
from .presentations import Presentation, SubgroupSpec

CONJ = "c"
REL = "r"
SUB = "s"

Item = tuple  # (CONJ, Gen) | (REL, Word) | (SUB, Gen)


class ProofWordError(ValueError):
    """Parse failure or an operation applied outside its stated domain."""


def conj_item(g: Gen) -> Item:
    return (CONJ, g)


def rel_item(word: Sequence[Gen]) -> Item:
    w = tuple(word)
    if not w or not is_reduced(w):
        raise ProofWordError("relator instance must be nonempty and freely reduced")
    return (REL, w)


def sub_item(g: Gen) -> Item:
    return (SUB, g)


@dataclass(frozen=True)
class ProofWord:
    items: tuple[Item, ...] = ()

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class ProofStats:
    relator_count: int
    total_relator_length: int
    conj_letter_count: int
    conj_pair_count: int
    subgen_count: int


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class CubeProduct:
    """Explicit product of conjugated cubes: (base, conjugator) pairs."""

    cubes: tuple[tuple[Word, Word], ...] = ()

    def __iter__(self):
        return iter(self.cubes)

    def __len__(self) -> int:
        return len(self.cubes)


def parse_proofword(text: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> ProofWord:
    items: list[Item] = []
    group: Optional[str] = None  # '(' or '[' while inside a delimited group
    letters: list[Gen] = []
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        if ch in "([":
            if group is not None:
                raise ProofWordError(f"nested {ch!r} at offset {pos}")
            group, letters = ch, []
        elif ch in ")]":
            if group is None or (group == "(") != (ch == ")"):
                raise ProofWordError(f"mismatched {ch!r} at offset {pos}")
            if group == "(":
                items.append(rel_item(letters))
            else:
                if len(letters) != 1:
                    raise ProofWordError(
                        f"bracket must hold exactly one letter, got {len(letters)} at offset {pos}"
                    )
                items.append(sub_item(letters[0]))
            group = None
        else:
            try:
                g = alphabet.gen(ch)
            except ValueError as exc:
                raise ProofWordError(f"{exc} at offset {pos}") from None
            if group is None:
                items.append(conj_item(g))
            else:
                letters.append(g)
    if group is not None:
        raise ProofWordError(f"unclosed {group!r} at end of input")
    return ProofWord(tuple(items))


def format_proofword(proof: ProofWord, alphabet: Alphabet = DEFAULT_ALPHABET) -> str:
    out = []
    for kind, payload in proof:
        if kind == CONJ:
            out.append(alphabet.letter(payload))
        elif kind == REL:
            out.append("(" + format_word(payload, alphabet) + ")")
        else:
            out.append("[" + alphabet.letter(payload) + "]")
    return "".join(out)


def flatten(proof: ProofWord) -> Word:
    """All letters of all items in order, delimiters dropped; unreduced."""
    out: list[Gen] = []
    for kind, payload in proof:
        if kind == REL:
            out.extend(payload)
        else:
            out.append(payload)
    return tuple(out)


def value(proof: ProofWord) -> Word:
    return free_reduce(flatten(proof))


def residue(proof: ProofWord) -> Word:
    """Value after deleting all relator instances."""
    return value(ProofWord(tuple(it for it in proof if it[0] != REL)))


def bracket_concat(proof: ProofWord) -> Word:
    return free_reduce(tuple(p for k, p in proof if k == SUB))


def relator_instances(proof: ProofWord) -> list[Word]:
    return [p for k, p in proof if k == REL]


def proof_stats(proof: ProofWord) -> ProofStats:
    rels = relator_instances(proof)
    nconj = sum(1 for k, _ in proof if k == CONJ)
    nsub = sum(1 for k, _ in proof if k == SUB)
    return ProofStats(
        relator_count=len(rels),
        total_relator_length=sum(len(r) for r in rels),
        conj_letter_count=nconj,
        conj_pair_count=nconj // 2,
        subgen_count=nsub,
    )


def is_cube(word: Sequence[Gen]) -> Optional[Word]:
    """The base u if word == u*u*u literally, else None."""
    w = tuple(word)
    if len(w) % 3:
        return None
    n = len(w) // 3
    base = w[:n]
    return base if base * 3 == w else None


def validate(proof: ProofWord, pres: Presentation, sub: SubgroupSpec) -> ValidationReport:
    """Check every relator instance is a rotation of a presentation relator
    or of its inverse, and every bracket letter a subgroup generator or its
    inverse.  Report-style; never raises."""
    allowed = {canonical_rep(b) for b in pres.relator_bases}
    sub_idx = {abs(w[0]) for w in sub.generators}
    violations = []
    warnings = []
    for i, (kind, payload) in enumerate(proof):
        if kind == REL:
            base = is_cube(payload)
            if base is None:
                violations.append(f"item {i}: relator instance {_fmt(payload)} is not a cube")
            elif canonical_rep(base) not in allowed:
                violations.append(
                    f"item {i}: relator instance {_fmt(payload)} matches no presentation relator"
                )
        elif kind == SUB:
            if abs(payload) not in sub_idx:
                violations.append(
                    f"item {i}: bracket letter {_fmt((payload,))} is not a subgroup generator"
                )
    nconj = sum(1 for k, _ in proof if k == CONJ)
    if nconj % 2:
        warnings.append(f"odd conjugator letter count {nconj}")
    return ValidationReport(tuple(violations), tuple(warnings))


def _fmt(word: Sequence[Gen]) -> str:
    return format_word(word)


def cancel_conj(proof: ProofWord) -> ProofWord:
    """Freely reduce each maximal run of conjugator letters."""
    items: list[Item] = []
    run: list[Gen] = []

    def flush() -> None:
        for g in free_reduce(run):
            items.append(conj_item(g))
        run.clear()

    for it in proof:
        if it[0] == CONJ:
            if run and run[-1] == -it[1]:
                run.pop()
            else:
                run.append(it[1])
        else:
            flush()
            items.append(it)
    flush()
    return ProofWord(tuple(items))


def _conj_letters(proof: ProofWord) -> Word:
    return tuple(p for k, p in proof if k == CONJ)


def shuffle_subgens(proof: ProofWord) -> ProofWord:
    """Move all bracket items into one contiguous block at the end.

    Repeatedly takes the last bracket group that is not already part of the
    tail block, turns its letters into conjugators in place, and re-creates
    the brackets just before the tail, preceded by the matching inverse
    conjugator letters.  Value, relator multiset and bracket letters are all
    preserved.
    """
    if free_reduce(_conj_letters(proof)):
        raise ProofWordError("conjugator letters do not freely cancel")
    items = list(proof.items)
    while True:
        t = len(items)
        while t > 0 and items[t - 1][0] == SUB:
            t -= 1
        e = t - 1
        while e >= 0 and items[e][0] != SUB:
            e -= 1
        if e < 0:
            return ProofWord(tuple(items))
        s = e
        while s > 0 and items[s - 1][0] == SUB:
            s -= 1
        group = [p for _, p in items[s : e + 1]]
        items = (
            items[:s]
            + [conj_item(g) for g in group]
            + items[e + 1 : t]
            + [conj_item(g) for g in invert(group)]
            + [sub_item(g) for g in group]
            + items[t:]
        )


def splice(proof: ProofWord, replacement: ProofWord) -> ProofWord:
    """Replace the trailing bracket block of `proof` by `replacement`.

    The block's letters and the replacement must reduce to the same word,
    and the replacement must itself be bracket-free.
    """
    if any(k == SUB for k, _ in replacement):
        raise ProofWordError("replacement proof-word must be relator-only")
    t = len(proof.items)
    while t > 0 and proof.items[t - 1][0] == SUB:
        t -= 1
    block = free_reduce(tuple(p for _, p in proof.items[t:]))
    if block != value(replacement):
        raise ProofWordError(
            f"tail block value {_fmt(block)} != replacement value {_fmt(value(replacement))}"
        )
    return ProofWord(proof.items[:t] + replacement.items)


def split(proof: ProofWord, k: int, pad: Sequence[Gen] = ()) -> tuple[ProofWord, ProofWord]:
    """Split a relator-only proof-word immediately before its k-th relator.

    The freely-trivial pad is inserted at the split point, its first half
    ending the left part and its second half starting the right part, so
    that value(left)*value(right) reduces to value(proof).  The conjugator
    run preceding relator k stays in the left part.
    """
    pad = tuple(pad)
    if free_reduce(pad):
        raise ProofWordError("pad must freely reduce to the empty word")
    if any(kind == SUB for kind, _ in proof):
        raise ProofWordError("split expects a relator-only proof-word")
    positions = [i for i, it in enumerate(proof.items) if it[0] == REL]
    if not 1 <= k <= len(positions):
        raise ProofWordError(f"relator index {k} out of range 1..{len(positions)}")
    if k == 1 and not pad:
        return ProofWord(), proof
    pos = positions[k - 1]
    half = len(pad) // 2
    left = proof.items[:pos] + tuple(conj_item(g) for g in pad[:half])
    right = tuple(conj_item(g) for g in pad[half:]) + proof.items[pos:]
    return ProofWord(left), ProofWord(right)


def to_cubes(proof: ProofWord) -> CubeProduct:
    """Distribute conjugation over a relator-only proof-word.

    Relator i preceded by conjugator runs p1..pi becomes the cube
    (base, (p1...pi)^-1).  The trailing conjugator letters must cancel the
    accumulated conjugation, otherwise the proof-word is not a bare product
    of conjugated relators.
    """
    cubes: list[tuple[Word, Word]] = []
    acc: Word = ()
    run: list[Gen] = []
    for kind, payload in proof:
        if kind == CONJ:
            run.append(payload)
        elif kind == SUB:
            raise ProofWordError("to_cubes expects a relator-only proof-word")
        else:
            acc = concat(acc, run)
            run.clear()
            base = is_cube(payload)
            if base is None:
                raise ProofWordError(f"relator instance {_fmt(payload)} is not a cube")
            cubes.append((base, invert(acc)))
    if concat(acc, run):
        raise ProofWordError("conjugator letters do not cancel; value is not a cube product")
    return CubeProduct(tuple(cubes))


def cube_product_value(cp: CubeProduct) -> Word:
    out: list[Gen] = []
    for base, conj in cp:
        for g in invert(conj) + base * 3 + conj:
            if out and out[-1] == -g:
                out.pop()
            else:
                out.append(g)
    return tuple(out)


def conjugate_cube_product(cp: CubeProduct, v: Sequence[Gen]) -> CubeProduct:
    """Conjugate the whole product by v; cube count is unchanged."""
    return CubeProduct(tuple((base, concat(conj, v)) for base, conj in cp))


def cube_product_from_proof(proof: ProofWord) -> CubeProduct:
    cp = to_cubes(proof)
    if cube_product_value(cp) != value(proof):
        raise ProofWordError("cube product does not multiply out to the proof value")
    return cp


def absorb_conjugation(proof: ProofWord) -> ProofWord:
    """Cancel matched conjugator pairs into adjacent relator instances.

    A pattern ``c (R) c^-1`` where c is the last letter of R, or c^-1 its
    first, is replaced by the correspondingly rotated instance.  Greedy
    single pass; value, relator count and residue are preserved and the
    letter count never grows.
    """
    items = list(cancel_conj(proof).items)
    i = 0
    while i < len(items):
        if items[i][0] != REL:
            i += 1
            continue
        while (
            0 < i < len(items) - 1
            and items[i - 1][0] == CONJ
            and items[i + 1][0] == CONJ
            and items[i - 1][1] == -items[i + 1][1]
        ):
            c = items[i - 1][1]
            word = items[i][1]
            if word[-1] == c:
                word = (word[-1],) + word[:-1]
            elif word[0] == -c:
                word = word[1:] + (word[0],)
            else:
                break
            items[i] = rel_item(word)
            del items[i + 1]
            del items[i - 1]
            i -= 1
        i += 1
    return cancel_conj(ProofWord(tuple(items)))
