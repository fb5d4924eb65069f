"""Exact free-group word arithmetic.

A word is a tuple of nonzero ints: ``+k`` is the k-th generator (1-based),
``-k`` its inverse.  Text encoding follows the usual convention: lowercase
letters are generators, uppercase their inverses, so ``x`` is ``(1,)`` and
``X`` is ``(-1,)`` over the default alphabet ``xyzw``.

Words returned by the functions here are always freely reduced; inputs may
be arbitrary letter sequences unless stated otherwise.  Everything is an
immutable value, so results can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

Gen = int
Word = tuple[int, ...]

IDENTITY: Word = ()


class WordError(ValueError):
    """Malformed word text or an argument outside a function's domain."""


@dataclass(frozen=True)
class Alphabet:
    """Generator names, one lowercase letter each; uppercase spells inverses."""

    names: str = "xyzw"

    def __post_init__(self) -> None:
        if not self.names:
            raise WordError("alphabet needs at least one generator")
        if len(set(self.names)) != len(self.names):
            raise WordError(f"duplicate generator names in {self.names!r}")
        for ch in self.names:
            if not (ch.isalpha() and ch.islower() and ch.isascii()):
                raise WordError(f"generator name must be a lowercase letter: {ch!r}")

    @property
    def rank(self) -> int:
        return len(self.names)

    @staticmethod
    def of_rank(rank: int) -> "Alphabet":
        if not 1 <= rank <= 4:
            raise WordError("default names cover ranks 1..4; pass names explicitly")
        return Alphabet("xyzw"[:rank])

    def letter(self, g: Gen) -> str:
        name = self.names[abs(g) - 1]
        return name if g > 0 else name.upper()

    def gen(self, ch: str) -> Gen:
        i = self.names.find(ch.lower())
        if i < 0 or not ch.isalpha():
            raise WordError(f"unknown letter {ch!r} for alphabet {self.names!r}")
        return i + 1 if ch.islower() else -(i + 1)


DEFAULT_ALPHABET = Alphabet("xyzw")


def parse_word(text: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> Word:
    """Parse case-encoded text into a word, ignoring whitespace.

    The result is not reduced; use :func:`free_reduce` when canonical
    storage is wanted.  Rejects any non-whitespace character outside the
    alphabet.
    """
    letters = []
    for ch in text:
        if ch.isspace():
            continue
        letters.append(alphabet.gen(ch))
    return tuple(letters)


def format_word(word: Sequence[Gen], alphabet: Alphabet = DEFAULT_ALPHABET) -> str:
    return "".join(alphabet.letter(g) for g in word)


def free_reduce(letters: Iterable[Gen]) -> Word:
    """Freely reduce a letter sequence: delete adjacent inverse pairs."""
    stack: list[Gen] = []
    push = stack.append
    pop = stack.pop
    for g in letters:
        if stack and stack[-1] == -g:
            pop()
        else:
            push(g)
    return tuple(stack)


def is_reduced(word: Sequence[Gen]) -> bool:
    return all(word[i] != -word[i + 1] for i in range(len(word) - 1))


def invert(word: Sequence[Gen]) -> Word:
    return tuple(-g for g in reversed(word))


def concat(*words: Sequence[Gen]) -> Word:
    """Freely reduced product of the given words, left to right."""
    out: list[Gen] = []
    for w in words:
        for g in w:
            if out and out[-1] == -g:
                out.pop()
            else:
                out.append(g)
    return tuple(out)


def conjugate(u: Sequence[Gen], v: Sequence[Gen]) -> Word:
    """u conjugated by v, i.e. the reduction of v^-1 u v."""
    return concat(invert(v), u, v)


def power(u: Sequence[Gen], n: int) -> Word:
    if n < 0:
        return power(invert(u), -n)
    return free_reduce(tuple(u) * n)


def commutator(a: Sequence[Gen], b: Sequence[Gen]) -> Word:
    return concat(invert(a), invert(b), a, b)


def commutator_of_commutators(alphabet: Alphabet = DEFAULT_ALPHABET) -> Word:
    """[[x1,x2],[x3,x4]] over the first four generators."""
    if alphabet.rank < 4:
        raise WordError("need rank >= 4")
    return commutator(commutator((1,), (2,)), commutator((3,), (4,)))


def is_cyclically_reduced(word: Sequence[Gen]) -> bool:
    if not is_reduced(word):
        return False
    return len(word) < 2 or word[0] != -word[-1]


def cyclic_reduce(word: Sequence[Gen]) -> tuple[Word, Word]:
    """Split a freely reduced word as (core, conjugator) with
    word = conjugator^-1 * core * conjugator and core cyclically reduced."""
    if not is_reduced(word):
        raise WordError("cyclic_reduce expects a freely reduced word")
    w = list(word)
    tail: list[Gen] = []
    while len(w) >= 2 and w[0] == -w[-1]:
        tail.append(w.pop())
        w.pop(0)
    return tuple(w), tuple(reversed(tail))


def rotate(word: Sequence[Gen], k: int) -> Word:
    if not word:
        return ()
    k %= len(word)
    return tuple(word[k:]) + tuple(word[:k])


def _letter_key(g: Gen) -> int:
    # generator-index order, positive before negative: x < X < y < Y < ...
    return 2 * abs(g) - (1 if g > 0 else 0)


def word_key(word: Sequence[Gen]) -> tuple[int, ...]:
    """Total order key: by length, then letterwise (x < X < y < Y < ...)."""
    return (len(word),) + tuple(_letter_key(g) for g in word)


def canonical_rep(word: Sequence[Gen]) -> Word:
    """Minimum over all rotations of the word and of its inverse.

    Two cyclically reduced words get the same representative exactly when
    one is a rotation of the other or of its inverse.
    """
    if not is_cyclically_reduced(word):
        raise WordError("canonical_rep expects a cyclically reduced word")
    w = tuple(word)
    if not w:
        return w
    candidates = [rotate(w, k) for k in range(len(w))]
    wi = invert(w)
    candidates += [rotate(wi, k) for k in range(len(wi))]
    return min(candidates, key=word_key)


def _reduced_words(rank: int, length: int) -> Iterator[Word]:
    """All freely reduced words of the given length, in letter-key order."""
    letters = sorted((g for i in range(1, rank + 1) for g in (i, -i)), key=_letter_key)

    def grow(prefix: list[Gen], todo: int) -> Iterator[Word]:
        if todo == 0:
            yield tuple(prefix)
            return
        last = prefix[-1] if prefix else 0
        for g in letters:
            if g != -last:
                prefix.append(g)
                yield from grow(prefix, todo - 1)
                prefix.pop()

    yield from grow([], length)


@lru_cache(maxsize=None)
def _base_words_of_length(rank: int, length: int) -> tuple[Word, ...]:
    out = []
    for w in _reduced_words(rank, length):
        if w[0] == -w[-1] and len(w) >= 2:
            continue
        # keep only the canonical member of each rotation/inversion orbit;
        # cheap necessary condition first: first letter minimal in the orbit
        k0 = _letter_key(w[0])
        if any(min(_letter_key(g), _letter_key(-g)) < k0 for g in w):
            continue
        if canonical_rep(w) == w:
            out.append(w)
    return tuple(out)


def base_words(alphabet: Alphabet, min_len: int, max_len: int) -> list[Word]:
    """One canonical representative per orbit of freely and cyclically
    reduced words under rotation and inversion, for each length in range.

    Sorted by length then letter order; deterministic.
    """
    if not 1 <= min_len <= max_len:
        raise WordError("need 1 <= min_len <= max_len")
    out: list[Word] = []
    for length in range(min_len, max_len + 1):
        out.extend(_base_words_of_length(alphabet.rank, length))
    return out


def generator_support(word: Sequence[Gen]) -> frozenset[int]:
    """Set of generator indices (1-based) occurring in the word."""
    return frozenset(abs(g) for g in word)
