"""Turn a closed enumeration's ledger into proof-words.

Every filled table entry (a, g) = b has a proof-word whose value is the
free reduction of rep(a) * g * rep(b)^-1, built recursively from the
ledger event that created the entry:

* definition: the empty proof-word;
* deduction from a scan closing at letter j: the inverted edge proofs of
  letters 1..j-1, then the scanned instance conjugated by the base coset's
  representative, then the inverted edge proofs of letters j+1..k;
* entry transferred during a merge: the inverted merge proof followed by
  the dead row's edge proof;
* a merge of q into p carries a proof that rep(q) and rep(p) agree,
  assembled from the event that discovered the coincidence.

Proofs are assembled over a compact integer alphabet (negation = inverse,
relator instances interned) and adjacent mutually-inverse items cancel at
every concatenation, so shared sub-proofs telescope away instead of being
copied.  Expansion can still be genuinely exponential on unlucky ledgers;
a cumulative item budget turns that into a clean ProofTooLarge failure.

Everything is verified downstream by free reduction alone; the enumerator
is never trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .proofwords import (
    CONJ,
    REL,
    SUB,
    CubeProduct,
    Item,
    ProofWord,
    absorb_conjugation,
    cube_product_value,
    to_cubes,
    value,
)
from .presentations import Presentation, TRIVIAL_SUBGROUP
from .todd_coxeter import CosetTable, Ledger, col_of, enumerate_cosets
from .words import Gen, Word, free_reduce, invert

DEFAULT_MAX_ITEMS = 10_000_000

_SUB_BASE = 64
_REL_BASE = 128

Code = int
Codes = tuple  # tuple[Code, ...]


class ExtractionError(ValueError):
    pass


class LedgerCorruption(RuntimeError):
    """A proof dependency cycle; cannot happen for ledgers produced here."""


class ProofTooLarge(RuntimeError):
    """Expanded proof exceeded the configured item budget."""


@dataclass(frozen=True)
class EdgeProof:
    proof: ProofWord
    value_check: Word


def _inv_codes(codes: Codes) -> Codes:
    return tuple(-c for c in reversed(codes))


def _cat(*parts: Codes) -> Codes:
    """Concatenate code sequences, cancelling adjacent inverse pairs at the
    seams.  Parts are already cancellation-free, so the result is too."""
    out: list[Code] = []
    for part in parts:
        j = 0
        n = len(part)
        while out and j < n and out[-1] == -part[j]:
            out.pop()
            j += 1
        out.extend(part[j:])
    return tuple(out)


class Extractor:
    """Memoising proof assembler over one completed (table, ledger) pair.

    Not safe for concurrent use; create one per task.  The item budget caps
    how much new expansion any single public call may perform; memoised
    nodes from earlier calls are free.
    """

    def __init__(self, table: CosetTable, ledger: Ledger, max_items: int = DEFAULT_MAX_ITEMS):
        self.table = table
        self.ledger = ledger
        self.max_items = max_items
        self._memo: dict[tuple, Codes] = {}
        self._spent = 0
        self._call_base = 0
        self._rel_code: dict[Word, int] = {}
        self._rel_words: list[Word] = []

    # -- item codes ----------------------------------------------------------

    def _rel(self, word: Word) -> Code:
        code = self._rel_code.get(word)
        if code is not None:
            return code
        inv = invert(word)
        code = self._rel_code.get(inv)
        if code is not None:
            return -code
        self._rel_words.append(word)
        code = _REL_BASE + len(self._rel_words) - 1
        self._rel_code[word] = code
        return code

    def _decode(self, codes: Codes) -> tuple[Item, ...]:
        items: list[Item] = []
        for c in codes:
            a = abs(c)
            if a >= _REL_BASE:
                w = self._rel_words[a - _REL_BASE]
                items.append((REL, w if c > 0 else invert(w)))
            elif a >= _SUB_BASE:
                g = a - _SUB_BASE
                items.append((SUB, g if c > 0 else -g))
            else:
                items.append((CONJ, c))
        return tuple(items)

    # -- node graph ------------------------------------------------------------
    # ("edge", a, col): value rep(a) g rep(raw(a,col))^-1
    # ("ev", i):        forward value of ledger event i

    def _edge_event(self, a: int, col: int) -> tuple[int, bool]:
        try:
            return self.ledger.edge[(a, col)]
        except KeyError:
            raise ExtractionError(f"entry ({a}, {col}) has no justification") from None

    def _chain_events(self, x: int, targets: set[int]) -> list[int]:
        evs = []
        merges = self.ledger.merges
        while x not in targets:
            try:
                x, ev = merges[x][0], merges[x][1]
            except KeyError:
                raise LedgerCorruption(f"merge chain from {x} misses {targets}") from None
            evs.append(ev)
        return evs

    def _raw(self, a: int, col: int) -> int:
        return self.table.tab[a * self.table.ncols + col]

    def _deps(self, node: tuple) -> list[tuple]:
        if node[0] == "edge":
            return [("ev", self._edge_event(node[1], node[2])[0])]
        event = self.ledger.events[node[1]]
        kind = event[0]
        if kind == "def":
            return []
        if kind == "ded":
            _, _, _, path, word, j = event
            deps: list[tuple] = []
            for t in range(1, len(word) + 1):
                if t != j:
                    deps += self._step_deps(path[t - 1], word[t - 1], path[t])
            return deps
        if kind == "scan_coin":
            _, _, _, fwd, bwd, word, f = event
            deps = []
            for t in range(1, f + 1):
                deps += self._step_deps(fwd[t - 1], word[t - 1], fwd[t])
            for t in range(f + 1, len(word) + 1):
                deps += self._step_deps(bwd[t - f - 1], word[t - 1], bwd[t - f])
            return deps
        if kind == "pair_coin":
            _, dead, surv, col, merge_ev = event
            return [("edge", dead, col), ("edge", surv, col), ("ev", merge_ev)]
        if kind == "merge":
            _, dead, surv, a_raw, b_raw, reason_ev = event
            deps = [("ev", e) for e in self._chain_events(a_raw, {dead, surv})]
            deps += [("ev", e) for e in self._chain_events(b_raw, {dead, surv})]
            deps.append(("ev", reason_ev))
            return deps
        if kind == "transfer":
            _, merge_ev, dead, col = event
            return [("ev", merge_ev), ("edge", dead, col)]
        raise LedgerCorruption(f"unknown event kind {kind!r}")

    def _step_deps(self, u: int, letter: Gen, v: int) -> list[tuple]:
        col = col_of(letter)
        deps: list[tuple] = [("edge", u, col)]
        deps += [("ev", e) for e in self._chain_events(self._raw(u, col), {v})]
        return deps

    def _step_codes(self, u: int, letter: Gen, v: int) -> Codes:
        col = col_of(letter)
        codes = self._built(("edge", u, col))
        for e in self._chain_events(self._raw(u, col), {v}):
            codes = _cat(codes, self._built(("ev", e)))
        return codes

    def _chain_codes(self, x: int, targets: set[int]) -> tuple[Codes, int]:
        codes: Codes = ()
        merges = self.ledger.merges
        while x not in targets:
            codes = _cat(codes, self._built(("ev", merges[x][1])))
            x = merges[x][0]
        return codes, x

    def _build(self, node: tuple) -> Codes:
        if node[0] == "edge":
            ev, forward = self._edge_event(node[1], node[2])
            codes = self._built(("ev", ev))
            return codes if forward else _inv_codes(codes)
        event = self.ledger.events[node[1]]
        kind = event[0]
        if kind == "def":
            return ()
        if kind == "ded":
            _, scan_kind, _, path, word, j = event
            return self._scan_codes(scan_kind, path, path, word, j - 1, deduced=j)
        if kind == "scan_coin":
            _, scan_kind, _, fwd, bwd, word, f = event
            return self._scan_codes(scan_kind, fwd, bwd, word, f, deduced=None)
        if kind == "pair_coin":
            _, dead, surv, col, merge_ev = event
            return _cat(
                _inv_codes(self._built(("edge", dead, col))),
                self._built(("ev", merge_ev)),
                self._built(("edge", surv, col)),
            )
        if kind == "merge":
            _, dead, surv, a_raw, b_raw, reason_ev = event
            chain_a, end_a = self._chain_codes(a_raw, {dead, surv})
            chain_b, end_b = self._chain_codes(b_raw, {dead, surv})
            reason = self._built(("ev", reason_ev))
            if end_a == dead:
                if end_b != surv:
                    raise LedgerCorruption("merge chains do not separate")
                return _cat(_inv_codes(chain_a), reason, chain_b)
            return _cat(_inv_codes(chain_b), _inv_codes(reason), chain_a)
        if kind == "transfer":
            _, merge_ev, dead, col = event
            return _cat(
                _inv_codes(self._built(("ev", merge_ev))),
                self._built(("edge", dead, col)),
            )
        raise LedgerCorruption(f"unknown event kind {kind!r}")

    def _scan_codes(self, scan_kind, fwd, bwd, word, f, deduced) -> Codes:
        """Proof shape shared by deductions and scan coincidences: inverted
        step proofs for letters 1..f, the scanned instance conjugated by the
        base coset's representative, then inverted step proofs for the tail.

        For a deduction, fwd and bwd are the same full path and `deduced` is
        the skipped letter position; for a complete scan `deduced` is None
        and bwd holds the nodes from position f onwards.
        """
        before: Codes = ()
        for t in range(1, f + 1):
            before = _cat(before, self._step_codes(fwd[t - 1], word[t - 1], fwd[t]))
        first = f + 1 if deduced is None else deduced + 1
        off = f if deduced is None else 0
        after: Codes = ()
        for t in range(first, len(word) + 1):
            after = _cat(after, self._step_codes(bwd[t - 1 - off], word[t - 1], bwd[t - off]))
        base_rep = self.table.rep_word(fwd[0])
        if scan_kind == "rel":
            mid: Codes = (self._rel(word),)
        else:
            g = word[0]
            mid = ((_SUB_BASE + g) if g > 0 else -(_SUB_BASE - g),)
        wrap = _cat(tuple(base_rep), mid, tuple(-g for g in reversed(base_rep)))
        return _cat(_inv_codes(before), wrap, _inv_codes(after))

    def _built(self, node: tuple) -> Codes:
        codes = self._memo.get(node)
        if codes is None:
            raise LedgerCorruption(f"dependency {node} not built")
        return codes

    def _get(self, node: tuple) -> Codes:
        memo = self._memo
        if node in memo:
            return memo[node]
        stack = [node]
        expanded: set[tuple] = set()
        while stack:
            cur = stack[-1]
            if cur in memo:
                stack.pop()
                continue
            missing = [d for d in self._deps(cur) if d not in memo]
            if not missing:
                built = self._build(cur)
                self._spent += len(built)
                if self._spent - self._call_base > self.max_items:
                    raise ProofTooLarge(
                        f"proof expansion exceeded {self.max_items} items; "
                        "raise max_items to continue"
                    )
                memo[cur] = built
                stack.pop()
                continue
            if cur in expanded:
                # revisited before its pushed dependencies completed
                raise LedgerCorruption(f"proof dependency cycle at {cur}")
            expanded.add(cur)
            stack.extend(missing)
        return memo[node]

    # -- public surface --------------------------------------------------------

    def edge_proof(self, a: int, g: Gen) -> EdgeProof:
        """Proof for the resolved entry (a, g); `a` must be live and filled."""
        self._call_base = self._spent
        col = col_of(g)
        raw = self._raw(a, col)
        if not raw:
            raise ExtractionError(f"entry ({a}, {g}) is not filled")
        b = self.table.find(raw)
        codes = self._get(("edge", a, col))
        for e in self._chain_events(raw, {b}):
            codes = _cat(codes, self._get(("ev", e)))
        check = free_reduce(self.table.rep_word(a) + (g,) + invert(self.table.rep_word(b)))
        return EdgeProof(ProofWord(self._decode(codes)), check)

    def extract(self, target: Sequence[Gen], postprocess: bool = True) -> ProofWord:
        """Proof-word whose value is `target`; requires trace(1, target) = 1."""
        self._call_base = self._spent
        target = free_reduce(target)
        table = self.table
        codes: Codes = ()
        u = 1
        for g in target:
            col = col_of(g)
            raw = self._raw(u, col)
            if not raw:
                raise ExtractionError("target does not trace through the table")
            v = table.find(raw)
            step = self._get(("edge", u, col))
            for e in self._chain_events(raw, {v}):
                step = _cat(step, self._get(("ev", e)))
            codes = _cat(codes, step)
            u = v
        if u != 1:
            raise ExtractionError("target does not trace back to coset 1")
        proof = ProofWord(self._decode(codes))
        if postprocess:
            proof = absorb_conjugation(proof)
        got = value(proof)
        if got != target:
            raise LedgerCorruption("extracted proof does not reduce to the target")
        return proof


def edge_proof(
    table: CosetTable, ledger: Ledger, a: int, g: Gen, max_items: int = DEFAULT_MAX_ITEMS
) -> EdgeProof:
    return Extractor(table, ledger, max_items).edge_proof(a, g)


def extract(
    table: CosetTable,
    ledger: Ledger,
    target: Sequence[Gen],
    max_items: int = DEFAULT_MAX_ITEMS,
) -> ProofWord:
    return Extractor(table, ledger, max_items).extract(target)


def rewrite_as_cubes(
    word: Sequence[Gen],
    pres: Presentation,
    strategy: str = "hlt",
    max_cosets: int = 1_000_000,
    max_items: int = DEFAULT_MAX_ITEMS,
    extractor: Optional[Extractor] = None,
) -> CubeProduct:
    """Express a word that is trivial in the presented group as an explicit
    product of conjugated cubes, by enumerating over the trivial subgroup,
    extracting a proof, and distributing the conjugation.

    Pass a prepared `extractor` (from a closed trivial-subgroup enumeration
    of the same presentation) to amortise the enumeration over many words.
    """
    if extractor is None:
        table, result, ledger = enumerate_cosets(pres, TRIVIAL_SUBGROUP, strategy, max_cosets)
        if not result.closed:
            raise ExtractionError(
                f"enumeration did not close within {max_cosets} cosets; "
                "cannot certify the word is trivial"
            )
        extractor = Extractor(table, ledger, max_items)
    w = free_reduce(word)
    if extractor.table.trace(1, w) != 1:
        raise ExtractionError("word does not trace to coset 1: not trivial in this group")
    proof = extractor.extract(w)
    cp = to_cubes(proof)
    if cube_product_value(cp) != w:
        raise LedgerCorruption("cube product does not multiply out to the word")
    return cp
