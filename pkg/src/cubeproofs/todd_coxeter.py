"""Todd-Coxeter coset enumeration (HLT, Felsch, hybrid) that remembers why
every table entry exists, so proofs can be extracted afterwards.

Cosets are numbered from 1; entry 0 means empty.  Signed generator ``g``
maps to column ``2(|g|-1)`` when positive, ``2(|g|-1)+1`` when negative, so
a column's inverse is ``col ^ 1``.

Rows are never rewritten or cleared.  When two cosets turn out to be equal
the higher-numbered one dies: its row is folded into the survivor's (vacant
slots copied, conflicts queued as further coincidences) and from then on
reads resolve coset ids through a union-find.  Dead rows keep their entries
and their justifications forever; the ledger records each merge with enough
provenance to rebuild a proof that the two representative words are equal.

Ledger events (tuples, index = timestamp):

``("def", a, g, b)``
    coset b defined as a.g; fills both directions.
``("ded", kind, idx, path, word, j)``
    scan of ``word`` (relator cube or subgroup generator) based at
    ``path[0]`` closed except for letter j; fills that edge.  ``path`` holds
    the cosets visited, live at event time.
``("scan_coin", kind, idx, fwd, bwd, word, f)``
    complete scan with mismatch: forward covered letters 1..f ending at
    ``fwd[-1]``, backward covered f+1..len(word) ending at ``bwd[0]``; those
    two cosets coincide.
``("pair_coin", dead, surv, col, merge_ev)``
    while folding ``dead`` into ``surv``, both rows had column ``col``
    filled; the two raw targets coincide.
``("merge", dead, surv, a_raw, b_raw, reason_ev)``
    the merge itself; ``reason_ev`` proves rep(a_raw) ~ rep(b_raw).
``("transfer", merge_ev, dead, col)``
    fill of (surv, col) copied from the dead row during that merge.
"""

from __future__ import annotations

from array import array
from collections import deque
from dataclasses import dataclass
from typing import IO, Iterable, Optional, Sequence

from .presentations import Presentation, SubgroupSpec, TRIVIAL_SUBGROUP
from .words import Gen, Word, free_reduce

Event = tuple

HLT = "hlt"
FELSCH = "felsch"
HYBRID = "hybrid"
STRATEGIES = (HLT, FELSCH, HYBRID)


class EnumerationError(ValueError):
    pass


class _Limit(Exception):
    """Internal: coset limit reached."""


def col_of(g: Gen) -> int:
    return 2 * (g - 1) if g > 0 else 2 * (-g - 1) + 1


def gen_of(col: int) -> Gen:
    return col // 2 + 1 if col % 2 == 0 else -(col // 2 + 1)


@dataclass
class EnumResult:
    index: int
    total_defined: int
    closed: bool

    @property
    def ratio(self) -> float:
        return self.total_defined / self.index if self.index else float("inf")


class Ledger:
    """Ordered event log plus per-entry justifications."""

    def __init__(self) -> None:
        self.events: list[Event] = []
        # (coset, col) -> (event index, True if this is the event's forward direction)
        self.edge: dict[tuple[int, int], tuple[int, bool]] = {}
        # dead coset -> (survivor, merge event index)
        self.merges: dict[int, tuple[int, int]] = {}

    def add(self, event: Event) -> int:
        self.events.append(event)
        return len(self.events) - 1


class CosetTable:
    def __init__(self, pres: Presentation, sub: SubgroupSpec):
        self.pres = pres
        self.sub = sub
        self.ncols = 2 * pres.alphabet.rank
        self.tab = array("i", [0] * (2 * self.ncols))  # rows 0 (unused) and 1
        self.alive = bytearray([0, 1])
        self.parent = [0, 1]
        self.def_link: list[tuple[int, Gen]] = [(0, 0), (0, 0)]
        self.nalive = 1
        self.total_defined = 1
        self._rep_cache: dict[int, Word] = {1: ()}

    # -- basic queries ----------------------------------------------------

    def find(self, c: int) -> int:
        parent = self.parent
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def entry(self, c: int, g: Gen) -> Optional[int]:
        """Resolved table entry for live coset c under signed generator g."""
        t = self.tab[c * self.ncols + col_of(g)]
        return self.find(t) if t else None

    def trace(self, start: int, word: Iterable[Gen]) -> Optional[int]:
        c = self.find(start)
        for g in word:
            t = self.tab[c * self.ncols + col_of(g)]
            if not t:
                return None
            c = self.find(t)
        return c

    def live_cosets(self) -> list[int]:
        return [c for c in range(1, self.total_defined + 1) if self.alive[c]]

    def rep_word(self, c: int) -> Word:
        """Defining word of coset c, frozen at creation; rep(1) is empty."""
        chain = []
        node = c
        cache = self._rep_cache
        while node not in cache:
            chain.append(node)
            node = self.def_link[node][0]
        word = cache[node]
        for node in reversed(chain):
            word = word + (self.def_link[node][1],)
            cache[node] = word
        return cache[c]

    def is_complete(self) -> bool:
        nc = self.ncols
        tab = self.tab
        return all(
            tab[c * nc + col]
            for c in range(1, self.total_defined + 1)
            if self.alive[c]
            for col in range(nc)
        )

    def dump(self, out: IO[str]) -> None:
        """One live row per line, entries space-separated, 0 = empty.

        Live cosets are renumbered 1..index in increasing id order so dumps
        from different runs/implementations can be diffed.
        """
        live = self.live_cosets()
        renum = {c: i + 1 for i, c in enumerate(live)}
        nc = self.ncols
        for c in live:
            row = []
            for col in range(nc):
                t = self.tab[c * nc + col]
                row.append(str(renum[self.find(t)]) if t else "0")
            out.write(" ".join(row) + "\n")

    def check_invariants(self, expect_closed: bool = False) -> None:
        """Debug helper: table symmetry and liveness bookkeeping."""
        nc = self.ncols
        assert self.nalive == len(self.live_cosets())
        for c in self.live_cosets():
            for col in range(nc):
                t = self.tab[c * nc + col]
                if not t:
                    assert not expect_closed, f"empty entry ({c},{col}) in closed table"
                    continue
                b = self.find(t)
                back = self.tab[b * nc + (col ^ 1)]
                assert back and self.find(back) == c, f"symmetry broken at ({c},{col})"


class _Enumerator:
    def __init__(
        self,
        pres: Presentation,
        sub: SubgroupSpec,
        max_cosets: int,
        debug_checks: bool = False,
    ):
        self.table = CosetTable(pres, sub)
        self.ledger = Ledger()
        self.max_cosets = max_cosets
        self.debug_checks = debug_checks
        self.relator_words = [base * 3 for base in pres.relator_bases]
        self.relator_cols = [tuple(col_of(g) for g in w) for w in self.relator_words]
        self.sub_words = [w for w in sub.generators]
        self.sub_cols = [tuple(col_of(g) for g in w) for w in self.sub_words]
        self.dedstack: list[tuple[int, int]] = []
        self._cforms: Optional[list[list[tuple[int, Word, tuple[int, ...]]]]] = None

    # -- primitive operations ---------------------------------------------

    def _grow(self) -> int:
        t = self.table
        if t.total_defined >= self.max_cosets:
            raise _Limit
        t.total_defined += 1
        c = t.total_defined
        t.tab.extend([0] * t.ncols)
        t.alive.append(1)
        t.parent.append(c)
        t.nalive += 1
        return c

    def _define(self, a: int, col: int) -> int:
        b = self._grow()
        g = gen_of(col)
        self.table.def_link.append((a, g))
        ev = self.ledger.add(("def", a, g, b))
        self._set(a, col, b, ev, push=True)
        self._maybe_check()
        return b

    def _set(self, a: int, col: int, b: int, ev: int, push: bool) -> None:
        tab = self.table.tab
        nc = self.table.ncols
        tab[a * nc + col] = b
        self.ledger.edge[(a, col)] = (ev, True)
        if tab[b * nc + (col ^ 1)] == 0:
            tab[b * nc + (col ^ 1)] = a
            self.ledger.edge[(b, col ^ 1)] = (ev, False)
        if push:
            self.dedstack.append((a, col))
            self.dedstack.append((b, col ^ 1))

    def _maybe_check(self) -> None:
        if self.debug_checks:
            self.table.check_invariants()

    # -- scanning -----------------------------------------------------------

    def _scan(
        self,
        start: int,
        word: Word,
        cols: tuple[int, ...],
        kind: str,
        idx: int,
        fill: bool,
    ) -> None:
        """Scan `word` based at live coset `start`; deduce, coincide, or
        (when `fill`) define new cosets until the scan closes."""
        table = self.table
        tab = table.tab
        nc = table.ncols
        find = table.find
        k = len(word)
        if k == 0:
            return
        fwd = [start]
        c = start
        i = 0
        while True:
            while i < k:
                t = tab[c * nc + cols[i]]
                if not t:
                    break
                c = find(t)
                fwd.append(c)
                i += 1
            if i == k:
                if c != start:
                    ev = self.ledger.add(
                        ("scan_coin", kind, idx, tuple(fwd), (start,), word, k)
                    )
                    self._coincide(c, start, ev)
                return
            m = k
            d = start
            bwd = [start]
            while m > i:
                t = tab[d * nc + (cols[m - 1] ^ 1)]
                if not t:
                    break
                d = find(t)
                bwd.append(d)
                m -= 1
            if m == i:
                # scan complete; forward and backward met between letters i, i+1
                if c != d:
                    bwd.reverse()
                    ev = self.ledger.add(
                        ("scan_coin", kind, idx, tuple(fwd), tuple(bwd), word, i)
                    )
                    self._coincide(c, d, ev)
                return
            if m == i + 1:
                # single gap: deduction (both facing slots are empty)
                bwd.reverse()
                path = tuple(fwd) + tuple(bwd)
                ev = self.ledger.add(("ded", kind, idx, path, word, i + 1))
                self._set(c, cols[i], d, ev, push=True)
                self._maybe_check()
                return
            if not fill:
                return
            b = self._define(c, cols[i])
            c = b
            fwd.append(b)
            i += 1

    # -- coincidence handling ------------------------------------------------

    def _coincide(self, a: int, b: int, reason_ev: int) -> None:
        table = self.table
        tab = table.tab
        nc = table.ncols
        queue: deque[tuple[int, int, int]] = deque([(a, b, reason_ev)])
        while queue:
            a_raw, b_raw, rev = queue.popleft()
            ra = table.find(a_raw)
            rb = table.find(b_raw)
            if ra == rb:
                continue
            surv, dead = (ra, rb) if ra < rb else (rb, ra)
            ev = self.ledger.add(("merge", dead, surv, a_raw, b_raw, rev))
            self.ledger.merges[dead] = (surv, ev)
            table.parent[dead] = surv
            table.alive[dead] = 0
            table.nalive -= 1
            base_d = dead * nc
            base_s = surv * nc
            for col in range(nc):
                r_raw = tab[base_d + col]
                if not r_raw:
                    continue
                if tab[base_s + col] == 0:
                    tab[base_s + col] = r_raw
                    tev = self.ledger.add(("transfer", ev, dead, col))
                    self.ledger.edge[(surv, col)] = (tev, True)
                    self.dedstack.append((surv, col))
                else:
                    pev = self.ledger.add(("pair_coin", dead, surv, col, ev))
                    queue.append((r_raw, tab[base_s + col], pev))
        self._maybe_check()

    # -- strategies ------------------------------------------------------------

    def _scan_subgroup(self) -> None:
        for idx, (w, cols) in enumerate(zip(self.sub_words, self.sub_cols)):
            self._scan(1, w, cols, "sub", idx, fill=True)

    def run_hlt(self, process_deductions: bool = False) -> None:
        table = self.table
        if process_deductions:
            self._build_cforms()
        self._scan_subgroup()
        if process_deductions:
            self._drain_deductions()
        else:
            self.dedstack.clear()
        alpha = 1
        while alpha <= table.total_defined:
            if table.alive[alpha]:
                for ridx, (w, cols) in enumerate(zip(self.relator_words, self.relator_cols)):
                    self._scan(alpha, w, cols, "rel", ridx, fill=True)
                    if process_deductions:
                        self._drain_deductions()
                    else:
                        self.dedstack.clear()
                    if not table.alive[alpha]:
                        break
                if table.alive[alpha]:
                    nc = table.ncols
                    for col in range(nc):
                        if table.tab[alpha * nc + col] == 0:
                            self._define(alpha, col)
                    if not process_deductions:
                        self.dedstack.clear()
            alpha += 1

    def _build_cforms(self) -> None:
        by_col: list[dict[tuple, tuple[int, Word, tuple[int, ...]]]] = [
            {} for _ in range(self.table.ncols)
        ]
        for ridx, w in enumerate(self.relator_words):
            variants = []
            for word in (w, tuple(-g for g in reversed(w))):
                variants += [word[j:] + word[:j] for j in range(len(word))]
            for v in variants:
                key = v
                if key not in by_col[col_of(v[0])]:
                    by_col[col_of(v[0])][key] = (ridx, v, tuple(col_of(g) for g in v))
        self._cforms = [list(d.values()) for d in by_col]

    def _drain_deductions(self) -> None:
        assert self._cforms is not None
        table = self.table
        while self.dedstack:
            a, col = self.dedstack.pop()
            if not table.alive[a]:
                continue
            for ridx, word, cols in self._cforms[col]:
                if not table.alive[a]:
                    break
                self._scan(a, word, cols, "rel", ridx, fill=False)

    def run_felsch(self) -> None:
        table = self.table
        nc = table.ncols
        self._build_cforms()
        self._scan_subgroup()
        self._drain_deductions()
        alpha = 1
        while alpha <= table.total_defined:
            if not table.alive[alpha]:
                alpha += 1
                continue
            col = next((x for x in range(nc) if table.tab[alpha * nc + x] == 0), None)
            if col is None:
                alpha += 1
                continue
            self._define(alpha, col)
            self._drain_deductions()
            # the row may have filled or died; re-examine it either way

    def run(self, strategy: str) -> None:
        if strategy == HLT:
            self.run_hlt()
        elif strategy == HYBRID:
            self.run_hlt(process_deductions=True)
        elif strategy == FELSCH:
            self.run_felsch()
        else:
            raise EnumerationError(f"unknown strategy {strategy!r}; use one of {STRATEGIES}")


def enumerate_cosets(
    pres: Presentation,
    sub: SubgroupSpec = TRIVIAL_SUBGROUP,
    strategy: str = HLT,
    max_cosets: int = 1_000_000,
    debug_checks: bool = False,
) -> tuple[CosetTable, EnumResult, Ledger]:
    """Enumerate cosets of the subgroup; returns partial state with
    ``closed=False`` when the coset limit is hit."""
    if max_cosets < 1:
        raise EnumerationError("max_cosets must be >= 1")
    for w in sub.generators:
        if abs(w[0]) > pres.alphabet.rank:
            raise EnumerationError("subgroup generator outside the alphabet")
    enum = _Enumerator(pres, sub, max_cosets, debug_checks)
    closed = True
    try:
        enum.run(strategy)
    except _Limit:
        closed = False
    table = enum.table
    if closed:
        closed = table.is_complete()
    result = EnumResult(index=table.nalive, total_defined=table.total_defined, closed=closed)
    return table, result, enum.ledger


def certify_exponent3(table: CosetTable) -> bool:
    """True iff the cube of every live coset's representative word traces
    from coset 1 back to coset 1 (the defines-the-target-group certificate)."""
    for c in table.live_cosets():
        rep = table.rep_word(c)
        if table.trace(1, rep * 3) != 1:
            return False
    return True


def scan_closed(table: CosetTable, start: int, word: Word) -> bool:
    return table.trace(start, word) == start


def verify_closed_table(table: CosetTable) -> None:
    """Assert every relator cube scans closed at every live coset and every
    subgroup generator traces 1 -> 1.  For tests and debugging."""
    for c in table.live_cosets():
        for base in table.pres.relator_bases:
            assert scan_closed(table, c, base * 3), (c, base)
    for w in table.sub.generators:
        assert table.trace(1, w) == 1, w
    table.check_invariants(expect_closed=True)
