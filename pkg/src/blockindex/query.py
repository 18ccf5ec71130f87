"""Query evaluation over the block arena.

Per-term cursors walk a chain block by block, rebuilding absolute
document numbers from stored gaps.  The first code of every non-head
block carries a block gap (distance between consecutive blocks' first
document numbers), so seek_geq can bypass a block by decoding just
that one code and the successor link, without touching the block's
interior.

Two query modes are provided: document-at-a-time conjunction
(ascending document numbers containing every term) and exhaustive
top-k disjunction under w = log(1 + f_td) * log(1 + N / f_t), with
ties broken toward smaller document numbers.  Natural logarithms;
per-document contributions are combined with math.fsum so scores do
not depend on query term order.

Cursors assume a quiescent index: open, drain, and discard them
between write operations.
"""

from __future__ import annotations

import heapq
import math
from typing import NamedTuple, Optional

from .codec import ByteSource, pair_decode
from .growth import chain_sizes
from .index import DynamicIndex

__all__ = ["PostingsCursor", "ScoredDoc", "open_cursor", "conjunction", "topk_disjunctive"]

LINK = 4


class ScoredDoc(NamedTuple):
    docnum: int
    score: float


class PostingsCursor:
    """Iterator over one term's postings.

    next() yields (d, payload) pairs: payload is the in-document
    frequency at document level, and the word position at word level.
    seek_geq(target) returns the first posting with d >= target,
    skipping whole blocks where possible.  After a seek, word-level
    payloads are not meaningful (word gaps may span skipped postings);
    word-level callers that seek must use only the document number.
    """

    __slots__ = (
        "arena",
        "fold",
        "word_level",
        "block_size",
        "ft",
        "t_ptr",
        "nx",
        "block_off",
        "block_first",
        "prev_block_first",
        "pos",
        "bound",
        "at_block_start",
        "d",
        "payload",
        "started",
        "exhausted",
        "_size_it",
    )

    def __init__(self, index: DynamicIndex, head_off: int):
        head = index.head_view(head_off)
        policy = index.config.policy
        self.arena = index.arena
        self.fold = index.config.fold
        self.word_level = index.config.word_level
        self.block_size = policy.block_size
        self.ft = head.ft
        self.t_ptr = head.t_ptr
        self.nx = head.nx
        if policy.variable:
            self._size_it = chain_sizes(policy, policy.block_size - head.postings_off)
        else:
            self._size_it = None
        self.block_first = 0
        self.prev_block_first = 0
        self.d = 0
        self.payload = 0
        self.started = False
        self.exhausted = False
        self._enter(head_off, first_byte=head.postings_off)

    def _enter(self, block_off: int, first_byte: int = LINK) -> None:
        size = self.block_size if self._size_it is None else next(self._size_it)
        base = block_off * self.block_size
        self.prev_block_first = self.block_first
        self.block_off = block_off
        self.pos = base + first_byte
        if block_off == self.t_ptr:
            self.bound = base + self.nx
        else:
            self.bound = base + size
        self.at_block_start = True

    def _advance_block(self) -> bool:
        if self.block_off == self.t_ptr:
            self.exhausted = True
            return False
        next_off = self.arena.read_u32(self.block_off * self.block_size)
        self._enter(next_off)
        return True

    def next(self) -> Optional[tuple[int, int]]:
        """Advance one posting; None once the chain is drained."""
        if self.exhausted:
            return None
        while True:
            if self.pos >= self.bound:
                if not self._advance_block():
                    return None
                continue
            src = ByteSource(self.arena.data, self.pos, self.bound)
            pair = pair_decode(src, self.fold)
            if pair is None:  # trailing padding: block consumed
                if not self._advance_block():
                    return None
                continue
            self.pos = src.pos
            base = self.prev_block_first if self.at_block_start else self.d
            if self.word_level:
                w_comp, gap = pair
                d_new = base + gap - 1
                self.payload = w_comp if d_new > self.d else self.payload + w_comp
            else:
                gap, self.payload = pair
                d_new = base + gap
            if self.at_block_start:
                self.block_first = d_new
                self.at_block_start = False
            self.d = d_new
            self.started = True
            return self.d, self.payload

    def _peek_first_doc(self, block_off: int) -> int:
        """First document number of a successor block, decoded in place."""
        base = block_off * self.block_size
        src = ByteSource(self.arena.data, base + LINK, base + self.block_size)
        pair = pair_decode(src, self.fold)
        if self.word_level:
            return self.block_first + pair[1] - 1
        return self.block_first + pair[0]

    def seek_geq(self, target: int) -> Optional[tuple[int, int]]:
        """First posting with d >= target; None if the chain ends first."""
        if self.exhausted:
            return None
        if not self.started and self.next() is None:
            return None
        if self.d >= target:
            return self.d, self.payload
        # block-skip phase: hop to the successor while its first document
        # still precedes the target (document level may also hop on
        # equality, since document numbers are unique per term there)
        while self.block_off != self.t_ptr:
            next_off = self.arena.read_u32(self.block_off * self.block_size)
            first_d = self._peek_first_doc(next_off)
            if first_d > target or (self.word_level and first_d == target):
                break
            self._enter(next_off)
            if self.next() is None:
                return None
            if self.d >= target:
                return self.d, self.payload
        while self.d < target:
            if self.next() is None:
                return None
        return self.d, self.payload


def open_cursor(index: DynamicIndex, term: str) -> Optional[PostingsCursor]:
    """Cursor over `term`'s postings, or None for an unindexed term."""
    head_off = index.term_head(term)
    if head_off is None:
        return None
    return PostingsCursor(index, head_off)


def _distinct_doc_count(index: DynamicIndex, term: str) -> int:
    """Number of distinct documents containing `term` (word-level f_t)."""
    cursor = open_cursor(index, term)
    count = 0
    item = cursor.next()
    while item is not None:
        count += 1
        item = cursor.seek_geq(item[0] + 1)
    return count


def conjunction(index: DynamicIndex, terms: list[str]) -> list[int]:
    """Ascending document numbers containing every term; the rarest
    term drives and the rest are advanced by seek_geq."""
    unique = list(dict.fromkeys(terms))
    if not unique:
        return []
    cursors = []
    for term in unique:
        cursor = open_cursor(index, term)
        if cursor is None:
            return []
        cursors.append(cursor)
    cursors.sort(key=lambda c: c.ft)
    driver, rest = cursors[0], cursors[1:]
    out: list[int] = []
    target = 1
    while True:
        hit = driver.seek_geq(target)
        if hit is None:
            return out
        d = hit[0]
        matched = True
        for cursor in rest:
            other = cursor.seek_geq(d)
            if other is None:
                return out
            if other[0] != d:
                target = other[0]
                matched = False
                break
        if matched:
            out.append(d)
            target = d + 1


def _doc_freq_stream(cursor: PostingsCursor, word_level: bool):
    """Yield (d, f_td) per document, grouping word-level occurrence runs."""
    item = cursor.next()
    if not word_level:
        while item is not None:
            yield item
            item = cursor.next()
        return
    while item is not None:
        d = item[0]
        count = 0
        while item is not None and item[0] == d:
            count += 1
            item = cursor.next()
        yield d, count


def topk_disjunctive(index: DynamicIndex, terms: list[str], k: int = 10) -> list[ScoredDoc]:
    """Exact (unpruned) document-at-a-time top-k disjunction."""
    if k < 1:
        raise ValueError("k must be >= 1")
    word_level = index.config.word_level
    n_docs = index.doc_count
    streams = []
    idfs = []
    for term in dict.fromkeys(terms):
        cursor = open_cursor(index, term)
        if cursor is None:
            continue
        f_t = _distinct_doc_count(index, term) if word_level else cursor.ft
        idfs.append(math.log(1.0 + n_docs / f_t))
        streams.append(_doc_freq_stream(cursor, word_level))
    heads = [next(s, None) for s in streams]
    heap: list[tuple[float, int]] = []  # (score, -docnum), worst kept on top
    while True:
        candidates = [h[0] for h in heads if h is not None]
        if not candidates:
            break
        d = min(candidates)
        contribs = []
        for i, head in enumerate(heads):
            if head is not None and head[0] == d:
                contribs.append(math.log(1.0 + head[1]) * idfs[i])
                heads[i] = next(streams[i], None)
        key = (math.fsum(contribs), -d)
        if len(heap) < k:
            heapq.heappush(heap, key)
        elif key > heap[0]:
            heapq.heapreplace(heap, key)
    ranked = sorted(((score, -neg) for score, neg in heap), key=lambda t: (-t[0], t[1]))
    return [ScoredDoc(docnum, score) for score, docnum in ranked]
