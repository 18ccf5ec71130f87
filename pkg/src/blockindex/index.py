"""Document ingestion into the block arena.

Every term owns a chain of blocks (see blocks.py).  Appending a
posting test-encodes it first; if the code does not fit in what
remains of the chain's tail block, the tail is closed with 0x00
padding, a fresh tail is allocated at a size chosen by the growth
policy, and the posting's gap component is recomputed as a block gap
(distance from the previous block's first document number) so that
readers can skip whole blocks without decoding their interiors.

Document-level postings store (d-gap, frequency).  Word-level
postings store one entry per occurrence with the arguments swapped,
(word component, d-gap + 1): word gaps are usually the larger of the
two components there, so the swap keeps the packed single-byte case
common.  The word component is the in-document word position for a
document's first occurrence, and the distance since the previous
occurrence otherwise.

A document is queryable as soon as add_document returns.
"""

from __future__ import annotations

import struct
import sys
from array import array
from dataclasses import dataclass, field
from itertools import islice

from .blocks import (
    LINK_BYTES,
    MAX_TERM_BYTES,
    BlockArena,
    HeadLayout,
    HeadView,
    TailView,
)
from .codec import ByteSink, ByteSource, code_len, pair_decode, pair_encode
from .growth import GrowthPolicy, chain_sizes, chain_state, next_block_size
from .text import MAX_TOKEN_LEN
from .vocab import HashDirectory

__all__ = ["IndexConfig", "DynamicIndex", "DEFAULT_FOLD_DOC", "DEFAULT_FOLD_WORD"]

DEFAULT_FOLD_DOC = 4
DEFAULT_FOLD_WORD = 3

_MAGIC = b"BIX1"
_VERSION = 1
_HEADER = struct.Struct("<4sHBBIBBdIQ")
_KINDS = ("const", "expon", "triangle")


@dataclass(frozen=True)
class IndexConfig:
    policy: GrowthPolicy = field(default_factory=lambda: GrowthPolicy("const", 64))
    word_level: bool = False
    fold: int = 0  # 0 selects the mode default

    def __post_init__(self):
        if self.policy.link_bytes != LINK_BYTES:
            raise ValueError("block views assume 4-byte link fields")
        if self.fold == 0:
            object.__setattr__(
                self, "fold", DEFAULT_FOLD_WORD if self.word_level else DEFAULT_FOLD_DOC
            )
        if self.fold < 1:
            raise ValueError("fold threshold must be >= 1")
        layout = HeadLayout.for_config(self.word_level, self.policy.variable)
        # the head must hold its record plus at least one code byte for
        # the longest normalized token
        min_b = layout.term_off + MAX_TOKEN_LEN + 2
        if self.policy.block_size < 40:
            raise ValueError("Block sizes less than 40 cannot be used")
        if self.policy.block_size < min_b:
            raise ValueError(
                f"Block sizes less than {min_b} cannot be used in word-level mode"
            )

    @property
    def layout(self) -> HeadLayout:
        return HeadLayout.for_config(self.word_level, self.policy.variable)


class DynamicIndex:
    """A growing inverted index that stays queryable between insertions."""

    def __init__(self, config: IndexConfig | None = None, max_blocks: int = 1 << 32):
        self.config = config or IndexConfig()
        self.layout = self.config.layout
        self.arena = BlockArena(self.config.policy.block_size, max_blocks)
        self.directory = HashDirectory()
        self.docids: list[str] = []
        self.postings_count = 0

    # -- ingestion ---------------------------------------------------------

    @property
    def doc_count(self) -> int:
        return len(self.docids)

    def add_document(self, docid: str, tokens: list[str]) -> int:
        """Ingest one document; returns its ordinal document number."""
        d = len(self.docids) + 1
        self.docids.append(docid)
        if self.config.word_level:
            for w, tok in enumerate(tokens, start=1):
                head_off = self._head_for(tok)
                self._append_word(head_off, d, w)
        else:
            # sort-counting: repeated occurrences collapse to (term, f) runs
            run_term = None
            run_len = 0
            for tok in sorted(tokens):
                if tok == run_term:
                    run_len += 1
                    continue
                if run_term is not None:
                    self._append_doc(self._head_for(run_term), d, run_len)
                run_term = tok
                run_len = 1
            if run_term is not None:
                self._append_doc(self._head_for(run_term), d, run_len)
        return d

    def _head_for(self, token: str) -> int:
        term = token.encode()
        if not term or len(term) > MAX_TERM_BYTES:
            raise ValueError(f"term length out of range: {token!r}")
        off = self.directory.lookup(self.arena, self.layout, term)
        if off is None:
            off = self.arena.alloc(self.arena.block_size)
            HeadView(self.arena, off, self.layout).init(off, term)
            self.directory.insert(self.arena, self.layout, term, off)
        return off

    def _append_doc(self, head_off: int, d: int, f: int) -> None:
        head = HeadView(self.arena, head_off, self.layout)
        fold = self.config.fold
        gap = d - head.last_d
        if gap < 1:
            raise ValueError("document numbers must be strictly increasing per term")
        nbytes = code_len(gap, f, fold)
        tail_off, tail_size = self._tail_state(head)
        if head.nx + nbytes > tail_size:
            gap = d - self._closing_block_first_doc(head, tail_off)
            tail_off, tail_size = self._open_new_tail(head, tail_off, tail_size, d)
            nbytes = code_len(gap, f, fold)
        base = self.arena.byte_offset(tail_off)
        pair_encode(gap, f, fold, ByteSink(self.arena.data, base + head.nx, base + tail_size))
        head.nx = head.nx + nbytes
        head.last_d = d
        head.ft = head.ft + 1
        self.postings_count += 1

    def _append_word(self, head_off: int, d: int, w: int) -> None:
        head = HeadView(self.arena, head_off, self.layout)
        fold = self.config.fold
        raw_gap = d - head.last_d
        if raw_gap < 0 or (raw_gap == 0 and head.ft == 0):
            raise ValueError("occurrences must arrive in document then word order")
        if raw_gap > 0:
            w_comp = w  # first occurrence in this document: absolute position
        else:
            w_comp = w - head.last_w
            if w_comp < 1:
                raise ValueError("word positions must increase within a document")
        gap = raw_gap + 1
        nbytes = code_len(w_comp, gap, fold)
        tail_off, tail_size = self._tail_state(head)
        if head.nx + nbytes > tail_size:
            gap = d - self._closing_block_first_doc(head, tail_off) + 1
            tail_off, tail_size = self._open_new_tail(head, tail_off, tail_size, d)
            nbytes = code_len(w_comp, gap, fold)
        base = self.arena.byte_offset(tail_off)
        pair_encode(w_comp, gap, fold, ByteSink(self.arena.data, base + head.nx, base + tail_size))
        head.nx = head.nx + nbytes
        head.last_d = d
        head.last_w = w
        head.ft = head.ft + 1
        self.postings_count += 1

    def _tail_state(self, head: HeadView) -> tuple[int, int]:
        """(tail offset, tail size in bytes) for a term's chain."""
        tail_off = head.t_ptr
        policy = self.config.policy
        if not policy.variable or head.z == 1:
            return tail_off, policy.block_size
        size, _ = chain_state(policy, policy.block_size - head.postings_off, head.z)
        return tail_off, size

    def _closing_block_first_doc(self, head: HeadView, tail_off: int) -> int:
        """First document number of the tail that is about to be closed.

        Separate tails record it directly.  When the head is still the
        tail the value is recovered by decoding the head's first
        posting (whose gap is the absolute first docnum); a head with
        no postings yet yields 0, making the next block gap absolute.
        """
        if tail_off != head.base // self.arena.block_size:
            return TailView(self.arena, tail_off).d_num
        start = head.base + head.postings_off
        if head.nx == head.postings_off:
            return 0
        src = ByteSource(self.arena.data, start, head.base + head.nx)
        first = pair_decode(src, self.config.fold)
        if self.config.word_level:
            return first[1] - 1
        return first[0]

    def _open_new_tail(self, head: HeadView, tail_off: int, tail_size: int, d: int) -> tuple[int, int]:
        """Close the current tail and link in a freshly allocated one."""
        arena = self.arena
        base = arena.byte_offset(tail_off)
        arena.data[base + head.nx : base + tail_size] = bytes(tail_size - head.nx)
        policy = self.config.policy
        if policy.variable:
            z = head.z
            _, n = chain_state(policy, policy.block_size - head.postings_off, z)
            new_size = next_block_size(policy, z + 1, n)
            head.z = min(z + 1, policy.max_ordinal)
        else:
            new_size = policy.block_size
        new_off = arena.alloc(new_size)
        TailView(arena, new_off).d_num = d
        # the old tail's leading field becomes its successor link; when the
        # old tail is the head this writes head.n_ptr, which sits at the
        # same offset
        arena.write_u32(base, new_off)
        head.t_ptr = new_off
        head.nx = LINK_BYTES
        return new_off, new_size

    # -- chain inspection ---------------------------------------------------

    def head_view(self, offset: int) -> HeadView:
        return HeadView(self.arena, offset, self.layout)

    def term_head(self, token: str):
        """Head-block offset for a term, or None if never indexed."""
        return self.directory.lookup(self.arena, self.layout, token.encode())

    def chain_offsets(self, head_off: int) -> list[int]:
        """Slot offsets of a term's blocks, head first."""
        head = self.head_view(head_off)
        offs = [head_off]
        tail = head.t_ptr
        cur = head_off
        while cur != tail:
            # every non-tail block, the head included, links from byte 0
            cur = self.arena.read_u32(self.arena.byte_offset(cur))
            offs.append(cur)
        return offs

    def chain_block_sizes(self, head_off: int, count: int) -> list[int]:
        """Byte sizes of the first `count` blocks of a chain."""
        policy = self.config.policy
        if not policy.variable:
            return [policy.block_size] * count
        head = self.head_view(head_off)
        first_cap = policy.block_size - head.postings_off
        return list(islice(chain_sizes(policy, first_cap), count))

    # -- persistence ---------------------------------------------------------

    def save(self, path: str) -> None:
        """Write the arena image: header, block bytes, directory, docids."""
        cfg = self.config
        policy = cfg.policy
        header = _HEADER.pack(
            _MAGIC,
            _VERSION,
            1 if cfg.word_level else 0,
            _KINDS.index(policy.kind),
            policy.block_size,
            policy.link_bytes,
            cfg.fold,
            policy.k,
            self.arena.nblocks,
            self.postings_count,
        )
        slots = self.directory.slots
        if sys.byteorder != "little":
            slots = array("I", slots)
            slots.byteswap()
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(self.arena.data[: self.arena.used_bytes()])
            fh.write(struct.pack("<II", self.directory.capacity, self.directory.count))
            fh.write(slots.tobytes())
            fh.write(struct.pack("<I", len(self.docids)))
            for docid in self.docids:
                enc = docid.encode()
                fh.write(struct.pack("<H", len(enc)))
                fh.write(enc)

    @classmethod
    def load(cls, path: str) -> "DynamicIndex":
        with open(path, "rb") as fh:
            blob = fh.read()
        if len(blob) < _HEADER.size or blob[:4] != _MAGIC:
            raise ValueError(f"not a recognizable index image: {path}")
        magic, version, word, kind_i, block_size, h, fold, k, nblocks, postings = _HEADER.unpack_from(blob, 0)
        if version != _VERSION:
            raise ValueError(f"unsupported index image version {version}")
        policy = GrowthPolicy(_KINDS[kind_i], block_size, k=k, link_bytes=h)
        index = cls(IndexConfig(policy=policy, word_level=bool(word), fold=fold))
        pos = _HEADER.size
        used = nblocks * block_size
        index.arena.data = bytearray(blob[pos : pos + used])
        index.arena.nblocks = nblocks
        pos += used
        capacity, count = struct.unpack_from("<II", blob, pos)
        pos += 8
        index.directory = HashDirectory(capacity)
        slots = array("I")
        slots.frombytes(blob[pos : pos + 4 * capacity])
        if sys.byteorder != "little":
            slots.byteswap()
        index.directory.slots = slots
        index.directory.count = count
        pos += 4 * capacity
        (ndocs,) = struct.unpack_from("<I", blob, pos)
        pos += 4
        for _ in range(ndocs):
            (ln,) = struct.unpack_from("<H", blob, pos)
            pos += 2
            index.docids.append(blob[pos : pos + ln].decode())
            pos += ln
        index.postings_count = postings
        return index
