"""The block arena and typed views over raw block bytes.

All blocks of all terms live in one contiguous growable byte region of
B-byte slots, addressed by 32-bit slot offset.  A chain's first block
("head") embeds the term's vocabulary record ahead of its postings;
interior blocks ("full") start with a 4-byte link to their successor;
the last block ("tail") starts with the absolute document number of
its first posting, a field that is overwritten by the successor link
when the block fills and stops being the tail.

Head-block byte layout (multi-byte fields little-endian):

    offset  0   n_ptr   u32  slot offset of the second block (self if none)
    offset  4   t_ptr   u32  slot offset of the tail block (self if none)
    offset  8   last_d  u32  most recent document number for this term
    offset 12   ft      u32  postings stored for this term
    [offset 16  last_w  u32  word-level mode only: last word position]
    next        nx      u8, or u16 for variable block sizing
    [next       z       u8   variable sizing only: tail block ordinal - 1]
    next        tlen    u8   term length in bytes
    next        term    tlen bytes, postings follow immediately
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

__all__ = ["ArenaFullError", "BlockArena", "HeadLayout", "HeadView", "FullView", "TailView"]

_U32 = struct.Struct("<I")

LINK_BYTES = 4  # h: size of n_ptr / t_ptr / d_num fields
MAX_TERM_BYTES = 255


class ArenaFullError(Exception):
    pass


class BlockArena:
    """Bump allocator over one contiguous region of B-byte slots."""

    __slots__ = ("block_size", "data", "nblocks", "max_blocks")

    def __init__(self, block_size: int, max_blocks: int = 1 << 32, initial_slots: int = 64):
        self.block_size = block_size
        self.nblocks = 0
        self.max_blocks = min(max_blocks, 1 << 32)
        self.data = bytearray(block_size * max(1, initial_slots))

    def alloc(self, size: int) -> int:
        """Claim `size` bytes (a multiple of the slot size) of zeroed
        consecutive slots and return the slot offset of the first."""
        if size <= 0 or size % self.block_size:
            raise ValueError(f"allocation must be a positive multiple of {self.block_size}")
        slots = size // self.block_size
        if self.nblocks + slots > self.max_blocks:
            raise ArenaFullError(f"arena limited to {self.max_blocks} blocks")
        offset = self.nblocks
        self.nblocks += slots
        need = self.nblocks * self.block_size
        while len(self.data) < need:
            # double the backing region
            self.data.extend(bytes(max(len(self.data), self.block_size)))
        return offset

    def byte_offset(self, slot: int) -> int:
        return slot * self.block_size

    def used_bytes(self) -> int:
        return self.nblocks * self.block_size

    def read_u32(self, byte_off: int) -> int:
        return _U32.unpack_from(self.data, byte_off)[0]

    def write_u32(self, byte_off: int, value: int) -> None:
        _U32.pack_into(self.data, byte_off, value)


@dataclass(frozen=True)
class HeadLayout:
    """Field offsets of the head-block record for one index configuration."""

    word_level: bool
    variable: bool
    last_w_off: int
    nx_off: int
    nx_size: int
    z_off: int
    tlen_off: int
    term_off: int

    @staticmethod
    def for_config(word_level: bool, variable: bool) -> "HeadLayout":
        pos = 16
        last_w_off = -1
        if word_level:
            last_w_off = pos
            pos += 4
        nx_off = pos
        nx_size = 2 if variable else 1
        pos += nx_size
        z_off = -1
        if variable:
            z_off = pos
            pos += 1
        tlen_off = pos
        pos += 1
        return HeadLayout(word_level, variable, last_w_off, nx_off, nx_size, z_off, tlen_off, pos)

    def postings_start(self, term_len: int) -> int:
        return self.term_off + term_len


class HeadView:
    """Field accessors for a head block at a given slot offset."""

    __slots__ = ("arena", "base", "layout")

    def __init__(self, arena: BlockArena, slot: int, layout: HeadLayout):
        self.arena = arena
        self.base = arena.byte_offset(slot)
        self.layout = layout

    @property
    def n_ptr(self) -> int:
        return self.arena.read_u32(self.base)

    @n_ptr.setter
    def n_ptr(self, v: int) -> None:
        self.arena.write_u32(self.base, v)

    @property
    def t_ptr(self) -> int:
        return self.arena.read_u32(self.base + 4)

    @t_ptr.setter
    def t_ptr(self, v: int) -> None:
        self.arena.write_u32(self.base + 4, v)

    @property
    def last_d(self) -> int:
        return self.arena.read_u32(self.base + 8)

    @last_d.setter
    def last_d(self, v: int) -> None:
        self.arena.write_u32(self.base + 8, v)

    @property
    def ft(self) -> int:
        return self.arena.read_u32(self.base + 12)

    @ft.setter
    def ft(self, v: int) -> None:
        self.arena.write_u32(self.base + 12, v)

    @property
    def last_w(self) -> int:
        return self.arena.read_u32(self.base + self.layout.last_w_off)

    @last_w.setter
    def last_w(self, v: int) -> None:
        self.arena.write_u32(self.base + self.layout.last_w_off, v)

    @property
    def nx(self) -> int:
        off = self.base + self.layout.nx_off
        if self.layout.nx_size == 1:
            return self.arena.data[off]
        raw = self.arena.data[off] | (self.arena.data[off + 1] << 8)
        # raw 0 stands for 2**16 (tail exactly full); 0 is never stored otherwise
        return raw if raw else 1 << 16

    @nx.setter
    def nx(self, v: int) -> None:
        off = self.base + self.layout.nx_off
        if self.layout.nx_size == 1:
            self.arena.data[off] = v
        else:
            raw = v & 0xFFFF
            self.arena.data[off] = raw & 0xFF
            self.arena.data[off + 1] = raw >> 8

    @property
    def z(self) -> int:
        return self.arena.data[self.base + self.layout.z_off] + 1

    @z.setter
    def z(self, v: int) -> None:
        self.arena.data[self.base + self.layout.z_off] = v - 1

    @property
    def term_len(self) -> int:
        return self.arena.data[self.base + self.layout.tlen_off]

    @property
    def term(self) -> bytes:
        start = self.base + self.layout.term_off
        return bytes(self.arena.data[start : start + self.term_len])

    def init(self, slot: int, term: bytes) -> None:
        """Fill in a freshly allocated head block for `term`."""
        if len(term) > MAX_TERM_BYTES:
            raise ValueError("term longer than 255 bytes")
        self.n_ptr = slot
        self.t_ptr = slot
        self.arena.data[self.base + self.layout.tlen_off] = len(term)
        start = self.base + self.layout.term_off
        self.arena.data[start : start + len(term)] = term
        if self.layout.variable:
            self.z = 1
        self.nx = self.layout.postings_start(len(term))

    @property
    def postings_off(self) -> int:
        return self.layout.postings_start(self.term_len)


class FullView:
    """A closed interior block: successor link, then whole codes, then 0x00 padding."""

    __slots__ = ("arena", "base")

    def __init__(self, arena: BlockArena, slot: int):
        self.arena = arena
        self.base = arena.byte_offset(slot)

    @property
    def n_ptr(self) -> int:
        return self.arena.read_u32(self.base)

    @n_ptr.setter
    def n_ptr(self, v: int) -> None:
        self.arena.write_u32(self.base, v)


class TailView:
    """The growing last block: first-in-block docnum, then codes up to nx."""

    __slots__ = ("arena", "base")

    def __init__(self, arena: BlockArena, slot: int):
        self.arena = arena
        self.base = arena.byte_offset(slot)

    @property
    def d_num(self) -> int:
        return self.arena.read_u32(self.base)

    @d_num.setter
    def d_num(self, v: int) -> None:
        self.arena.write_u32(self.base, v)
