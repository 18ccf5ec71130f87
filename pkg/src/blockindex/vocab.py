"""Hash directory mapping term strings to head-block offsets.

The directory stores no term bytes: each slot holds only the 32-bit
slot offset of a head block, and probes compare against the term
embedded in that block.  Open addressing with linear advance; the
table doubles whenever the load factor would pass one half, so probe
chains stay short and an empty slot always terminates a lookup.
"""

from __future__ import annotations

from array import array

from .blocks import BlockArena, HeadLayout, HeadView

__all__ = ["EMPTY_SLOT", "HashDirectory", "fnv1a"]

# slot offset 0 is a valid head block, so empty slots need a distinct marker
EMPTY_SLOT = 0xFFFFFFFF

_FNV_OFFSET = 2166136261
_FNV_PRIME = 16777619


def fnv1a(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & 0xFFFFFFFF
    return h


class HashDirectory:
    __slots__ = ("slots", "capacity", "count")

    def __init__(self, capacity: int = 8):
        if capacity & (capacity - 1):
            raise ValueError("capacity must be a power of two")
        self.capacity = capacity
        self.count = 0
        self.slots = array("I", [EMPTY_SLOT]) * capacity

    def lookup(self, arena: BlockArena, layout: HeadLayout, term: bytes):
        """Head-block offset for `term`, or None."""
        mask = self.capacity - 1
        i = fnv1a(term) & mask
        slots = self.slots
        while True:
            off = slots[i]
            if off == EMPTY_SLOT:
                return None
            if HeadView(arena, off, layout).term == term:
                return off
            i = (i + 1) & mask

    def insert(self, arena: BlockArena, layout: HeadLayout, term: bytes, offset: int) -> None:
        """Record `term` -> `offset`; the term must not already be present."""
        if len(term) > 255:
            raise ValueError("term longer than 255 bytes")
        if (self.count + 1) * 2 > self.capacity:
            self.grow(arena, layout)
        self._place(offset, fnv1a(term))
        self.count += 1

    def _place(self, offset: int, h: int) -> None:
        mask = self.capacity - 1
        i = h & mask
        slots = self.slots
        while slots[i] != EMPTY_SLOT:
            i = (i + 1) & mask
        slots[i] = offset

    def grow(self, arena: BlockArena, layout: HeadLayout) -> None:
        """Double the table, re-placing every offset by rehashing the
        term read back from its head block."""
        old = self.slots
        self.capacity *= 2
        self.slots = array("I", [EMPTY_SLOT]) * self.capacity
        for off in old:
            if off != EMPTY_SLOT:
                self._place(off, fnv1a(HeadView(arena, off, layout).term))

    def filled_slots(self):
        """(slot index, head offset) pairs in ascending slot order."""
        for i, off in enumerate(self.slots):
            if off != EMPTY_SLOT:
                yield i, off

    def charge_bytes(self) -> int:
        """Space accounting convention: two 4-byte slots per stored term."""
        return 8 * self.count
