"""Arena collation: rewrite block placement so each chain is contiguous.

Chains accumulate blocks in posting-arrival order, interleaved with
every other term's blocks, so traversal hops around the arena.
Collation visits the hash directory's filled slots in ascending slot
order and copies each term's blocks, head through tail, to the next
free position of a fresh arena image, rewriting successor and tail
links (and the directory's head offsets) to the new positions.  No
block content other than those link fields changes, the block count
is unchanged, and the index remains writable and queryable with
identical results afterwards.

Ingest and queries must be quiescent for the duration.  The staging
buffer is in memory by default; `via_disk` stages through a temporary
file instead, for arenas too large to hold twice.
"""

from __future__ import annotations

import os
import tempfile

from .index import DynamicIndex

__all__ = ["collate"]


def collate(index: DynamicIndex, via_disk: bool = False, staging_path: str | None = None) -> None:
    arena = index.arena
    block = arena.block_size
    used = arena.used_bytes()

    new_data = bytearray(used)
    new_slot_values: list[tuple[int, int]] = []
    cursor_slot = 0  # running count of blocks written

    for dir_slot, head_off in index.directory.filled_slots():
        offs = index.chain_offsets(head_off)
        sizes = index.chain_block_sizes(head_off, len(offs))
        new_offs = []
        pos = cursor_slot
        for size in sizes:
            new_offs.append(pos)
            pos += size // block
        for old, new, size in zip(offs, new_offs, sizes):
            new_data[new * block : new * block + size] = arena.data[
                old * block : old * block + size
            ]
        # head: successor link and tail link point at the new positions
        _write_u32(new_data, new_offs[0] * block, new_offs[1] if len(new_offs) > 1 else new_offs[0])
        _write_u32(new_data, new_offs[0] * block + 4, new_offs[-1])
        # interior blocks: successor links only; the tail's leading bytes
        # hold its first document number and are left untouched
        for i in range(1, len(new_offs) - 1):
            _write_u32(new_data, new_offs[i] * block, new_offs[i + 1])
        new_slot_values.append((dir_slot, new_offs[0]))
        cursor_slot = pos

    if cursor_slot != arena.nblocks:
        raise RuntimeError(
            f"collation visited {cursor_slot} blocks but the arena holds {arena.nblocks}"
        )

    if via_disk:
        path = staging_path or None
        fd, tmp = (None, staging_path) if staging_path else tempfile.mkstemp(suffix=".staging")
        try:
            if fd is not None:
                os.close(fd)
            with open(tmp, "wb") as fh:
                fh.write(new_data)
            with open(tmp, "rb") as fh:
                new_data = bytearray(fh.read())
        finally:
            if path is None and os.path.exists(tmp):
                os.unlink(tmp)

    arena.data[:used] = new_data
    for dir_slot, new_off in new_slot_values:
        index.directory.slots[dir_slot] = new_off


def _write_u32(buf: bytearray, off: int, value: int) -> None:
    buf[off : off + 4] = value.to_bytes(4, "little")
