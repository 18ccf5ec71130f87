"""Block-size schedules for extensible postings chains.

Three strategies are provided.  `const` always allocates the base
block size B.  `expon` grows geometrically: the next block is sized so
the chain keeps roughly a (k-1) fraction of its payload in the newest
block.  `triangle` (so named because with B=2, h=1 the z-th block
holds z payload slots, like the triangle numbers) sizes the next
block near sqrt(2*h*n), where n is the payload volume already stored
and h the per-block link cost; that choice balances cumulative link
bytes against expected unused tail bytes, and drives the overhead
*ratio* to zero as lists grow instead of plateauing at a constant.

All emitted sizes are positive multiples of B.  Variable strategies
cap block sizes at `max_block` and block ordinals at `max_ordinal`;
past either cap the schedule repeats the largest aligned size, which
preserves the constant-overhead asymptotics of `const`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

__all__ = [
    "GrowthPolicy",
    "next_block_size",
    "chain_sizes",
    "chain_state",
    "overhead_trace",
    "overhead_cycles",
    "GROWTH_KINDS",
]

GROWTH_KINDS = ("const", "expon", "triangle")


@dataclass(frozen=True)
class GrowthPolicy:
    """Block-size schedule parameters.

    kind        one of GROWTH_KINDS
    block_size  base size B in bytes; every emitted size is a multiple
    k           geometric factor, expon only, > 1
    link_bytes  bytes consumed by the link pointer in each block (h)
    max_block   size cap for the variable kinds
    max_ordinal ordinal cap for the variable kinds
    """

    kind: str
    block_size: int
    k: float = 1.1
    link_bytes: int = 4
    max_block: int = 1 << 16
    max_ordinal: int = 256

    def __post_init__(self):
        if self.kind not in GROWTH_KINDS:
            raise ValueError(f"unknown growth kind: {self.kind!r}")
        if self.block_size < self.link_bytes + 2:
            raise ValueError("block size leaves no payload room")
        if self.kind == "expon" and self.k <= 1.0:
            raise ValueError("expon growth factor must exceed 1")

    @property
    def variable(self) -> bool:
        return self.kind != "const"

    @property
    def max_block_aligned(self) -> int:
        return max(self.block_size, (self.max_block // self.block_size) * self.block_size)


def next_block_size(policy: GrowthPolicy, z: int, n: int) -> int:
    """Size in bytes of chain block `z` (1-based) given `n` payload bytes stored.

    For the variable kinds `n` is the cumulative payload capacity of
    blocks 1..z-1; the caller measures it in bytes.
    """
    if z < 1:
        raise ValueError("block ordinal starts at 1")
    if n < 0:
        raise ValueError("payload volume cannot be negative")
    B = policy.block_size
    if policy.kind == "const":
        return B
    if z > policy.max_ordinal:
        return policy.max_block_aligned
    h = policy.link_bytes
    if policy.kind == "expon":
        raw = h + (policy.k - 1.0) * n
    else:
        raw = h + math.sqrt(2.0 * h * n)
    size = B * math.ceil(raw / B)
    return min(max(size, B), policy.max_block_aligned)


def chain_sizes(policy: GrowthPolicy, first_capacity: int) -> Iterator[int]:
    """Yield successive block sizes for one chain.

    `first_capacity` is the payload capacity of block 1; it differs
    from block_size - link_bytes when block 1 carries extra per-term
    fields.  Later blocks contribute size - link_bytes each.
    """
    yield policy.block_size
    n = first_capacity
    z = 2
    while True:
        size = next_block_size(policy, z, n)
        yield size
        n += size - policy.link_bytes
        z += 1


def chain_state(policy: GrowthPolicy, first_capacity: int, z: int) -> tuple[int, int]:
    """(size of block z, payload capacity of blocks 1..z) for one chain."""
    it = chain_sizes(policy, first_capacity)
    size = policy.block_size
    n = 0
    for j in range(1, z + 1):
        size = next(it)
        n += first_capacity if j == 1 else size - policy.link_bytes
    return size, n


def overhead_trace(policy: GrowthPolicy, n_max: int) -> list[tuple[int, int]]:
    """(n, overhead) for each payload volume n in 1..n_max.

    Overhead is total allocated bytes minus n, for a chain grown one
    payload byte at a time under `policy`.  Payload capacities here
    are size - link_bytes for every block including the first.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    out = []
    capacity = 0
    total = 0
    z = 0
    for n in range(1, n_max + 1):
        if n > capacity:
            z += 1
            size = next_block_size(policy, z, capacity)
            total += size
            capacity += size - policy.link_bytes
        out.append((n, total - n))
    return out


def overhead_cycles(policy: GrowthPolicy, n_max: int) -> list[dict]:
    """Per-growth-cycle summary of an overhead trace.

    A cycle spans the n values served by one allocation.  Each entry
    reports the cycle bounds, the mean overhead across the cycle, the
    overhead ratio (mean overhead / mean n), and whether the cycle is
    complete (ended by the next allocation rather than by n_max).
    """
    trace = overhead_trace(policy, n_max)
    cycles = []
    start = 0
    prev_overhead = None
    for i, (n, ov) in enumerate(trace):
        if prev_overhead is not None and ov > prev_overhead:
            cycles.append((start, i - 1))
            start = i
        prev_overhead = ov
    cycles.append((start, len(trace) - 1))

    out = []
    for lo, hi in cycles:
        span = trace[lo : hi + 1]
        mean_ov = sum(ov for _, ov in span) / len(span)
        mean_n = (span[0][0] + span[-1][0]) / 2.0
        out.append(
            {
                "n_start": span[0][0],
                "n_end": span[-1][0],
                "mean_overhead": mean_ov,
                "ratio": mean_ov / mean_n,
                "complete": hi < len(trace) - 1,
            }
        )
    return out
