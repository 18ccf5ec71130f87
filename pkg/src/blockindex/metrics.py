"""Space accounting and posting-size distribution.

space_report walks every chain and attributes each allocated byte to
one category: head blocks split into link pointers (successor + tail
links), the per-term vocabulary record (counts, write offset, term
bytes), postings, and trailing padding; interior "full" blocks into
link, postings, padding; the tail into its first-document field,
postings, and not-yet-used bytes.  The hash directory is charged at
its conventional cost of eight bytes per stored term (a half-loaded
table of two 4-byte slots each).  Categories reconcile exactly:
their sum equals allocated slots * slot size + the directory charge.

posting_size_histogram re-derives every stored posting's component
pair and tallies how many bytes it needs as two independent byte
codes versus the packed pair code actually used, mirroring the
savings/loss accounting of the packed scheme.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codec import code_len, vbyte_len
from .index import DynamicIndex
from .query import PostingsCursor

__all__ = ["SpaceReport", "space_report", "posting_size_histogram"]


@dataclass
class SpaceReport:
    head_count: int = 0
    head_link_pointers: int = 0
    head_vocabulary: int = 0
    head_postings: int = 0
    head_trailing_nulls: int = 0
    full_count: int = 0
    full_link_pointers: int = 0
    full_postings: int = 0
    full_trailing_nulls: int = 0
    tail_count: int = 0
    tail_docnums: int = 0
    tail_postings: int = 0
    tail_unused: int = 0
    hash_array: int = 0
    postings_count: int = 0

    @property
    def total_bytes(self) -> int:
        return (
            self.head_link_pointers
            + self.head_vocabulary
            + self.head_postings
            + self.head_trailing_nulls
            + self.full_link_pointers
            + self.full_postings
            + self.full_trailing_nulls
            + self.tail_docnums
            + self.tail_postings
            + self.tail_unused
            + self.hash_array
        )

    @property
    def bytes_per_posting(self) -> float:
        return self.total_bytes / self.postings_count if self.postings_count else 0.0

    def as_dict(self) -> dict:
        total = self.total_bytes

        def pct(n: int) -> float:
            return 100.0 * n / total if total else 0.0

        return {
            "head_blocks": {
                "count": self.head_count,
                "link_pointers": self.head_link_pointers,
                "vocabulary": self.head_vocabulary,
                "postings": self.head_postings,
                "trailing_null_bytes": self.head_trailing_nulls,
            },
            "full_blocks": {
                "count": self.full_count,
                "link_pointers": self.full_link_pointers,
                "postings": self.full_postings,
                "trailing_null_bytes": self.full_trailing_nulls,
            },
            "tail_blocks": {
                "count": self.tail_count,
                "docnums": self.tail_docnums,
                "postings": self.tail_postings,
                "unused_bytes": self.tail_unused,
            },
            "hash_array": self.hash_array,
            "total_bytes": total,
            "percent": {
                "head_link_pointers": pct(self.head_link_pointers),
                "head_vocabulary": pct(self.head_vocabulary),
                "head_postings": pct(self.head_postings),
                "head_trailing_null_bytes": pct(self.head_trailing_nulls),
                "full_link_pointers": pct(self.full_link_pointers),
                "full_postings": pct(self.full_postings),
                "full_trailing_null_bytes": pct(self.full_trailing_nulls),
                "tail_docnums": pct(self.tail_docnums),
                "tail_postings": pct(self.tail_postings),
                "tail_unused_bytes": pct(self.tail_unused),
                "hash_array": pct(self.hash_array),
            },
            "postings": self.postings_count,
            "bytes_per_posting": self.bytes_per_posting,
        }


def _code_extent(data, start: int, end: int) -> int:
    """Bytes of whole codes at the front of a closed region.

    Trailing padding is all zero and every code ends with a stop byte
    (which is never zero), so the extent runs to the last nonzero byte.
    """
    i = end
    while i > start and data[i - 1] == 0:
        i -= 1
    return i - start


def space_report(index: DynamicIndex) -> SpaceReport:
    arena = index.arena
    layout = index.layout
    report = SpaceReport(
        hash_array=index.directory.charge_bytes(),
        postings_count=index.postings_count,
    )
    vocab_fixed = 8 + layout.nx_size + (1 if layout.variable else 0) + (4 if layout.word_level else 0) + 1

    for _, head_off in index.directory.filled_slots():
        head = index.head_view(head_off)
        offs = index.chain_offsets(head_off)
        sizes = index.chain_block_sizes(head_off, len(offs))
        nx = head.nx

        report.head_count += 1
        report.head_link_pointers += 8
        report.head_vocabulary += vocab_fixed + head.term_len
        head_base = arena.byte_offset(head_off)
        if len(offs) == 1:
            # a single-block list counts as a head block with no tail
            written = nx - head.postings_off
            report.head_postings += written
            report.head_trailing_nulls += sizes[0] - nx
        else:
            region_start = head_base + head.postings_off
            region_end = head_base + sizes[0]
            extent = _code_extent(arena.data, region_start, region_end)
            report.head_postings += extent
            report.head_trailing_nulls += (region_end - region_start) - extent

        for off, size in zip(offs[1:-1], sizes[1:-1]):
            report.full_count += 1
            report.full_link_pointers += 4
            base = arena.byte_offset(off)
            extent = _code_extent(arena.data, base + 4, base + size)
            report.full_postings += extent
            report.full_trailing_nulls += (size - 4) - extent

        if len(offs) > 1:
            report.tail_count += 1
            report.tail_docnums += 4
            report.tail_postings += nx - 4
            report.tail_unused += sizes[-1] - nx

    return report


def posting_size_histogram(index: DynamicIndex, fold: int | None = None) -> dict:
    """Tally of posting sizes as independent byte-code pairs vs packed.

    Returns {"counts": {pair_size: {packed_size: n}}, "total": n,
    "percent": same shape as counts}.  Components are the logical gap
    streams (block gaps play no part), so the tally is invariant under
    collation and block-size choices.
    """
    if fold is None:
        fold = index.config.fold
    word_level = index.config.word_level
    counts: dict[int, dict[int, int]] = {}
    total = 0
    for _, head_off in index.directory.filled_slots():
        cursor = PostingsCursor(index, head_off)
        prev_d = 0
        prev_w = 0
        item = cursor.next()
        while item is not None:
            d, payload = item
            if word_level:
                first = payload if d > prev_d else payload - prev_w
                second = d - prev_d + 1
                prev_w = payload
            else:
                first = d - prev_d
                second = payload
            prev_d = d
            pair_size = vbyte_len(first) + vbyte_len(second)
            packed_size = code_len(first, second, fold)
            counts.setdefault(pair_size, {}).setdefault(packed_size, 0)
            counts[pair_size][packed_size] += 1
            total += 1
            item = cursor.next()
    percent = {
        pair: {packed: 100.0 * n / total for packed, n in row.items()}
        for pair, row in counts.items()
    }
    return {"counts": counts, "total": total, "percent": percent}
