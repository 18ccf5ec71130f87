"""blockindex: a dynamic in-memory inverted index.

Documents stream in one at a time and are findable by the very next
query.  Every term's postings live in a chain of fixed-size blocks
inside one growable arena; the chain's first block also carries the
term's vocabulary record, and postings are stored as packed byte
codes.  Conjunctive and ranked top-k querying run directly on the
growing structure.
"""

from .codec import code_len, pair_decode, pair_encode, vbyte_decode, vbyte_encode, vbyte_len
from .collate import collate
from .growth import GrowthPolicy, chain_sizes, next_block_size, overhead_cycles, overhead_trace
from .index import DynamicIndex, IndexConfig
from .metrics import SpaceReport, posting_size_histogram, space_report
from .query import PostingsCursor, ScoredDoc, conjunction, open_cursor, topk_disjunctive
from .text import normalize_text

__version__ = "0.1.0"

__all__ = [
    "DynamicIndex",
    "IndexConfig",
    "GrowthPolicy",
    "PostingsCursor",
    "ScoredDoc",
    "SpaceReport",
    "chain_sizes",
    "code_len",
    "collate",
    "conjunction",
    "next_block_size",
    "normalize_text",
    "open_cursor",
    "overhead_cycles",
    "overhead_trace",
    "pair_decode",
    "pair_encode",
    "posting_size_histogram",
    "space_report",
    "topk_disjunctive",
    "vbyte_decode",
    "vbyte_encode",
    "vbyte_len",
]
