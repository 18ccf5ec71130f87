import pytest

from blockindex import DynamicIndex, IndexConfig, GrowthPolicy
from blockindex.metrics import posting_size_histogram, space_report

from conftest import build_index, make_zipf_docs


def expected_total(ix):
    return ix.arena.used_bytes() + 8 * ix.directory.count


def test_empty_index_has_only_hash_charge():
    ix = DynamicIndex()
    report = space_report(ix)
    assert report.total_bytes == 0
    assert report.bytes_per_posting == 0.0
    assert report.as_dict()["head_blocks"]["count"] == 0


def test_single_posting_hand_count():
    ix = DynamicIndex(IndexConfig(policy=GrowthPolicy("const", 64)))
    ix.add_document("d1", ["cat"])
    report = space_report(ix)
    assert report.head_count == 1
    assert report.head_link_pointers == 8
    # last_d + ft + nx + term length byte + the term itself
    assert report.head_vocabulary == 4 + 4 + 1 + 1 + 3
    assert report.head_postings == 1  # gap 1, f 1 packs to one byte
    assert report.head_trailing_nulls == 64 - 21 - 1
    assert report.tail_count == 0
    assert report.total_bytes == 64 + 8


@pytest.mark.parametrize(
    "kind,bs,word",
    [
        ("const", 48, False),
        ("const", 64, True),
        ("expon", 48, False),
        ("triangle", 64, True),
    ],
)
def test_categories_reconcile_exactly(kind, bs, word):
    docs = make_zipf_docs(n_docs=200, tokens_per_doc=60, seed=53)
    ix = build_index(docs, kind=kind, block_size=bs, k=1.5, word_level=word)
    report = space_report(ix)
    assert report.total_bytes == expected_total(ix)
    percents = report.as_dict()["percent"]
    assert sum(percents.values()) == pytest.approx(100.0, abs=1e-9)


def test_variable_head_vocabulary_carries_two_extra_bytes():
    docs = make_zipf_docs(n_docs=50, tokens_per_doc=30, seed=59)
    fixed = space_report(build_index(docs, kind="const", block_size=48))
    variable = space_report(build_index(docs, kind="triangle", block_size=48))
    assert fixed.head_count == variable.head_count
    assert variable.head_vocabulary - fixed.head_vocabulary == 2 * fixed.head_count


def test_histogram_single_byte_corpus():
    ix = build_index([("d1", ["a"]), ("d2", ["a"])])
    hist = posting_size_histogram(ix)
    assert hist["total"] == 2
    assert hist["counts"] == {2: {1: 2}}
    assert hist["percent"][2][1] == 100.0


def test_histogram_fold_one_is_diagonal():
    docs = make_zipf_docs(n_docs=150, tokens_per_doc=60, seed=61)
    ix = build_index(docs, block_size=48, fold=1)
    hist = posting_size_histogram(ix, fold=1)
    for pair_size, row in hist["counts"].items():
        assert set(row) == {pair_size}


def test_histogram_savings_dominate_losses_on_zipfian_text():
    docs = make_zipf_docs(n_docs=300, tokens_per_doc=80, seed=67)
    ix = build_index(docs, block_size=48)
    hist = posting_size_histogram(ix)
    saved = sum(
        n for pair, row in hist["counts"].items() for packed, n in row.items() if packed < pair
    )
    lost = sum(
        n for pair, row in hist["counts"].items() for packed, n in row.items() if packed > pair
    )
    assert saved > 10 * lost
    assert hist["total"] == ix.postings_count


def test_histogram_invariant_under_block_size():
    docs = make_zipf_docs(n_docs=100, tokens_per_doc=40, seed=71)
    h48 = posting_size_histogram(build_index(docs, block_size=48))
    h64 = posting_size_histogram(build_index(docs, block_size=64))
    assert h48 == h64
