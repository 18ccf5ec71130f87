"""Shared fixtures: a seeded Zipfian corpus with reference (forward)
structures that every oracle comparison is checked against."""

from __future__ import annotations

import itertools
import math
import random
import sys
from collections import Counter

import pytest

from blockindex import DynamicIndex, IndexConfig, GrowthPolicy

VOCAB_SIZE = 2000
N_DOCS = 1000
TOKENS_PER_DOC = 400
VOCAB = [f"term{i:04d}" for i in range(1, VOCAB_SIZE + 1)]


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    sys.__stdout__.write(f"[acceptance] {name}: {'PASS' if report.passed else 'FAIL'}\n")
    sys.__stdout__.flush()


def make_zipf_docs(n_docs=N_DOCS, vocab=VOCAB, tokens_per_doc=TOKENS_PER_DOC, seed=42):
    rng = random.Random(seed)
    cum = list(itertools.accumulate(1.0 / r for r in range(1, len(vocab) + 1)))
    return [
        (f"doc{d:05d}", rng.choices(vocab, cum_weights=cum, k=tokens_per_doc))
        for d in range(1, n_docs + 1)
    ]


class Reference:
    """Forward structures backing the brute-force oracles.  Documents
    can be appended incrementally, mirroring the engine's contract."""

    def __init__(self, docs=()):
        self.docs: list[tuple[str, list[str]]] = []
        self.doc_counts: list[Counter] = []
        self.term_docs: dict[str, list[int]] = {}
        self.term_doc_sets: dict[str, set[int]] = {}
        self.word_occurrences: dict[str, list[tuple[int, int]]] = {}
        for docid, tokens in docs:
            self.add(docid, tokens)

    def add(self, docid, tokens):
        self.docs.append((docid, tokens))
        d = len(self.docs)
        self.doc_counts.append(Counter(tokens))
        for w, tok in enumerate(tokens, start=1):
            self.word_occurrences.setdefault(tok, []).append((d, w))
        for tok in set(tokens):
            self.term_docs.setdefault(tok, []).append(d)
            self.term_doc_sets.setdefault(tok, set()).add(d)
        return d

    @property
    def n_docs(self):
        return len(self.docs)

    def doc_postings(self, term):
        return [(d, self.doc_counts[d - 1][term]) for d in self.term_docs.get(term, [])]

    def conjunction(self, terms):
        sets = []
        for t in dict.fromkeys(terms):
            if t not in self.term_doc_sets:
                return []
            sets.append(self.term_doc_sets[t])
        return sorted(set.intersection(*sets)) if sets else []

    def topk(self, terms, k=10):
        unique = [t for t in dict.fromkeys(terms) if t in self.term_doc_sets]
        union = set().union(*(self.term_doc_sets[t] for t in unique)) if unique else set()
        scored = []
        for d in union:
            contribs = [
                math.log(1.0 + self.doc_counts[d - 1][t])
                * math.log(1.0 + self.n_docs / len(self.term_docs[t]))
                for t in unique
                if self.doc_counts[d - 1][t]
            ]
            scored.append((math.fsum(contribs), d))
        scored.sort(key=lambda pair: (-pair[0], pair[1]))
        return scored[:k]


def build_index(docs, kind="const", block_size=64, k=1.1, word_level=False, fold=0):
    policy = GrowthPolicy(kind, block_size, k=k)
    index = DynamicIndex(IndexConfig(policy=policy, word_level=word_level, fold=fold))
    for docid, tokens in docs:
        index.add_document(docid, tokens)
    return index


@pytest.fixture(scope="session")
def zipf_docs():
    return make_zipf_docs()


@pytest.fixture(scope="session")
def reference(zipf_docs):
    return Reference(zipf_docs)


@pytest.fixture(scope="session")
def query_set():
    rng = random.Random(9)
    queries = []
    for _ in range(200):
        length = rng.randint(2, 5)
        # skew half the picks toward frequent terms so intersections are non-trivial
        terms = [
            VOCAB[rng.randint(0, 199)] if rng.random() < 0.5 else rng.choice(VOCAB)
            for _ in range(length)
        ]
        queries.append(terms)
    return queries


@pytest.fixture(scope="session")
def doc_indexes(zipf_docs):
    """Document-level indexes for every growth policy and both block sizes."""
    return {
        (kind, bs): build_index(zipf_docs, kind=kind, block_size=bs)
        for kind in ("const", "expon", "triangle")
        for bs in (48, 64)
    }
