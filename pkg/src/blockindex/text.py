"""Docstream normalization and line format.

A docstream is one document per line: the first whitespace-delimited
field is the external document identifier, the remaining fields are
the document's terms in order.  Normalization applies three rules, in
order: fold to lowercase; replace every run of non-alphabetic
characters with a single space; break tokens after each group of 20
consecutive letters.  No stemming or stopping.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, TextIO

__all__ = ["MAX_TOKEN_LEN", "normalize_text", "read_docstream", "docstream_line"]

MAX_TOKEN_LEN = 20

_NON_ALPHA = re.compile(r"[^a-z]+")


def normalize_text(raw: str) -> list[str]:
    """Tokenize raw document text."""
    words = _NON_ALPHA.sub(" ", raw.lower()).split()
    out = []
    for w in words:
        while len(w) > MAX_TOKEN_LEN:
            out.append(w[:MAX_TOKEN_LEN])
            w = w[MAX_TOKEN_LEN:]
        if w:
            out.append(w)
    return out


def read_docstream(stream: TextIO) -> Iterator[tuple[str, list[str]]]:
    """Yield (docid, terms) per non-empty line."""
    for line in stream:
        fields = line.split()
        if not fields:
            continue
        yield fields[0], fields[1:]


def docstream_line(docid: str, terms: Iterable[str]) -> str:
    return " ".join([docid, *terms])
