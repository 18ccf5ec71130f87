"""Byte codes for postings.

Integers are written as little-end-first 7-bit groups, one group per
byte.  Every byte except the last has its top bit clear ("continue");
the final byte has its top bit set ("stop").  The packed pair code
folds a (gap, payload) posting into a single value whenever the
payload is below the fold threshold F, halving the typical posting
cost relative to two independent byte codes.

A run of 0x00 bytes that extends to the end of a decode region is the
end-of-block marker; `decode` reports it by returning None.  Note that
a 0x00 byte *can* legitimately open a multi-byte code (128 encodes as
0x00 0x81), so the marker is only recognised when no stop byte follows
before the region bound.
"""

from __future__ import annotations

__all__ = [
    "ByteSink",
    "ByteSource",
    "CorruptStreamError",
    "MAX_ENCODABLE",
    "vbyte_encode",
    "vbyte_decode",
    "vbyte_len",
    "pair_encode",
    "pair_decode",
    "code_len",
]

# Five code bytes carry 35 payload bits; anything larger is a caller error.
MAX_ENCODABLE = (1 << 35) - 1


class CorruptStreamError(Exception):
    """A code ran past its region bound or used too many continue bytes."""


class ByteSink:
    """Bounded write window over a mutable byte buffer."""

    __slots__ = ("buf", "pos", "bound")

    def __init__(self, buf: bytearray, pos: int, bound: int):
        self.buf = buf
        self.pos = pos
        self.bound = bound

    def write(self, byte: int) -> None:
        if self.pos >= self.bound:
            raise CorruptStreamError("sink overflow")
        self.buf[self.pos] = byte
        self.pos += 1


class ByteSource:
    """Bounded read window over a byte buffer."""

    __slots__ = ("buf", "pos", "bound")

    def __init__(self, buf, pos: int, bound: int):
        self.buf = buf
        self.pos = pos
        self.bound = bound


def vbyte_encode(x: int, sink: ByteSink) -> int:
    """Encode x >= 1, returning the number of bytes written."""
    if x < 1 or x > MAX_ENCODABLE:
        raise ValueError(f"value out of encodable range: {x}")
    n = 1
    while x >= 0x80:
        sink.write(x & 0x7F)
        x >>= 7
        n += 1
    sink.write(x | 0x80)
    return n


def vbyte_decode(source: ByteSource):
    """Decode one integer, or return None at an end-of-block marker.

    None is returned when the bytes from the current position to the
    bound contain no stop byte; well-formed blocks only reach that
    state on trailing 0x00 padding, and the position is then advanced
    past exactly one padding byte.
    """
    buf = source.buf
    pos = source.pos
    bound = source.bound
    if pos >= bound:
        raise CorruptStreamError("source exhausted")
    start = pos
    x = 0
    shift = 0
    while pos < bound:
        b = buf[pos]
        pos += 1
        if b & 0x80:
            source.pos = pos
            return x | ((b & 0x7F) << shift)
        x |= b << shift
        shift += 7
        if shift > 28 and x:
            raise CorruptStreamError("overlong code")
    if x:
        raise CorruptStreamError("code split across region bound")
    source.pos = start + 1
    return None


def vbyte_len(x: int) -> int:
    if x < 1 << 7:
        return 1
    if x < 1 << 14:
        return 2
    if x < 1 << 21:
        return 3
    if x < 1 << 28:
        return 4
    return 5


def pair_encode(g: int, f: int, fold: int, sink: ByteSink) -> int:
    """Encode the posting (g, f), folding f into g when f < fold."""
    if g < 1 or f < 1:
        raise ValueError("posting components must be >= 1")
    if f < fold:
        return vbyte_encode((g - 1) * fold + f, sink)
    n = vbyte_encode(g * fold, sink)
    return n + vbyte_encode(f - fold + 1, sink)


def pair_decode(source: ByteSource, fold: int):
    """Inverse of pair_encode; None at an end-of-block marker."""
    packed = vbyte_decode(source)
    if packed is None:
        return None
    rem = packed % fold
    if rem:
        return 1 + packed // fold, rem
    f = vbyte_decode(source)
    if f is None:
        raise CorruptStreamError("stream ended inside a posting")
    return packed // fold, fold + f - 1


def code_len(g: int, f: int, fold: int) -> int:
    """Byte count pair_encode would emit, computed without writing."""
    if f < fold:
        return vbyte_len((g - 1) * fold + f)
    return vbyte_len(g * fold) + vbyte_len(f - fold + 1)
