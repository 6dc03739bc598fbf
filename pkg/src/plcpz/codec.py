"""Container format for factorizations.

Layout (all integers u64 little endian):

    magic "PLCPZ001" | n | theta | records...

A record is a tag byte followed by its payload: 0x00 for a literal run
(length, raw bytes), 0x01 for a reference (src, length).  Records appear in
text order and must tile [1..n] exactly.
"""

import io
import struct

from .scheme import Factor, Factorization

MAGIC = b"PLCPZ001"
TAG_LITERAL = 0
TAG_REFERENCE = 1

_U64 = struct.Struct("<Q")


class CodecError(ValueError):
    pass


class BadMagic(CodecError):
    pass


class Truncated(CodecError):
    pass


class LengthMismatch(CodecError):
    """Record lengths do not tile the advertised text length."""


class BadReference(CodecError):
    """A reference points outside [1..n] or at itself."""


def encode(f: Factorization, sink) -> int:
    """Write ``f`` to the binary file object ``sink``; returns bytes written."""
    written = 0

    def put(b):
        nonlocal written
        sink.write(b)
        written += len(b)

    put(MAGIC)
    put(_U64.pack(f.n))
    put(_U64.pack(f.theta))
    for fac in f.factors:
        if fac.is_reference:
            put(bytes([TAG_REFERENCE]))
            put(_U64.pack(fac.src))
            put(_U64.pack(fac.length))
        else:
            put(bytes([TAG_LITERAL]))
            put(_U64.pack(fac.length))
            put(fac.literal)
    return written


def encode_bytes(f: Factorization) -> bytes:
    buf = io.BytesIO()
    encode(f, buf)
    return buf.getvalue()


def _need(source, k):
    b = source.read(k)
    if len(b) != k:
        raise Truncated("unexpected end of stream")
    return b


def decode(source) -> Factorization:
    """Read one container from the binary file object ``source``."""
    magic = source.read(8)
    if magic != MAGIC:
        raise BadMagic("not a PLCPZ001 stream")
    n = _U64.unpack(_need(source, 8))[0]
    theta = _U64.unpack(_need(source, 8))[0]
    factors = []
    pos = 1
    while pos <= n:
        tag = _need(source, 1)[0]
        if tag == TAG_LITERAL:
            length = _U64.unpack(_need(source, 8))[0]
            if length < 1 or pos + length - 1 > n:
                raise LengthMismatch("literal overruns text at %d" % pos)
            factors.append(Factor(pos, length, literal=_need(source, length)))
        elif tag == TAG_REFERENCE:
            src = _U64.unpack(_need(source, 8))[0]
            length = _U64.unpack(_need(source, 8))[0]
            if length < 1 or pos + length - 1 > n:
                raise LengthMismatch("reference overruns text at %d" % pos)
            if src < 1 or src + length - 1 > n:
                raise BadReference("source out of bounds at %d" % pos)
            if src == pos:
                raise BadReference("self-reference at %d" % pos)
            factors.append(Factor(pos, length, src=src))
        else:
            raise CodecError("unknown record tag %d" % tag)
        pos += length
    if pos != n + 1:
        raise LengthMismatch("records cover %d of %d positions" % (pos - 1, n))
    if source.read(1):
        raise LengthMismatch("trailing data after final record")
    return Factorization(n, theta, factors)


def decode_bytes(raw: bytes) -> Factorization:
    return decode(io.BytesIO(raw))
