import io
import struct

import pytest

from plcpz import codec
from plcpz.scheme import Factor, Factorization, Threshold, scheme_factorize
from plcpz.text_index import build_index, make_text

from conftest import random_text


def u64(x):
    return struct.pack("<Q", x)


def test_running_example_golden_bytes(rex):
    f = scheme_factorize(rex, build_index(rex), Threshold(2))
    blob = codec.encode_bytes(f)
    # layout written out long-hand: header, then the records in text order
    expect = b"PLCPZ001" + u64(22) + u64(2)
    expect += b"\x00" + u64(1) + b"a"                 # literal "a"
    expect += b"\x01" + u64(12) + u64(5)              # (2 <- 12, 5)
    expect += b"\x00" + u64(1) + b"b"                 # literal "b"
    expect += b"\x01" + u64(1) + u64(7)               # (8 <- 1, 7)
    expect += b"\x01" + u64(20) + u64(2)              # (15 <- 20, 2)
    expect += b"\x01" + u64(19) + u64(3)              # (17 <- 19, 3)
    expect += b"\x00" + u64(3) + b"ba\x00"            # trailing literal
    assert blob == expect
    assert len(blob) == 124


@pytest.mark.parametrize("seed", range(25))
def test_roundtrip_random_factorizations(seed):
    t = make_text(random_text(seed, max_n=300))
    f = scheme_factorize(t, build_index(t), Threshold(2))
    g = codec.decode_bytes(codec.encode_bytes(f))
    assert g.n == f.n and g.theta == f.theta
    assert [(x.dst, x.length, x.src, x.literal) for x in g.factors] == \
           [(x.dst, x.length, x.src, x.literal) for x in f.factors]


def test_encode_to_file_object(rex, tmp_path):
    f = scheme_factorize(rex, build_index(rex), Threshold(2))
    path = tmp_path / "out.plz"
    with open(path, "wb") as sink:
        written = codec.encode(f, sink)
    raw = path.read_bytes()
    assert written == len(raw)
    assert codec.decode_bytes(raw).n == 22


def valid_blob():
    f = Factorization(4, 2, [Factor(1, 2, src=3),
                             Factor(3, 2, literal=b"a\x00")])
    return codec.encode_bytes(f)


def test_decode_rejects_bad_magic():
    with pytest.raises(codec.BadMagic):
        codec.decode_bytes(b"NOTMAGIC" + valid_blob()[8:])


def test_decode_rejects_truncation():
    blob = valid_blob()
    for cut in (8, 12, 25, len(blob) - 1):
        with pytest.raises(codec.Truncated):
            codec.decode_bytes(blob[:cut])


def test_decode_rejects_trailing_garbage():
    with pytest.raises(codec.LengthMismatch):
        codec.decode_bytes(valid_blob() + b"x")


def test_decode_rejects_overrun_and_bad_refs():
    head = b"PLCPZ001" + u64(4) + u64(2)
    with pytest.raises(codec.LengthMismatch):
        codec.decode_bytes(head + b"\x00" + u64(9) + b"abcdefghi")
    with pytest.raises(codec.BadReference):
        codec.decode_bytes(head + b"\x01" + u64(9) + u64(2))
    with pytest.raises(codec.BadReference):
        codec.decode_bytes(head + b"\x01" + u64(1) + u64(2))  # self
    with pytest.raises(codec.CodecError):
        codec.decode_bytes(head + b"\x07" + u64(1))
