import pytest
from hypothesis import given
from hypothesis import strategies as st

from srlz.bitio import BitReader, BitWriter, TruncatedStreamError, fnv1a64


def test_fnv1a64_known_vectors():
    # standard FNV-1a 64 reference values
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8


def test_fnv1a64_chaining_matches_concatenation():
    h = fnv1a64(b"foo")
    assert fnv1a64(b"bar", h) == fnv1a64(b"foobar")


fields = st.lists(
    st.integers(min_value=0, max_value=40).flatmap(
        lambda w: st.tuples(st.integers(min_value=0,
                                        max_value=(1 << w) - 1 if w else 0),
                            st.just(w))),
    max_size=50)


@given(fields)
def test_writer_reader_round_trip(vals):
    w = BitWriter()
    for value, width in vals:
        w.write(value, width)
    total = sum(width for _, width in vals)
    assert w.bit_length == total
    data = w.to_bytes()
    assert len(data) == (total + 7) // 8
    r = BitReader(data)
    for value, width in vals:
        assert r.read(width) == value
    assert r.bits_read == total


def test_msb_first_packing():
    w = BitWriter()
    w.write(1, 1)
    w.write(0, 1)
    w.write(0b11, 2)
    assert w.to_bytes() == bytes([0b10110000])


def test_writer_rejects_overflow_and_negative():
    w = BitWriter()
    with pytest.raises(ValueError):
        w.write(2, 1)
    with pytest.raises(ValueError):
        w.write(-1, 4)
    with pytest.raises(ValueError):
        w.write(0, -1)


def test_reader_truncation():
    r = BitReader(b"\xff")
    r.read(8)
    with pytest.raises(TruncatedStreamError):
        r.read(1)


def test_zero_width_fields():
    w = BitWriter()
    w.write(0, 0)
    assert w.bit_length == 0
    assert w.to_bytes() == b""
    r = BitReader(b"")
    assert r.read(0) == 0
