"""Self-describing binary containers shared by every codec in the package.

Leaf containers (plain and conditional streams) carry a header, a bit-packed
payload padded to a byte boundary, and, for conditional streams, a side-info
checksum in the header plus a dictionary-hash trailer.  Wrapper containers
(refinement and description pairs) reuse the same header with an empty
alphabet block; their payload is a segment directory followed by the raw
segment bytes, so embedded streams stay exactly delimited.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Optional, Sequence as Seq, Tuple

from .bitio import TruncatedStreamError

MAGIC = b"SRLZ"
VERSION = 1

MODE_LZ = 0
MODE_COND = 1
MODE_SR = 2
MODE_MD1 = 3
MODE_MD2 = 4

MODE_NAMES = {
    MODE_LZ: "lz",
    MODE_COND: "cond",
    MODE_SR: "sr",
    MODE_MD1: "md-desc1",
    MODE_MD2: "md-desc2",
}

# Segment roles inside wrapper containers.
ROLE_STAGE1 = 1        # first-stage plain stream of an sr pair
ROLE_STAGE2 = 2        # refinement conditional stream of an sr pair
ROLE_MD_PRIMARY = 3    # plain stream private to one description
ROLE_COND_PART_A = 4   # first byte-slice of a shared conditional stream
ROLE_COND_PART_B = 5   # remaining byte-slice of a shared conditional stream
ROLE_AUX = 6           # plain stream of the shared auxiliary sequence
ROLE_COND_GIVEN_AUX = 7  # conditional stream given the auxiliary sequence


class StreamFormatError(ValueError):
    """Malformed container: bad magic, version, mode, or inconsistent fields."""


class PointerRangeError(StreamFormatError):
    """A phrase pointer referenced a phrase that does not exist yet."""


class ModeMismatchError(StreamFormatError):
    """Container mode does not match the requested decode operation."""


class SideInfoMismatchError(ValueError):
    """Side information handed to the decoder differs from the encoder's."""


class BudgetExceededError(RuntimeError):
    """An enumeration or search exceeded its configured budget."""


class InfeasibleError(ValueError):
    """No solution exists under the given constraints."""


@dataclass
class Bitstream:
    """A decoded or to-be-serialized leaf container."""

    mode: int
    n: int
    alphabet: Tuple[str, ...]
    phrase_count: int
    last_incomplete: bool
    payload: bytes
    payload_bits: Optional[int] = None  # exact when produced by an encoder
    side_checksum: Optional[int] = None  # conditional streams only
    dict_hash: Optional[int] = None      # conditional streams only

    def to_bytes(self) -> bytes:
        if self.mode not in (MODE_LZ, MODE_COND):
            raise StreamFormatError(f"not a leaf mode: {self.mode}")
        out = bytearray()
        out += MAGIC
        out += struct.pack(">BBQ", VERSION, self.mode, self.n)
        out += struct.pack(">I", len(self.alphabet))
        for sym in self.alphabet:
            enc = sym.encode("utf-8")
            out += struct.pack(">H", len(enc))
            out += enc
        if self.mode == MODE_COND:
            if self.side_checksum is None or self.dict_hash is None:
                raise StreamFormatError("conditional stream needs checksum and dict hash")
            out += struct.pack(">Q", self.side_checksum)
        out += struct.pack(">QB", self.phrase_count, 1 if self.last_incomplete else 0)
        out += self.payload
        if self.mode == MODE_COND:
            out += struct.pack(">Q", self.dict_hash)
        return bytes(out)

    @classmethod
    def from_bytes(cls, raw: bytes) -> "Bitstream":
        mode, n, alphabet, pos = _parse_leaf_header(raw)
        side_checksum = None
        if mode == MODE_COND:
            if pos + 8 > len(raw):
                raise TruncatedStreamError("truncated side-info checksum")
            (side_checksum,) = struct.unpack_from(">Q", raw, pos)
            pos += 8
        if pos + 9 > len(raw):
            raise TruncatedStreamError("truncated phrase-count block")
        phrase_count, flags = struct.unpack_from(">QB", raw, pos)
        pos += 9
        if flags > 1:
            raise StreamFormatError(f"unknown flag bits: {flags:#x}")
        dict_hash = None
        end = len(raw)
        if mode == MODE_COND:
            if end - pos < 8:
                raise TruncatedStreamError("truncated dictionary-hash trailer")
            (dict_hash,) = struct.unpack_from(">Q", raw, end - 8)
            end -= 8
        return cls(
            mode=mode,
            n=n,
            alphabet=alphabet,
            phrase_count=phrase_count,
            last_incomplete=bool(flags & 1),
            payload=raw[pos:end],
            payload_bits=None,
            side_checksum=side_checksum,
            dict_hash=dict_hash,
        )


def _parse_common_header(raw: bytes) -> Tuple[int, int, Tuple[str, ...], int]:
    """Returns (mode, n, alphabet_symbols, offset past the alphabet block)."""
    if len(raw) < 4 or raw[:4] != MAGIC:
        raise StreamFormatError("bad magic")
    if len(raw) < 4 + 2 + 8 + 4:
        raise TruncatedStreamError("truncated header")
    version, mode = raw[4], raw[5]
    if version != VERSION:
        raise StreamFormatError(f"unsupported version: {version}")
    if mode not in MODE_NAMES:
        raise StreamFormatError(f"unknown mode byte: {mode}")
    (n,) = struct.unpack_from(">Q", raw, 6)
    (count,) = struct.unpack_from(">I", raw, 14)
    pos = 18
    symbols = []
    for _ in range(count):
        if pos + 2 > len(raw):
            raise TruncatedStreamError("truncated alphabet block")
        (slen,) = struct.unpack_from(">H", raw, pos)
        pos += 2
        if pos + slen > len(raw):
            raise TruncatedStreamError("truncated alphabet symbol")
        symbols.append(raw[pos:pos + slen].decode("utf-8"))
        pos += slen
    if len(set(symbols)) != len(symbols):
        raise StreamFormatError("duplicate alphabet symbols")
    return mode, n, tuple(symbols), pos


def _parse_leaf_header(raw: bytes) -> Tuple[int, int, Tuple[str, ...], int]:
    mode, n, alphabet, pos = _parse_common_header(raw)
    if mode not in (MODE_LZ, MODE_COND):
        raise ModeMismatchError(f"expected a leaf container, got {MODE_NAMES[mode]}")
    if not alphabet:
        raise StreamFormatError("leaf container with empty alphabet")
    return mode, n, alphabet, pos


def leaf_header_length(raw: bytes) -> int:
    """Byte offset where the bit-packed payload starts in a leaf container."""
    mode, _, _, pos = _parse_leaf_header(raw)
    if mode == MODE_COND:
        pos += 8  # side-info checksum
    return pos + 9  # phrase count + flags


@dataclass
class Segment:
    role: int
    bit_length: int
    data: bytes = field(repr=False)


def pack_segments(mode: int, n: int, segments: Seq[Segment]) -> bytes:
    if mode not in (MODE_SR, MODE_MD1, MODE_MD2):
        raise StreamFormatError(f"not a wrapper mode: {mode}")
    out = bytearray()
    out += MAGIC
    out += struct.pack(">BBQ", VERSION, mode, n)
    out += struct.pack(">I", 0)  # no alphabet block on wrappers
    out += struct.pack(">QB", len(segments), 0)
    for seg in segments:
        out += struct.pack(">BQQ", seg.role, len(seg.data), seg.bit_length)
    for seg in segments:
        out += seg.data
    return bytes(out)


def unpack_segments(raw: bytes, expect_mode: Optional[int] = None) -> Tuple[int, int, Tuple[Segment, ...]]:
    mode, n, alphabet, pos = _parse_common_header(raw)
    if mode not in (MODE_SR, MODE_MD1, MODE_MD2):
        raise ModeMismatchError(f"expected a wrapper container, got {MODE_NAMES[mode]}")
    if expect_mode is not None and mode != expect_mode:
        raise ModeMismatchError(
            f"expected {MODE_NAMES[expect_mode]} container, got {MODE_NAMES[mode]}")
    if alphabet:
        raise StreamFormatError("wrapper container with nonempty alphabet block")
    if pos + 9 > len(raw):
        raise TruncatedStreamError("truncated segment count")
    count, flags = struct.unpack_from(">QB", raw, pos)
    pos += 9
    if flags:
        raise StreamFormatError(f"unknown flag bits: {flags:#x}")
    entries = []
    for _ in range(count):
        if pos + 17 > len(raw):
            raise TruncatedStreamError("truncated segment directory")
        role, blen, bits = struct.unpack_from(">BQQ", raw, pos)
        pos += 17
        entries.append((role, blen, bits))
    segments = []
    for role, blen, bits in entries:
        if pos + blen > len(raw):
            raise TruncatedStreamError("truncated segment data")
        segments.append(Segment(role=role, bit_length=bits, data=raw[pos:pos + blen]))
        pos += blen
    if pos != len(raw):
        raise StreamFormatError("trailing bytes after last segment")
    return mode, n, tuple(segments)


def find_segment(segments: Seq[Segment], role: int) -> Optional[Segment]:
    for seg in segments:
        if seg.role == role:
            return seg
    return None


def split_leaf(raw: bytes, payload_bits: int, fraction: float) -> Tuple[bytes, bytes, int, int]:
    """Split a leaf container's bytes for two-description sharing.

    Part A is the header plus the first ceil(fraction * payload_bytes) payload
    bytes; part B is everything after.  Concatenating the parts restores the
    container byte for byte.  Returns (part_a, part_b, bits_a, bits_b) where
    the bit counts attribute the payload bits (never the padding or trailer)
    exactly once.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"share fraction out of range: {fraction}")
    hdr = leaf_header_length(raw)
    mode = raw[5]
    trailer = 8 if mode == MODE_COND else 0
    payload_bytes = len(raw) - hdr - trailer
    if payload_bytes < 0:
        raise StreamFormatError("container shorter than its header")
    if payload_bits > payload_bytes * 8:
        raise ValueError("payload bit count exceeds payload bytes")
    k = min(payload_bytes, _ceil_frac(fraction, payload_bytes))
    cut = hdr + k
    if k == payload_bytes:
        cut = len(raw)  # part A keeps the trailer when it takes the whole payload
    part_a = raw[:cut]
    part_b = raw[cut:]
    bits_a = min(payload_bits, 8 * k)
    bits_b = payload_bits - bits_a
    return part_a, part_b, bits_a, bits_b


def _ceil_frac(fraction: float, total: int) -> int:
    exact = fraction * total
    k = int(exact)
    if exact > k:
        k += 1
    return k
