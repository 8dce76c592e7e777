"""MSB-first bit packing and the FNV-1a 64 hash used for stream checksums."""

from __future__ import annotations

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3
_FNV_MASK = 0xFFFFFFFFFFFFFFFF


def fnv1a64(data: bytes, h: int = FNV64_OFFSET) -> int:
    """FNV-1a 64 of `data`, optionally continuing from a previous value."""
    for b in data:
        h = ((h ^ b) * FNV64_PRIME) & _FNV_MASK
    return h


class TruncatedStreamError(ValueError):
    """Raised when a read runs past the end of the bitstream."""


class BitWriter:
    """Accumulates fixed-width unsigned fields, first-written bit most significant."""

    def __init__(self) -> None:
        self._acc = 0
        self._nbits = 0

    def write(self, value: int, width: int) -> None:
        if width < 0 or value < 0 or value >> width:
            raise ValueError(f"value {value} does not fit in {width} bits")
        self._acc = (self._acc << width) | value
        self._nbits += width

    @property
    def bit_length(self) -> int:
        return self._nbits

    def to_bytes(self) -> bytes:
        """Pack to bytes, zero-padding the tail to a byte boundary."""
        pad = -self._nbits % 8
        return ((self._acc << pad)).to_bytes((self._nbits + pad) // 8, "big")


class BitReader:
    """Reads fixed-width unsigned fields from bytes produced by BitWriter."""

    def __init__(self, data: bytes) -> None:
        self._val = int.from_bytes(data, "big")
        self._total = len(data) * 8
        self._pos = 0

    def read(self, width: int) -> int:
        if width < 0:
            raise ValueError("negative width")
        if self._pos + width > self._total:
            raise TruncatedStreamError("unexpected end of bitstream")
        self._pos += width
        return (self._val >> (self._total - self._pos)) & ((1 << width) - 1)

    @property
    def bits_read(self) -> int:
        return self._pos

    @property
    def bits_left(self) -> int:
        return self._total - self._pos
