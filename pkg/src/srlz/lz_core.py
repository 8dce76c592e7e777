"""Incremental parsing of individual sequences and the matching stream codec.

The parse splits a sequence into phrases, each the shortest prefix of the
remaining input that has not appeared as a phrase before; a final partial
phrase is counted.  The normalized complexity of a sequence is
c * log2(c) / n where c is the phrase count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as _iproduct
from typing import Iterable, List, Optional, Sequence as Seq, Tuple, Union

from . import bounds
from .bitio import BitReader, BitWriter
from .container import (
    MODE_LZ,
    Bitstream,
    ModeMismatchError,
    PointerRangeError,
    StreamFormatError,
)


class Alphabet:
    """Ordered set of distinct symbol names; order fixes every index and code."""

    __slots__ = ("symbols", "index")

    def __init__(self, symbols: Iterable[str]) -> None:
        self.symbols: Tuple[str, ...] = tuple(symbols)
        if not self.symbols:
            raise ValueError("alphabet needs at least one symbol")
        self.index = {s: i for i, s in enumerate(self.symbols)}
        if len(self.index) != len(self.symbols):
            raise ValueError("duplicate alphabet symbols")

    @property
    def size(self) -> int:
        return len(self.symbols)

    @property
    def bits_per_symbol(self) -> int:
        """Width of a fixed-length code for this alphabet (0 when unary)."""
        return (len(self.symbols) - 1).bit_length()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        if self.size <= 8:
            return f"Alphabet({list(self.symbols)!r})"
        return f"Alphabet(size={self.size})"

    @classmethod
    def of_size(cls, size: int) -> "Alphabet":
        """Canonical alphabet 0..size-1 with decimal symbol names."""
        return cls(tuple(str(i) for i in range(size)))


BINARY = Alphabet(("0", "1"))


class Sequence:
    """Immutable sequence of symbol indices over a fixed alphabet."""

    __slots__ = ("alphabet", "data")

    def __init__(self, alphabet: Alphabet, data: Iterable[int]) -> None:
        self.alphabet = alphabet
        self.data: Tuple[int, ...] = tuple(data)
        size = alphabet.size
        if any(not (0 <= v < size) for v in self.data):
            raise ValueError("symbol index out of range for alphabet")

    @classmethod
    def from_symbols(cls, alphabet: Alphabet, symbols: Iterable[str]) -> "Sequence":
        idx = alphabet.index
        return cls(alphabet, (idx[s] for s in symbols))

    @classmethod
    def from_text(cls, text: str, alphabet: Optional[Alphabet] = None) -> "Sequence":
        """One character per symbol; alphabet defaults to sorted distinct chars."""
        if alphabet is None:
            alphabet = Alphabet(sorted(set(text))) if text else BINARY
        return cls.from_symbols(alphabet, text)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Sequence":
        """Alphabet = occurring byte values ascending, named by decimal value."""
        values = sorted(set(data))
        if not values:
            return cls(BINARY, ())
        alphabet = Alphabet(tuple(str(v) for v in values))
        remap = {v: i for i, v in enumerate(values)}
        return cls(alphabet, (remap[b] for b in data))

    def to_bytes(self) -> bytes:
        return bytes(int(self.alphabet.symbols[v]) for v in self.data)

    def symbols(self) -> List[str]:
        syms = self.alphabet.symbols
        return [syms[v] for v in self.data]

    @property
    def n(self) -> int:
        return len(self.data)

    def __len__(self) -> int:
        return len(self.data)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Sequence)
            and self.alphabet == other.alphabet
            and self.data == other.data
        )

    def __hash__(self) -> int:
        return hash((self.alphabet, self.data))

    def __repr__(self) -> str:
        if self.n <= 32 and all(len(s) == 1 for s in self.alphabet.symbols):
            return f"Sequence({''.join(self.symbols())!r})"
        return f"Sequence(n={self.n}, alphabet={self.alphabet!r})"


@lru_cache(maxsize=64)
def _product_alphabet(symbol_sets: Tuple[Tuple[str, ...], ...]) -> Alphabet:
    names = tuple("|".join(combo) for combo in _iproduct(*symbol_sets))
    return Alphabet(names)


def product_alphabet(alphabets: Seq[Alphabet]) -> Alphabet:
    return _product_alphabet(tuple(a.symbols for a in alphabets))


def product_sequence(seqs: Seq[Sequence]) -> Sequence:
    """Zip sequences into one over the product alphabet, first listed most significant."""
    if not seqs:
        raise ValueError("empty sequence list")
    n = seqs[0].n
    if any(s.n != n for s in seqs):
        raise ValueError("sequences must have equal length")
    alphabet = product_alphabet([s.alphabet for s in seqs])
    sizes = [s.alphabet.size for s in seqs]
    data = [0] * n
    for s, size in zip(seqs, sizes):
        sd = s.data
        for i in range(n):
            data[i] = data[i] * size + sd[i]
    return Sequence(alphabet, data)


@dataclass(frozen=True)
class ParseResult:
    phrases: Tuple[Tuple[int, int], ...]  # (start, length) per phrase
    c: int
    is_last_incomplete: bool
    rho_lz: float
    code_len_bound: float
    parents: Tuple[int, ...]  # trie node extended by each phrase (0 = root)


def _parse_raw(data: Seq[int]) -> Tuple[List[Tuple[int, int]], List[int], bool]:
    children = {}
    phrases: List[Tuple[int, int]] = []
    parents: List[int] = []
    node = 0
    next_id = 1
    start = 0
    for i, sym in enumerate(data):
        key = (node, sym)
        child = children.get(key)
        if child is None:
            children[key] = next_id
            next_id += 1
            phrases.append((start, i - start + 1))
            parents.append(node)
            node = 0
            start = i + 1
        else:
            node = child
    incomplete = node != 0
    if incomplete:
        phrases.append((start, len(data) - start))
        parents.append(node)
    return phrases, parents, incomplete


def _phrase_count_raw(data: Seq[int]) -> int:
    """Phrase count only; same walk as _parse_raw without bookkeeping."""
    children = {}
    node = 0
    next_id = 1
    c = 0
    get = children.get
    for sym in data:
        key = (node, sym)
        child = get(key)
        if child is None:
            children[key] = next_id
            next_id += 1
            c += 1
            node = 0
        else:
            node = child
    if node != 0:
        c += 1
    return c


def rho_from_count(c: int, n: int) -> float:
    if n == 0 or c <= 1:
        return 0.0
    return c * math.log2(c) / n


def parse(seq: Sequence) -> ParseResult:
    phrases, parents, incomplete = _parse_raw(seq.data)
    n = seq.n
    c = len(phrases)
    rho = rho_from_count(c, n)
    if n == 0:
        bound = 0.0
    elif n == 1:
        bound = math.inf  # the 1/log2(n) slack term diverges
    else:
        bound = (c * math.log2(c) if c > 1 else 0.0) + n * bounds.eps_slack(n, seq.alphabet.size)
    return ParseResult(
        phrases=tuple(phrases),
        c=c,
        is_last_incomplete=incomplete,
        rho_lz=rho,
        code_len_bound=bound,
        parents=tuple(parents),
    )


def rho_lz(seq: Sequence) -> float:
    return rho_from_count(_phrase_count_raw(seq.data), seq.n)


def lz_encode(seq: Sequence) -> Bitstream:
    """Serialize the incremental parse: per phrase a back pointer plus, for
    complete phrases, the fixed-width innovation symbol."""
    pr = parse(seq)
    data = seq.data
    symw = seq.alphabet.bits_per_symbol
    w = BitWriter()
    c = pr.c
    for j in range(1, c + 1):
        start, length = pr.phrases[j - 1]
        w.write(pr.parents[j - 1], (j - 1).bit_length())
        if j < c or not pr.is_last_incomplete:
            w.write(data[start + length - 1], symw)
    return Bitstream(
        mode=MODE_LZ,
        n=seq.n,
        alphabet=seq.alphabet.symbols,
        phrase_count=c,
        last_incomplete=pr.is_last_incomplete,
        payload=w.to_bytes(),
        payload_bits=w.bit_length,
    )


def lz_decode(stream: Union[Bitstream, bytes]) -> Sequence:
    if isinstance(stream, (bytes, bytearray)):
        stream = Bitstream.from_bytes(bytes(stream))
    if stream.mode != MODE_LZ:
        raise ModeMismatchError("not a plain stream container")
    alphabet = Alphabet(stream.alphabet)
    size = alphabet.size
    symw = alphabet.bits_per_symbol
    r = BitReader(stream.payload)
    n = stream.n
    c = stream.phrase_count
    phrase_data: List[Tuple[int, ...]] = [()]
    out: List[int] = []
    for j in range(1, c + 1):
        ptr = r.read((j - 1).bit_length())
        if ptr >= j:
            raise PointerRangeError(f"phrase {j} points to undefined phrase {ptr}")
        if j == c and stream.last_incomplete:
            p = phrase_data[ptr]
            if len(out) + len(p) != n:
                raise StreamFormatError("incomplete last phrase length mismatch")
            out.extend(p)
        else:
            s = r.read(symw)
            if s >= size:
                raise StreamFormatError(f"symbol index {s} out of range")
            p = phrase_data[ptr] + (s,)
            phrase_data.append(p)
            out.extend(p)
        if len(out) > n:
            raise StreamFormatError("decoded length exceeds header length")
    if len(out) != n:
        raise StreamFormatError("decoded length differs from header length")
    return Sequence(alphabet, out)
