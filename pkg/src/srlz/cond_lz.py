"""Joint incremental parsing and the conditional stream codec.

The pair sequence (primary_t, secondary_t) is parsed with the same
shortest-new-phrase rule as the plain parse, over the product alphabet.  The
conditional complexity charges each distinct primary phrase string for the
number of joint phrases sharing it: rho_cond = sum(c_l * log2 c_l) / n.

The conditional codec assumes the decoder already has the primary sequence:
at each step only the children of the current dictionary node whose primary
component matches the known next primary symbol are distinguishable, so the
stream spends ceil(log2(m+1)) bits to pick among those m children or signal
an innovation, and innovation steps add the secondary symbol.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import List, Optional, Sequence as Seq, Tuple, Union

from .bitio import BitReader, BitWriter, FNV64_OFFSET, FNV64_PRIME, fnv1a64
from .container import (
    MODE_COND,
    Bitstream,
    ModeMismatchError,
    SideInfoMismatchError,
    StreamFormatError,
)
from .lz_core import Alphabet, Sequence, product_sequence, rho_from_count

SideInfo = Union[Sequence, Tuple[Sequence, ...], List[Sequence]]

_FNV_MASK = 0xFFFFFFFFFFFFFFFF


def as_side_info(primary: SideInfo) -> Sequence:
    """Tuple side information is packed into one product-alphabet sequence."""
    if isinstance(primary, Sequence):
        return primary
    return product_sequence(tuple(primary))


def side_info_checksum(primary: SideInfo) -> int:
    """Checksum over the canonical encoding (alphabet size, n, indices)."""
    seq = as_side_info(primary)
    h = fnv1a64(struct.pack(">IQ", seq.alphabet.size, seq.n))
    return fnv1a64(b"".join(struct.pack(">I", v) for v in seq.data), h)


@dataclass(frozen=True)
class JointParseResult:
    phrases: Tuple[Tuple[int, int], ...]  # (start, length) per joint phrase
    c_joint: int
    c_prime: int                  # distinct primary phrase strings
    c_l: Tuple[int, ...]          # joint phrases per distinct primary phrase
    rho_cond: float
    rho_joint: float
    is_last_incomplete: bool


def _joint_counts_raw(pd: Seq[int], sd: Seq[int]):
    """Shared walk: returns (phrases, c_l in first-marking order, incomplete)."""
    children = {}
    pnodes = {}
    pcounts: dict = {}
    order: List[int] = []
    phrases: List[Tuple[int, int]] = []
    node = 0
    pnode = 0
    next_id = 1
    pnext = 1
    start = 0
    for i in range(len(pd)):
        a = pd[i]
        b = sd[i]
        pkey = (pnode, a)
        pn = pnodes.get(pkey)
        if pn is None:
            pnodes[pkey] = pn = pnext
            pnext += 1
        pnode = pn
        key = (node, a, b)
        child = children.get(key)
        if child is None:
            children[key] = next_id
            next_id += 1
            phrases.append((start, i - start + 1))
            cnt = pcounts.get(pnode)
            if cnt is None:
                pcounts[pnode] = 1
                order.append(pnode)
            else:
                pcounts[pnode] = cnt + 1
            node = 0
            pnode = 0
            start = i + 1
        else:
            node = child
    incomplete = node != 0
    if incomplete:
        phrases.append((start, len(pd) - start))
        cnt = pcounts.get(pnode)
        if cnt is None:
            pcounts[pnode] = 1
            order.append(pnode)
        else:
            pcounts[pnode] = cnt + 1
    return phrases, [pcounts[p] for p in order], incomplete


def joint_parse(primary: SideInfo, secondary: Sequence) -> JointParseResult:
    prim = as_side_info(primary)
    if prim.n != secondary.n:
        raise ValueError("primary and secondary lengths differ")
    phrases, c_l, incomplete = _joint_counts_raw(prim.data, secondary.data)
    n = secondary.n
    c_joint = len(phrases)
    rho_c = sum(cl * math.log2(cl) for cl in c_l) / n if n else 0.0
    return JointParseResult(
        phrases=tuple(phrases),
        c_joint=c_joint,
        c_prime=len(c_l),
        c_l=tuple(c_l),
        rho_cond=rho_c,
        rho_joint=rho_from_count(c_joint, n),
        is_last_incomplete=incomplete,
    )


def rho_cond(secondary: Sequence, primary: SideInfo) -> float:
    return joint_parse(primary, secondary).rho_cond


def _hash_node(h: int, parent: int, a: int, b: int) -> int:
    for byte in struct.pack(">III", parent, a, b):
        h = ((h ^ byte) * FNV64_PRIME) & _FNV_MASK
    return h


def cond_encode(secondary: Sequence, primary: SideInfo) -> Bitstream:
    prim = as_side_info(primary)
    if prim.n != secondary.n:
        raise ValueError("primary and secondary lengths differ")
    pd = prim.data
    sd = secondary.data
    n = secondary.n
    secw = secondary.alphabet.bits_per_symbol
    by_a: dict = {}  # (node, a) -> list of (b, child_id) in creation order
    w = BitWriter()
    dhash = FNV64_OFFSET
    node = 0
    next_id = 1
    c = 0
    for i in range(n):
        a = pd[i]
        b = sd[i]
        key = (node, a)
        lst = by_a.get(key)
        m = len(lst) if lst else 0
        width = m.bit_length()  # m+1 choices: children 0..m-1 or innovate
        hit = -1
        if lst:
            for j, (bb, ch) in enumerate(lst):
                if bb == b:
                    hit = j
                    node = ch
                    break
        if hit >= 0:
            w.write(hit, width)
        else:
            w.write(m, width)
            w.write(b, secw)
            if lst is None:
                by_a[key] = lst = []
            lst.append((b, next_id))
            dhash = _hash_node(dhash, node, a, b)
            next_id += 1
            node = 0
            c += 1
    incomplete = node != 0
    if incomplete:
        c += 1
    return Bitstream(
        mode=MODE_COND,
        n=n,
        alphabet=secondary.alphabet.symbols,
        phrase_count=c,
        last_incomplete=incomplete,
        payload=w.to_bytes(),
        payload_bits=w.bit_length,
        side_checksum=side_info_checksum(prim),
        dict_hash=dhash,
    )


def cond_decode(stream: Union[Bitstream, bytes], primary: SideInfo) -> Sequence:
    if isinstance(stream, (bytes, bytearray)):
        stream = Bitstream.from_bytes(bytes(stream))
    if stream.mode != MODE_COND:
        raise ModeMismatchError("not a conditional stream container")
    prim = as_side_info(primary)
    if prim.n != stream.n:
        raise SideInfoMismatchError(
            f"side information has length {prim.n}, stream expects {stream.n}")
    if side_info_checksum(prim) != stream.side_checksum:
        raise SideInfoMismatchError("side information checksum mismatch")
    alphabet = Alphabet(stream.alphabet)
    size = alphabet.size
    secw = alphabet.bits_per_symbol
    r = BitReader(stream.payload)
    pd = prim.data
    by_a: dict = {}
    out: List[int] = []
    dhash = FNV64_OFFSET
    node = 0
    next_id = 1
    c = 0
    for i in range(stream.n):
        a = pd[i]
        key = (node, a)
        lst = by_a.get(key)
        m = len(lst) if lst else 0
        idx = r.read(m.bit_length())
        if idx < m:
            b, node = lst[idx]
            out.append(b)
        elif idx == m:
            b = r.read(secw)
            if b >= size:
                raise StreamFormatError(f"symbol index {b} out of range")
            out.append(b)
            if lst is None:
                by_a[key] = lst = []
            lst.append((b, next_id))
            dhash = _hash_node(dhash, node, a, b)
            next_id += 1
            node = 0
            c += 1
        else:
            raise StreamFormatError("child index out of range")
    if node != 0:
        c += 1
    if c != stream.phrase_count or (node != 0) != stream.last_incomplete:
        raise StreamFormatError("phrase accounting mismatch")
    if dhash != stream.dict_hash:
        raise SideInfoMismatchError("dictionary hash mismatch")
    return Sequence(alphabet, out)
