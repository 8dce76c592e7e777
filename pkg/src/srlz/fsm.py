"""Two-stage finite-state encoders: simulation, losslessness certification,
the generalized Kraft check, and the converse bound harness.

An encoder has a first stage (f1, g1) reading the coarse reproduction and a
second stage (f2, g2) reading both reproductions, each a finite-state machine
with at most q states emitting binary strings (possibly empty).  It is
information lossless when, for every length k, the start state, the emitted
output, and the final state determine the stage-1 input (and, jointly with
the stage-2 data, the input pair).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence as Seq, Tuple, Union

from . import bounds
from .cond_lz import joint_parse
from .container import BudgetExceededError
from .lz_core import Alphabet, Sequence, parse

_OUT_RE = re.compile(r"^[01]*$")


@dataclass(eq=False)
class FsmEncoder:
    primary_alphabet: Alphabet
    secondary_alphabet: Alphabet
    states_s: Tuple[str, ...]
    states_z: Tuple[str, ...]
    f1: Dict[Tuple[int, int], str]       # (state, primary symbol) -> bits
    g1: Dict[Tuple[int, int], int]       # (state, primary symbol) -> next state
    f2: Dict[Tuple[int, int, int], str]  # (state, primary, secondary) -> bits
    g2: Dict[Tuple[int, int, int], int]
    s1: int = 0
    z1: int = 0
    q: int = 0  # state budget; defaults to max(|S|, |Z|)

    def __post_init__(self) -> None:
        ns, nz = len(self.states_s), len(self.states_z)
        if ns == 0 or nz == 0:
            raise ValueError("state sets must be nonempty")
        if len(set(self.states_s)) != ns or len(set(self.states_z)) != nz:
            raise ValueError("duplicate state names")
        if self.q == 0:
            self.q = max(ns, nz)
        if ns > self.q or nz > self.q:
            raise ValueError(f"state budget {self.q} exceeded ({ns}, {nz})")
        if not (0 <= self.s1 < ns and 0 <= self.z1 < nz):
            raise ValueError("initial state out of range")
        beta = self.primary_alphabet.size
        gamma = self.secondary_alphabet.size
        for s in range(ns):
            for a in range(beta):
                if (s, a) not in self.f1 or (s, a) not in self.g1:
                    raise ValueError(f"f1/g1 not total at state {self.states_s[s]}")
                if not _OUT_RE.match(self.f1[(s, a)]):
                    raise ValueError("f1 outputs must be binary strings")
                if not 0 <= self.g1[(s, a)] < ns:
                    raise ValueError("g1 target out of range")
        for z in range(nz):
            for a in range(beta):
                for b in range(gamma):
                    if (z, a, b) not in self.f2 or (z, a, b) not in self.g2:
                        raise ValueError(f"f2/g2 not total at state {self.states_z[z]}")
                    if not _OUT_RE.match(self.f2[(z, a, b)]):
                        raise ValueError("f2 outputs must be binary strings")
                    if not 0 <= self.g2[(z, a, b)] < nz:
                        raise ValueError("g2 target out of range")

    @property
    def beta(self) -> int:
        return self.primary_alphabet.size

    @property
    def gamma(self) -> int:
        return self.secondary_alphabet.size


@dataclass(frozen=True)
class EncodingTrace:
    outputs_u: Tuple[str, ...]
    outputs_v: Tuple[str, ...]
    states_s: Tuple[int, ...]
    states_z: Tuple[int, ...]
    bits_u: int
    bits_v: int
    rho1: float
    rho12: float


def run(encoder: FsmEncoder, primary: Sequence, secondary: Sequence) -> EncodingTrace:
    if primary.n != secondary.n:
        raise ValueError("primary and secondary lengths differ")
    if primary.alphabet != encoder.primary_alphabet:
        raise ValueError("primary alphabet mismatch")
    if secondary.alphabet != encoder.secondary_alphabet:
        raise ValueError("secondary alphabet mismatch")
    n = primary.n
    if n == 0:
        raise ValueError("empty input")
    f1, g1, f2, g2 = encoder.f1, encoder.g1, encoder.f2, encoder.g2
    s, z = encoder.s1, encoder.z1
    us: List[str] = []
    vs: List[str] = []
    ss = [s]
    zs = [z]
    lu = lv = 0
    for a, b in zip(primary.data, secondary.data):
        out = f1[(s, a)]
        us.append(out)
        lu += len(out)
        s = g1[(s, a)]
        ss.append(s)
        out = f2[(z, a, b)]
        vs.append(out)
        lv += len(out)
        z = g2[(z, a, b)]
        zs.append(z)
    return EncodingTrace(
        outputs_u=tuple(us),
        outputs_v=tuple(vs),
        states_s=tuple(ss),
        states_z=tuple(zs),
        bits_u=lu,
        bits_v=lv,
        rho1=lu / n,
        rho12=(lu + lv) / n,
    )


def _walk1(encoder: FsmEncoder, s: int, symbols: Seq[int]) -> Tuple[str, int]:
    parts = []
    for a in symbols:
        parts.append(encoder.f1[(s, a)])
        s = encoder.g1[(s, a)]
    return "".join(parts), s


def _walk2(encoder: FsmEncoder, z: int, pairs: Seq[Tuple[int, int]]) -> Tuple[str, int]:
    parts = []
    for a, b in pairs:
        parts.append(encoder.f2[(z, a, b)])
        z = encoder.g2[(z, a, b)]
    return "".join(parts), z


@dataclass(frozen=True)
class LosslessnessReport:
    passed: bool
    depth_certified: int
    from_all_states: bool
    counterexample: Optional[dict] = None


def is_information_lossless(encoder: FsmEncoder, k_max: int = 8,
                            from_all_states: bool = True,
                            pair_budget: int = 10 ** 7) -> LosslessnessReport:
    """Brute-force certificate up to depth k_max.

    Stage 1: for each start state and each k <= k_max, the pair (emitted bits,
    final state) must determine the k primary symbols.  Stage 2: jointly, the
    quadruple (stage-1 bits, stage-1 final state, stage-2 bits, stage-2 final
    state) must determine the symbol pair sequence.
    """
    beta, gamma = encoder.beta, encoder.gamma
    if (beta * gamma) ** k_max > pair_budget:
        raise BudgetExceededError(
            f"(beta*gamma)^k_max = {(beta * gamma) ** k_max} exceeds budget {pair_budget}")
    starts_s = range(len(encoder.states_s)) if from_all_states else [encoder.s1]
    starts_z = range(len(encoder.states_z)) if from_all_states else [encoder.z1]
    # stage 1
    for s0 in starts_s:
        level: List[Tuple[Tuple[int, ...], str, int]] = [((), "", s0)]
        for k in range(1, k_max + 1):
            nxt = []
            seen: Dict[Tuple[str, int], Tuple[int, ...]] = {}
            for syms, out, s in level:
                for a in range(beta):
                    out2 = out + encoder.f1[(s, a)]
                    s2 = encoder.g1[(s, a)]
                    syms2 = syms + (a,)
                    key = (out2, s2)
                    other = seen.get(key)
                    if other is not None:
                        return LosslessnessReport(
                            passed=False, depth_certified=k - 1,
                            from_all_states=from_all_states,
                            counterexample={
                                "stage": 1, "k": k, "start_state": encoder.states_s[s0],
                                "inputs": [_names(encoder.primary_alphabet, other),
                                           _names(encoder.primary_alphabet, syms2)],
                                "output": out2,
                                "final_state": encoder.states_s[s2],
                            })
                    seen[key] = syms2
                    nxt.append((syms2, out2, s2))
            level = nxt
    # stage 2 (joint)
    for s0 in starts_s:
        for z0 in starts_z:
            jlevel: List[Tuple[Tuple[Tuple[int, int], ...], str, int, str, int]] = [
                ((), "", s0, "", z0)]
            for k in range(1, k_max + 1):
                nxt2 = []
                seen2: Dict[Tuple[str, int, str, int], tuple] = {}
                for pairs, uout, s, vout, z in jlevel:
                    for a in range(beta):
                        u2 = uout + encoder.f1[(s, a)]
                        s2 = encoder.g1[(s, a)]
                        for b in range(gamma):
                            v2 = vout + encoder.f2[(z, a, b)]
                            z2 = encoder.g2[(z, a, b)]
                            pairs2 = pairs + ((a, b),)
                            key = (u2, s2, v2, z2)
                            other = seen2.get(key)
                            if other is not None:
                                return LosslessnessReport(
                                    passed=False, depth_certified=k - 1,
                                    from_all_states=from_all_states,
                                    counterexample={
                                        "stage": 2, "k": k,
                                        "start_states": [encoder.states_s[s0],
                                                         encoder.states_z[z0]],
                                        "inputs": [_pair_names(encoder, other),
                                                   _pair_names(encoder, pairs2)],
                                        "outputs": [u2, v2],
                                    })
                            seen2[key] = pairs2
                            nxt2.append((pairs2, u2, s2, v2, z2))
                jlevel = nxt2
    return LosslessnessReport(passed=True, depth_certified=k_max,
                              from_all_states=from_all_states)


def _names(alphabet: Alphabet, idxs: Seq[int]) -> List[str]:
    return [alphabet.symbols[i] for i in idxs]


def _pair_names(encoder: FsmEncoder, pairs) -> List[Tuple[str, str]]:
    pa, sa = encoder.primary_alphabet.symbols, encoder.secondary_alphabet.symbols
    return [(pa[a], sa[b]) for a, b in pairs]


def kraft_check(encoder: FsmEncoder, block_len: int, q: Optional[int] = None,
                pair_budget: int = 10 ** 7, tol: float = 1e-12) -> dict:
    """Generalized Kraft sum over all pairs of length-l blocks.

    lhs = sum over (xhat^l, xtilde^l) of 2^-(min_s L1 + min_z L2); the budget
    side uses the combined-machine state count: with q states per stage the
    two-stage encoder has q^2 states, and the classical bound for it carries
    (q^2)^2 = q^4.
    """
    beta, gamma = encoder.beta, encoder.gamma
    if (beta * gamma) ** block_len > pair_budget:
        raise BudgetExceededError("block enumeration exceeds budget")
    if q is None:
        q = encoder.q
    ns, nz = len(encoder.states_s), len(encoder.states_z)
    lhs = 0.0
    min_len_seen = None
    for hat in iproduct(range(beta), repeat=block_len):
        l1 = min(len(_walk1(encoder, s, hat)[0]) for s in range(ns))
        for til in iproduct(range(gamma), repeat=block_len):
            pairs = tuple(zip(hat, til))
            l2 = min(len(_walk2(encoder, z, pairs)[0]) for z in range(nz))
            total = l1 + l2
            lhs += 2.0 ** (-total)
            if min_len_seen is None or total < min_len_seen:
                min_len_seen = total
    rhs = bounds.kraft_rhs(q, block_len, beta, gamma)
    return {
        "block_len": block_len,
        "beta": beta,
        "gamma": gamma,
        "q": q,
        "q4": q ** 4,
        "pairs": (beta * gamma) ** block_len,
        "lhs": lhs,
        "rhs": rhs,
        "min_total_len": min_len_seen,
        "holds": lhs <= rhs + tol,
    }


def converse_check(encoder: FsmEncoder, primary: Sequence, secondary: Sequence,
                   k_max: int = 6, eps_mode: Union[str, float] = "default",
                   tol: float = 1e-12) -> dict:
    """Measure the encoder on a pair and verify the three converse floors.

    (i)   rho1  >= rho_lz(primary) - delta1(q, n)
    (ii)  rho12 >= rho_lz(primary) + rho_cond - delta2(q, n)
    (iii) rho1  >= (c+q^2)/n * log2((c+q^2)/(4q^2)) + 2q^2/n

    Not applicable (reported, not raised) when the losslessness certificate
    fails: a lossy machine can beat the floors.
    """
    cert = is_information_lossless(encoder, k_max=k_max)
    n = primary.n
    q = encoder.q
    report: dict = {
        "n": n,
        "q": q,
        "beta": encoder.beta,
        "gamma": encoder.gamma,
        "k_max": k_max,
        "lossless": cert.passed,
        "depth_certified": cert.depth_certified,
        "applicable": cert.passed,
        "eps_mode": str(eps_mode),
    }
    if not cert.passed:
        report["counterexample"] = cert.counterexample
        return report
    if n < 2:
        raise ValueError("converse check needs n >= 2")
    trace = run(encoder, primary, secondary)
    pr = parse(primary)
    jp = joint_parse(primary, secondary)
    eps_n = bounds.eps_n_value(n, encoder.beta, eps_mode)
    d1 = bounds.delta1(q, n, encoder.beta, eps_n)
    d2, d2_l = bounds.delta2(q, n, encoder.beta, encoder.gamma, eps_n)
    floor3 = bounds.zl78_floor(pr.c, n, q)
    checks = {
        "i": {"lhs": trace.rho1, "rhs": pr.rho_lz - d1,
              "holds": trace.rho1 >= pr.rho_lz - d1 - tol},
        "ii": {"lhs": trace.rho12, "rhs": pr.rho_lz + jp.rho_cond - d2,
               "holds": trace.rho12 >= pr.rho_lz + jp.rho_cond - d2 - tol},
        "iii": {"lhs": trace.rho1, "rhs": floor3,
                "holds": trace.rho1 >= floor3 - tol},
    }
    report.update({
        "eps_n": eps_n,
        "rho1": trace.rho1,
        "rho12": trace.rho12,
        "rho_lz": pr.rho_lz,
        "rho_cond": jp.rho_cond,
        "phrase_count": pr.c,
        "delta1": d1,
        "delta2": d2,
        "delta2_block_len": d2_l,
        "phrase_count_cap": bounds.phrase_count_bound(n, encoder.beta, eps_n),
        "phrase_count_cap_ok": pr.c <= bounds.phrase_count_bound(n, encoder.beta, eps_n),
        "checks": checks,
        "all_hold": all(c["holds"] for c in checks.values()),
    })
    return report


def identity_encoder(primary_alphabet: Alphabet, secondary_alphabet: Alphabet) -> FsmEncoder:
    """One state per stage; fixed-length codes of each symbol."""
    bw = primary_alphabet.bits_per_symbol
    gw = secondary_alphabet.bits_per_symbol
    f1 = {(0, a): format(a, f"0{bw}b") if bw else "" for a in range(primary_alphabet.size)}
    g1 = {(0, a): 0 for a in range(primary_alphabet.size)}
    f2 = {}
    g2 = {}
    for a in range(primary_alphabet.size):
        for b in range(secondary_alphabet.size):
            f2[(0, a, b)] = format(b, f"0{gw}b") if gw else ""
            g2[(0, a, b)] = 0
    return FsmEncoder(primary_alphabet, secondary_alphabet, ("s0",), ("z0",),
                      f1, g1, f2, g2)


# ---------------------------------------------------------------------------
# table file format


def format_fsm_table(encoder: FsmEncoder) -> str:
    """Line-oriented table with sections [S],[Z],[f1],[g1],[f2],[g2],[init],[q].
    The empty output is written as ""."""
    pa, sa = encoder.primary_alphabet.symbols, encoder.secondary_alphabet.symbols
    empty = '""'
    lines = ["[S]"]
    lines += list(encoder.states_s)
    lines.append("[Z]")
    lines += list(encoder.states_z)
    lines.append("[f1]")
    for (s, a), out in sorted(encoder.f1.items()):
        lines.append(f"{encoder.states_s[s]} {pa[a]} {out or empty}")
    lines.append("[g1]")
    for (s, a), t in sorted(encoder.g1.items()):
        lines.append(f"{encoder.states_s[s]} {pa[a]} {encoder.states_s[t]}")
    lines.append("[f2]")
    for (z, a, b), out in sorted(encoder.f2.items()):
        lines.append(f"{encoder.states_z[z]} {pa[a]} {sa[b]} {out or empty}")
    lines.append("[g2]")
    for (z, a, b), t in sorted(encoder.g2.items()):
        lines.append(f"{encoder.states_z[z]} {pa[a]} {sa[b]} {encoder.states_z[t]}")
    lines.append("[init]")
    lines.append(f"{encoder.states_s[encoder.s1]} {encoder.states_z[encoder.z1]}")
    lines.append("[q]")
    lines.append(str(encoder.q))
    return "\n".join(lines) + "\n"


def parse_fsm_table(text: str) -> FsmEncoder:
    sections: Dict[str, List[List[str]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            sections.setdefault(current, [])
            continue
        if current is None:
            raise ValueError(f"line {lineno}: content before any section")
        sections[current].append(line.split())
    for needed in ("S", "Z", "f1", "g1", "f2", "g2", "init"):
        if needed not in sections:
            raise ValueError(f"missing section [{needed}]")
    states_s = tuple(row[0] for row in sections["S"])
    states_z = tuple(row[0] for row in sections["Z"])
    sidx = {name: i for i, name in enumerate(states_s)}
    zidx = {name: i for i, name in enumerate(states_z)}
    prim_syms: List[str] = []
    sec_syms: List[str] = []
    for row in sections["f1"]:
        if len(row) == 3 and row[1] not in prim_syms:
            prim_syms.append(row[1])
    for row in sections["f2"]:
        if len(row) == 4:
            if row[1] not in prim_syms:
                prim_syms.append(row[1])
            if row[2] not in sec_syms:
                sec_syms.append(row[2])
    pa = Alphabet(prim_syms)
    sa = Alphabet(sec_syms)

    def out_field(tok: str) -> str:
        if tok == '""':
            return ""
        if not _OUT_RE.match(tok):
            raise ValueError(f"bad output field: {tok!r}")
        return tok

    f1: Dict[Tuple[int, int], str] = {}
    g1: Dict[Tuple[int, int], int] = {}
    f2: Dict[Tuple[int, int, int], str] = {}
    g2: Dict[Tuple[int, int, int], int] = {}
    for row in sections["f1"]:
        if len(row) != 3:
            raise ValueError(f"bad [f1] row: {row}")
        f1[(sidx[row[0]], pa.index[row[1]])] = out_field(row[2])
    for row in sections["g1"]:
        if len(row) != 3:
            raise ValueError(f"bad [g1] row: {row}")
        g1[(sidx[row[0]], pa.index[row[1]])] = sidx[row[2]]
    for row in sections["f2"]:
        if len(row) != 4:
            raise ValueError(f"bad [f2] row: {row}")
        f2[(zidx[row[0]], pa.index[row[1]], sa.index[row[2]])] = out_field(row[3])
    for row in sections["g2"]:
        if len(row) != 4:
            raise ValueError(f"bad [g2] row: {row}")
        g2[(zidx[row[0]], pa.index[row[1]], sa.index[row[2]])] = zidx[row[3]]
    init = sections["init"]
    if len(init) != 1 or len(init[0]) != 2:
        raise ValueError("[init] needs exactly one line: <s-state> <z-state>")
    q = 0
    if sections.get("q"):
        q = int(sections["q"][0][0])
    return FsmEncoder(pa, sa, states_s, states_z, f1, g1, f2, g2,
                      s1=sidx[init[0][0]], z1=zidx[init[0][1]], q=q)


# ---------------------------------------------------------------------------
# one-state binary family: enumeration and harnesses


def _pairwalk_collision_f1(code: Seq[str], k_max: int, max_out_len: int) -> Optional[int]:
    """Depth of the shallowest same-length collision for a one-state stage-1
    code, or None.  Synchronized walk over (dangling suffix, diverged)."""
    beta = len(code)
    frontier = {("", False)}
    seen = {("", False)}
    for depth in range(1, k_max + 1):
        nxt = set()
        for u, div in frontier:
            for xa in range(beta):
                ahead = u + code[xa]
                for xb in range(beta):
                    behind = code[xb]
                    if ahead.startswith(behind):
                        u2 = ahead[len(behind):]
                    elif behind.startswith(ahead):
                        u2 = behind[len(ahead):]
                    else:
                        continue
                    d2 = div or xa != xb
                    if not u2 and d2:
                        return depth
                    if len(u2) > max_out_len * (k_max - depth):
                        continue
                    st = (u2, d2)
                    if st not in seen:
                        seen.add(st)
                        nxt.add(st)
        if not nxt:
            return None
        frontier = nxt
    return None


def _pairwalk_collision_f2(table: Seq[Seq[str]], k_max: int, max_out_len: int) -> Optional[int]:
    """Same walk for stage 2 with the primary symbol shared by both sides."""
    beta = len(table)
    gamma = len(table[0])
    frontier = {("", False)}
    seen = {("", False)}
    for depth in range(1, k_max + 1):
        nxt = set()
        for u, div in frontier:
            for a in range(beta):
                row = table[a]
                for ba in range(gamma):
                    ahead = u + row[ba]
                    for bb in range(gamma):
                        behind = row[bb]
                        if ahead.startswith(behind):
                            u2 = ahead[len(behind):]
                        elif behind.startswith(ahead):
                            u2 = behind[len(ahead):]
                        else:
                            continue
                        d2 = div or ba != bb
                        if not u2 and d2:
                            return depth
                        if len(u2) > max_out_len * (k_max - depth):
                            continue
                        st = (u2, d2)
                        if st not in seen:
                            seen.add(st)
                            nxt.add(st)
        if not nxt:
            return None
        frontier = nxt
    return None


def _out_strings(max_len: int) -> List[str]:
    outs = [""]
    for length in range(1, max_len + 1):
        outs += ["".join(bits) for bits in iproduct("01", repeat=length)]
    return outs


def enumerate_lossless_onestate_binary(max_out_len: int = 2, k_max: int = 8):
    """All one-state binary-in/binary-out encoders with per-step outputs of
    length <= max_out_len that pass the losslessness walk to depth k_max.

    Returns (encoders, f1_tables, f2_tables).
    """
    outs = _out_strings(max_out_len)
    pa = sa = Alphabet(("0", "1"))
    f1_tables = [c for c in iproduct(outs, repeat=2)
                 if _pairwalk_collision_f1(c, k_max, max_out_len) is None]
    f2_tables = []
    for flat in iproduct(outs, repeat=4):
        table = (flat[0:2], flat[2:4])
        if _pairwalk_collision_f2(table, k_max, max_out_len) is None:
            f2_tables.append(table)
    encoders = []
    for c1 in f1_tables:
        for t2 in f2_tables:
            f1 = {(0, 0): c1[0], (0, 1): c1[1]}
            g1 = {(0, 0): 0, (0, 1): 0}
            f2 = {(0, a, b): t2[a][b] for a in range(2) for b in range(2)}
            g2 = {(0, a, b): 0 for a in range(2) for b in range(2)}
            encoders.append(FsmEncoder(pa, sa, ("s0",), ("z0",), f1, g1, f2, g2))
    return encoders, f1_tables, f2_tables
