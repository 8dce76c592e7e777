"""Two-stage refinement codec and reproduction-pair selection.

The first description is the plain stream of the coarse reproduction; the
refinement description is the conditional stream of the fine reproduction
given the coarse one.  Decoder 1 reads a prefix (the first stream) of what
decoder 2 reads, which is the successive-refinement structure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple, Union

from .container import (
    MODE_COND,
    MODE_LZ,
    MODE_SR,
    Bitstream,
    BudgetExceededError,
    InfeasibleError,
    ROLE_STAGE1,
    ROLE_STAGE2,
    Segment,
    StreamFormatError,
    find_segment,
    pack_segments,
    unpack_segments,
)
from .cond_lz import cond_decode, cond_encode, joint_parse
from .lz_core import Alphabet, Sequence, lz_decode, lz_encode, rho_lz

OBJECTIVES = ("min-r1", "min-sum", "weighted")


@dataclass(frozen=True)
class PerLetterDistortion:
    """Single-letter distortion between a source alphabet and a reproduction
    alphabet.  kind: hamming (0/1 on symbol names), absdiff (|int - int| on
    decimal names), or table (explicit dict keyed by symbol-name pairs)."""

    kind: str = "hamming"
    table: Optional[Dict[Tuple[str, str], float]] = None
    reproduction: Optional[Alphabet] = None

    def rep_alphabet(self, source: Alphabet) -> Alphabet:
        return self.reproduction if self.reproduction is not None else source

    def letter_cost(self, source: Alphabet, rep: Alphabet) -> List[List[float]]:
        """cost[i][j] = d(source symbol i, reproduction symbol j)."""
        if self.kind == "hamming":
            return [[0.0 if si == rj else 1.0 for rj in rep.symbols]
                    for si in source.symbols]
        if self.kind == "absdiff":
            try:
                src = [int(s) for s in source.symbols]
                rpv = [int(s) for s in rep.symbols]
            except ValueError as exc:
                raise ValueError("absdiff needs integer symbol names") from exc
            return [[float(abs(a - b)) for b in rpv] for a in src]
        if self.kind == "table":
            if self.table is None:
                raise ValueError("table distortion without a table")
            return [[float(self.table[(si, rj)]) for rj in rep.symbols]
                    for si in source.symbols]
        raise ValueError(f"unknown distortion kind: {self.kind}")


@dataclass(frozen=True)
class DistortionSpec:
    """Distortion measures and levels for the two decoders (plus an optional
    central/untrusted third, used by the two-description pipelines)."""

    d1: PerLetterDistortion
    d2: PerLetterDistortion
    level1: float
    level2: float
    d0: Optional[PerLetterDistortion] = None
    level0: Optional[float] = None


def hamming_spec(level1: float, level2: float,
                 level0: Optional[float] = None) -> DistortionSpec:
    d = PerLetterDistortion("hamming")
    return DistortionSpec(d1=d, d2=d, level1=level1, level2=level2,
                          d0=d if level0 is not None else None, level0=level0)


def distortion(x: Sequence, y: Sequence, d: PerLetterDistortion) -> float:
    if x.n != y.n:
        raise ValueError("length mismatch")
    cost = d.letter_cost(x.alphabet, y.alphabet)
    return sum(cost[a][b] for a, b in zip(x.data, y.data))


def in_ball(x: Sequence, xhat: Sequence, xtilde: Sequence, dist: DistortionSpec,
            tol: float = 1e-9) -> bool:
    """Both reproductions within their per-letter average distortion levels."""
    return (distortion(x, xhat, dist.d1) <= dist.level1 * x.n + tol
            and distortion(x, xtilde, dist.d2) <= dist.level2 * x.n + tol)


@dataclass(frozen=True)
class SrEncoded:
    stage1: Bitstream
    stage2: Bitstream
    n: int
    r1: float
    r2: float

    def to_bytes(self) -> bytes:
        return pack_segments(MODE_SR, self.n, [
            Segment(ROLE_STAGE1, self.stage1.payload_bits or 0, self.stage1.to_bytes()),
            Segment(ROLE_STAGE2, self.stage2.payload_bits or 0, self.stage2.to_bytes()),
        ])

    @classmethod
    def from_bytes(cls, raw: bytes) -> "SrEncoded":
        _, n, segments = unpack_segments(raw, expect_mode=MODE_SR)
        seg1 = find_segment(segments, ROLE_STAGE1)
        seg2 = find_segment(segments, ROLE_STAGE2)
        if seg1 is None or seg2 is None:
            raise StreamFormatError("refinement container missing a stage segment")
        s1 = Bitstream.from_bytes(seg1.data)
        s2 = Bitstream.from_bytes(seg2.data)
        s1.payload_bits = seg1.bit_length
        s2.payload_bits = seg2.bit_length
        if s1.mode != MODE_LZ or s2.mode != MODE_COND:
            raise StreamFormatError("stage segments have wrong modes")
        return cls(stage1=s1, stage2=s2, n=n,
                   r1=seg1.bit_length / n if n else 0.0,
                   r2=seg2.bit_length / n if n else 0.0)


def sr_encode(x: Sequence, xhat: Sequence, xtilde: Sequence) -> SrEncoded:
    n = x.n
    if xhat.n != n or xtilde.n != n:
        raise ValueError("reproductions must match the source length")
    s1 = lz_encode(xhat)
    s2 = cond_encode(xtilde, xhat)
    return SrEncoded(stage1=s1, stage2=s2, n=n,
                     r1=s1.payload_bits / n if n else 0.0,
                     r2=s2.payload_bits / n if n else 0.0)


def sr_decode_stage1(enc: Union[SrEncoded, bytes]) -> Sequence:
    if isinstance(enc, (bytes, bytearray)):
        enc = SrEncoded.from_bytes(bytes(enc))
    return lz_decode(enc.stage1)


def sr_decode_full(enc: Union[SrEncoded, bytes]) -> Tuple[Sequence, Sequence]:
    """Returns (coarse, fine); the fine stream is only decodable after the
    coarse one, which is its side information."""
    if isinstance(enc, (bytes, bytearray)):
        enc = SrEncoded.from_bytes(bytes(enc))
    xhat = lz_decode(enc.stage1)
    xtilde = cond_decode(enc.stage2, xhat)
    return xhat, xtilde


def nearest_feasible(x: Sequence, d: PerLetterDistortion, level: float) -> Sequence:
    """Per-letter cheapest reproduction; errors when even that misses the level."""
    rep = d.rep_alphabet(x.alphabet)
    cost = d.letter_cost(x.alphabet, rep)
    choice = [min(range(rep.size), key=lambda j: (cost[a][j], j)) for a in range(x.alphabet.size)]
    data = [choice[a] for a in x.data]
    total = sum(cost[a][choice[a]] for a in x.data)
    if total > level * x.n + 1e-9:
        raise InfeasibleError(
            f"distortion level {level} unreachable (best average {total / max(1, x.n):.4f})")
    return Sequence(rep, data)


def _objective_fn(objective: str, weight: float) -> Callable[[float, float], float]:
    if objective == "min-r1":
        return lambda r1, rc: r1
    if objective == "min-sum":
        return lambda r1, rc: r1 + rc
    if objective == "weighted":
        if not 0.0 <= weight <= 1.0:
            raise ValueError("weight must lie in [0, 1]")
        # interpolates: weight 0 -> min-r1, weight 1 -> min-sum
        return lambda r1, rc: r1 + weight * rc
    raise ValueError(f"unknown objective: {objective}")


def _ball(x: Sequence, d: PerLetterDistortion, level: float,
          cap: int) -> Optional[List[Sequence]]:
    """All reproductions within the level, or None when the ball may exceed cap."""
    rep = d.rep_alphabet(x.alphabet)
    if rep.size ** x.n > cap:
        return None
    cost = d.letter_cost(x.alphabet, rep)
    budget = level * x.n + 1e-9
    out: List[Sequence] = []
    n = x.n
    data = x.data
    stack: List[Tuple[int, float, Tuple[int, ...]]] = [(0, 0.0, ())]
    # depth-first with the trivial suffix bound (remaining letters cost >= 0)
    while stack:
        i, acc, prefix = stack.pop()
        if i == n:
            out.append(Sequence(rep, prefix))
            continue
        row = cost[data[i]]
        for j in range(rep.size - 1, -1, -1):
            nacc = acc + row[j]
            if nacc <= budget:
                stack.append((i + 1, nacc, prefix + (j,)))
    return out


def candidate_pairs(x: Sequence, dist: DistortionSpec, search) -> Tuple[List[Tuple[Sequence, Sequence]], dict]:
    """Admissible (coarse, fine) pairs: exhaustive over the two balls when
    small, otherwise seeded greedy + perturbation candidates."""
    mode = search.mode
    meta: dict = {"search_mode": mode, "seed": search.seed}
    if mode not in ("auto", "exhaustive", "greedy"):
        raise ValueError(f"unknown search mode: {mode}")
    rep1 = dist.d1.rep_alphabet(x.alphabet)
    rep2 = dist.d2.rep_alphabet(x.alphabet)
    total = (rep1.size * rep2.size) ** x.n
    if mode in ("auto", "exhaustive") and total <= search.exhaustive_limit:
        ball1 = _ball(x, dist.d1, dist.level1, search.exhaustive_limit)
        ball2 = _ball(x, dist.d2, dist.level2, search.exhaustive_limit)
        if ball1 is not None and ball2 is not None:
            if not ball1 or not ball2:
                raise InfeasibleError("a distortion ball is empty")
            pairs = [(h, t) for h in ball1 for t in ball2]
            meta.update({"search_mode": "exhaustive", "ball1": len(ball1),
                         "ball2": len(ball2), "pairs": len(pairs)})
            return pairs, meta
    if mode == "exhaustive":
        raise BudgetExceededError(
            f"{total} candidate pairs exceed the exhaustive limit")
    pairs = _greedy_pairs(x, dist, search)
    meta.update({"search_mode": "greedy", "pairs": len(pairs),
                 "evaluations": search.evaluations, "restarts": search.restarts})
    return pairs, meta


def _greedy_pairs(x: Sequence, dist: DistortionSpec, search) -> List[Tuple[Sequence, Sequence]]:
    rng = random.Random(search.seed)
    collected: List[Tuple[Sequence, Sequence]] = []
    seen = set()

    def keep(hat: Sequence, til: Sequence) -> None:
        key = (hat.data, til.data)
        if key not in seen:
            seen.add(key)
            collected.append((hat, til))

    evals = [0]

    def improve(hat: Sequence, til: Sequence, score_fn) -> Tuple[Sequence, Sequence]:
        cost1 = dist.d1.letter_cost(x.alphabet, hat.alphabet)
        cost2 = dist.d2.letter_cost(x.alphabet, til.alphabet)
        bud1 = dist.level1 * x.n + 1e-9
        bud2 = dist.level2 * x.n + 1e-9
        h = list(hat.data)
        t = list(til.data)
        dh = sum(cost1[a][b] for a, b in zip(x.data, h))
        dt = sum(cost2[a][b] for a, b in zip(x.data, t))
        best = score_fn(Sequence(hat.alphabet, h), Sequence(til.alphabet, t))
        improved = True
        while improved and evals[0] < search.evaluations:
            improved = False
            for i in range(x.n):
                if evals[0] >= search.evaluations:
                    break
                a = x.data[i]
                for seq_ref, cost, bud, cur_d, alpha in (
                        (h, cost1, bud1, "dh", hat.alphabet),
                        (t, cost2, bud2, "dt", til.alphabet)):
                    old = seq_ref[i]
                    base_d = dh if cur_d == "dh" else dt
                    for j in range(alpha.size):
                        if j == old:
                            continue
                        nd = base_d - cost[a][old] + cost[a][j]
                        if nd > bud:
                            continue
                        seq_ref[i] = j
                        cand = score_fn(Sequence(hat.alphabet, h), Sequence(til.alphabet, t))
                        evals[0] += 1
                        if cand < best - 1e-15:
                            best = cand
                            base_d = nd
                            if cur_d == "dh":
                                dh = nd
                            else:
                                dt = nd
                            old = j
                            improved = True
                        else:
                            seq_ref[i] = old
        return Sequence(hat.alphabet, h), Sequence(til.alphabet, t)

    def score(hat: Sequence, til: Sequence) -> float:
        return rho_lz(hat) + joint_parse(hat, til).rho_cond

    hat0 = nearest_feasible(x, dist.d1, dist.level1)
    til0 = nearest_feasible(x, dist.d2, dist.level2)
    keep(hat0, til0)
    keep(*improve(hat0, til0, score))
    for _ in range(max(0, search.restarts)):
        hat = _random_feasible(x, dist.d1, dist.level1, rng)
        til = _random_feasible(x, dist.d2, dist.level2, rng)
        keep(hat, til)
        keep(*improve(hat, til, score))
        if evals[0] >= search.evaluations:
            break
    return collected


def _random_feasible(x: Sequence, d: PerLetterDistortion, level: float,
                     rng: random.Random) -> Sequence:
    """Random reproduction inside the ball: per position, pick uniformly among
    letters that keep the remaining budget nonnegative (cheapest letters cost 0
    of budget beyond the floor)."""
    rep = d.rep_alphabet(x.alphabet)
    cost = d.letter_cost(x.alphabet, rep)
    floor_cost = [min(row) for row in cost]
    slack = level * x.n - sum(floor_cost[a] for a in x.data)
    if slack < -1e-9:
        raise InfeasibleError(f"distortion level {level} unreachable")
    out = []
    for a in x.data:
        row = cost[a]
        options = [j for j in range(rep.size) if row[j] - floor_cost[a] <= slack + 1e-9]
        j = options[rng.randrange(len(options))]
        slack -= row[j] - floor_cost[a]
        out.append(j)
    return Sequence(rep, out)


def select_reproductions(x: Sequence, dist: DistortionSpec,
                         objective: str = "weighted",
                         search=None) -> Tuple[Sequence, Sequence, dict]:
    """Pick an admissible (coarse, fine) pair minimizing the rate objective.

    Objectives score a pair by its measured complexities: min-r1 uses
    rho_lz(coarse), min-sum adds rho_cond(fine|coarse), weighted interpolates.
    Ties break lexicographically on the symbol indices, so results are stable.
    """
    from .regions import SearchBudget  # shared knobs; no cycle at import time

    search = search or SearchBudget()
    fn = _objective_fn(objective, search.weight)
    pairs, meta = candidate_pairs(x, dist, search)
    best = None
    best_key = None
    for hat, til in pairs:
        r1 = rho_lz(hat)
        rc = joint_parse(hat, til).rho_cond
        key = (fn(r1, rc), hat.data, til.data)
        if best_key is None or key < best_key:
            best_key = key
            best = (hat, til)
    if best is None:
        raise InfeasibleError("no admissible reproduction pair")
    diag = dict(meta)
    diag.update({"objective": objective, "weight": search.weight,
                 "objective_value": best_key[0]})
    return best[0], best[1], diag
