"""Two-rate regions: half-plane intersections, unions, frontiers, and the
block-partition inner/outer regions for a reproduction pair.

Every region here is upward closed in (R1, R2) with the implicit floors
R1 >= 0, R2 >= 0.  Frontiers are the minimal corner points of a union,
ascending in R1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence as Seq, Tuple, Union

from . import bounds
from .cond_lz import joint_parse
from .lz_core import Sequence, rho_lz

TOL = 1e-9


@dataclass(frozen=True)
class RatePoint:
    r1: float
    r2: float


@dataclass(frozen=True)
class HalfPlaneRegion:
    """{(R1, R2): R1 >= a, R1 + R2 >= b, R2 >= c} (c optional)."""

    a: float
    b: float
    c: Optional[float] = None
    clamped_a: bool = False
    clamped_b: bool = False
    clamped_c: bool = False
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def floors(self) -> Tuple[float, float, float]:
        """Effective (R1 floor, R2 floor, sum floor) with the implicit >= 0."""
        a = max(self.a, 0.0)
        c = max(self.c, 0.0) if self.c is not None else 0.0
        b = max(self.b, a + c)
        return a, c, b

    def contains(self, point: RatePoint, tol: float = TOL) -> bool:
        a, c, b = self.floors()
        return (point.r1 >= a - tol and point.r2 >= c - tol
                and point.r1 + point.r2 >= b - tol)

    def corner(self) -> RatePoint:
        a, c, b = self.floors()
        return RatePoint(a, max(c, b - a))

    def is_minimal_point(self, point: RatePoint, tol: float = TOL) -> bool:
        """True when no region point is componentwise <= `point` other than itself."""
        if not self.contains(point, tol):
            return False
        a, c, b = self.floors()
        on_sum = point.r1 + point.r2 <= b + tol
        return ((point.r1 <= a + tol or on_sum)
                and (point.r2 <= c + tol or on_sum))


def clamped_region(a: float, b: float, c: Optional[float] = None,
                   meta: Optional[dict] = None) -> HalfPlaneRegion:
    """Clamp negative bounds to zero, recording which ones were clamped."""
    return HalfPlaneRegion(
        a=max(a, 0.0),
        b=max(b, 0.0),
        c=None if c is None else max(c, 0.0),
        clamped_a=a < 0,
        clamped_b=b < 0,
        clamped_c=c is not None and c < 0,
        meta=meta or {},
    )


def union_contains(members: Seq[HalfPlaneRegion], point: RatePoint, tol: float = TOL) -> bool:
    return any(m.contains(point, tol) for m in members)


def frontier(members: Seq[HalfPlaneRegion], tol: float = TOL) -> List[RatePoint]:
    """Minimal corner points of the union, ascending in R1 (ties by R2).

    Members must be two-constraint regions (no explicit R2 floor): those are
    the regions whose staircase a single corner per member describes.
    """
    if not members:
        return []
    if any(m.c is not None for m in members):
        raise ValueError("frontier expects members without an explicit R2 floor")
    corners = [m.corner() for m in members]
    out: List[RatePoint] = []
    for p in corners:
        minimal = True
        for m in members:
            if m.contains(p, tol) and not m.is_minimal_point(p, tol):
                minimal = False
                break
        if minimal:
            out.append(p)
    out.sort(key=lambda p: (p.r1, p.r2))
    dedup: List[RatePoint] = []
    for p in out:
        if dedup and abs(p.r1 - dedup[-1].r1) <= tol and abs(p.r2 - dedup[-1].r2) <= tol:
            continue
        dedup.append(p)
    return dedup


def region_from_corner(point: RatePoint) -> HalfPlaneRegion:
    return HalfPlaneRegion(a=point.r1, b=point.r1 + point.r2)


def region_contains_region(outer: HalfPlaneRegion, inner: HalfPlaneRegion,
                           tol: float = TOL) -> bool:
    """Every point of `inner` lies in `outer` (via the effective floors)."""
    a_o, c_o, b_o = outer.floors()
    a_i, c_i, b_i = inner.floors()
    return a_i >= a_o - tol and c_i >= c_o - tol and b_i >= b_o - tol


@dataclass(frozen=True)
class RegionUnion:
    members: Tuple[HalfPlaneRegion, ...]
    frontier: Tuple[RatePoint, ...]
    meta: dict = field(default_factory=dict, compare=False)


def region_for_pair(primary: Sequence, secondary: Sequence, q: int,
                    eps_mode: Union[str, float] = "default") -> HalfPlaneRegion:
    """Converse (outer) region for one reproduction pair at state budget q."""
    n = primary.n
    if n < 2:
        raise ValueError("needs n >= 2")
    if secondary.n != n:
        raise ValueError("sequences must have equal length")
    beta = primary.alphabet.size
    gamma = secondary.alphabet.size
    eps_n = bounds.eps_n_value(n, beta, eps_mode)
    rho1 = rho_lz(primary)
    jp = joint_parse(primary, secondary)
    d1 = bounds.delta1(q, n, beta, eps_n)
    d2, d2_l = bounds.delta2(q, n, beta, gamma, eps_n)
    return clamped_region(
        rho1 - d1,
        rho1 + jp.rho_cond - d2,
        meta={
            "n": n, "q": q, "beta": beta, "gamma": gamma,
            "rho_lz": rho1, "rho_cond": jp.rho_cond,
            "delta1": d1, "delta2": d2, "delta2_block_len": d2_l,
            "eps_mode": str(eps_mode), "eps_n": eps_n,
        },
    )


def blockwise_region(primary: Sequence, secondary: Sequence, q: int, block_len: int,
                     side: str, eps_mode: Union[str, float] = "default") -> HalfPlaneRegion:
    """Block-partition region at block length k (k >= 2, k | n).

    side="outer-minus" (short form "outer"): converse floors from per-block
    complexities minus the penalties at block length k.  side="inner-plus"
    (short form "inner"): the rates the restart codec achieves, per-block
    complexities plus the codec slacks at k.
    """
    n = primary.n
    k = block_len
    if secondary.n != n:
        raise ValueError("sequences must have equal length")
    if k < 2:
        raise ValueError("block length must be at least 2")
    if n % k != 0:
        raise ValueError(f"block length {k} does not divide n={n}")
    aliases = {"outer-minus": "outer-minus", "outer": "outer-minus",
               "inner-plus": "inner-plus", "inner": "inner-plus"}
    if side not in aliases:
        raise ValueError("side must be 'outer-minus' or 'inner-plus'")
    side = aliases[side]
    beta = primary.alphabet.size
    gamma = secondary.alphabet.size
    sum1 = 0.0
    sum2 = 0.0
    for t in range(0, n, k):
        pb = Sequence(primary.alphabet, primary.data[t:t + k])
        sb = Sequence(secondary.alphabet, secondary.data[t:t + k])
        sum1 += rho_lz(pb)
        sum2 += joint_parse(pb, sb).rho_cond
    scale = k / n
    avg1 = scale * sum1
    avg12 = scale * (sum1 + sum2)
    meta = {
        "n": n, "q": q, "block_len": k, "side": side,
        "avg_rho_lz": avg1, "avg_rho_sum": avg12,
        "eps_mode": str(eps_mode),
    }
    if side == "outer-minus":
        eps_n = bounds.eps_n_value(k, beta, eps_mode)
        d1 = bounds.delta1(q, k, beta, eps_n)
        d2, d2_l = bounds.delta2(q, k, beta, gamma, eps_n)
        meta.update({"delta1": d1, "delta2": d2, "delta2_block_len": d2_l,
                     "eps_n": eps_n})
        return clamped_region(avg1 - d1, avg12 - d2, meta=meta)
    e1 = bounds.eps_slack(k, beta, bounds.eps_n_value(k, beta, eps_mode))
    e2 = bounds.eps_hat(k)
    meta.update({"eps_slack": e1, "eps_hat": e2})
    return clamped_region(avg1 + e1, avg12 + e1 + e2, meta=meta)


@dataclass(frozen=True)
class SearchBudget:
    """Knobs for reproduction-pair search; `mode` auto picks exhaustive when
    the candidate-pair count is at most `exhaustive_limit`."""

    mode: str = "auto"  # auto | exhaustive | greedy
    exhaustive_limit: int = 1 << 24
    evaluations: int = 4096
    restarts: int = 3
    seed: int = 0
    weight: float = 0.5


def sr_outer_region(x: Sequence, dist, q: int,
                    search: Optional[SearchBudget] = None,
                    eps_mode: Union[str, float] = "default") -> RegionUnion:
    """Union of pair regions over admissible reproduction pairs.

    Exhaustive over the distortion balls when small enough, otherwise a
    seeded greedy/perturbation search; the search metadata says which.
    """
    from . import sr_codec  # local import; sr_codec pulls no regions symbols at call time

    search = search or SearchBudget()
    n = x.n
    if n < 2:
        raise ValueError("needs n >= 2")
    pairs, meta = sr_codec.candidate_pairs(x, dist, search)
    members = [region_for_pair(hat, til, q, eps_mode) for hat, til in pairs]
    front = frontier(members)
    meta = dict(meta)
    meta.update({"q": q, "eps_mode": str(eps_mode), "members": len(members),
                 "exhaustive": meta.get("search_mode") == "exhaustive"})
    return RegionUnion(members=tuple(members), frontier=tuple(front), meta=meta)


def frontier_csv(points: Iterable[RatePoint]) -> str:
    lines = ["r1,r2"]
    for p in points:
        lines.append(f"{p.r1!r},{p.r2!r}")
    return "\n".join(lines) + "\n"
