"""Verification suites for the bound machinery.

Each suite returns a JSON-ready report with a `holds` flag and an explicit
violation list.  Randomized suites are pure functions of their seed; the
exhaustive ones enumerate their whole domain, so reports are reproducible
byte for byte.
"""

from __future__ import annotations

import math
import random
from typing import Dict, List, Tuple, Union

import numpy as np

from . import bounds, corpus, empirics, fsm, mdc, regions
from .cond_lz import _joint_counts_raw, cond_encode, joint_parse
from .lz_core import BINARY, Sequence, lz_encode, parse

TOL = 1e-9


def suite_entropy_ineq(n: int = 16, beta: int = 2,
                       block_lens: Tuple[int, ...] = (1, 2, 4, 8),
                       eps_mode: Union[str, float] = "default",
                       tol: float = 1e-12) -> dict:
    """Exhaustive block-entropy inequality scan over all length-n sequences."""
    return empirics.scan_entropy_inequality(n=n, beta=beta,
                                            block_lens=tuple(block_lens),
                                            eps_mode=eps_mode, tol=tol)


def suite_cond_entropy_ineq(n: int = 8, beta: int = 2, gamma: int = 2,
                            block_lens: Tuple[int, ...] = (1, 2, 4),
                            eps_mode: Union[str, float] = "default",
                            tol: float = 1e-12) -> dict:
    """Exhaustive conditional block-entropy inequality scan over binary pairs."""
    return empirics.scan_cond_entropy_inequality(n=n, beta=beta, gamma=gamma,
                                                 block_lens=tuple(block_lens),
                                                 eps_mode=eps_mode, tol=tol)


def suite_kraft(max_out_len: int = 2, block_len_max: int = 3,
                k_max: int = 8, tol: float = 1e-12) -> dict:
    """Generalized Kraft sum over every enumerated lossless one-state binary
    encoder, at every block length up to block_len_max."""
    encoders, f1s, f2s = fsm.enumerate_lossless_onestate_binary(max_out_len, k_max)
    block_lens = list(range(1, block_len_max + 1))
    violations: List[dict] = []
    checks = 0
    max_ratio = 0.0
    for idx, enc in enumerate(encoders):
        for l in block_lens:
            rep = fsm.kraft_check(enc, l, tol=tol)
            checks += 1
            max_ratio = max(max_ratio, rep["lhs"] / rep["rhs"])
            if not rep["holds"]:
                violations.append({"encoder": idx, "block_len": l,
                                   "lhs": rep["lhs"], "rhs": rep["rhs"]})
    return {
        "suite": "kraft",
        "family_size": len(encoders),
        "f1_tables": len(f1s),
        "f2_tables": len(f2s),
        "max_out_len": max_out_len,
        "block_lens": block_lens,
        "checks": checks,
        "max_lhs_over_rhs": max_ratio,
        "violations": violations,
        "holds": not violations,
    }


def _pair_count_tables(n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Counts of the four (bit, bit) pair types for every (vh, vt) value pair."""
    pc = np.array([bin(v).count("1") for v in range(1 << n)], dtype=np.int64)
    vh = np.arange(1 << n, dtype=np.int64)[:, None]
    vt = np.arange(1 << n, dtype=np.int64)[None, :]
    mask = (1 << n) - 1
    n11 = pc[vh & vt]
    n10 = pc[vh & ~vt & mask]
    n01 = pc[~vh & vt & mask]
    n00 = n - n11 - n10 - n01
    return n00, n01, n10, n11


def _counting_sequence(n: int) -> Sequence:
    """0,1,00,01,10,11,000,... concatenated and truncated: near-maximal
    phrase count for its length, the stress case for the converse floors."""
    out: List[int] = []
    length = 1
    while len(out) < n:
        for v in range(1 << length):
            out.extend((v >> s) & 1 for s in range(length - 1, -1, -1))
            if len(out) >= n:
                break
        length += 1
    return Sequence(BINARY, out[:n])


def _binary_phrase_count(v: int, n: int) -> int:
    children: Dict[Tuple[int, int], int] = {}
    node = 0
    nid = 1
    c = 0
    for shift in range(n - 1, -1, -1):
        key = (node, (v >> shift) & 1)
        child = children.get(key)
        if child is None:
            children[key] = nid
            nid += 1
            c += 1
            node = 0
        else:
            node = child
    if node:
        c += 1
    return c


def suite_converse(seed: int = 0, n_small: int = 8, random_pairs: int = 200,
                   n_large: int = 1024, spot_checks: int = 200,
                   max_out_len: int = 2, k_max: int = 8, spot_k_max: int = 5,
                   eps_mode: Union[str, float] = "default",
                   tol: float = 1e-12) -> dict:
    """Converse floors (i)-(iii) against the enumerated one-state family.

    Reduction: the family is the full product of certified stage-1 and stage-2
    tables, and both measured rates are linear in the per-symbol output
    lengths.  The minimum of rho1 (and of rho1+rho2) over the family therefore
    equals the minimum over the distinct length profiles of each stage, which
    is exact, so one profile sweep per input pair covers every encoder.  Spot
    checks push sampled (encoder, pair) combinations through the public
    converse_check to tie the sweep back to the measured op.
    """
    encoders, f1s, f2s = fsm.enumerate_lossless_onestate_binary(max_out_len, k_max)
    p1 = sorted({(len(a), len(b)) for a, b in f1s})
    p2 = sorted({(len(t[0][0]), len(t[0][1]), len(t[1][0]), len(t[1][1]))
                 for t in f2s})

    def min_rho1(zeros: int, ones: int, n: int) -> float:
        return min(zeros * pa + ones * pb for pa, pb in p1) / n

    def min_rho2(counts: Tuple[int, int, int, int], n: int) -> float:
        return min(sum(c * w for c, w in zip(counts, prof)) for prof in p2) / n

    # exhaustive binary pairs at n_small
    eps_small = bounds.eps_n_value(n_small, 2, eps_mode)
    d1_small = bounds.delta1(1, n_small, 2, eps_small)
    d2_small, _ = bounds.delta2(1, n_small, 2, 2, eps_small)
    side = 1 << n_small
    bits = [tuple((v >> s) & 1 for s in range(n_small - 1, -1, -1))
            for v in range(side)]
    phrase_counts = [_binary_phrase_count(v, n_small) for v in range(side)]
    rho_small = [c * math.log2(c) / n_small if c > 1 else 0.0
                 for c in phrase_counts]
    m1_by_ones = [min_rho1(n_small - o, o, n_small) for o in range(n_small + 1)]
    ones_of = [bin(v).count("1") for v in range(side)]
    n00, n01, n10, n11 = _pair_count_tables(n_small)
    prof_mins = None
    for prof in p2:
        cand = n00 * prof[0] + n01 * prof[1] + n10 * prof[2] + n11 * prof[3]
        prof_mins = cand if prof_mins is None else np.minimum(prof_mins, cand)
    m2_table = (prof_mins / n_small).tolist()

    exhaustive_violations: List[dict] = []
    checks_i = checks_iii = 0
    for vh in range(side):
        m1 = m1_by_ones[ones_of[vh]]
        checks_i += 1
        if m1 < rho_small[vh] - d1_small - tol:
            exhaustive_violations.append({"check": "i", "primary": vh})
        floor3 = bounds.zl78_floor(phrase_counts[vh], n_small, 1)
        checks_iii += 1
        if m1 < floor3 - tol:
            exhaustive_violations.append({"check": "iii", "primary": vh})
    checks_ii = 0
    for vh in range(side):
        pb = bits[vh]
        m1 = m1_by_ones[ones_of[vh]]
        rho_h = rho_small[vh]
        m2_row = m2_table[vh]
        for vt in range(side):
            _, c_l, _ = _joint_counts_raw(pb, bits[vt])
            rho_c = sum(cl * math.log2(cl) for cl in c_l if cl > 1) / n_small
            checks_ii += 1
            if m1 + m2_row[vt] < rho_h + rho_c - d2_small - tol:
                exhaustive_violations.append(
                    {"check": "ii", "primary": vh, "secondary": vt})

    # seeded random pairs at n_large
    rng = random.Random(seed)
    eps_large = bounds.eps_n_value(n_large, 2, eps_mode)
    d1_large = bounds.delta1(1, n_large, 2, eps_large)
    d2_large, _ = bounds.delta2(1, n_large, 2, 2, eps_large)
    random_violations: List[dict] = []
    large_cases: List[Tuple[Sequence, Sequence, float]] = []
    for i in range(random_pairs):
        primary, secondary = corpus.random_pair(rng, 2, 2, n_large)
        pr = parse(primary)
        jp = joint_parse(primary, secondary)
        ones = sum(primary.data)
        m1 = min_rho1(n_large - ones, ones, n_large)
        cnt = [0, 0, 0, 0]
        for a, b in zip(primary.data, secondary.data):
            cnt[2 * a + b] += 1
        m2 = min_rho2(tuple(cnt), n_large)
        floor3 = bounds.zl78_floor(pr.c, n_large, 1)
        if m1 < pr.rho_lz - d1_large - tol:
            random_violations.append({"check": "i", "pair": i})
        if m1 + m2 < pr.rho_lz + jp.rho_cond - d2_large - tol:
            random_violations.append({"check": "ii", "pair": i})
        if m1 < floor3 - tol:
            random_violations.append({"check": "iii", "pair": i})
        large_cases.append((primary, secondary, m1))

    # deterministic stress case: the near-maximal-complexity sequence, paired
    # with itself.  It sits close to floor (iii) and, in the regression-only
    # zero slack mode, genuinely breaches floor (i): the phrase-count cap the
    # floor presumes fails there, and the suite must say so.
    adversarial_violations: List[dict] = []
    counting = _counting_sequence(n_large)
    pr = parse(counting)
    ones = sum(counting.data)
    m1 = min_rho1(n_large - ones, ones, n_large)
    cnt = [0, 0, 0, 0]
    for a in counting.data:
        cnt[3 * a] += 1
    m2 = min_rho2(tuple(cnt), n_large)
    jp = joint_parse(counting, counting)
    floor3 = bounds.zl78_floor(pr.c, n_large, 1)
    if m1 < pr.rho_lz - d1_large - tol:
        adversarial_violations.append(
            {"check": "i", "rho_lz": pr.rho_lz, "family_min": m1,
             "delta1": d1_large})
    if m1 + m2 < pr.rho_lz + jp.rho_cond - d2_large - tol:
        adversarial_violations.append(
            {"check": "ii", "rho_sum": pr.rho_lz + jp.rho_cond,
             "family_min": m1 + m2, "delta2": d2_large})
    if m1 < floor3 - tol:
        adversarial_violations.append(
            {"check": "iii", "floor": floor3, "family_min": m1})

    # spot checks through the public op
    spot_failures: List[dict] = []
    small_spots = spot_checks // 2
    for j in range(spot_checks):
        enc = encoders[rng.randrange(len(encoders))]
        if j < small_spots:
            vh = rng.randrange(side)
            vt = rng.randrange(side)
            primary = Sequence(BINARY, bits[vh])
            secondary = Sequence(BINARY, bits[vt])
            m1 = m1_by_ones[ones_of[vh]]
        else:
            primary, secondary, m1 = large_cases[rng.randrange(len(large_cases))]
        rep = fsm.converse_check(enc, primary, secondary, k_max=spot_k_max,
                                 eps_mode=eps_mode)
        if not (rep["applicable"] and rep["all_hold"]):
            spot_failures.append({"spot": j, "report": rep})
        elif rep["rho1"] < m1 - tol:
            spot_failures.append({"spot": j, "reason": "family minimum above a member"})

    violations = (exhaustive_violations + random_violations
                  + adversarial_violations + spot_failures)
    return {
        "suite": "converse",
        "family_size": len(encoders),
        "f1_profiles": [list(p) for p in p1],
        "f2_profiles": [list(p) for p in p2],
        "reduction": "profile minima over the certified stage tables; the "
                     "family is their full product, so per-stage minima are "
                     "exact for rho1 and rho1+rho2",
        "eps_mode": str(eps_mode),
        "exhaustive": {
            "n": n_small,
            "pairs": side * side,
            "checks": {"i": checks_i, "ii": checks_ii, "iii": checks_iii},
            "violations": exhaustive_violations,
        },
        "random": {
            "n": n_large,
            "pairs": random_pairs,
            "seed": seed,
            "violations": random_violations,
        },
        "adversarial": {
            "n": n_large,
            "phrase_count": pr.c,
            "rho_lz": pr.rho_lz,
            "phrase_count_cap": bounds.phrase_count_bound(n_large, 2, eps_large),
            "violations": adversarial_violations,
        },
        "spot_checks": {
            "count": spot_checks,
            "k_max": spot_k_max,
            "failures": spot_failures,
        },
        "violations": violations,
        "holds": not violations,
    }


def suite_frontier(seed: int = 0, unions: int = 100, max_members: int = 20,
                   resolution: float = 1e-3, lattice: float = 0.005) -> dict:
    """Staircase extraction vs a grid oracle on random unions.

    Members are drawn from a coordinate lattice coarser than the probe
    resolution, so the oracle's one-step probes are conclusive: a corner is on
    the staircase exactly when the union contains it but neither the left nor
    the down probe point.
    """
    if lattice <= resolution:
        raise ValueError("lattice must be coarser than the probe resolution")
    rng = random.Random(seed)
    g = resolution
    corner_mismatches: List[dict] = []
    closure_failures: List[dict] = []
    domination_failures: List[dict] = []
    idempotence_failures: List[dict] = []
    corners_total = 0
    for t in range(unions):
        m = rng.randint(1, max_members)
        members = [regions.clamped_region(rng.randrange(-20, 601) * lattice,
                                          rng.randrange(-20, 1001) * lattice)
                   for _ in range(m)]
        front = regions.frontier(members)
        corners_total += len(front)

        oracle: List[Tuple[float, float]] = []
        for mem in members:
            p = mem.corner()
            inside = regions.union_contains(members, p)
            left = regions.union_contains(members, regions.RatePoint(p.r1 - g, p.r2))
            down = regions.union_contains(members, regions.RatePoint(p.r1, p.r2 - g))
            if inside and not left and not down:
                oracle.append((p.r1, p.r2))
        oracle = sorted(set(oracle))
        got = [(p.r1, p.r2) for p in front]
        if len(oracle) != len(got) or any(
                abs(a - x) > TOL or abs(b - y) > TOL
                for (a, b), (x, y) in zip(oracle, got)):
            corner_mismatches.append({"union": t, "oracle": oracle, "got": got})

        for p in front:
            for dx, dy in ((g, 0.0), (0.0, g), (g, g)):
                probe = regions.RatePoint(p.r1 + dx, p.r2 + dy)
                if not regions.union_contains(members, probe):
                    closure_failures.append({"union": t, "corner": (p.r1, p.r2)})
                    break
        for i, p in enumerate(front):
            for j, q in enumerate(front):
                if i != j and p.r1 <= q.r1 + TOL and p.r2 <= q.r2 + TOL:
                    domination_failures.append({"union": t, "dominated": (q.r1, q.r2)})
        refront = regions.frontier([regions.region_from_corner(p) for p in front])
        if [(p.r1, p.r2) for p in refront] != got:
            idempotence_failures.append({"union": t})

    violations = (corner_mismatches + closure_failures
                  + domination_failures + idempotence_failures)
    return {
        "suite": "frontier",
        "unions": unions,
        "max_members": max_members,
        "resolution": resolution,
        "lattice": lattice,
        "seed": seed,
        "corners": corners_total,
        "corner_mismatches": corner_mismatches,
        "upward_closure_failures": closure_failures,
        "non_domination_failures": domination_failures,
        "idempotence_failures": idempotence_failures,
        "violations": violations,
        "holds": not violations,
    }


def suite_split_lemma(seed: int = 0, budget: int = 100000,
                      tol: float = 1e-9) -> dict:
    """Randomized check of the rate-split fact: every precondition-satisfying
    tuple yields a feasible allocation."""
    rng = random.Random(seed)
    violations: List[dict] = []
    clamped = 0
    for i in range(budget):
        a = rng.uniform(0.0, 2.0)
        b = rng.uniform(0.0, 2.0)
        e1 = rng.uniform(1e-9, 1.0)
        e2 = rng.uniform(1e-9, 1.0)
        c = rng.uniform(0.0, e1 + e2)
        r1 = a + e1
        r2 = b + e2
        d = mdc.split_rates(a, b, c, r1, r2)
        if r1 - a > c:
            clamped += 1
        ok = (-tol <= d <= c + tol
              and a + d <= r1 + tol
              and b + (c - d) <= r2 + tol)
        if not ok:
            violations.append({"case": i, "a": a, "b": b, "c": c,
                               "r1": r1, "r2": r2, "d": d})
    return {
        "suite": "split-lemma",
        "seed": seed,
        "checks": budget,
        "clamped_cases": clamped,
        "violations": violations,
        "holds": not violations,
    }


def suite_sandwich(seed: int = 0, pairs: int = 100, n: int = 1024, q: int = 1,
                   eps_mode: Union[str, float] = "default",
                   tol: float = TOL) -> dict:
    """Blockwise inner-plus regions sit inside outer-minus regions at every
    divisor block length, and the single-shot measured rates certify the k=n
    inner corner (measured rate <= corner coordinate)."""
    rng = random.Random(seed)
    ks = [k for k in bounds.divisors(n) if k >= 2]
    containment_violations: List[dict] = []
    measured_violations: List[dict] = []
    containment_checks = 0
    sizes = corpus.ALPHABET_SIZES
    for i in range(pairs):
        beta = sizes[i % 3]
        gamma = sizes[(i // 3) % 3]
        primary, secondary = corpus.random_pair(rng, beta, gamma, n)
        for k in ks:
            inner = regions.blockwise_region(primary, secondary, q, k,
                                             "inner-plus", eps_mode)
            outer = regions.blockwise_region(primary, secondary, q, k,
                                             "outer-minus", eps_mode)
            containment_checks += 1
            if not regions.region_contains_region(outer, inner, tol):
                containment_violations.append(
                    {"pair": i, "k": k,
                     "inner": inner.floors(), "outer": outer.floors()})
        inner_n = regions.blockwise_region(primary, secondary, q, n,
                                           "inner-plus", eps_mode)
        r1 = lz_encode(primary).payload_bits / n
        rc = cond_encode(secondary, primary).payload_bits / n
        a_i, _, b_i = inner_n.floors()
        if r1 > a_i + tol or r1 + rc > b_i + tol:
            measured_violations.append(
                {"pair": i, "r1": r1, "rc": rc, "inner": (a_i, b_i)})
    violations = containment_violations + measured_violations
    return {
        "suite": "sandwich",
        "seed": seed,
        "pairs": pairs,
        "n": n,
        "q": q,
        "block_lens": ks,
        "eps_mode": str(eps_mode),
        "containment_checks": containment_checks,
        "containment_violations": containment_violations,
        "measured_rate_violations": measured_violations,
        "violations": violations,
        "holds": not violations,
    }


SUITES = {
    "entropy-ineq": suite_entropy_ineq,
    "cond-entropy-ineq": suite_cond_entropy_ineq,
    "kraft": suite_kraft,
    "converse": suite_converse,
    "frontier": suite_frontier,
    "split-lemma": suite_split_lemma,
    "sandwich": suite_sandwich,
}
