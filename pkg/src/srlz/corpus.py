"""Seeded random corpora for the codec and bound suites.

Generators draw from a private `random.Random(seed)`, so every corpus is a
pure function of its seed; the calibration corpus seed is frozen because the
conditional-stream slack constant was fitted on it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .lz_core import Alphabet, Sequence

ALPHABET_SIZES = (2, 4, 26)
STYLES = ("uniform", "tiled", "biased", "runs")

CALIBRATION_SEED = 0x5EED
STANDARD_SEED = 0xC0DEC


def random_sequence(rng: random.Random, size: int, n: int,
                    style: str = "uniform") -> Sequence:
    """Length-n sequence over Alphabet.of_size(size) in one of four textures:
    iid uniform, noisy periodic tiling, skewed iid, or bursty runs."""
    alpha = Alphabet.of_size(size)
    if style == "uniform":
        data = [rng.randrange(size) for _ in range(n)]
    elif style == "tiled":
        t = rng.randint(2, min(8, max(2, n)))
        tile = [rng.randrange(size) for _ in range(t)]
        data = [tile[i % t] for i in range(n)]
        for i in range(n):
            if rng.random() < 0.05:
                data[i] = rng.randrange(size)
    elif style == "biased":
        weights = [1.0 / (i + 1) for i in range(size)]
        data = rng.choices(range(size), weights=weights, k=n)
    elif style == "runs":
        data = []
        while len(data) < n:
            sym = rng.randrange(size)
            run = 1
            while rng.random() < 0.6 and run < 32:
                run += 1
            data.extend([sym] * min(run, n - len(data)))
    else:
        raise ValueError(f"unknown style: {style}")
    return Sequence(alpha, data)


def noisy_copy(rng: random.Random, src: Sequence, size: int,
               flip: float = 0.15) -> Sequence:
    """Map src into a size-letter alphabet and resample a fraction of letters;
    keeps the copy statistically tied to src so conditional parsing has
    structure to exploit."""
    alpha = Alphabet.of_size(size)
    scale = src.alphabet.size
    data = [v * size // scale for v in src.data]
    for i in range(len(data)):
        if rng.random() < flip:
            data[i] = rng.randrange(size)
    return Sequence(alpha, data)


def _log_uniform_n(rng: random.Random, lo: int, hi: int) -> int:
    if lo >= hi:
        return lo
    return min(hi, int(lo * (hi / lo) ** rng.random()))


@dataclass(frozen=True)
class CorpusCase:
    """One bundle of related sequences feeding every codec suite."""

    index: int
    style: str
    n: int
    beta: int
    gamma: int
    x: Sequence        # source, over the beta-letter alphabet
    xhat: Sequence     # coarse reproduction, beta letters
    xtilde: Sequence   # fine reproduction, gamma letters
    xcheck: Sequence   # central reproduction, gamma letters
    u: Sequence        # shared auxiliary, 2 or 4 letters
    split: float       # refinement share for the description split


def standard_cases(seed: int = STANDARD_SEED, count: int = 500,
                   n_lo: int = 16, n_hi: int = 4096) -> List[CorpusCase]:
    """The round-trip / payload-bound corpus: all nine (beta, gamma) size
    combinations and all four textures cycle; n is log-uniform in [n_lo, n_hi]."""
    rng = random.Random(seed)
    cases: List[CorpusCase] = []
    for i in range(count):
        beta = ALPHABET_SIZES[i % 3]
        gamma = ALPHABET_SIZES[(i // 3) % 3]
        style = STYLES[i % 4]
        n = _log_uniform_n(rng, n_lo, n_hi)
        x = random_sequence(rng, beta, n, style)
        xhat = noisy_copy(rng, x, beta, flip=0.1)
        xtilde = noisy_copy(rng, x, gamma, flip=0.1)
        xcheck = noisy_copy(rng, x, gamma, flip=0.05)
        u = noisy_copy(rng, xhat, 2 if i % 2 else 4, flip=0.2)
        cases.append(CorpusCase(index=i, style=style, n=n, beta=beta,
                                gamma=gamma, x=x, xhat=xhat, xtilde=xtilde,
                                xcheck=xcheck, u=u, split=rng.random()))
    return cases


def calibration_pairs(seed: int = CALIBRATION_SEED, count: int = 500,
                      n_lo: int = 16, n_hi: int = 4096
                      ) -> List[Tuple[Sequence, Sequence]]:
    """(secondary, primary) pairs the conditional-stream slack constant was
    calibrated on.  Do not change the seed or the draw order: the frozen
    constant is a function of this exact corpus."""
    rng = random.Random(seed)
    pairs: List[Tuple[Sequence, Sequence]] = []
    for i in range(count):
        beta = ALPHABET_SIZES[i % 3]
        gamma = ALPHABET_SIZES[(i // 3) % 3]
        style = STYLES[i % 4]
        n = _log_uniform_n(rng, n_lo, n_hi)
        primary = random_sequence(rng, beta, n, style)
        if i % 2:
            secondary = noisy_copy(rng, primary, gamma, flip=0.1)
        else:
            secondary = random_sequence(rng, gamma, n, style)
        pairs.append((secondary, primary))
    return pairs


def random_pair(rng: random.Random, beta: int, gamma: int, n: int,
                style: Optional[str] = None,
                correlated: Optional[bool] = None) -> Tuple[Sequence, Sequence]:
    """One (primary, secondary) pair; texture and correlation drawn from rng
    when not pinned."""
    if style is None:
        style = STYLES[rng.randrange(len(STYLES))]
    if correlated is None:
        correlated = rng.random() < 0.5
    primary = random_sequence(rng, beta, n, style)
    if correlated:
        secondary = noisy_copy(rng, primary, gamma, flip=0.1)
    else:
        secondary = random_sequence(rng, gamma, n, style)
    return primary, secondary
