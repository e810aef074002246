"""Seeded hit-or-miss volume estimation.

Samples are drawn in fixed-size chunks; chunk ``i`` uses a Philox stream keyed by
``(seed, i)``.  Workers pick up whole chunks, so the hit count (an integer sum) is
identical for any number of workers.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .domains import Box

CHUNK = 1 << 16
WORKERS_ENV = "SCV_WORKERS"


@dataclass(frozen=True)
class VolumeEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int
    box_volume: float
    hits: int = 0
    unbounded: bool = False

    @property
    def relative_error(self) -> float:
        if self.unbounded or self.mean == 0:
            return math.inf
        return self.std_error / self.mean

    @classmethod
    def infinite(cls, seed: int) -> "VolumeEstimate":
        return cls(math.inf, 0.0, 0, seed, math.inf, 0, True)

    @classmethod
    def exact(cls, value: float, seed: int = 0) -> "VolumeEstimate":
        if math.isinf(value):
            return cls.infinite(seed)
        return cls(value, 0.0, 0, seed, value, 0, False)


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return n


def derive_seed(seed: int, *parts: int) -> int:
    """Deterministic 64-bit child seed of ``seed`` for the integer path ``parts``."""
    if seed < 0:
        raise ValueError("seeds must be non-negative")
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(p) for p in parts))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def hit_or_miss(
    indicator: Callable[[np.ndarray], np.ndarray],
    box: Box,
    n_samples: int,
    seed: int,
    workers: int | None = None,
) -> VolumeEstimate:
    """Estimate the volume of {indicator} inside ``box`` from ``n_samples`` uniform draws."""
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    if seed < 0:
        raise ValueError("seeds must be non-negative")
    sizes = [CHUNK] * (n_samples // CHUNK)
    if n_samples % CHUNK:
        sizes.append(n_samples % CHUNK)

    def count(i: int) -> int:
        pts = box.sample(chunk_rng(seed, i), sizes[i])
        return int(np.count_nonzero(indicator(pts)))

    workers = workers or worker_count()
    if workers == 1 or len(sizes) == 1:
        hits = sum(count(i) for i in range(len(sizes)))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(count, range(len(sizes))))

    vbox = box.volume
    p = hits / n_samples
    return VolumeEstimate(
        mean=vbox * p,
        std_error=vbox * math.sqrt(p * (1 - p) / n_samples),
        n_samples=n_samples,
        seed=seed,
        box_volume=vbox,
        hits=hits,
    )
