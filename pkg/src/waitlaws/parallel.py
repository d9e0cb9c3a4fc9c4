"""Deterministic block-parallel Monte Carlo driver.

Samples are split into fixed-size blocks. Block ``b`` of stream ``s`` gets
its own generator seeded from ``SeedSequence(seed, spawn_key=(s, b))``, so
results depend only on ``(seed, stream, block size)`` and never on how many
threads run the blocks. Kernels are nogil numba functions.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

__all__ = ["DEFAULT_BLOCK", "block_generator", "run_blocks", "default_jobs"]

DEFAULT_BLOCK = 4096


def default_jobs() -> int:
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # not on Linux
        return max(1, os.cpu_count() or 1)


def block_generator(seed: int, stream: int, b: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(stream, b)))


def run_blocks(kernel: Callable, samples: int, seed: int, stream: int, jobs: int = 1,
               block: int = DEFAULT_BLOCK):
    """Run ``kernel(gen, m)`` over blocks and stack the returned arrays.

    ``kernel`` returns an array or tuple of arrays whose first axis has
    length ``m``; the outputs of all blocks are concatenated in block order.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    if block < 1:
        raise ValueError("block size must be positive")
    sizes = [min(block, samples - s) for s in range(0, samples, block)]

    def one(b):
        return kernel(block_generator(seed, stream, b), sizes[b])

    jobs = max(1, int(jobs))
    if jobs == 1 or len(sizes) == 1:
        parts = [one(b) for b in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(one, range(len(sizes))))
    if isinstance(parts[0], tuple):
        return tuple(np.concatenate(col) for col in zip(*parts))
    return np.concatenate(parts)
