"""Cache-placement optimizers and benchmark placements.

The exhaustive optimizer is cost-function-agnostic: pass any callable from
CacheAllocation to expected power (static channel, Monte-Carlo average, or
anything else) and it enumerates all ordered pairs of M-subsets.  The greedy
alternates the two caches through the utility w_k = 2^(2 R_k) q_k, which
trades a file's power hunger against how often it is requested.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .model import CacheAllocation, FileCatalog


@dataclass(frozen=True)
class AllocationResult:
    allocation: CacheAllocation
    q_value: float
    evaluations: int


def exhaustive_search(catalog: FileCatalog, M: int,
                      cost_fn: Callable[[CacheAllocation], float],
                      assume_swap_symmetry: bool = True) -> AllocationResult:
    """Minimize cost_fn over all C(N,M)^2 ordered pairs of cache contents.

    With assume_swap_symmetry (the symmetric-network default) mirrored pairs
    (B,A)/(A,B) are evaluated once; disable it when cost_fn treats the two
    caches differently.  Ties keep the first candidate in lexicographic
    subset order.
    """
    n = catalog.n_files
    if not 0 <= M <= n:
        raise ValueError("cache size must lie in [0, N]")
    best: tuple[float, CacheAllocation] | None = None
    evaluations = 0
    seen: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    for files1 in itertools.combinations(range(n), M):
        for files2 in itertools.combinations(range(n), M):
            if assume_swap_symmetry:
                key = (files1, files2) if files1 <= files2 else (files2, files1)
                if key in seen:
                    continue
                seen.add(key)
            alloc = CacheAllocation.from_sets(files1, files2, n, M)
            q = cost_fn(alloc)
            evaluations += 1
            if best is None or q < best[0]:
                best = (q, alloc)
    return AllocationResult(best[1], best[0], evaluations)


def _by_utility(catalog: FileCatalog) -> list[int]:
    w = [(2.0 ** (2.0 * r)) * q for r, q in zip(catalog.rates, catalog.popularity)]
    return sorted(range(catalog.n_files), key=lambda k: (-w[k], k))


def low_complexity(catalog: FileCatalog, M: int) -> CacheAllocation:
    """Greedy alternating placement by w_k = 2^(2 R_k) q_k.

    Each round puts the current best remaining file into SBS1 and the next
    into SBS2, so the caches end up disjoint when the library allows it
    (2M <= N).  With a smaller library the leftover slots are filled with the
    highest-utility files the cache does not hold yet, duplicating across
    caches.
    """
    n = catalog.n_files
    if not 0 <= M <= n:
        raise ValueError("cache size must lie in [0, N]")
    order = _by_utility(catalog)
    queue = list(order)
    sets: tuple[list[int], list[int]] = ([], [])
    for _ in range(M):
        for cache in sets:
            if queue:
                cache.append(queue.pop(0))
    for cache in sets:
        extra = (k for k in order if k not in cache)
        while len(cache) < M:
            cache.append(next(extra))
    return CacheAllocation.from_sets(sets[0], sets[1], n, M)


def top_popularity(catalog: FileCatalog, M: int) -> CacheAllocation:
    """Both caches hold the M most requested files."""
    order = sorted(range(catalog.n_files), key=lambda k: (-catalog.popularity[k], k))
    return CacheAllocation.from_sets(order[:M], order[:M], catalog.n_files, M)


def top_rate(catalog: FileCatalog, M: int) -> CacheAllocation:
    """Both caches hold the M files with the highest rate requirement."""
    order = sorted(range(catalog.n_files), key=lambda k: (-catalog.rates[k], k))
    return CacheAllocation.from_sets(order[:M], order[:M], catalog.n_files, M)
