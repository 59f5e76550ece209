"""Exhaustive baseline over the packer's ordering space.

Orderings that only swap interchangeable parts (same length, width,
height and filling) produce congruent layouts, so the enumeration walks
multiset permutations of shape classes instead of all n! orders.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

from .model import Instance, Layout, Part
from .packer import pack_sequence
from .wdp import coverage_key, winner_key

DEFAULT_LIMIT = 2_000_000


class OracleLimitExceeded(RuntimeError):
    def __init__(self, count: int, limit: int):
        super().__init__(
            f"oracle would evaluate {count} sequences, above the limit of {limit}")
        self.count = count
        self.limit = limit


@dataclass(frozen=True)
class OracleResult:
    best_by_mass: Layout
    best_by_coverage: Layout
    sequences_evaluated: int
    canonical_sequences: int


def shape_classes(parts: Sequence[Part]) -> list[list[Part]]:
    """Group interchangeable parts, preserving first-appearance order."""
    groups: dict[tuple, list[Part]] = {}
    for p in parts:
        groups.setdefault(p.shape_key(), []).append(p)
    return list(groups.values())


def canonical_count(parts: Sequence[Part]) -> int:
    """n! divided by the factorial of each shape-class size."""
    count = math.factorial(len(parts))
    for group in shape_classes(parts):
        count //= math.factorial(len(group))
    return count


def _multiset_perms(counts: list[int], prefix: list[int]) -> Iterator[list[int]]:
    if not any(counts):
        yield list(prefix)
        return
    for c, left in enumerate(counts):
        if left:
            counts[c] -= 1
            prefix.append(c)
            yield from _multiset_perms(counts, prefix)
            prefix.pop()
            counts[c] += 1


def canonical_orderings(parts: Sequence[Part],
                        first: int | None = None) -> Iterator[list[Part]]:
    """Yield one ordering per class of equivalent orderings.

    Within a class the k-th occurrence always takes the k-th part, so the
    output is deterministic.  ``first`` pins the leading shape class.
    """
    groups = shape_classes(parts)
    counts = [len(g) for g in groups]
    prefix: list[int] = []
    if first is not None:
        counts[first] -= 1
        prefix.append(first)
    for classes in _multiset_perms(counts, prefix):
        taken = [0] * len(groups)
        order = []
        for c in classes:
            order.append(groups[c][taken[c]])
            taken[c] += 1
        yield order


def _better(a: tuple | None, b: tuple) -> bool:
    return a is None or b < a


def _evaluate(instance: Instance, first: int, full_rotation: bool,
              strict: bool, insertion: str):
    """Best layouts for every canonical ordering starting with class ``first``."""
    n = len(instance.parts)
    flags = list(itertools.product((False, True), repeat=n)) if full_rotation else [None]
    best_mass = best_cov = None
    mass_key = cov_key = None
    evaluated = 0
    for order in canonical_orderings(instance.parts, first):
        for pref in flags:
            layout = pack_sequence(instance.platform, order, strict=strict,
                                   insertion=insertion, prefer_rotated=pref)
            # evaluation index breaks ties in enumeration order
            idx = (first, evaluated)
            k = winner_key(layout, idx)
            if _better(mass_key, k):
                best_mass, mass_key = layout, k
            k = coverage_key(layout, idx)
            if _better(cov_key, k):
                best_cov, cov_key = layout, k
            evaluated += 1
    return best_mass, mass_key, best_cov, cov_key, evaluated


def enumerate_optimal(
    instance: Instance,
    limit: int = DEFAULT_LIMIT,
    *,
    full_rotation: bool = False,
    strict: bool = False,
    insertion: str = "in-place",
    workers: int = 1,
) -> OracleResult:
    """Pack every canonical ordering and return the best layouts found.

    With ``full_rotation`` every part additionally gets a forced
    orientation choice wherever both orientations fit, covering the full
    2**n * n! sequence space.  Raises :class:`OracleLimitExceeded` before
    doing any work if the number of packings would exceed ``limit``.
    """
    canonical = canonical_count(instance.parts)
    total = canonical * (2 ** len(instance.parts) if full_rotation else 1)
    if total > limit:
        raise OracleLimitExceeded(total, limit)

    n_classes = len(shape_classes(instance.parts))
    jobs = range(n_classes)

    def run(first: int):
        return _evaluate(instance, first, full_rotation, strict, insertion)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(f) for f in jobs]

    best_mass = min(results, key=lambda r: r[1])
    best_cov = min(results, key=lambda r: r[3])
    return OracleResult(
        best_by_mass=best_mass[0],
        best_by_coverage=best_cov[2],
        sequences_evaluated=sum(r[4] for r in results),
        canonical_sequences=canonical,
    )

