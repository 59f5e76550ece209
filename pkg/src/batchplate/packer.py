"""Guillotine placement of an ordered part list, and multi-start search.

A single pass keeps two lists: the parts still waiting (in order) and the
free areas of the bed.  Each part goes to the top-left corner of the first
free area that accepts it, trying the part as given and then turned 90
degrees.  The consumed area is cut into the strip below the part (same
length as the part) and the full-width remainder to its right.
"""

from __future__ import annotations

import enum
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .model import FreeArea, Instance, Layout, Part, Placement, Platform
from .wdp import coverage_key, winner_key

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

DEFAULT_SEED = 2021
DEFAULT_ITERATIONS = 120

ORDERINGS = ("random", "largest", "smallest", "as-given")
INSERTIONS = ("in-place", "append")


class Fit(enum.Enum):
    AS_IS = "fitsAsIs"
    ROTATED = "fitsRotated"
    NO_FIT = "noFit"


def _le(a: float, b: float, strict: bool) -> bool:
    return a < b if strict else a <= b


def fits(length: float, width: float, area: FreeArea, strict: bool = False) -> Fit:
    """Check a footprint against a free area, un-rotated orientation first.

    Widths are compared before lengths, as in the allocation flow chart.
    With ``strict`` the comparisons are ``<`` and a part can never exactly
    fill an area.
    """
    if _le(width, area.width, strict) and _le(length, area.length, strict):
        return Fit.AS_IS
    if _le(length, area.width, strict) and _le(width, area.length, strict):
        return Fit.ROTATED
    return Fit.NO_FIT


def split_area(area: FreeArea, length: float, width: float) -> tuple[FreeArea, FreeArea]:
    """Cut ``area`` around a footprint placed at its top-left corner.

    Returns (below, right): ``below`` spans the part's length under it,
    ``right`` is the full-width remainder to the right of the part.
    Either may be degenerate (zero length or width).
    """
    assert length <= area.length and width <= area.width, "footprint does not fit area"
    below = FreeArea(area.x, area.y + width, length, area.width - width)
    right = FreeArea(area.x + length, area.y, area.length - length, area.width)
    return below, right


def _usable(area: FreeArea) -> bool:
    return area.length > 0 and area.width > 0


@dataclass
class PackState:
    """Working lists of one packing pass."""

    available_parts: list[Part]
    available_areas: list[FreeArea]
    placements: list[Placement] = field(default_factory=list)
    unplaced: list[Part] = field(default_factory=list)

    def free_area_total(self) -> float:
        return sum(a.area for a in self.available_areas)

    def placed_area_total(self) -> float:
        return sum(p.area for p in self.placements)


def iter_pack(
    platform: Platform,
    parts: Sequence[Part],
    *,
    strict: bool = False,
    insertion: str = "in-place",
    prefer_rotated: Sequence[bool] | None = None,
) -> Iterator[PackState]:
    """Run one packing pass, yielding the state after each part is handled.

    ``prefer_rotated`` (one flag per part) overrides the un-rotated
    preference when both orientations fit the chosen area; the exhaustive
    rotation oracle uses it.
    """
    if insertion not in INSERTIONS:
        raise ValueError(f"unknown insertion policy {insertion!r}")
    state = PackState(list(parts), [FreeArea(0, 0, platform.length, platform.width)])
    index = 0
    while state.available_parts:
        part = state.available_parts.pop(0)
        for j, area in enumerate(state.available_areas):
            fit = fits(part.length, part.width, area, strict)
            if fit is Fit.NO_FIT:
                continue
            rotated = fit is Fit.ROTATED
            if (not rotated and prefer_rotated is not None and prefer_rotated[index]
                    and fits(part.width, part.length, area, strict) is Fit.AS_IS):
                rotated = True
            placement = Placement(part, area.x, area.y, rotated)
            subareas = [a for a in split_area(area, placement.length, placement.width)
                        if _usable(a)]
            del state.available_areas[j]
            if insertion == "in-place":
                state.available_areas[j:j] = subareas
            else:
                state.available_areas.extend(subareas)
            state.placements.append(placement)
            break
        else:
            # free areas only shrink, so a part that fits nowhere now never will
            state.unplaced.append(part)
        index += 1
        yield state


def pack_sequence(
    platform: Platform,
    parts: Sequence[Part],
    *,
    strict: bool = False,
    insertion: str = "in-place",
    prefer_rotated: Sequence[bool] | None = None,
) -> Layout:
    """Place ``parts`` in the given order and return the resulting layout."""
    state = None
    for state in iter_pack(platform, parts, strict=strict, insertion=insertion,
                           prefer_rotated=prefer_rotated):
        pass
    if state is None:
        return Layout(platform)
    return Layout(platform, tuple(state.placements), tuple(state.unplaced))


def splitmix64(x: int) -> int:
    x = (x + GOLDEN_GAMMA) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def stream_seed(master_seed: int, iteration: int) -> int:
    """Seed of the RNG stream for one restart.

    This is element ``iteration`` of the SplitMix64 sequence started at
    ``master_seed``, so streams are independent of execution order.
    """
    return splitmix64((master_seed + iteration * GOLDEN_GAMMA) & MASK64)


def shuffled(parts: Sequence[Part], master_seed: int, iteration: int) -> list[Part]:
    order = list(parts)
    random.Random(stream_seed(master_seed, iteration)).shuffle(order)
    return order


def sort_by_area(parts: Sequence[Part], descending: bool) -> list[Part]:
    by_name = sorted(parts, key=lambda p: p.name)
    return sorted(by_name, key=lambda p: p.area, reverse=descending)


@dataclass(frozen=True)
class SearchConfig:
    iterations: int = DEFAULT_ITERATIONS
    seed: int = DEFAULT_SEED
    ordering: str = "random"
    keep_top: int = 8
    insertion: str = "in-place"
    strict: bool = False

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.keep_top < 1:
            raise ValueError("keep_top must be >= 1")
        if self.ordering not in ORDERINGS:
            raise ValueError(f"unknown ordering {self.ordering!r}; expected one of {ORDERINGS}")
        if self.insertion not in INSERTIONS:
            raise ValueError(f"unknown insertion policy {self.insertion!r}")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def order_for(self, parts: Sequence[Part], iteration: int) -> list[Part]:
        if self.ordering == "random":
            return shuffled(parts, self.seed, iteration)
        if self.ordering == "largest":
            return sort_by_area(parts, descending=True)
        if self.ordering == "smallest":
            return sort_by_area(parts, descending=False)
        return list(parts)


@dataclass(frozen=True)
class Candidate:
    layout: Layout
    iteration: int
    order: tuple[str, ...]


@dataclass(frozen=True)
class SearchResult:
    """Ranked outcome of a multi-start run.

    ``candidates`` holds up to ``keep_top`` distinct layouts ranked by mass
    (the winner first); ``by_coverage`` the same number ranked by covered
    area.
    """

    candidates: tuple[Candidate, ...]
    by_coverage: tuple[Candidate, ...]
    iterations: int

    @property
    def winner(self) -> Candidate:
        return self.candidates[0]

    @property
    def best_coverage(self) -> Candidate:
        return self.by_coverage[0]

    def pool(self) -> list[Candidate]:
        """Distinct candidates from both rankings, in iteration order."""
        seen: dict[frozenset, Candidate] = {}
        for c in (*self.candidates, *self.by_coverage):
            seen.setdefault(c.layout.signature(), c)
        return sorted(seen.values(), key=lambda c: c.iteration)


def _top_distinct(cands: list[Candidate], key: Callable[[Candidate], tuple],
                  k: int) -> list[Candidate]:
    out: list[Candidate] = []
    seen: set[frozenset] = set()
    for c in sorted(cands, key=key):
        sig = c.layout.signature()
        if sig in seen:
            continue
        seen.add(sig)
        out.append(c)
        if len(out) == k:
            break
    return out


def _mass_rank(c: Candidate) -> tuple:
    return winner_key(c.layout, c.iteration)


def _coverage_rank(c: Candidate) -> tuple:
    return coverage_key(c.layout, c.iteration)


def _run_chunk(instance: Instance, config: SearchConfig,
               indices: range) -> tuple[list[Candidate], list[Candidate]]:
    cands = []
    for i in indices:
        order = config.order_for(instance.parts, i)
        layout = pack_sequence(instance.platform, order, strict=config.strict,
                               insertion=config.insertion)
        cands.append(Candidate(layout, i, tuple(p.name for p in order)))
    return (_top_distinct(cands, _mass_rank, config.keep_top),
            _top_distinct(cands, _coverage_rank, config.keep_top))


def multi_start(instance: Instance, config: SearchConfig, workers: int = 1) -> SearchResult:
    """Pack ``config.iterations`` orderings and rank the resulting layouts.

    Each restart depends only on (seed, iteration index) and the merge
    orders by a total key ending in the iteration index, so the result is
    the same for any ``workers`` value.
    """
    n = config.iterations
    workers = max(1, min(workers, n))
    step = -(-n // workers)
    chunks = [range(s, min(s + step, n)) for s in range(0, n, step)]
    if workers == 1:
        parts = [_run_chunk(instance, config, c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _run_chunk(instance, config, c), chunks))
    by_mass = [c for m, _ in parts for c in m]
    by_cov = [c for _, cv in parts for c in cv]
    return SearchResult(
        tuple(_top_distinct(by_mass, _mass_rank, config.keep_top)),
        tuple(_top_distinct(by_cov, _coverage_rank, config.keep_top)),
        n,
    )
