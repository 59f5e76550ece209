"""Experiment harness: case study, initial-ordering comparison, and the
equal-height / equal-filling attribute studies.

Reports carry the seed, iteration count and instance digest needed to
re-run them.  Wall times are informational only.
"""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

from .formats import case_study, instance_digest
from .model import Instance, InstanceError, Layout, Part, Platform, total_mass
from .oracle import enumerate_optimal
from .packer import DEFAULT_ITERATIONS, DEFAULT_SEED, SearchConfig, multi_start, pack_sequence, sort_by_area
from .wdp import coverage_key, select_winner

# Part sets of the two reference batches reported for the case study.
REFERENCE_MASS_BATCH = ("P1", "P9", "P4", "P7", "P5", "P2", "P8")
REFERENCE_COVERAGE_BATCH = ("P2", "P7", "P1", "P3", "P5", "P6", "P8")

# Grid used by the synthetic instance generator.
GRID_SIDES = tuple(range(20, 90, 10))
GRID_HEIGHTS = tuple(range(20, 110, 10))
GRID_FILLINGS = tuple(round(0.1 * k, 1) for k in range(1, 11))


@dataclass
class Row:
    label: str
    parts_allocated: list[str]
    coverage_pct: float
    total_mass: float
    part_count: int
    wall_time: float = 0.0

    @classmethod
    def of(cls, label: str, layout: Layout, wall_time: float = 0.0) -> "Row":
        return cls(label, layout.part_names(), 100.0 * layout.coverage,
                   layout.total_mass, layout.part_count, wall_time)


@dataclass
class ExperimentReport:
    name: str
    rows: list[Row]
    metadata: dict[str, Any] = field(default_factory=dict)

    def row(self, label: str) -> Row:
        for r in self.rows:
            if r.label == label:
                return r
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {"experiment": self.name, "metadata": self.metadata,
                "rows": [asdict(r) for r in self.rows]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "parts_allocated", "coverage_pct", "total_mass",
                    "part_count", "wall_time"])
        for r in self.rows:
            w.writerow([r.label, " ".join(r.parts_allocated), f"{r.coverage_pct:.2f}",
                        f"{r.total_mass:.10g}", r.part_count, f"{r.wall_time:.3f}"])
        return buf.getvalue()


def _meta(instance: Instance, seed: int, iterations: int, **extra) -> dict:
    return {"seed": seed, "iterations": iterations,
            "instance_digest": instance_digest(instance), **extra}


def run_ordering_experiment(instance: Instance, iterations: int = DEFAULT_ITERATIONS,
                            seed: int = DEFAULT_SEED) -> ExperimentReport:
    rows = []
    for label, descending in (("largest-first", True), ("smallest-first", False)):
        t0 = time.perf_counter()
        layout = pack_sequence(instance.platform, sort_by_area(instance.parts, descending))
        rows.append(Row.of(label, layout, time.perf_counter() - t0))
    t0 = time.perf_counter()
    result = multi_start(instance, SearchConfig(iterations=iterations, seed=seed))
    rows.append(Row.of("random", result.best_coverage.layout, time.perf_counter() - t0))
    return ExperimentReport("ordering", rows, _meta(instance, seed, iterations))


def _check_uniform(instance: Instance, attr: str) -> None:
    ref = getattr(instance.parts[0], attr)
    for p in instance.parts:
        if getattr(p, attr) != ref:
            raise InstanceError(
                f"part {p.name!r}: {attr} {getattr(p, attr)} differs from {ref} "
                f"(mode requires one shared {attr})")


def run_attribute_experiment(instance: Instance, mode: str,
                             iterations: int = DEFAULT_ITERATIONS,
                             seed: int = DEFAULT_SEED,
                             keep_top: int = 8) -> ExperimentReport:
    """Compare the heaviest, the best-covering and the most-populated batch.

    ``mode`` is ``"height"`` (all parts share a height, so filling drives
    mass) or ``"filling"`` (all share a filling, so height drives mass).
    """
    if mode not in ("height", "filling"):
        raise ValueError(f"unknown attribute mode {mode!r}")
    _check_uniform(instance, mode)
    t0 = time.perf_counter()
    result = multi_start(instance, SearchConfig(iterations=iterations, seed=seed,
                                                keep_top=keep_top))
    elapsed = time.perf_counter() - t0
    pool = result.pool()
    layouts = [c.layout for c in pool]
    winner = select_winner(layouts)
    max_area = min(range(len(pool)), key=lambda i: coverage_key(layouts[i], i))
    max_count = min(range(len(pool)), key=lambda i: (
        -layouts[i].part_count, -layouts[i].total_mass, -layouts[i].covered_area, i))
    rows = [Row.of("winner", winner, elapsed),
            Row.of("max-area", layouts[max_area]),
            Row.of("max-parts", layouts[max_count])]
    return ExperimentReport(f"same-{mode}", rows,
                            _meta(instance, seed, iterations, candidates=len(pool)))


def run_case_study(seed: int = DEFAULT_SEED, iterations: int = DEFAULT_ITERATIONS,
                   instance: Instance | None = None) -> ExperimentReport:
    instance = instance or case_study()
    t0 = time.perf_counter()
    result = multi_start(instance, SearchConfig(iterations=iterations, seed=seed))
    t_search = time.perf_counter() - t0
    t0 = time.perf_counter()
    oracle = enumerate_optimal(instance)
    t_oracle = time.perf_counter() - t0

    winner = result.winner.layout
    by_name = {p.name: p for p in instance.parts}
    ref_gap = None
    if all(n in by_name for n in REFERENCE_MASS_BATCH + REFERENCE_COVERAGE_BATCH):
        ref_gap = (total_mass([by_name[n] for n in REFERENCE_MASS_BATCH])
                   - total_mass([by_name[n] for n in REFERENCE_COVERAGE_BATCH]))
    rows = [
        Row.of("winner", winner, t_search),
        Row.of("max-coverage", result.best_coverage.layout),
        Row.of("oracle-mass", oracle.best_by_mass, t_oracle),
        Row.of("oracle-coverage", oracle.best_by_coverage),
    ]
    meta = _meta(instance, seed, iterations,
                 winner_iteration=result.winner.iteration,
                 oracle_sequences=oracle.sequences_evaluated,
                 mass_gap_to_oracle=oracle.best_by_mass.total_mass - winner.total_mass,
                 mass_ratio_to_oracle=winner.total_mass / oracle.best_by_mass.total_mass,
                 reference_batches_mass_gap=ref_gap)
    return ExperimentReport("case-study", rows, meta)


def synthetic_instance(n: int, seed: int, *, same_height: float | None = None,
                       same_filling: float | None = None,
                       platform: Platform | None = None) -> Instance:
    """Random instance with sides, heights and fillings drawn from fixed grids."""
    rng = random.Random(seed)
    platform = platform or Platform("B1", 150, 150, 100)
    parts = []
    for i in range(n):
        parts.append(Part(
            f"S{i + 1}",
            rng.choice(GRID_SIDES),
            rng.choice(GRID_SIDES),
            same_height if same_height is not None else rng.choice(GRID_HEIGHTS),
            same_filling if same_filling is not None else rng.choice(GRID_FILLINGS),
        ))
    return Instance(platform, parts)


def reference_values() -> dict[str, Sequence]:
    """Published figures for instances that are not available; never asserted."""
    return {
        "ordering_coverage_pct": {"largest-first": 88.19, "smallest-first": 44.44,
                                  "random": 100.0},
        "same_height": {"winner": (97.22, 11, 20_800_000), "max-area": (100.0, 12, 20_300_000),
                        "max-parts": (98.61, 13, 20_200_000)},
        "same_filling": {"winner": (95.14, 11, 79_500_000), "max-area": (100.0, 12, 75_000_000),
                         "max-parts": (98.61, 12, 76_750_000)},
    }
