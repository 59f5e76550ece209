"""Winner determination: score candidate batches and pick the heaviest."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .model import EconomicParams, Layout


@dataclass(frozen=True)
class BatchScore:
    total_mass: float
    covered_area: float
    coverage: float
    part_count: int
    income: float | None = None
    cost: float | None = None

    @property
    def profit(self) -> float | None:
        if self.income is None or self.cost is None:
            return None
        return self.income - self.cost


def income(mass: float, economics: EconomicParams) -> float:
    return economics.price * mass


def cost(mass: float, economics: EconomicParams) -> float:
    """Fixed pre/post-processing cost plus a material term."""
    return economics.fixed_cost + economics.variable_cost * mass


def score(layout: Layout, economics: EconomicParams | None = None) -> BatchScore:
    m = layout.total_mass
    return BatchScore(
        total_mass=m,
        covered_area=layout.covered_area,
        coverage=layout.coverage,
        part_count=layout.part_count,
        income=income(m, economics) if economics else None,
        cost=cost(m, economics) if economics else None,
    )


def winner_key(layout: Layout, index: int) -> tuple:
    """Sort key: heavier first, then more covered area, then lower index."""
    return (-layout.total_mass, -layout.covered_area, index)


def coverage_key(layout: Layout, index: int) -> tuple:
    return (-layout.covered_area, -layout.total_mass, index)


def select_winner(candidates: Sequence[Layout]) -> Layout:
    if not candidates:
        raise ValueError("select_winner needs at least one candidate")
    best = min(range(len(candidates)), key=lambda i: winner_key(candidates[i], i))
    return candidates[best]
