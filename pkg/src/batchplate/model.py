"""Domain types for build-plate batch planning.

Coordinates follow the printer bed convention used throughout the package:
origin at the top-left corner, X along the part length, Y along the part
width, Y increasing downward.  All dataclasses are frozen so layouts can be
shared freely between worker threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence


class InstanceError(ValueError):
    """An instance, part or platform failed validation."""


def _require_positive(owner: str, **dims: float) -> None:
    for key, value in dims.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise InstanceError(f"{owner}: {key} must be a number, got {value!r}")
        if not math.isfinite(value) or value <= 0:
            raise InstanceError(f"{owner}: {key} must be positive, got {value!r}")


@dataclass(frozen=True)
class Part:
    """A part reduced to its bounding footprint plus height and infill.

    ``filling`` is the solid fraction of the printed volume, in (0, 1].
    """

    name: str
    length: float
    width: float
    height: float
    filling: float

    def __post_init__(self) -> None:
        _require_positive(f"part {self.name!r}", length=self.length,
                          width=self.width, height=self.height)
        f = self.filling
        if isinstance(f, bool) or not isinstance(f, (int, float)) or not (0 < f <= 1):
            raise InstanceError(
                f"part {self.name!r}: filling must lie in (0, 1], got {f!r}")

    @property
    def area(self) -> float:
        return self.length * self.width

    def shape_key(self) -> tuple[float, float, float, float]:
        """Fields that make two parts interchangeable for packing purposes."""
        return (self.length, self.width, self.height, self.filling)


@dataclass(frozen=True)
class Platform:
    name: str
    length: float
    width: float
    height: float

    def __post_init__(self) -> None:
        _require_positive(f"platform {self.name!r}", length=self.length,
                          width=self.width, height=self.height)

    @property
    def area(self) -> float:
        return self.length * self.width


@dataclass(frozen=True)
class FreeArea:
    """An unused rectangle of the bed (an entry of the available-area list)."""

    x: float
    y: float
    length: float
    width: float

    @property
    def area(self) -> float:
        return self.length * self.width


@dataclass(frozen=True)
class Placement:
    part: Part
    x: float
    y: float
    rotated: bool = False

    @property
    def length(self) -> float:
        """Placed X-extent."""
        return self.part.width if self.rotated else self.part.length

    @property
    def width(self) -> float:
        """Placed Y-extent."""
        return self.part.length if self.rotated else self.part.width

    @property
    def area(self) -> float:
        return self.length * self.width

    def bounds(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.x + self.length, self.y + self.width)


@dataclass(frozen=True)
class Layout:
    """A candidate batch: placed parts on one platform plus the leftovers."""

    platform: Platform
    placements: tuple[Placement, ...] = ()
    unplaced: tuple[Part, ...] = ()
    covered_area: float = field(init=False)
    total_mass: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "placements", tuple(self.placements))
        object.__setattr__(self, "unplaced", tuple(self.unplaced))
        object.__setattr__(self, "covered_area",
                           sum(p.area for p in self.placements))
        object.__setattr__(self, "total_mass",
                           sum(part_mass(p.part) for p in self.placements))

    @property
    def coverage(self) -> float:
        """Covered fraction of the bed, in [0, 1]."""
        return self.covered_area / self.platform.area

    @property
    def part_count(self) -> int:
        return len(self.placements)

    def part_names(self) -> list[str]:
        return [p.part.name for p in self.placements]

    def signature(self) -> frozenset:
        """Identity of the physical arrangement, independent of placement order."""
        return frozenset((p.part.name, p.x, p.y, p.rotated) for p in self.placements)


@dataclass(frozen=True)
class EconomicParams:
    """Linear income/cost model: income = price*m, cost = fixed + variable*m."""

    price: float = 0.0
    fixed_cost: float = 0.0
    variable_cost: float = 0.0

    def __post_init__(self) -> None:
        for key in ("price", "fixed_cost", "variable_cost"):
            value = getattr(self, key)
            if isinstance(value, bool) or not isinstance(value, (int, float)) \
                    or not math.isfinite(value) or value < 0:
                raise InstanceError(f"economics: {key} must be >= 0, got {value!r}")


@dataclass(frozen=True)
class Instance:
    platform: Platform
    parts: tuple[Part, ...]
    economics: EconomicParams | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise InstanceError("no parts")
        seen: set[str] = set()
        for part in self.parts:
            if part.name in seen:
                raise InstanceError(f"duplicate part name {part.name!r}")
            seen.add(part.name)
            if part.height > self.platform.height:
                raise InstanceError(
                    f"part {part.name!r}: height {part.height} exceeds "
                    f"platform height {self.platform.height}")

    def part(self, name: str) -> Part:
        for p in self.parts:
            if p.name == name:
                return p
        raise KeyError(name)


def part_volume(part: Part) -> float:
    """Bounding-box volume of a part, in mm^3."""
    return part.length * part.width * part.height


def part_mass(part: Part) -> float:
    """Material used by a part, expressed as a volume (mm^3)."""
    return part_volume(part) * part.filling


def search_space_size(n: int) -> int:
    """Number of (ordering, orientation) sequences for ``n`` parts: 2**n * n!."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return (1 << n) * math.factorial(n)


def rotate(part: Part) -> Part:
    """Return the part turned 90 degrees about the vertical axis."""
    return Part(part.name, part.width, part.length, part.height, part.filling)


def total_mass(parts: Sequence[Part]) -> float:
    return sum(part_mass(p) for p in parts)
