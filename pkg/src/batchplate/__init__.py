"""Build-plate batch planning for 3D printers: guillotine packing plus
mass-based winner selection."""

from .model import (
    EconomicParams,
    FreeArea,
    Instance,
    InstanceError,
    Layout,
    Part,
    Placement,
    Platform,
    part_mass,
    part_volume,
    rotate,
    search_space_size,
)
from .packer import Fit, SearchConfig, SearchResult, fits, multi_start, pack_sequence, split_area
from .wdp import BatchScore, cost, income, score, select_winner

__all__ = [
    "BatchScore",
    "EconomicParams",
    "Fit",
    "FreeArea",
    "Instance",
    "InstanceError",
    "Layout",
    "Part",
    "Placement",
    "Platform",
    "SearchConfig",
    "SearchResult",
    "cost",
    "fits",
    "income",
    "multi_start",
    "pack_sequence",
    "part_mass",
    "part_volume",
    "rotate",
    "score",
    "search_space_size",
    "select_winner",
    "split_area",
]

__version__ = "0.1.0"
