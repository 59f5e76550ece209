"""Instance files, layout reports and the tabular part-list importer."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import jsonschema

from .model import EconomicParams, Instance, InstanceError, Layout, Part, Placement, Platform
from .wdp import cost, income


class InstanceFormatError(InstanceError):
    """The document is not valid JSON or does not follow the instance schema."""


@lru_cache(maxsize=None)
def instance_schema() -> dict:
    text = resources.files("batchplate").joinpath("data/instance.schema.json").read_text()
    return json.loads(text)


def _field_path(path) -> str:
    out = ""
    for item in path:
        out += f"[{item}]" if isinstance(item, int) else (f".{item}" if out else item)
    return out or "<document>"


def parse_instance(document: str | bytes | Mapping[str, Any]) -> Instance:
    """Validate an instance document (JSON text or decoded mapping)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(
                f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if isinstance(document, Mapping) and document.get("parts") == []:
        raise InstanceError("no parts")

    validator = jsonschema.Draft202012Validator(instance_schema())
    errors = sorted(validator.iter_errors(document), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = _field_path(err.absolute_path)
        if err.validator == "required":
            missing = err.message.split("'")[1]
            raise InstanceFormatError(f"{where}: missing field {missing!r}")
        raise InstanceFormatError(f"{where}: {err.message}")

    plat = document["platform"]
    platform = Platform(plat["name"], plat["length"], plat["width"], plat["height"])
    parts = []
    for p in document["parts"]:
        parts.append(Part(p["name"], p["length"], p["width"], p["height"], p["filling"]))
    econ = document.get("economics")
    economics = EconomicParams(**econ) if econ is not None else None
    return Instance(platform, parts, economics)


def load_instance(path: str | Path) -> Instance:
    path = Path(path)
    if path.suffix.lower() in (".csv", ".tsv", ".txt"):
        raise InstanceFormatError(
            f"{path}: tabular part lists need a platform; use 'convert' first")
    return parse_instance(path.read_text())


def instance_to_dict(instance: Instance) -> dict:
    p = instance.platform
    doc: dict[str, Any] = {
        "platform": {"name": p.name, "length": p.length, "width": p.width, "height": p.height},
        "parts": [
            {"name": q.name, "length": q.length, "width": q.width,
             "height": q.height, "filling": q.filling}
            for q in instance.parts
        ],
    }
    if instance.economics is not None:
        e = instance.economics
        doc["economics"] = {"price": e.price, "fixed_cost": e.fixed_cost,
                            "variable_cost": e.variable_cost}
    return doc


def dump_json(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"


def instance_digest(instance: Instance) -> str:
    canonical = json.dumps(instance_to_dict(instance), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def case_study() -> Instance:
    """The bundled 10-part, 200x200x200 mm case-study instance."""
    text = resources.files("batchplate").joinpath("data/case_study.json").read_text()
    return parse_instance(text)


def _number(text: str, where: str) -> float:
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text.replace(",", "."))
    except ValueError:
        raise InstanceFormatError(f"{where}: not a number: {text!r}") from None


_COLUMNS = ("name", "length", "width", "height", "filling")


def read_parts_table(text: str) -> list[Part]:
    """Read a delimited part table (name, length, width, height, filling).

    Extra columns such as area or volume are ignored; header names are
    matched on their first word, case-insensitively.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InstanceError("no parts")
    dialect = csv.Sniffer().sniff(lines[0], delimiters=",;\t")
    rows = list(csv.reader(io.StringIO("\n".join(lines)), dialect))
    header = [h.strip().split(" ")[0].split("(")[0].lower() for h in rows[0]]
    try:
        cols = [header.index(c) for c in _COLUMNS]
    except ValueError:
        raise InstanceFormatError(
            f"line 1: header must contain columns {', '.join(_COLUMNS)}") from None
    parts = []
    for lineno, row in enumerate(rows[1:], start=2):
        name = row[cols[0]].strip()
        values = [_number(row[c], f"line {lineno}, {_COLUMNS[k + 1]}")
                  for k, c in enumerate(cols[1:])]
        parts.append(Part(name, *values))
    return parts


def instance_from_table(text: str, platform: Platform,
                        economics: EconomicParams | None = None) -> Instance:
    return Instance(platform, read_parts_table(text), economics)


def layout_report(
    layout: Layout,
    *,
    economics: EconomicParams | None = None,
    provenance: Mapping[str, Any] | None = None,
) -> dict:
    """Serializable description of a layout; metrics are computed, never copied."""
    metrics: dict[str, Any] = {
        "covered_area_mm2": layout.covered_area,
        "coverage_pct": 100.0 * layout.coverage,
        "total_mass_mm3": layout.total_mass,
        "part_count": layout.part_count,
    }
    if economics is not None:
        metrics["income"] = income(layout.total_mass, economics)
        metrics["cost"] = cost(layout.total_mass, economics)
    return {
        "platform": layout.platform.name,
        "placements": [
            {"part": p.part.name, "x": p.x, "y": p.y, "rotated": p.rotated,
             "length": p.length, "width": p.width}
            for p in layout.placements
        ],
        "unplaced": [p.name for p in layout.unplaced],
        "metrics": metrics,
        "provenance": dict(provenance or {}),
    }


def layout_from_report(report: Mapping[str, Any], instance: Instance) -> Layout:
    """Rebuild a layout from a report, checking the stored dimensions."""
    placements = []
    for entry in report["placements"]:
        pl = Placement(instance.part(entry["part"]), entry["x"], entry["y"],
                       bool(entry["rotated"]))
        if (pl.length, pl.width) != (entry["length"], entry["width"]):
            raise InstanceError(
                f"placement {entry['part']!r}: stored footprint does not match part")
        placements.append(pl)
    unplaced = [instance.part(name) for name in report["unplaced"]]
    return Layout(instance.platform, tuple(placements), tuple(unplaced))
