"""Loaders for the three input datasets: daily case counts, group population
sizes, and municipality boundary geometry.

Canonical file layouts (UTF-8, header row required, RFC-4180 quoting):

* cases:       ``date,municipality_id,municipality_name,county,group,count``
* populations: ``municipality_id,group,population``
* boundaries:  GeoJSON FeatureCollection of Polygon/MultiPolygon features

The ``widhs-cumulative`` case schema has the same columns, but ``count`` is a
cumulative-to-date total; daily new cases are recovered by first-differencing
per municipality/group, clamping negative corrections to zero.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import IngestError
from .model import (
    GROUPS,
    K,
    BoundarySet,
    CaseCube,
    ClampEvent,
    DateAxis,
    Group,
    Municipality,
    PopulationTable,
    QualityReport,
    Ring,
)

CASE_SCHEMAS = ("canonical", "widhs-cumulative")

CASES_COLUMNS = ["date", "municipality_id", "municipality_name", "county", "group", "count"]
POPS_COLUMNS = ["municipality_id", "group", "population"]

# Source categories accepted in population files. ASIAN, HPI and AIAN are
# summed into OTH; MO and UNK are excluded and their totals reported.
OTH_COMPONENTS = ("OTH", "ASIAN", "HPI", "AIAN")
EXCLUDED_POP_GROUPS = ("MO", "UNK")
POP_SOURCE_GROUPS = ("BAA", "HL", "W") + OTH_COMPONENTS + EXCLUDED_POP_GROUPS


def _open_rows(path: Path, expected_columns: list[str]):
    try:
        handle = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise IngestError(f"cannot open {path}: {exc}") from exc
    reader = csv.DictReader(handle)
    if reader.fieldnames is None:
        handle.close()
        raise IngestError(f"{path}: empty file, expected header {','.join(expected_columns)}")
    if sorted(reader.fieldnames) != sorted(expected_columns):
        handle.close()
        raise IngestError(
            f"{path}: header {','.join(reader.fieldnames)} does not match "
            f"expected columns {','.join(expected_columns)}"
        )
    return handle, reader


def _parse_int(raw: str, path: Path, line: int, column: str) -> int:
    text = raw.strip()
    try:
        value = int(text)
    except ValueError:
        raise IngestError(
            f"{path}:{line}: column {column!r} must be an integer, got {raw!r}"
        ) from None
    if value < 0:
        raise IngestError(f"{path}:{line}: column {column!r} must be >= 0, got {value}")
    return value


def _parse_date(raw: str, path: Path, line: int) -> dt.date:
    try:
        return dt.date.fromisoformat(raw.strip())
    except ValueError:
        raise IngestError(
            f"{path}:{line}: column 'date' must be an ISO date (YYYY-MM-DD), got {raw!r}"
        ) from None


def load_cases(
    path: str | Path,
    schema: str = "canonical",
    report: QualityReport | None = None,
) -> CaseCube:
    """Parse a cases CSV into a validated CaseCube.

    Every (date, municipality, group) cell must be present exactly once; the
    date range must be contiguous. Missing rows are an error, never imputed.
    """
    path = Path(path)
    if schema not in CASE_SCHEMAS:
        raise IngestError(f"unknown cases schema {schema!r}, expected one of {CASE_SCHEMAS}")

    handle, reader = _open_rows(path, CASES_COLUMNS)
    cells: dict[tuple[str, dt.date, Group], int] = {}
    meta: dict[str, tuple[str, str]] = {}
    roster: list[str] = []
    dates: set[dt.date] = set()
    with handle:
        for line, row in enumerate(reader, start=2):
            date = _parse_date(row["date"], path, line)
            mid = row["municipality_id"].strip()
            if not mid:
                raise IngestError(f"{path}:{line}: municipality_id must be non-empty")
            try:
                group = Group.from_label(row["group"])
            except IngestError as exc:
                raise IngestError(f"{path}:{line}: {exc}") from None
            count = _parse_int(row["count"], path, line, "count")

            name, county = row["municipality_name"].strip(), row["county"].strip()
            if mid not in meta:
                meta[mid] = (name, county)
                roster.append(mid)
            elif meta[mid] != (name, county):
                raise IngestError(
                    f"{path}:{line}: municipality {mid!r} has conflicting "
                    f"name/county {name!r}/{county!r} vs {meta[mid][0]!r}/{meta[mid][1]!r}"
                )

            key = (mid, date, group)
            if key in cells:
                raise IngestError(
                    f"{path}:{line}: duplicate row for ({mid}, {date.isoformat()}, {group.value})"
                )
            cells[key] = count
            dates.add(date)

    if not cells:
        raise IngestError(f"{path}: no data rows")

    start, end = min(dates), max(dates)
    n_days = (end - start).days + 1
    axis = DateAxis(start=start, n_days=n_days)

    missing = [
        (mid, day, g)
        for mid in roster
        for day in axis.dates()
        for g in GROUPS
        if (mid, day, g) not in cells
    ]
    if missing:
        preview = ", ".join(
            f"({mid}, {day.isoformat()}, {g.value})" for mid, day, g in missing[:5]
        )
        raise IngestError(
            f"{path}: {len(missing)} missing (municipality, date, group) cells; "
            f"first: {preview}"
        )

    counts = np.zeros((len(roster), n_days, K), dtype=np.int64)
    for i, mid in enumerate(roster):
        for j, day in enumerate(axis.dates()):
            for k, g in enumerate(GROUPS):
                counts[i, j, k] = cells[(mid, day, g)]

    if schema == "widhs-cumulative":
        counts = _cumulative_to_daily(counts, roster, axis, report)

    municipalities = tuple(
        Municipality(id=mid, name=meta[mid][0], county=meta[mid][1]) for mid in roster
    )
    return CaseCube(axis=axis, municipalities=municipalities, counts=counts)


def _cumulative_to_daily(
    cumulative: np.ndarray,
    roster: list[str],
    axis: DateAxis,
    report: QualityReport | None,
) -> np.ndarray:
    """First-difference a cumulative tensor; clamp reporting corrections to 0."""
    daily = cumulative.copy()
    daily[:, 1:, :] = cumulative[:, 1:, :] - cumulative[:, :-1, :]
    negatives = np.argwhere(daily < 0)
    for i, j, k in negatives:
        if report is not None:
            report.clamps.append(
                ClampEvent(
                    municipality_id=roster[i],
                    group=GROUPS[k],
                    date=axis.date_of(int(j) + 1),
                    drop=int(-daily[i, j, k]),
                )
            )
        daily[i, j, k] = 0
    return daily


def load_populations(
    path: str | Path,
    municipalities: Sequence[Municipality],
    report: QualityReport | None = None,
) -> PopulationTable:
    """Parse a populations CSV aligned to the given municipality roster.

    Accepts the canonical four groups plus source categories: ASIAN/HPI/AIAN
    rows are summed into OTH, MO/UNK rows are excluded with totals reported.
    Group rows absent from the file default to zero population.
    """
    path = Path(path)
    handle, reader = _open_rows(path, POPS_COLUMNS)

    raw: dict[tuple[str, str], int] = {}
    excluded: dict[str, int] = {g: 0 for g in EXCLUDED_POP_GROUPS}
    unknown_ids: list[str] = []
    roster_ids = {m.id for m in municipalities}
    with handle:
        for line, row in enumerate(reader, start=2):
            mid = row["municipality_id"].strip()
            label = row["group"].strip().upper()
            if label not in POP_SOURCE_GROUPS:
                raise IngestError(
                    f"{path}:{line}: unknown group label {row['group']!r}; "
                    f"expected one of {', '.join(POP_SOURCE_GROUPS)}"
                )
            value = _parse_int(row["population"], path, line, "population")
            if mid not in roster_ids:
                if mid not in unknown_ids:
                    unknown_ids.append(mid)
                continue
            key = (mid, label)
            if key in raw:
                raise IngestError(f"{path}:{line}: duplicate row for ({mid}, {label})")
            raw[key] = value
            if label in excluded:
                excluded[label] += value

    seen_ids = {mid for mid, _ in raw}
    missing = sorted(roster_ids - seen_ids)
    if missing:
        raise IngestError(
            f"{path}: no population rows for {len(missing)} municipalities: "
            + ", ".join(missing[:10])
            + ("..." if len(missing) > 10 else "")
        )

    pops = np.zeros((len(municipalities), K), dtype=np.int64)
    for i, muni in enumerate(municipalities):
        for k, g in enumerate(GROUPS):
            if g is Group.OTH:
                pops[i, k] = sum(raw.get((muni.id, c), 0) for c in OTH_COMPONENTS)
            else:
                pops[i, k] = raw.get((muni.id, g.value), 0)

    if report is not None:
        for g, total in excluded.items():
            report.excluded_groups_totals[g] = report.excluded_groups_totals.get(g, 0) + total
        if unknown_ids:
            report.warnings.append(
                "populations file lists ids not in the case roster (ignored): "
                + ", ".join(sorted(unknown_ids)[:10])
            )
    return PopulationTable(municipalities=tuple(municipalities), pops=pops)


def _feature_id(feature: dict, index: int, path: Path) -> str:
    if "id" in feature and feature["id"] not in (None, ""):
        return str(feature["id"])
    props = feature.get("properties") or {}
    for key in ("municipality_id", "id", "GEOID", "geoid"):
        if props.get(key) not in (None, ""):
            return str(props[key])
    raise IngestError(
        f"{path}: feature #{index} has no id (looked at feature.id and "
        "properties municipality_id/id/GEOID)"
    )


def _collect_rings(geometry: dict, fid: str, path: Path, report: QualityReport | None) -> list[Ring]:
    gtype = geometry.get("type")
    if gtype == "Polygon":
        polygons = [geometry["coordinates"]]
    elif gtype == "MultiPolygon":
        polygons = geometry["coordinates"]
    else:
        raise IngestError(
            f"{path}: feature {fid!r} has non-polygon geometry type {gtype!r}"
        )
    rings: list[Ring] = []
    for polygon in polygons:
        for ring_coords in polygon:
            ring: Ring = [(float(pt[0]), float(pt[1])) for pt in ring_coords]
            if len(ring) < 3:
                raise IngestError(f"{path}: feature {fid!r} has a ring with < 3 points")
            if ring[0] != ring[-1]:
                ring.append(ring[0])
                if report is not None:
                    report.warnings.append(f"auto-closed unclosed ring in feature {fid!r}")
            rings.append(ring)
    return rings


def load_boundaries(
    path: str | Path,
    municipalities: Sequence[Municipality],
    report: QualityReport | None = None,
) -> BoundarySet:
    """Parse a GeoJSON FeatureCollection into a BoundarySet keyed by id.

    Features whose id is not in the roster are retained but reported as
    unmatched; roster municipalities without geometry are reported as missing.
    Neither condition is fatal.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise IngestError(f"cannot open {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise IngestError(f"{path}: invalid JSON: {exc}") from exc

    if doc.get("type") != "FeatureCollection" or not isinstance(doc.get("features"), list):
        raise IngestError(f"{path}: expected a GeoJSON FeatureCollection")

    shapes: dict[str, list[Ring]] = {}
    for index, feature in enumerate(doc["features"]):
        fid = _feature_id(feature, index, path)
        geometry = feature.get("geometry")
        if not isinstance(geometry, dict):
            raise IngestError(f"{path}: feature {fid!r} has no geometry")
        rings = _collect_rings(geometry, fid, path, report)
        shapes.setdefault(fid, []).extend(rings)

    roster_ids = [m.id for m in municipalities]
    unmatched = tuple(sorted(set(shapes) - set(roster_ids)))
    missing = tuple(mid for mid in sorted(roster_ids) if mid not in shapes)
    if report is not None:
        report.unmatched_geometry_ids.extend(unmatched)
        report.missing_geometry_ids.extend(missing)
    return BoundarySet(shapes=shapes, unmatched_ids=unmatched, missing_ids=missing)


def write_cases_csv(cube: CaseCube, path: str | Path) -> None:
    """Write a CaseCube in the canonical cases schema (round-trip safe)."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CASES_COLUMNS)
        for i, muni in enumerate(cube.municipalities):
            for j, day in enumerate(cube.axis.dates()):
                for k, g in enumerate(GROUPS):
                    writer.writerow(
                        [day.isoformat(), muni.id, muni.name, muni.county,
                         g.value, int(cube.counts[i, j, k])]
                    )


def write_populations_csv(table: PopulationTable, path: str | Path) -> None:
    """Write a PopulationTable in the canonical populations schema."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(POPS_COLUMNS)
        for i, muni in enumerate(table.municipalities):
            for k, g in enumerate(GROUPS):
                writer.writerow([muni.id, g.value, int(table.pops[i, k])])
