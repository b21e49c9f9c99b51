"""Shared builders for small in-memory and on-disk fixtures."""

from __future__ import annotations

import datetime as dt
import json
from pathlib import Path

import numpy as np
import pytest

from rankdiff.model import CaseCube, DateAxis, Municipality, PopulationTable

START = dt.date(2020, 10, 1)


def make_municipalities(ids: list[str]) -> tuple[Municipality, ...]:
    return tuple(Municipality(id=mid, name=f"Town {mid}", county="Test County") for mid in ids)


def make_cube(counts, ids: list[str] | None = None, start: dt.date = START) -> CaseCube:
    counts = np.asarray(counts, dtype=np.int64)
    m, n, _ = counts.shape
    ids = ids if ids is not None else [f"m{i + 1:03d}" for i in range(m)]
    return CaseCube(
        axis=DateAxis(start=start, n_days=n),
        municipalities=make_municipalities(ids),
        counts=counts,
    )


def make_pops(pops, ids: list[str] | None = None) -> PopulationTable:
    pops = np.asarray(pops, dtype=np.int64)
    ids = ids if ids is not None else [f"m{i + 1:03d}" for i in range(pops.shape[0])]
    return PopulationTable(municipalities=make_municipalities(ids), pops=pops)


def random_cube(seed: int, max_m: int = 6, max_n: int = 10, high: int = 9) -> CaseCube:
    """Small random cube with plenty of rank ties (counts in 0..high)."""
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, max_m + 1))
    n = int(rng.integers(1, max_n + 1))
    counts = rng.integers(0, high + 1, size=(m, n, 4))
    return make_cube(counts)


def random_pops_for(cube: CaseCube, seed: int, low: int = 1, high: int = 10000) -> PopulationTable:
    rng = np.random.default_rng(seed + 77)
    pops = rng.integers(low, high, size=(cube.n_municipalities, 4))
    return PopulationTable(municipalities=cube.municipalities, pops=pops.astype(np.int64))


def cases_csv_text(rows: list[tuple[str, str, str, str, str, object]]) -> str:
    lines = ["date,municipality_id,municipality_name,county,group,count"]
    lines += [",".join(str(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def full_cases_rows(
    ids: list[str],
    n_days: int,
    value: int = 0,
    overrides: dict[tuple[str, int, str], int] | None = None,
) -> list[tuple]:
    """Complete grid of rows; overrides are keyed by (id, day_1based, group)."""
    overrides = overrides or {}
    rows = []
    for mid in ids:
        for day in range(1, n_days + 1):
            date = (START + dt.timedelta(days=day - 1)).isoformat()
            for group in ("BAA", "HL", "OTH", "W"):
                count = overrides.get((mid, day, group), value)
                rows.append((date, mid, f"Town {mid}", "Test County", group, count))
    return rows


def pops_csv_text(rows: list[tuple[str, str, object]]) -> str:
    lines = ["municipality_id,group,population"]
    lines += [",".join(str(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def square_feature(fid: str, x0: float = 0.0, y0: float = 0.0, closed: bool = True) -> dict:
    ring = [[x0, y0], [x0 + 1, y0], [x0 + 1, y0 + 1], [x0, y0 + 1]]
    if closed:
        ring.append([x0, y0])
    return {
        "type": "Feature",
        "id": fid,
        "properties": {},
        "geometry": {"type": "Polygon", "coordinates": [ring]},
    }


def geojson_text(features: list[dict]) -> str:
    return json.dumps({"type": "FeatureCollection", "features": features})


@pytest.fixture
def write_file(tmp_path: Path):
    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        return path

    return _write
