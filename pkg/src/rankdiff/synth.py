"""Seeded synthetic datasets with planted disparity structure.

Daily counts are drawn as Poisson with mean lam(i, k) * population(i, k) *
base_rate, independently per day. The seed fixes the full output, so a spec
is a complete, reproducible description of a fixture.
"""

from __future__ import annotations

import datetime as dt
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import SynthError
from .ingest import write_cases_csv, write_populations_csv
from .model import K, CaseCube, DateAxis, Municipality, PopulationTable
from .oracle import oracle_stats

__all__ = ["SynthSpec", "generate", "grid_boundaries", "write_fixture", "oracle_stats"]


@dataclass(frozen=True)
class SynthSpec:
    m: int
    n_days: int
    populations: tuple[tuple[int, ...], ...]   # (M, K)
    lam: tuple[tuple[float, ...], ...]         # (M, K) incidence multipliers
    seed: int = 0
    base_rate: float = 0.01
    start_date: dt.date = dt.date(2020, 10, 1)
    ids: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.m < 1 or self.n_days < 1:
            raise SynthError(f"m and n_days must be positive, got m={self.m}, n_days={self.n_days}")
        for name, matrix in (("populations", self.populations), ("lam", self.lam)):
            if len(matrix) != self.m or any(len(row) != K for row in matrix):
                raise SynthError(f"{name} must be an {self.m}x{K} matrix")
        if any(v < 0 for row in self.lam for v in row):
            raise SynthError("lam entries must be >= 0")
        if any(p < 0 for row in self.populations for p in row):
            raise SynthError("populations must be >= 0")
        if self.base_rate < 0:
            raise SynthError("base_rate must be >= 0")
        if self.ids and len(self.ids) != self.m:
            raise SynthError(f"ids must list exactly {self.m} municipalities")

    @classmethod
    def from_dict(cls, doc: dict) -> "SynthSpec":
        try:
            m = int(doc["m"])
            n_days = int(doc["n_days"])
            populations = tuple(tuple(int(v) for v in row) for row in doc["populations"])
            raw_lam = doc.get("lam", 1.0)
        except (KeyError, TypeError, ValueError) as exc:
            raise SynthError(f"invalid synth spec: {exc}") from exc
        if isinstance(raw_lam, (int, float)):
            lam = tuple(tuple(float(raw_lam) for _ in range(K)) for _ in range(m))
        else:
            lam = tuple(tuple(float(v) for v in row) for row in raw_lam)
        start = doc.get("start_date", "2020-10-01")
        try:
            start_date = dt.date.fromisoformat(start)
        except ValueError as exc:
            raise SynthError(f"invalid start_date {start!r}") from exc
        return cls(
            m=m,
            n_days=n_days,
            populations=populations,
            lam=lam,
            seed=int(doc.get("seed", 0)),
            base_rate=float(doc.get("base_rate", 0.01)),
            start_date=start_date,
            ids=tuple(str(v) for v in doc.get("ids", ())),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "SynthSpec":
        try:
            with open(path, encoding="utf-8") as handle:
                doc = json.load(handle)
        except OSError as exc:
            raise SynthError(f"cannot open {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SynthError(f"{path}: invalid JSON: {exc}") from exc
        return cls.from_dict(doc)

    def municipality_ids(self) -> tuple[str, ...]:
        if self.ids:
            return self.ids
        return tuple(f"m{i + 1:03d}" for i in range(self.m))


def generate(spec: SynthSpec) -> tuple[CaseCube, PopulationTable]:
    """Draw a (CaseCube, PopulationTable) pair; same spec, same output."""
    rng = np.random.default_rng(spec.seed)
    pops = np.array(spec.populations, dtype=np.int64)
    lam = np.array(spec.lam, dtype=np.float64)
    means = lam * pops * spec.base_rate
    counts = rng.poisson(means[:, None, :], size=(spec.m, spec.n_days, K)).astype(np.int64)

    municipalities = tuple(
        Municipality(id=mid, name=f"Synthville {i + 1}", county="Synth County")
        for i, mid in enumerate(spec.municipality_ids())
    )
    axis = DateAxis(start=spec.start_date, n_days=spec.n_days)
    cube = CaseCube(axis=axis, municipalities=municipalities, counts=counts)
    table = PopulationTable(municipalities=municipalities, pops=pops)
    return cube, table


def grid_boundaries(spec: SynthSpec) -> dict:
    """Unit-square polygons on a grid, one feature per municipality.

    Lets a synthetic fixture drive the full pipeline, choropleth included.
    """
    side = math.ceil(math.sqrt(spec.m))
    features = []
    for i, mid in enumerate(spec.municipality_ids()):
        col, row = i % side, i // side
        x0, y0 = float(col), float(row)
        ring = [[x0, y0], [x0 + 1.0, y0], [x0 + 1.0, y0 + 1.0], [x0, y0 + 1.0], [x0, y0]]
        features.append(
            {
                "type": "Feature",
                "id": mid,
                "properties": {"municipality_id": mid},
                "geometry": {"type": "Polygon", "coordinates": [ring]},
            }
        )
    return {"type": "FeatureCollection", "features": features}


def write_fixture(spec: SynthSpec, out_dir: str | Path) -> dict[str, Path]:
    """Write cases.csv, populations.csv, and boundaries.geojson for a spec."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cube, table = generate(spec)
    paths = {
        "cases": out / "cases.csv",
        "populations": out / "populations.csv",
        "boundaries": out / "boundaries.geojson",
    }
    write_cases_csv(cube, paths["cases"])
    write_populations_csv(table, paths["populations"])
    with open(paths["boundaries"], "w", encoding="utf-8", newline="") as handle:
        json.dump(grid_boundaries(spec), handle, indent=2, sort_keys=True)
        handle.write("\n")
    return paths
