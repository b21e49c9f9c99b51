"""End-to-end orchestration: load inputs, compute statistics, write the
output tree. Used by the CLI; importable for tests and notebooks.

Outputs under the configured directory:

* ``rd.csv``            long-form rank differences
* ``stats.json``        per-municipality statistics document
* ``labels.csv``        classification for the analysis group
* ``quality.json``      data-quality report
* ``dashboards/<id>.svg`` one dashboard per municipality
* ``map_<group>.svg``   classification choropleth
* ``index.html``        entry page linking everything

Writes are confined to the output directory and re-runs overwrite the same
bytes for the same inputs. ``RANKDIFF_THREADS`` caps render parallelism;
results do not depend on it.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import classify as classify_mod
from . import ingest, metrics, render
from .classify import ClassifierConfig, ClassLabel
from .errors import ConfigError
from .metrics import RegimeConfig
from .model import BoundarySet, CaseCube, Group, PopulationTable, QualityReport

BASIS_ALIASES = {"raw": "raw_daily", "raw_daily": "raw_daily", "ma7": "ma7",
                 "cumulative": "cumulative"}


@dataclass(frozen=True)
class RunConfig:
    cases: Path
    populations: Path
    boundaries: Path
    out: Path = Path("out")
    cases_schema: str = "canonical"
    basis: str = "raw_daily"
    regime: RegimeConfig = field(default_factory=RegimeConfig)
    classifier: ClassifierConfig = field(default_factory=ClassifierConfig)
    group: Group = Group.BAA

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        """Load a JSON config; relative paths resolve against the config file."""
        path = Path(path)
        try:
            with open(path, encoding="utf-8") as handle:
                doc = json.load(handle)
        except OSError as exc:
            raise ConfigError(f"cannot open config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        base = path.parent

        def resolve(key: str) -> Path:
            if key not in doc:
                raise ConfigError(f"{path}: missing required key {key!r}")
            return (base / str(doc[key])).resolve()

        regime_doc = doc.get("regime", {})
        classifier_doc = doc.get("classifier", {})
        try:
            regime = RegimeConfig(
                t_min=float(regime_doc.get("min", 0.0)),
                t_max=None if regime_doc.get("max") is None else float(regime_doc["max"]),
            )
            classifier = ClassifierConfig(**classifier_doc)
        except TypeError as exc:
            raise ConfigError(f"{path}: bad classifier config: {exc}") from exc
        return cls(
            cases=resolve("cases"),
            populations=resolve("populations"),
            boundaries=resolve("boundaries"),
            out=(base / str(doc.get("out", "out"))).resolve(),
            cases_schema=str(doc.get("cases_schema", "canonical")),
            basis=parse_basis(str(doc.get("basis", "raw"))),
            regime=regime,
            classifier=classifier,
            group=parse_group(str(doc.get("group", "baa"))),
        )

    def with_overrides(
        self,
        basis: str | None = None,
        regime_min: float | None = None,
        regime_max: float | None = None,
        group: str | None = None,
        out: str | None = None,
    ) -> "RunConfig":
        """Apply CLI flag overrides; flags win over the config file."""
        cfg = self
        if basis is not None:
            cfg = replace(cfg, basis=parse_basis(basis))
        if regime_min is not None or regime_max is not None:
            cfg = replace(cfg, regime=RegimeConfig(
                t_min=cfg.regime.t_min if regime_min is None else regime_min,
                t_max=cfg.regime.t_max if regime_max is None else regime_max,
            ))
        if group is not None:
            cfg = replace(cfg, group=parse_group(group))
        if out is not None:
            cfg = replace(cfg, out=Path(out).resolve())
        return cfg


def parse_basis(text: str) -> str:
    key = text.strip().lower()
    if key not in BASIS_ALIASES:
        raise ConfigError(f"unknown basis {text!r}, expected raw, ma7 or cumulative")
    return BASIS_ALIASES[key]


def parse_group(text: str) -> Group:
    key = text.strip().upper()
    try:
        return Group(key)
    except ValueError:
        raise ConfigError(f"unknown group {text!r}, expected baa, hl, oth or w") from None


def thread_count() -> int:
    raw = os.environ.get("RANKDIFF_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"RANKDIFF_THREADS must be an integer, got {raw!r}") from None
    return max(value, 1)


@dataclass
class LoadedInputs:
    cube: CaseCube
    pops: PopulationTable
    boundaries: BoundarySet
    report: QualityReport


def load_inputs(cfg: RunConfig) -> LoadedInputs:
    report = QualityReport()
    cube = ingest.load_cases(cfg.cases, schema=cfg.cases_schema, report=report)
    pops = ingest.load_populations(cfg.populations, cube.municipalities, report=report)
    boundaries = ingest.load_boundaries(cfg.boundaries, cube.municipalities, report=report)
    return LoadedInputs(cube=cube, pops=pops, boundaries=boundaries, report=report)


def validate(cfg: RunConfig) -> QualityReport:
    """Load and validate all inputs, returning the quality report."""
    return load_inputs(cfg).report


@dataclass
class RunResult:
    out: Path
    report: QualityReport
    labels: dict[str, ClassLabel]
    n_dashboards: int


def run(cfg: RunConfig) -> RunResult:
    """Execute the full pipeline and write the output tree."""
    loaded = load_inputs(cfg)
    cube, pops = loaded.cube, loaded.pops

    pop_rank = metrics.rank_population(pops)
    case_rank = metrics.rank_cases(cube, basis=cfg.basis)
    rd = metrics.rank_diff(pop_rank, case_rank)
    regime = cfg.regime.resolved(cube.n_municipalities)
    stats = metrics.group_stats(cube, pops, rd, regime)
    labels = classify_mod.classify_municipalities(stats, cfg.group, cfg.classifier)

    out = cfg.out
    dashboards_dir = out / "dashboards"
    dashboards_dir.mkdir(parents=True, exist_ok=True)

    metrics.write_rd_csv(out / "rd.csv", cube, rd)
    metrics.write_stats_json(out / "stats.json", cube, stats, regime, cfg.basis)
    classify_mod.write_labels_csv(out / "labels.csv", labels, cfg.group)
    with open(out / "quality.json", "w", encoding="utf-8", newline="") as handle:
        handle.write(loaded.report.to_json())

    ids = sorted(cube.ids())

    def render_one(mid: str) -> tuple[str, str]:
        model = render.build_dashboard(stats, cube, pops, mid, rd=rd)
        return mid, render.render_dashboard(model)

    threads = thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rendered = dict(pool.map(render_one, ids))
    else:
        rendered = dict(map(render_one, ids))
    for mid in ids:
        with open(dashboards_dir / f"{mid}.svg", "w", encoding="utf-8", newline="") as handle:
            handle.write(rendered[mid])

    map_name = f"map_{cfg.group.value.lower()}.svg"
    choropleth = render.build_choropleth(loaded.boundaries, labels, cfg.group)
    with open(out / map_name, "w", encoding="utf-8", newline="") as handle:
        handle.write(render.render_choropleth(choropleth))

    with open(out / "index.html", "w", encoding="utf-8", newline="") as handle:
        handle.write(render.render_index(cube, stats, labels, cfg.group, map_name))

    return RunResult(out=out, report=loaded.report, labels=labels, n_dashboards=len(ids))
