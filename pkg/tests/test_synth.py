import json
import math

import numpy as np
import pytest

from rankdiff.errors import SynthError
from rankdiff.ingest import load_cases, load_populations
from rankdiff.metrics import RegimeConfig, persistence_index, rank_cases, rank_diff, rank_population, skewness
from rankdiff.oracle import oracle_stats
from rankdiff.synth import SynthSpec, generate, grid_boundaries, write_fixture

from conftest import make_cube, make_pops


def simple_spec(**overrides):
    base = dict(
        m=3,
        n_days=5,
        populations=((100, 100, 100, 1000), (200, 200, 200, 2000), (300, 300, 300, 3000)),
        lam=((1.0,) * 4, (1.0,) * 4, (1.0,) * 4),
        seed=7,
        base_rate=0.05,
    )
    base.update(overrides)
    return SynthSpec(**base)


class TestGenerate:
    def test_same_seed_same_output(self):
        spec = simple_spec()
        cube1, pops1 = generate(spec)
        cube2, pops2 = generate(spec)
        assert np.array_equal(cube1.counts, cube2.counts)
        assert np.array_equal(pops1.pops, pops2.pops)
        assert cube1.ids() == cube2.ids()

    def test_different_seed_differs(self):
        a, _ = generate(simple_spec(seed=1, n_days=30))
        b, _ = generate(simple_spec(seed=2, n_days=30))
        assert not np.array_equal(a.counts, b.counts)

    def test_zero_lambda_zero_cube(self):
        spec = simple_spec(lam=((0.0,) * 4,) * 3)
        cube, _ = generate(spec)
        assert not cube.counts.any()

    def test_empirical_mean_tracks_rate(self):
        spec = simple_spec(m=1, n_days=3000,
                           populations=((1000, 1000, 1000, 1000),),
                           lam=((2.0, 1.0, 1.0, 1.0),),
                           base_rate=0.01, seed=3)
        cube, _ = generate(spec)
        assert cube.counts[0, :, 0].mean() == pytest.approx(20.0, rel=0.05)

    def test_mean_abs_rd_shrinks_as_counts_grow(self):
        pops = tuple((1000 * (i + 1),) * 4 for i in range(6))
        lam = ((1.0,) * 4,) * 6

        def mean_abs_rd(rate):
            spec = SynthSpec(m=6, n_days=60, populations=pops, lam=lam,
                             seed=5, base_rate=rate)
            cube, table = generate(spec)
            rd = rank_diff(rank_population(table), rank_cases(cube))
            return np.abs(rd[:, :, 0]).mean()

        assert mean_abs_rd(1.0) < mean_abs_rd(0.001)

    def test_planted_disparity_detected(self):
        # one small municipality with a 5x incidence multiplier on BAA
        pops_baa = [15000, 6000, 4500, 3300, 550, 530, 510, 500]
        pops = tuple((b, b, b, 10 * b) for b in pops_baa)
        hits = 0
        for seed in range(10):
            lam = tuple((5.0 if i == 7 else 1.0, 1.0, 1.0, 1.0) for i in range(8))
            spec = SynthSpec(m=8, n_days=365, populations=pops, lam=lam, seed=seed)
            cube, table = generate(spec)
            rd = rank_diff(rank_population(table), rank_cases(cube))
            series = rd[7, :, 0]
            per = persistence_index(series, RegimeConfig().resolved(8))
            sk = skewness(series)
            if per >= 90.0 and sk is not None and sk > 1.0:
                hits += 1
        assert hits >= 9


class TestSpecParsing:
    def test_scalar_lambda_broadcast(self):
        spec = SynthSpec.from_dict(
            {"m": 2, "n_days": 3, "populations": [[1, 1, 1, 1], [2, 2, 2, 2]], "lam": 2.5}
        )
        assert spec.lam == ((2.5,) * 4, (2.5,) * 4)

    def test_from_file(self, tmp_path):
        doc = {"m": 1, "n_days": 2, "populations": [[1, 2, 3, 4]], "seed": 9}
        path = tmp_path / "spec.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        spec = SynthSpec.from_file(path)
        assert spec.seed == 9
        assert spec.lam == ((1.0,) * 4,)

    def test_wrong_width_rejected(self):
        with pytest.raises(SynthError, match="3x4"):
            SynthSpec(m=3, n_days=1, populations=((1, 2),) * 3, lam=((1.0,) * 4,) * 3)

    def test_negative_lambda_rejected(self):
        with pytest.raises(SynthError, match="lam"):
            simple_spec(lam=((-1.0, 1.0, 1.0, 1.0),) * 3)

    def test_missing_key_rejected(self):
        with pytest.raises(SynthError, match="invalid synth spec"):
            SynthSpec.from_dict({"m": 2})

    def test_bad_ids_length(self):
        with pytest.raises(SynthError, match="ids"):
            simple_spec(ids=("only-one",))


class TestFixtureFiles:
    def test_write_fixture_roundtrip(self, tmp_path):
        spec = simple_spec()
        paths = write_fixture(spec, tmp_path / "fx")
        cube, table = generate(spec)
        loaded = load_cases(paths["cases"])
        assert np.array_equal(loaded.counts, cube.counts)
        pops = load_populations(paths["populations"], loaded.municipalities)
        assert np.array_equal(pops.pops, table.pops)
        geo = json.loads(paths["boundaries"].read_text(encoding="utf-8"))
        assert len(geo["features"]) == spec.m

    def test_grid_boundaries_closed_rings(self):
        geo = grid_boundaries(simple_spec(m=5, populations=((1, 1, 1, 1),) * 5,
                                          lam=((1.0,) * 4,) * 5))
        assert len(geo["features"]) == 5
        for feature in geo["features"]:
            ring = feature["geometry"]["coordinates"][0]
            assert ring[0] == ring[-1]


class TestOracle:
    """Anchor the brute-force oracle against hand-computed values."""

    @pytest.fixture
    def tiny(self):
        counts = np.zeros((2, 3, 4), dtype=int)
        counts[0, :, 0] = [3, 0, 2]   # a, BAA
        counts[1, :, 0] = [1, 1, 2]   # b, BAA
        counts[1, :, 1] = [5, 5, 5]   # b, HL
        counts[0, :, 2] = [1, 2, 3]   # a, OTH
        counts[1, :, 2] = [1, 2, 3]   # b, OTH
        counts[0, :, 3] = [10, 0, 0]  # a, W
        counts[1, :, 3] = [0, 0, 4]   # b, W
        cube = make_cube(counts, ids=["a", "b"])
        pops = make_pops([[10, 0, 5, 100], [8, 20, 5, 50]], ids=["a", "b"])
        return cube, pops

    def test_hand_computed_ranks_and_rd(self, tiny):
        cube, pops = tiny
        o = oracle_stats(cube, pops, (0.0, 2.0))
        assert o["pop_rank"] == [[1, 2, 1, 1], [2, 1, 2, 2]]
        a_rd = [row[0] for row in o["rd"][0]]
        b_rd = [row[0] for row in o["rd"][1]]
        assert a_rd == [0, -1, 0]
        assert b_rd == [0, 1, 0]
        assert [row[3] for row in o["rd"][0]] == [0, 0, -1]

    def test_hand_computed_ma_and_statewide(self, tiny):
        cube, pops = tiny
        o = oracle_stats(cube, pops, (0.0, 2.0))
        assert o["ma7"][0][0][0] == 3.0
        assert o["ma7"][0][1][0] == 1.5
        assert o["ma7"][0][2][0] == pytest.approx(5 / 3, abs=1e-15)
        assert [row[0] for row in o["statewide_daily"]] == [4, 1, 4]
        assert [row[0] for row in o["ma7_statewide"]] == [4.0, 2.5, 3.0]

    def test_hand_computed_persistence_and_skewness(self, tiny):
        cube, pops = tiny
        o = oracle_stats(cube, pops, (0.0, 2.0))
        assert o["persistence"][0][0] == 0.0
        assert o["persistence"][1][0] == pytest.approx(100.0 / 3)
        assert o["skewness"][0][0] == pytest.approx(-math.sqrt(3), abs=1e-12)
        assert o["skewness"][1][0] == pytest.approx(math.sqrt(3), abs=1e-12)
        assert o["skewness"][0][1] is None  # constant series

    def test_hand_computed_relative_change(self, tiny):
        cube, pops = tiny
        o = oracle_stats(cube, pops, (0.0, 2.0))
        # columns: BAA, HL, OTH
        assert o["relative_change"][0][0] == pytest.approx(400.0)
        assert o["relative_change"][0][1] is None
        assert o["relative_change"][0][2] == pytest.approx(1100.0)
        assert o["special"][0] == ["normal", "undefined_zero_zero", "cases_exceed_pop"]
        assert o["relative_change"][1][0] == pytest.approx(525.0)
        assert o["relative_change"][1][1] == pytest.approx(837.5)
        assert o["special"][1] == ["normal", "normal", "cases_exceed_pop"]

    def test_oracle_does_not_import_engine(self):
        import ast

        import rankdiff.oracle as oracle_mod

        tree = ast.parse(open(oracle_mod.__file__, encoding="utf-8").read())
        for node in ast.walk(tree):
            if isinstance(node, ast.ImportFrom):
                assert "metrics" not in (node.module or "")
            elif isinstance(node, ast.Import):
                assert all("metrics" not in alias.name for alias in node.names)
