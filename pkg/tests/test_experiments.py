import json

import jsonschema
import numpy as np
import pytest

from fpqc.experiments import (
    CONCENTRATION_SCHEMA,
    SWEEP_SCHEMA,
    ConcentrationResult,
    ExperimentConfig,
    SweepResult,
    concentration_experiment,
    export,
    read_csv,
    surrogate_net,
    sweep_cardinality,
)
from fpqc.gaussian import entropy
from fpqc.metrics import schatten_norm


def small(**kw):
    base = dict(modes=2, num_states=6, subset_sizes=(1, 4), trials=5, seed=123)
    base.update(kw)
    return ExperimentConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(modes=2, subset_sizes=(17,))
    with pytest.raises(ValueError):
        ExperimentConfig(subset_sizes=())
    with pytest.raises(ValueError):
        ExperimentConfig(trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(channel_family="haar")
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"modes": 2, "colour": 1})
    assert ExperimentConfig.from_dict({"p": "inf"}).p == float("inf")


def test_config_json(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"modes": 2, "subset_sizes": [2, 3], "seed": 5}))
    cfg = ExperimentConfig.from_json(path)
    assert cfg.subset_sizes == (2, 3) and cfg.modes == 2 and cfg.trials == 50
    assert ExperimentConfig.from_dict(cfg.to_json()) == cfg


def test_surrogate_net():
    (one,) = surrogate_net(3, 1, seed=4)
    assert entropy(one) == 0
    a, b = surrogate_net(3, 10, seed=4), surrogate_net(3, 10, seed=4)
    for s, t in zip(a, b):
        np.testing.assert_array_equal(s.frame, t.frame)
    rhos = [s.density() for s in a]
    for i in range(10):
        for j in range(i):
            assert schatten_norm(rhos[i] - rhos[j], 1) > 1e-6


def test_sweep_single_unitary_keeps_pure_distance():
    res = sweep_cardinality(small(modes=3, subset_sizes=(1,)))
    row = res.row(1)
    assert row.max_distance == pytest.approx(2 * (8 - 1) / 8, abs=1e-12)
    assert row.q50 == pytest.approx(1.75, abs=1e-12) and row.pass_fraction == 0


@pytest.mark.parametrize("modes", [1, 2, 3])
def test_sweep_exhaustive_point(modes):
    res = sweep_cardinality(small(modes=modes, subset_sizes=(4**modes,)))
    row = res.row(4**modes)
    assert row.trials == 1 and row.max_distance <= 1e-10 and row.pass_fraction == 1


def test_sweep_statistics_are_ordered():
    res = sweep_cardinality(small(subset_sizes=(1, 2, 4, 8)))
    for row in res.rows:
        assert 0 <= row.q50 <= row.q90 <= row.q99 <= row.max_distance <= 2
        assert row.mean_distance <= row.max_distance


def test_sweep_fixed_family_uses_one_channel():
    res = sweep_cardinality(small(modes=3, channel_family="paper"))
    assert [r.subset_size for r in res.rows] == [6] and res.rows[0].trials == 1


@pytest.mark.slow
def test_sweep_median_decreases():
    res = sweep_cardinality(ExperimentConfig(modes=3, num_states=30, subset_sizes=(1, 4, 16, 64), trials=50))
    med = [r.median_max_distance for r in res.rows]
    assert all(b <= 1.1 * a for a, b in zip(med, med[1:]))


def test_concentration_small():
    res = concentration_experiment(small(subset_sizes=(4, 8), trials=200), [0.0, 0.5, 3.0])
    assert len(res.rows) == 6 and len(res.audits) == 2
    for audit in res.audits:
        assert audit.within_limit and audit.max_bounded_difference <= 2 / audit.subset_size + 1e-12
    for row in res.rows:
        assert 0 <= row.tail_frequency <= 1
        if row.t == 0:
            assert row.bound == 1 and row.within_bound
        if row.t == 3.0:
            assert row.tail_frequency == 0


def test_concentration_rejects_negative_t():
    with pytest.raises(ValueError):
        concentration_experiment(small(), [-0.1])


def test_export_empty_csv(tmp_path):
    path = tmp_path / "empty.csv"
    export(None, path, "csv")
    assert path.read_text() == "subset_size,statistic,value\n"
    assert read_csv(path) == []


def test_export_csv_round_trip(tmp_path):
    res = sweep_cardinality(small())
    path = tmp_path / "sweep.csv"
    export(res, path, "csv")
    records = read_csv(path)
    for size, stat, value in records:
        assert value == getattr(res.row(size), stat)
    assert len(records) == 2 * 8


def test_export_json_schema(tmp_path):
    res = sweep_cardinality(small())
    path = tmp_path / "sweep.json"
    export(res, path, "json")
    data = json.loads(path.read_text())
    jsonschema.validate(data, SWEEP_SCHEMA)
    assert data["rows"][0]["max_distance"] == res.rows[0].max_distance

    conc = concentration_experiment(small(trials=20), [0.1])
    export(conc, path, "json")
    jsonschema.validate(json.loads(path.read_text()), CONCENTRATION_SCHEMA)
    csv_path = tmp_path / "conc.csv"
    export(conc, csv_path, "csv")
    stats = {stat for _, stat, _ in read_csv(csv_path)}
    assert "tail_frequency[t=0.10000000000000001]" in stats and "max_bounded_difference" in stats


def test_export_bad_format(tmp_path):
    with pytest.raises(ValueError):
        export(None, tmp_path / "x", "xml")


def test_worker_count_does_not_change_results(tmp_path):
    cfg = small(trials=6)
    paths = []
    for workers in (1, 2):
        path = tmp_path / f"w{workers}.csv"
        export(sweep_cardinality(cfg, workers=workers), path, "csv")
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    a = concentration_experiment(cfg, [0.1], workers=1)
    b = concentration_experiment(cfg, [0.1], workers=2)
    assert a.rows == b.rows and a.audits == b.audits


def test_result_types():
    assert isinstance(sweep_cardinality(small()), SweepResult)
    assert isinstance(concentration_experiment(small(trials=3), [0.1]), ConcentrationResult)
