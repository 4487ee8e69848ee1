import json

import pytest

from boxfold.campaign import (
    CampaignConfig,
    ResultRecord,
    ResultStore,
    format_stats,
    instance_id,
    oracle_census,
    run_campaign,
    sat_census,
    stats,
)
from boxfold.encoder import BoardSpec, EncodeConfig, anchor_pairs
from boxfold.folding import count_foldings
from boxfold.geometry import BoxSpec
from boxfold.polyomino import canonical_form, from_text
from boxfold.solver import SolverConfig

CUBE = BoxSpec(1, 1, 1)
DOMINO_BOX = BoxSpec(1, 1, 2)


def record(text, folds=(1,), boxes=((1, 1, 1),), instance="i0"):
    cells = from_text(text)
    return ResultRecord(
        key=canonical_form(cells),
        polyomino=text,
        boxes=[list(b) for b in boxes],
        folds=list(folds),
        anchors=[0],
        solver_seconds=0.1,
        timestamp="2026-01-01T00:00:00+00:00",
        instance=instance,
    )


def small_campaign(tmp_path, solver_cfg, jobs=1, out="c", **kw):
    enc = EncodeConfig([DOMINO_BOX, DOMINO_BOX], BoardSpec(7), 7)
    return CampaignConfig(enc, solver_cfg, tmp_path / out, jobs=jobs, **kw)


def test_stats_counts_raw_and_distinct(tmp_path):
    store = ResultStore(tmp_path / "r.jsonl")
    cross = ".#./###/.#./.#."
    for i, variant in enumerate([cross, ".#./.#./###/.#.", "..#./####/..#."]):
        store.append(record(variant, instance=f"i{i}"))
    table = stats(store)
    assert table["rows"] == [{"boxes": ["1x1x1"], "folds": [1], "raw": 3, "distinct": 1}]
    assert "1x1x1 in 1 way  3 (1)" in format_stats(table)


def test_stats_empty_store(tmp_path):
    table = stats(ResultStore(tmp_path / "none.jsonl"))
    assert table["rows"] == [] and table["records"] == 0
    assert format_stats(table).splitlines()[0].startswith("#")


def test_corrupt_lines_are_skipped(tmp_path):
    store = ResultStore(tmp_path / "r.jsonl")
    store.append(record(".#./###/.#./.#."))
    with open(store.path, "a") as fh:
        fh.write("{not json\n")
        bad = record("###/#..").__dict__ | {"key": "1x1:#"}
        fh.write(json.dumps(bad) + "\n")
    table = stats(store)
    assert table["records"] == 1 and table["corrupt"] == 2


def test_stats_groups_by_box_multiset(tmp_path):
    store = ResultStore(tmp_path / "r.jsonl")
    a = record("#####/#...#", folds=(2, 1), boxes=((1, 2, 3), (1, 1, 5)))
    b = record("#####/#...#", folds=(1, 2), boxes=((1, 1, 5), (1, 2, 3)))
    store.append(a)
    store.append(b)
    rows = stats(store)["rows"]
    assert rows == [{"boxes": ["1x1x5", "1x2x3"], "folds": [1, 2], "raw": 2, "distinct": 1}]


def test_campaign_records_and_resumes(tmp_path, solver_cfg):
    cfg = small_campaign(tmp_path, solver_cfg, max_pairs=4)
    s1 = run_campaign(cfg)
    assert s1.jobs == 4 and s1.sat + s1.unsat + s1.timeout + s1.error == 4
    recs, bad = ResultStore(cfg.out / "results.jsonl").read()
    assert bad == 0 and len(recs) == s1.sat
    for r in recs:
        # fold counts are recomputed from the stored shape
        assert r.folds == [count_foldings(from_text(r.polyomino), BoxSpec(*b))[0] for b in r.boxes]
        assert min(r.folds) >= 2  # same-size anchors force two different foldings
    s2 = run_campaign(cfg)
    assert s2.jobs == 0 and s2.skipped == 4 and s2.new_keys == 0


def test_rerun_over_found_shapes_adds_no_keys(tmp_path, solver_cfg):
    cfg = small_campaign(tmp_path, solver_cfg, max_pairs=3)
    run_campaign(cfg)
    keys = ResultStore(cfg.out / "results.jsonl").keys()
    (cfg.out / "jobs.jsonl").unlink()
    again = run_campaign(cfg)
    assert again.new_keys == 0
    assert ResultStore(cfg.out / "results.jsonl").keys() == keys


def test_parallel_key_set_matches_serial(tmp_path, solver_cfg):
    anchors = anchor_pairs([DOMINO_BOX, DOMINO_BOX])[:4]
    serial = small_campaign(tmp_path, solver_cfg, anchors=anchors, out="s")
    par = small_campaign(tmp_path, solver_cfg, jobs=2, anchors=anchors, out="p")
    run_campaign(serial)
    run_campaign(par)
    assert ResultStore(serial.out / "results.jsonl").keys() == ResultStore(par.out / "results.jsonl").keys()


def test_failed_jobs_are_contained(tmp_path, fake_solver):
    solver = SolverConfig(fake_solver("raise SystemExit(3)\n"), timeout=10)
    cfg = small_campaign(tmp_path, solver, max_pairs=2)
    s = run_campaign(cfg)
    assert s.error == 2 and s.jobs == 2
    lines = (cfg.out / "jobs.jsonl").read_text().splitlines()
    assert [json.loads(l)["status"] for l in lines] == ["ERROR", "ERROR"]


def test_zero_anchor_pairs(tmp_path, solver_cfg):
    s = run_campaign(small_campaign(tmp_path, solver_cfg, anchors=[]))
    assert s.jobs == 0 and s.new_keys == 0


def test_min_folds_filters_store(tmp_path, solver_cfg):
    cfg = small_campaign(tmp_path, solver_cfg, max_pairs=3, min_folds=[99, 99])
    s = run_campaign(cfg)
    assert ResultStore(cfg.out / "results.jsonl").read()[0] == []
    assert s.sat >= 0


def test_campaign_config_validation(tmp_path, solver_cfg):
    with pytest.raises(ValueError):
        small_campaign(tmp_path, solver_cfg, jobs=0)
    with pytest.raises(ValueError):
        small_campaign(tmp_path, solver_cfg, min_folds=[0, 1])


def test_instance_id_is_stable():
    assert instance_id([DOMINO_BOX, DOMINO_BOX], (0, 5)) == "1x1x2_1x1x2__0-5"


def test_oracle_and_sat_census_agree_on_cube(solver_cfg):
    keys, info = sat_census([CUBE], BoardSpec(5), 8, solver_cfg)
    assert keys == oracle_census([CUBE], 6)
    assert info["timeouts"] == 0


def test_census_checkpoint_resume(tmp_path, solver_cfg):
    ck = tmp_path / "ck.jsonl"
    keys, _ = sat_census([CUBE], BoardSpec(5), 8, solver_cfg, checkpoint=ck)
    assert len(keys) == 11
    again, info = sat_census([CUBE], BoardSpec(5), 8, solver_cfg, checkpoint=ck)
    assert again == keys and info["instances"] == 0


def test_stop_at_folds_survives_resume(tmp_path, solver_cfg):
    cfg = small_campaign(tmp_path, solver_cfg, max_pairs=5, stop_at_folds=2)
    first = run_campaign(cfg)
    assert first.stopped_early and first.jobs == 1
    again = run_campaign(cfg)
    assert again.stopped_early and again.jobs == 0 and again.best_folds[0] >= 2
