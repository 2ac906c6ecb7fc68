import numpy as np
import pytest

from artifact import bench
from artifact.bench import BenchConfig, read_csv, truncated_length
from artifact.errors import CapacityExceeded
from artifact.image import GrayImage, write_pgm

from conftest import COVER_DIR, SECRET_DIR, random_image


@pytest.fixture
def small_corpus(tmp_path):
    rng = np.random.default_rng(11)
    covers, secrets = tmp_path / "covers", tmp_path / "secrets"
    covers.mkdir()
    secrets.mkdir()
    yy, xx = np.mgrid[0:64, 0:64]
    for i in range(2):
        smooth = 60 + 2 * xx + (i + 1) * yy + rng.integers(-3, 4, size=(64, 64))
        write_pgm(covers / f"c{i}.pgm", GrayImage(np.clip(smooth, 0, 255)))
    write_pgm(secrets / "s0.pgm", random_image(rng, 16, 16, 100, 140))
    return covers, secrets


def test_truncated_length():
    assert truncated_length(1000, 100, 0.5, 800) == 400
    assert truncated_length(1000, 100, 1.0, 2000) == 1000
    assert truncated_length(1000, 500, 0.2, 800) == 500
    with pytest.raises(CapacityExceeded):
        truncated_length(1000, 900, 0.2, 800)


def test_task_seed_stable_and_distinct():
    a = bench._task_seed(0, "c.pgm", "s.pgm", "lsbr")
    assert a == bench._task_seed(0, "c.pgm", "s.pgm", "lsbr")
    assert a != bench._task_seed(1, "c.pgm", "s.pgm", "lsbr")
    assert a != bench._task_seed(0, "c.pgm", "s.pgm", "lsbm")


def test_fmt():
    assert bench.fmt(1 / 3) == "0.333333"
    assert bench.fmt(float("inf")) == "inf"
    assert bench.fmt(True) == "1" and bench.fmt(7) == "7" and bench.fmt(None) == ""


def test_config_validation():
    with pytest.raises(ValueError):
        BenchConfig(methods=("lsbx",))
    with pytest.raises(ValueError):
        BenchConfig(rates=(0.0,))
    with pytest.raises(ValueError):
        BenchConfig(detectors=("chi2",))


def test_embedding_bench_deterministic(small_corpus, tmp_path):
    covers, secrets = small_corpus
    cfg = BenchConfig(str(covers), str(secrets), methods=("eb-sim", "lsbr", "lsbmr"),
                      rates=(0.5, 1.0), seed=3, output=str(tmp_path / "a.csv"))
    text = bench.run_embedding_bench(cfg)
    assert text.splitlines()[0] == f"# schema: {bench.SCHEMA_EMBEDDING}"
    assert (tmp_path / "a.csv").read_text() == text
    assert bench.run_embedding_bench(BenchConfig(**{**cfg.__dict__, "output": None, "jobs": 2})) == text
    rows = read_csv(text)
    assert len(rows) == 2 * 3 * 2
    assert all(r["roundtrip_ok"] == "1" for r in rows)
    lsbr = [r for r in rows if r["method"] == "lsbr"]
    assert all(1.5 < float(r["ee"]) < 2.6 for r in lsbr)


def test_embedding_bench_capacity_error_row(tmp_path):
    covers, secrets = tmp_path / "c", tmp_path / "s"
    covers.mkdir()
    secrets.mkdir()
    write_pgm(covers / "tiny.pgm", GrayImage(np.full((8, 8), 50, np.uint8)))
    write_pgm(secrets / "s.pgm", GrayImage(np.full((8, 8), 50, np.uint8)))
    rows = read_csv(bench.run_embedding_bench(BenchConfig(str(covers), str(secrets),
                                                          methods=("eb-iwsim",), rates=(1.0,))))
    assert [r["kind"] for r in rows] == ["error"]


def test_transform_stats_constant_corpus(tmp_path):
    for i, v in enumerate((0, 90, 255)):
        write_pgm(tmp_path / f"k{i}.pgm", GrayImage(np.full((8, 8), v, np.uint8)))
    rows = read_csv(bench.run_transform_stats(BenchConfig(secret_dir=str(tmp_path))))
    sim_rows = [r for r in rows if r["kind"] == "image" and r["transform"] == "sim"]
    assert len(sim_rows) == 3
    assert all(float(r["zero_after"]) == 1.0 for r in sim_rows)
    assert {r["kind"] for r in rows} == {"image", "mean", "std", "min", "max"}


def test_transform_stats_iwsim_beats_sim():
    rows = read_csv(bench.run_transform_stats(BenchConfig(secret_dir=str(SECRET_DIR))))
    mean = {r["transform"]: float(r["zero_after"]) for r in rows if r["kind"] == "mean"}
    assert mean["iwsim"] > mean["sim"] > mean["none"]


def test_unreadable_file_gives_warning_row(tmp_path):
    write_pgm(tmp_path / "ok.pgm", GrayImage(np.full((4, 4), 3, np.uint8)))
    (tmp_path / "bad.pgm").write_bytes(b"P2\n1 1\n255\n0\n")
    text = bench.run_transform_stats(BenchConfig(secret_dir=str(tmp_path)))
    warn = [r for r in read_csv(text) if r["kind"] == "warning"]
    assert [r["file"] for r in warn] == ["bad.pgm"]


def test_missing_directory():
    with pytest.raises(FileNotFoundError):
        bench.list_images("/nonexistent/dir")


def test_detector_bench_rows(small_corpus):
    covers, secrets = small_corpus
    cfg = BenchConfig(str(covers), str(secrets), methods=("lsbr",), rates=(0.5, 1.0),
                      detectors=("rws", "lsbms"), seed=1)
    text = bench.run_detector_bench(cfg)
    assert text == bench.run_detector_bench(cfg)
    rows = read_csv(text)
    per = [r for r in rows if r["kind"] in ("row", "no-estimate")]
    # 2 covers x (cover + 2 rates) x 2 detectors
    assert len(per) == 12
    agg = {(r["method"], r["rate"], r["detector"]): r for r in rows if r["kind"] == "aggregate"}
    assert float(agg[("lsbr", "1.000000", "rws")]["estimate"]) > float(agg[("cover", "0.000000", "rws")]["estimate"])
    assert agg[("cover", "0.000000", "lsbms")]["detected_fraction"] != ""


def test_fixture_corpus_present():
    assert len(list(COVER_DIR.glob("*.pgm"))) == 5
