import subprocess
import sys

import numpy as np
import pytest

from artifact.bench import read_csv
from artifact.bitstream import BitStream
from artifact.cli import main
from artifact.image import GrayImage, read_pgm, write_pgm
from artifact.iwsim import iwsim_inverse

from conftest import COVER_DIR, SECRET_DIR, random_image


@pytest.fixture
def pair(tmp_path):
    rng = np.random.default_rng(4)
    cover, secret = tmp_path / "cover.pgm", tmp_path / "secret.pgm"
    write_pgm(cover, random_image(rng, 64, 64))
    write_pgm(secret, random_image(rng, 16, 16, 90, 130))
    return cover, secret


@pytest.mark.parametrize("method", ["eb-sim", "eb-iwsim", "fib-iwsim", "l-iwsim"])
def test_embed_extract_round_trip(pair, tmp_path, method, capsys):
    cover, secret = pair
    stego, back = tmp_path / "stego.pgm", tmp_path / "back.pgm"
    assert main(["--seed", "5", "embed", "--method", method, "--cover", str(cover),
                 "--secret", str(secret), "--out", str(stego)]) == 0
    assert main(["extract", "--seed", "5", "--method", method, "--stego", str(stego),
                 "--out", str(back)]) == 0
    assert read_pgm(back) == read_pgm(secret)


def test_baseline_payload_round_trip(pair, tmp_path):
    cover, _ = pair
    payload = tmp_path / "msg.bin"
    payload.write_bytes(b"hidden bytes")
    stego, back = tmp_path / "s.pgm", tmp_path / "m.bin"
    assert main(["embed", "--method", "lsbmr", "--cover", str(cover), "--payload", str(payload),
                 "--out", str(stego)]) == 0
    assert main(["extract", "--method", "lsbmr", "--stego", str(stego), "--nbits", "96",
                 "--out", str(back)]) == 0
    assert back.read_bytes() == b"hidden bytes"


def test_exit_capacity(tmp_path):
    cover, secret = tmp_path / "c.pgm", tmp_path / "s.pgm"
    write_pgm(cover, GrayImage(np.zeros((8, 8), np.uint8)))
    write_pgm(secret, GrayImage(np.zeros((8, 8), np.uint8)))
    assert main(["embed", "--method", "eb-sim", "--cover", str(cover), "--secret", str(secret),
                 "--out", str(tmp_path / "o.pgm")]) == 2


def test_exit_parse(tmp_path):
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P5\n3 2\n255\n" + bytes(6))
    assert main(["analyze", "--detector", "rws", "--in", str(bad)]) == 3
    # a cover with no embedded stream
    plain = tmp_path / "plain.pgm"
    write_pgm(plain, GrayImage(np.full((16, 16), 255, np.uint8)))
    assert main(["extract", "--method", "eb-iwsim", "--stego", str(plain),
                 "--out", str(tmp_path / "x.pgm")]) == 3


def test_exit_io(tmp_path):
    assert main(["analyze", "--detector", "rws", "--in", str(tmp_path / "missing.pgm")]) == 4


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["embed", "--method", "eb-sim"],
                                  ["analyze", "--detector", "chi2", "--in", "x.pgm"],
                                  ["extract", "--method", "lsbr", "--stego", "x", "--out", "y"]])
def test_exit_usage(argv, tmp_path):
    if argv[-2:] == ["--out", "y"]:
        write_pgm(tmp_path / "x", GrayImage(np.zeros((2, 2), np.uint8)))
        argv = [a if a != "x" else str(tmp_path / "x") for a in argv]
    assert main(argv) == 1


def test_embed_requires_secret(pair, tmp_path):
    cover, _ = pair
    assert main(["embed", "--method", "eb-sim", "--cover", str(cover),
                 "--out", str(tmp_path / "o.pgm")]) == 1


def test_analyze_constant_lsbms(tmp_path, capsys):
    flat = tmp_path / "flat.pgm"
    write_pgm(flat, GrayImage(np.full((8, 8), 9, np.uint8)))
    assert main(["analyze", "--detector", "lsbms", "--in", str(flat)]) == 0
    assert capsys.readouterr().out.strip().endswith(",lsbms,1.000000,cover,")


def test_analyze_no_estimate(tmp_path, capsys):
    img = tmp_path / "odd.pgm"
    write_pgm(img, GrayImage(np.array([[7, 5, 5, 7], [4, 6, 6, 1]], np.uint8)))
    assert main(["analyze", "--detector", "dih", "--in", str(img)]) == 0
    assert capsys.readouterr().out.strip().endswith(",dih,,no-estimate,dih-pair-quadratic")


def test_transform_container(tmp_path, capsys):
    src = SECRET_DIR / "ramp.pgm"
    out = tmp_path / "ramp.bits"
    assert main(["transform", "iwsim", "--in", str(src), "--out", str(out)]) == 0
    fields = capsys.readouterr().out.strip().split(",")
    stream = BitStream.from_bytes(out.read_bytes())
    assert len(stream) == int(fields[2])
    img = read_pgm(src)
    assert iwsim_inverse(stream, img.height, img.width) == img


def test_decompose_stats(capsys):
    assert main(["decompose-stats", str(SECRET_DIR)]) == 0
    text = capsys.readouterr().out
    assert text.startswith("# schema: artifact.decompose-stats/1\n")
    rows = read_csv(text)
    assert len(rows) == 4 * 9
    assert all(0.0 <= float(r["ratio"]) <= 1.0 for r in rows)


def test_bench_command(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert main(["--quiet", "bench", "--kind", "transform", "--secrets", str(SECRET_DIR),
                 "--out", str(out)]) == 0
    assert out.read_text().startswith("# schema: artifact.transform-stats/1")
    assert main(["bench", "--kind", "embedding", "--secrets", str(SECRET_DIR),
                 "--out", str(out)]) == 1
    assert main(["bench", "--covers", str(COVER_DIR), "--secrets", str(SECRET_DIR),
                 "--methods", "nope", "--out", str(out)]) == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "artifact", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "exit codes" in res.stdout
