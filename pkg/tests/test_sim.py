from math import comb

import numpy as np
import pytest
from hypothesis import given

from artifact.bitstream import BitStream, zero_ratio
from artifact.errors import CorruptStream, StreamExhausted
from artifact.image import GrayImage
from artifact.sim import (CODEBOOK, MAX_SIDE_INFO, popcount_codebook, sim_decode, sim_forward,
                          sim_inverse, sim_stream, sim_zero_gain)

from conftest import images, random_image


def test_codebook_structure():
    assert CODEBOOK[:9].tolist() == [0, 1, 2, 4, 8, 16, 32, 64, 128]
    assert sorted(CODEBOOK.tolist()) == list(range(256))
    pops = [bin(int(c)).count("1") for c in CODEBOOK]
    assert pops == sorted(pops)
    for i in range(9):
        group = [int(c) for c, p in zip(CODEBOOK, pops) if p == i]
        assert len(group) == comb(8, i)
        assert group == sorted(group)


@pytest.mark.parametrize("width", [8, 9, 10])
def test_wide_codebooks(width):
    book = popcount_codebook(width)
    assert sorted(book.tolist()) == list(range(1 << width))
    counts = np.bincount([bin(int(c)).count("1") for c in book])
    assert counts.tolist() == [comb(width, i) for i in range(width + 1)]


def test_constant_image():
    img = GrayImage(np.full((4, 4), 77, dtype=np.uint8))
    side, payload = sim_forward(img)
    assert side.to01() == "000000001" + "01001101"
    assert payload.to01() == "0" * 128
    assert sim_inverse(side, payload, 4, 4) == img
    assert sim_zero_gain(img)[1] == 1.0


def test_maximum_side_info():
    img = GrayImage(np.arange(256, dtype=np.uint8).reshape(16, 16))
    side, _ = sim_forward(img)
    assert len(side) == MAX_SIDE_INFO == 2057


def test_tie_break_by_value():
    img = GrayImage(np.array([[20, 10, 20, 10], [10, 20, 10, 20], [20, 20, 10, 10], [10, 10, 20, 20]],
                             dtype=np.uint8))
    side, payload = sim_forward(img)
    assert side.to01() == "000000010" + format(10, "08b") + format(20, "08b")
    codes = payload.read_codes(16, 8).reshape(4, 4)
    assert np.array_equal(codes, np.where(img.pixels == 10, 0, 1))
    assert sim_inverse(side, payload, 4, 4) == img


def test_frozen_small_stream():
    img = GrayImage(np.array([[12, 8], [4, 0]], dtype=np.uint8))
    side, payload = sim_forward(img)
    assert side.to01() == "000000100" "00000000" "00000100" "00001000" "00001100"
    assert payload.to01() == "00000100" "00000010" "00000001" "00000000"


def test_random_and_natural_round_trip(secrets, covers):
    rng = np.random.default_rng(1)
    for _ in range(200):
        img = random_image(rng, 16, 16)
        side, payload = sim_forward(img)
        assert sim_inverse(side, payload, 16, 16) == img
    for img in list(secrets.values()) + list(covers.values()):
        assert sim_decode(sim_stream(img), img.height, img.width) == img


@given(images())
def test_round_trip_property(img):
    side, payload = sim_forward(img)
    assert sim_inverse(side, payload, img.height, img.width) == img


@given(images(max_half=10))
def test_zero_gain_floor_and_monotone(img):
    before, after = sim_zero_gain(img)
    assert after >= before - 1e-12
    assert after >= 0.5


def test_side_info_overhead_fraction():
    rng = np.random.default_rng(2)
    img = random_image(rng, 128, 256)
    side, payload = sim_forward(img)
    assert len(side) / len(payload) <= 2057 / (8 * 128 * 256)


def test_inverse_errors():
    img = GrayImage(np.array([[1, 2], [3, 3]], dtype=np.uint8))
    side, payload = sim_forward(img)
    with pytest.raises(CorruptStream, match="payload has"):
        sim_inverse(side, BitStream(payload.bits[:-8]), 2, 2)
    with pytest.raises(CorruptStream, match="declares 0"):
        sim_inverse(BitStream.from01("0" * 9), payload, 2, 2)
    # three values declared, payload uses only two distinct codes
    with pytest.raises(CorruptStream, match="distinct codes"):
        sim_inverse(side, BitStream().write_codes([0, 0, 1, 1], 8), 2, 2)
    # code frequencies must follow the declared rank order
    with pytest.raises(CorruptStream, match="disagree"):
        sim_inverse(side, BitStream().write_codes([1, 1, 0, 2], 8), 2, 2)
    with pytest.raises(StreamExhausted):
        sim_decode(BitStream(side.bits), 2, 2)


def test_trailing_bits_rejected():
    img = GrayImage(np.zeros((2, 2), dtype=np.uint8))
    side, payload = sim_forward(img)
    with pytest.raises(CorruptStream):
        sim_inverse(side.extend(BitStream.from01("1")), payload, 2, 2)


def test_zero_ratio_of_stream_includes_side_info():
    img = GrayImage(np.full((2, 2), 255, dtype=np.uint8))
    s = sim_stream(img)
    assert len(s) == 17 + 32
    assert zero_ratio(s) == pytest.approx((49 - 9) / 49)
