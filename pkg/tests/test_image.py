import numpy as np
import pytest
from hypothesis import given

from artifact.errors import MalformedHeader, MaxvalUnsupported, OddDimension, TruncatedData
from artifact.image import (GrayImage, complement, histogram, load_pgm, read_pgm, save_pgm,
                            write_pgm)

from conftest import images


def test_load_minimal_p5():
    img = load_pgm(b"P5 2 2 255\n" + bytes([0, 255, 7, 8]))
    assert img.shape == (2, 2)
    assert img.pixels.tolist() == [[0, 255], [7, 8]]


def test_save_header_layout():
    img = GrayImage(np.array([[1, 2, 3, 4], [5, 6, 7, 8]], dtype=np.uint8))
    assert save_pgm(img) == b"P5\n4 2\n255\n" + bytes(range(1, 9))


def test_comments_and_whitespace_in_header():
    data = b"P5\n# made by hand\n2   2\n# another\n255\n" + bytes([9, 8, 7, 6])
    assert load_pgm(data).pixels.tolist() == [[9, 8], [7, 6]]


@pytest.mark.parametrize("data, exc", [
    (b"P2 2 2 255\n" + bytes(4), MalformedHeader),
    (b"P5 2 x 255\n" + bytes(4), MalformedHeader),
    (b"P5 2 2", MalformedHeader),
    (b"P5 2 2 65535\n" + bytes(8), MaxvalUnsupported),
    (b"P5 2 2 255\n" + bytes(3), TruncatedData),
    (b"P5 3 2 255\n" + bytes(6), OddDimension),
    (b"P5 0 2 255\n", MalformedHeader),
])
def test_load_rejections(data, exc):
    with pytest.raises(exc):
        load_pgm(data)


def test_error_codes_are_distinct():
    codes = {e.code for e in (MalformedHeader, MaxvalUnsupported, TruncatedData, OddDimension)}
    assert len(codes) == 4


def test_odd_dimension_rejected_on_construction():
    with pytest.raises(OddDimension):
        GrayImage(np.zeros((3, 4), dtype=np.uint8))
    with pytest.raises(OddDimension):
        GrayImage(np.zeros((0, 0), dtype=np.uint8))


def test_out_of_range_rejected():
    with pytest.raises(ValueError):
        GrayImage(np.array([[0, 256], [1, 2]]))


def test_pixels_are_read_only():
    img = GrayImage(np.zeros((2, 2), dtype=np.uint8))
    with pytest.raises(ValueError):
        img.pixels[0, 0] = 1


@given(images())
def test_pgm_round_trip(img):
    assert load_pgm(save_pgm(img)) == img


def test_file_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    for i in range(100):
        img = GrayImage(rng.integers(0, 256, size=(2 * rng.integers(1, 9), 2 * rng.integers(1, 9))))
        write_pgm(tmp_path / "x.pgm", img)
        assert read_pgm(tmp_path / "x.pgm") == img


def test_complement_examples():
    img = GrayImage(np.full((2, 2), 128, dtype=np.uint8))
    assert np.all(complement(img).pixels == 127)
    assert complement(GrayImage(np.zeros((2, 2), np.uint8))).pixels[0, 0] == 255


@given(images())
def test_complement_involution_and_histogram_reversal(img):
    assert complement(complement(img)) == img
    assert np.array_equal(histogram(complement(img)), histogram(img)[::-1])


def test_histogram_examples():
    h = histogram(GrayImage(np.full((4, 4), 77, dtype=np.uint8)))
    assert h[77] == 16 and h.sum() == 16
    h = histogram(GrayImage(np.array([[0, 255], [7, 8]], dtype=np.uint8)))
    assert {int(v): int(h[v]) for v in np.flatnonzero(h)} == {0: 1, 7: 1, 8: 1, 255: 1}
    ramp = GrayImage(np.arange(256, dtype=np.uint8).reshape(16, 16))
    assert np.all(histogram(ramp) == 1)
