"""Regenerate the bundled PGM fixtures from scikit-image sample data.

Covers are natural images cropped to even dimensions. Secrets are resized
to 128x256 to mirror a typical hidden-image size, plus two small synthetic
images. Run from the repository root::

    python scripts/make_fixtures.py
"""
from pathlib import Path

import numpy as np
from skimage import color, data, transform

from artifact.image import GrayImage, write_pgm

ROOT = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def gray(img):
    if img.ndim == 3:
        img = color.rgb2gray(img[..., :3])
        return np.round(img * 255).astype(np.uint8)
    return img.astype(np.uint8)


def even(img):
    h, w = img.shape
    return img[: h - h % 2, : w - w % 2]


def resized(img, shape):
    out = transform.resize(img, shape, anti_aliasing=True, preserve_range=True)
    return np.clip(np.round(out), 0, 255).astype(np.uint8)


COVERS = {
    "camera": data.camera,
    "brick": data.brick,
    "coins": data.coins,
    "chelsea": data.chelsea,
    "coffee": data.coffee,
}

SECRETS = {
    "astronaut": lambda: resized(gray(data.astronaut()), (128, 256)),
    "page": lambda: resized(gray(data.page()), (128, 256)),
}


def synthetic():
    y, x = np.mgrid[0:64, 0:64]
    ramp = ((x * 4 + y * 2) % 256).astype(np.uint8)
    rng = np.random.default_rng(2024)
    noise = rng.integers(0, 256, size=(64, 64), dtype=np.uint8)
    return {"ramp": ramp, "noise": noise}


def main():
    for name, load in COVERS.items():
        write_pgm(ROOT / "covers" / f"{name}.pgm", GrayImage(even(gray(load()))))
    for name, make in SECRETS.items():
        write_pgm(ROOT / "secrets" / f"{name}.pgm", GrayImage(make()))
    for name, img in synthetic().items():
        write_pgm(ROOT / "secrets" / f"{name}.pgm", GrayImage(img))


if __name__ == "__main__":
    main()
