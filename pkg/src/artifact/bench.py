"""Corpus experiments: transform statistics, embedding quality, detector response.

Every runner returns the CSV text (and writes it when an output path is
given). The first line names the schema; rows are sorted, numbers use fixed
formatting, and all randomness is derived from the configured seed, so equal
configurations give byte-identical files.
"""
from __future__ import annotations

import csv
import io
import logging
import math
import os
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import baselines, iwsim, metrics, sim, steganalysis, stego
from .bitstream import BitStream, zero_ratio
from .decomp import BINARY
from .errors import CapacityExceeded, StegoError
from .image import GrayImage, read_pgm

log = logging.getLogger(__name__)

MAPPING_METHODS = tuple(stego.PIPELINES)
BASELINE_METHODS = tuple(baselines.EMBEDDERS)
ALL_METHODS = MAPPING_METHODS + BASELINE_METHODS
DEFAULT_RATES = (0.2, 0.4, 0.6, 0.8, 1.0)
ALL_DETECTORS = ("dih", "rws", "lsbms")

SCHEMA_TRANSFORM = "artifact.transform-stats/1"
SCHEMA_EMBEDDING = "artifact.embedding/1"
SCHEMA_DETECTOR = "artifact.detector/1"


@dataclass(frozen=True)
class BenchConfig:
    cover_dir: str | None = None
    secret_dir: str | None = None
    methods: tuple = ALL_METHODS
    rates: tuple = DEFAULT_RATES
    seed: int = 0
    detectors: tuple = ALL_DETECTORS
    output: str | None = None
    jobs: int = 1
    lsbms_threshold: float = steganalysis.LSBMS_THRESHOLD

    def __post_init__(self):
        if not self.methods:
            raise ValueError("at least one method is required")
        unknown = set(self.methods) - set(ALL_METHODS)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")
        if any(not 0 < r <= 1 for r in self.rates):
            raise ValueError("rates must lie in (0, 1]")
        unknown = set(self.detectors) - set(ALL_DETECTORS)
        if unknown:
            raise ValueError(f"unknown detectors: {sorted(unknown)}")


# -- helpers -------------------------------------------------------------------

def fmt(x) -> str:
    if x is None or x == "":
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.6f}"


def to_csv(schema: str, columns, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {schema}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) if not isinstance(row.get(c), str) else row[c] for c in columns])
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def _emit(text: str, output):
    if output:
        Path(output).write_text(text, encoding="utf-8", newline="\n")
    return text


def list_images(directory) -> list[Path]:
    if directory is None:
        raise ValueError("directory not configured")
    d = Path(directory)
    if not d.is_dir():
        raise FileNotFoundError(f"not a directory: {d}")
    return sorted(p for p in d.iterdir() if p.suffix.lower() == ".pgm" and p.is_file())


def _load_all(paths):
    """Readable images by name plus warning rows for the rest."""
    images, warnings = {}, []
    for p in paths:
        try:
            images[p.name] = read_pgm(p)
        except (OSError, StegoError) as exc:
            log.warning("skipping %s: %s", p, exc)
            warnings.append({"kind": "warning", "file": p.name, "note": str(exc)})
    return images, warnings


def _task_seed(seed: int, *parts) -> int:
    """Stable per-task seed so results do not depend on scheduling order."""
    key = "/".join(str(p) for p in parts).encode()
    return (int(seed) * 0x9E3779B1 + zlib.crc32(key)) & ((1 << 63) - 1)


def _run(fn, tasks, jobs: int):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return [fn(t) for t in tasks]


# -- transform statistics --------------------------------------------------------

TRANSFORM_COLUMNS = ["kind", "file", "transform", "height", "width",
                     "zero_before", "zero_after", "side_info_bits", "note"]


def transform_row(name: str, img: GrayImage, transform: str) -> dict:
    raw = BitStream().write_codes(img.pixels.ravel(), sim.VALUE_BITS)
    before = zero_ratio(raw)
    if transform == "none":
        after, side = before, 0
    elif transform == "sim":
        side_bits, payload = sim.sim_forward(img)
        after, side = zero_ratio(payload), len(side_bits)
    else:
        parts = iwsim.iwsim_parts(img)
        after = zero_ratio(np.concatenate([c.bits for _, c in parts]))
        side = sum(len(s) for s, _ in parts)
    return {"kind": "image", "file": name, "transform": transform, "height": img.height,
            "width": img.width, "zero_before": before, "zero_after": after,
            "side_info_bits": side}


def _summaries(rows, group_keys, value_keys, label_key):
    out = []
    groups = sorted({tuple(r[k] for k in group_keys) for r in rows})
    for g in groups:
        members = [r for r in rows if tuple(r[k] for k in group_keys) == g]
        for stat, f in (("mean", np.mean), ("std", np.std), ("min", np.min), ("max", np.max)):
            row = dict(zip(group_keys, g))
            row["kind"] = stat
            row[label_key] = "*"
            for k in value_keys:
                row[k] = float(f([m[k] for m in members]))
            out.append(row)
    return out


def run_transform_stats(cfg: BenchConfig) -> str:
    images, warnings = _load_all(list_images(cfg.secret_dir))
    if not images and not warnings:
        raise ValueError(f"no PGM files in {cfg.secret_dir}")
    rows = []
    for name in sorted(images):
        img = images[name]
        for transform in ("none", "sim", "iwsim"):
            try:
                rows.append(transform_row(name, img, transform))
            except StegoError as exc:
                warnings.append({"kind": "warning", "file": name, "transform": transform,
                                 "note": str(exc)})
    summary = _summaries(rows, ["transform"], ["zero_before", "zero_after", "side_info_bits"], "file")
    text = to_csv(SCHEMA_TRANSFORM, TRANSFORM_COLUMNS, rows + summary + warnings)
    return _emit(text, cfg.output)


# -- embedding bench ---------------------------------------------------------------

EMBED_COLUMNS = ["kind", "cover", "secret", "method", "rate", "secret_height", "secret_width",
                 "capacity", "payload_bits", "side_info_bits", "modified_pixels",
                 "modified_fraction", "change_rate", "predicted_change", "ee", "psnr_db",
                 "r0_payload", "r0_cover", "roundtrip_ok", "note"]


@lru_cache(maxsize=8)
def _image(path: str) -> GrayImage:
    return read_pgm(path)


@lru_cache(maxsize=16)
def _payload(path: str, method: str) -> tuple[np.ndarray, int]:
    """Bits to hide for a secret and the count that must never be truncated."""
    secret = _image(path)
    if method in stego.PIPELINES:
        stream, side = stego.build_payload(secret, stego.PIPELINES[method][0])
        return stream.bits, side
    # baselines hide the raw raster behind the same dimension header
    stream = BitStream().write_field(secret.height, stego.DIM_BITS)
    stream.write_field(secret.width, stego.DIM_BITS)
    stream.write_codes(secret.pixels.ravel(), sim.VALUE_BITS)
    return stream.bits, 0


def truncated_length(total: int, required: int, rate: float, available: int) -> int:
    """Payload prefix for a partial rate; header and side-information always go in."""
    n = min(total, math.floor(rate * available))
    n = max(n, required)
    if n > available:
        raise CapacityExceeded(n, available)
    return n


def embed_task(task) -> dict:
    cover_path, secret_path, method, rate, seed = task
    cover = _image(cover_path)
    secret = _image(secret_path)
    row = {"kind": "row", "cover": Path(cover_path).name, "secret": Path(secret_path).name,
           "method": method, "rate": rate, "secret_height": secret.height,
           "secret_width": secret.width, "capacity": metrics.capacity(method, cover)}
    bits, side = _payload(secret_path, method)
    required = stego.HEADER_BITS + side
    tseed = _task_seed(seed, row["cover"], row["secret"], method)
    try:
        if method in stego.PIPELINES:
            scheme = stego.PIPELINES[method][1]
            n = truncated_length(bits.size, required, rate, stego.capacity_bits(cover))
            chunk = bits[:n]
            stego_img, _, r_cover = stego.embed_bits(cover, chunk, scheme, tseed)
            back = stego.extract_bits(stego_img, scheme, tseed)[:n]
            ok = bool(np.array_equal(back, chunk))
            if ok and n == bits.size:
                ok = stego.extract(stego_img, stego.EmbedConfig(method, tseed)) == secret
            r0 = float(np.mean(chunk == 0))
            predicted = metrics.expected_change_prob(r0, r_cover)
        else:
            available = baselines.capacity_bits(method, cover)
            n = truncated_length(bits.size, required, rate, available)
            if method == "lsbmr":
                n -= n % 2
            chunk = bits[:n]
            stego_img = baselines.EMBEDDERS[method](cover, chunk, tseed)
            back = baselines.EXTRACTORS[method](stego_img, n, tseed)
            ok = bool(np.array_equal(back, chunk))
            r0 = float(np.mean(chunk == 0))
            r_cover = float(np.mean(BINARY.lsb_table[cover.pixels] == 0))
            predicted = None if method == "lsbmr" else metrics.expected_change_prob(r0, r_cover)
    except CapacityExceeded as exc:
        row.update(kind="error", note=str(exc))
        return row
    stats = metrics.EmbedStats.measure(method, cover, stego_img, n)
    row.update(payload_bits=n, side_info_bits=side, modified_pixels=stats.modified_pixels,
               modified_fraction=stats.modified_pixels / cover.size,
               change_rate=stats.modified_pixels / n, predicted_change=predicted,
               ee=stats.ee, psnr_db=stats.psnr_db, r0_payload=r0, r0_cover=r_cover,
               roundtrip_ok=ok)
    return row


def run_embedding_bench(cfg: BenchConfig) -> str:
    covers = list_images(cfg.cover_dir)
    secrets = list_images(cfg.secret_dir)
    readable, warnings = _load_all(covers + secrets)
    tasks = [(str(c), str(s), m, r, cfg.seed)
             for c in covers if c.name in readable
             for s in secrets if s.name in readable
             for m in sorted(cfg.methods) for r in sorted(cfg.rates)]
    rows = _run(embed_task, tasks, cfg.jobs)
    rows.sort(key=lambda r: (r["cover"], r["secret"], r["method"], r["rate"]))
    return _emit(to_csv(SCHEMA_EMBEDDING, EMBED_COLUMNS, rows + warnings), cfg.output)


# -- detector bench ----------------------------------------------------------------

DETECT_COLUMNS = ["kind", "cover", "method", "rate", "detector", "estimate", "verdict",
                  "variant", "detected_fraction", "count", "note"]


def make_stego(cover: GrayImage, secret_path: str, method: str, rate: float, seed: int) -> GrayImage:
    """Stego image at a fraction of the cover's capacity (payload truncated)."""
    bits, side = _payload(secret_path, method)
    required = stego.HEADER_BITS + side
    if method in stego.PIPELINES:
        n = truncated_length(bits.size, required, rate, stego.capacity_bits(cover))
        return stego.embed_bits(cover, bits[:n], stego.PIPELINES[method][1], seed)[0]
    n = truncated_length(bits.size, required, rate, baselines.capacity_bits(method, cover))
    if method == "lsbmr":
        n -= n % 2
    return baselines.EMBEDDERS[method](cover, bits[:n], seed)


def detect_task(task) -> list[dict]:
    cover_path, secret_path, method, rate, detectors, seed, threshold = task
    cover = _image(cover_path)
    name = Path(cover_path).name
    base = {"kind": "row", "cover": name, "method": method, "rate": rate}
    try:
        if method == "cover":
            img = cover
        else:
            img = make_stego(cover, secret_path, method, rate, _task_seed(seed, name, method))
    except CapacityExceeded as exc:
        return [dict(base, kind="error", note=str(exc))]
    out = []
    for det in detectors:
        row = dict(base, detector=det)
        try:
            rep = steganalysis.analyze(img, det, threshold)
            row.update(estimate=rep.estimate, verdict=rep.verdict, variant=rep.variant,
                       note=",".join(rep.flags))
        except steganalysis.NoEstimate as exc:
            row.update(kind="no-estimate", note=str(exc))
        out.append(row)
    return out


def _detector_aggregates(rows):
    out = []
    keys = sorted({(r["method"], r["rate"], r["detector"]) for r in rows if "detector" in r})
    for method, rate, det in keys:
        members = [r for r in rows if (r["method"], r["rate"], r.get("detector")) == (method, rate, det)]
        valid = [r for r in members if r["kind"] == "row"]
        agg = {"kind": "aggregate", "cover": "*", "method": method, "rate": rate, "detector": det,
               "count": len(valid)}
        if valid:
            agg["estimate"] = float(np.mean([r["estimate"] for r in valid]))
            if det == "lsbms":
                agg["detected_fraction"] = float(np.mean([r["verdict"] == "stego" for r in valid]))
        out.append(agg)
    return out


def run_detector_bench(cfg: BenchConfig) -> str:
    if not cfg.detectors:
        raise ValueError("at least one detector is required")
    covers = list_images(cfg.cover_dir)
    secrets = list_images(cfg.secret_dir)
    readable, warnings = _load_all(covers + secrets)
    secrets = [s for s in secrets if s.name in readable]
    if not secrets:
        raise ValueError(f"no readable secrets in {cfg.secret_dir}")
    # one secret for every cover so rows differ only in cover and rate
    secret = str(secrets[0])
    dets = tuple(sorted(cfg.detectors))
    tasks = []
    for c in covers:
        if c.name not in readable:
            continue
        tasks.append((str(c), secret, "cover", 0.0, dets, cfg.seed, cfg.lsbms_threshold))
        tasks += [(str(c), secret, m, r, dets, cfg.seed, cfg.lsbms_threshold)
                  for m in sorted(cfg.methods) for r in sorted(cfg.rates)]
    rows = [row for group in _run(detect_task, tasks, cfg.jobs) for row in group]
    rows.sort(key=lambda r: (r["cover"], r["method"], r["rate"], r.get("detector", "")))
    rows += _detector_aggregates(rows)
    return _emit(to_csv(SCHEMA_DETECTOR, DETECT_COLUMNS, rows + warnings), cfg.output)


def default_jobs() -> int:
    return os.cpu_count() or 1
