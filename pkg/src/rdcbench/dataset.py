"""Core RDC data types, measurement normalization and dataset files.

Units used throughout the package:

- rate: Mb/s, normalized to a 1920x1080, 30 Hz sequence
- distortion: MSE on the 8-bit (0-255) scale
- complexity: decoder kMAC/pixel
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DuplicateCodec, InvariantViolation, ParseError

REF_WIDTH = 1920
REF_HEIGHT = 1080
REF_FRAME_RATE = 30.0
SUPPORTED_BIT_DEPTHS = (8, 10, 12)
MODES = ("curve", "cloud")

RAW_CSV_HEADER = ("sequence_id", "width", "height", "frame_rate", "bit_depth", "bits_per_pixel", "mse")

BUNDLED_TABLE1 = "table1_synthetic.json"


def _finite_nonneg(name, value, record=None):
    if not isinstance(value, (int, float, np.floating, np.integer)) or isinstance(value, bool):
        raise InvariantViolation(f"{name} must be a number, got {value!r}", record)
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise InvariantViolation(f"{name} must be finite and non-negative, got {value!r}", record)
    return value


@dataclass(frozen=True)
class RdcPoint:
    """One codec operating point."""

    rate: float
    distortion: float
    complexity: float

    def __post_init__(self):
        for name in ("rate", "distortion", "complexity"):
            object.__setattr__(self, name, _finite_nonneg(name, getattr(self, name)))

    def as_tuple(self):
        return (self.rate, self.distortion, self.complexity)


@dataclass(frozen=True)
class CodecDataset:
    """A named codec and its ordered operating points.

    In ``curve`` mode the points form a polyline parameterized by quality level
    and must be ordered by strictly increasing rate. In ``cloud`` mode they are
    an unordered set.
    """

    name: str
    points: tuple
    mode: str = "curve"

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise InvariantViolation(f"codec name must be a non-empty string, got {self.name!r}")
        if self.mode not in MODES:
            raise InvariantViolation(f"codec {self.name!r}: mode must be one of {MODES}, got {self.mode!r}",
                                     {"codec": self.name})
        pts = tuple(p if isinstance(p, RdcPoint) else RdcPoint(*p) for p in self.points)
        object.__setattr__(self, "points", pts)
        need = 2 if self.mode == "curve" else 1
        if len(pts) < need:
            raise InvariantViolation(
                f"codec {self.name!r}: {self.mode} mode needs at least {need} points, got {len(pts)}",
                {"codec": self.name})
        if len(set(pts)) != len(pts):
            raise InvariantViolation(f"codec {self.name!r}: duplicate points", {"codec": self.name})
        if self.mode == "curve":
            for i, (a, b) in enumerate(zip(pts, pts[1:])):
                if not b.rate > a.rate:
                    raise InvariantViolation(
                        f"codec {self.name!r}: curve rates must be strictly increasing "
                        f"(point {i + 1} rate {b.rate!r} after {a.rate!r})",
                        {"codec": self.name, "point": i + 1})

    def __len__(self):
        return len(self.points)

    def as_array(self):
        """Points as an ``(N, 3)`` float array with columns (rate, distortion, complexity)."""
        return np.array([p.as_tuple() for p in self.points], dtype=float)

    @property
    def rates(self):
        return np.array([p.rate for p in self.points])

    @property
    def distortions(self):
        return np.array([p.distortion for p in self.points])

    @property
    def complexities(self):
        return np.array([p.complexity for p in self.points])


@dataclass(frozen=True)
class RawMeasurement:
    """Per-sequence measurement for one coding instantiation, in native units."""

    sequence_id: str
    width: int
    height: int
    frame_rate: float
    bit_depth: int
    bits_per_pixel: float
    mse: float

    def __post_init__(self):
        rec = {"sequence_id": self.sequence_id}
        for name in ("width", "height", "frame_rate"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise InvariantViolation(f"{name} must be positive, got {v!r}", rec)
        if self.bit_depth not in SUPPORTED_BIT_DEPTHS:
            raise InvariantViolation(
                f"unsupported bit depth {self.bit_depth!r}; expected one of {SUPPORTED_BIT_DEPTHS}", rec)
        _finite_nonneg("bits_per_pixel", self.bits_per_pixel, rec)
        _finite_nonneg("mse", self.mse, rec)


def normalize_rate(m: RawMeasurement) -> float:
    """Rate in Mb/s the measurement would have at 1920x1080, 30 Hz."""
    return m.bits_per_pixel * REF_WIDTH * REF_HEIGHT * REF_FRAME_RATE / 1e6


def mse_scale(bit_depth: int) -> float:
    """Divisor bringing an MSE at ``bit_depth`` onto the 8-bit scale."""
    if bit_depth not in SUPPORTED_BIT_DEPTHS:
        raise InvariantViolation(f"unsupported bit depth {bit_depth!r}; expected one of {SUPPORTED_BIT_DEPTHS}")
    return float(2 ** (2 * (bit_depth - 8)))


def normalize_mse(m: RawMeasurement) -> float:
    return m.mse / mse_scale(m.bit_depth)


def aggregate(measurements: Sequence[RawMeasurement], complexity: float) -> RdcPoint:
    """Collapse per-sequence measurements of one instantiation into an RDC point.

    Rate and distortion are plain arithmetic means of the normalized values;
    complexity is the codec's decoder kMAC/pixel, supplied by the caller.
    """
    if len(measurements) == 0:
        raise InvariantViolation("cannot aggregate an empty measurement list")
    rates = [normalize_rate(m) for m in measurements]
    mses = [normalize_mse(m) for m in measurements]
    # fsum keeps the mean independent of measurement order
    return RdcPoint(math.fsum(rates) / len(rates), math.fsum(mses) / len(mses), complexity)


def read_raw_csv(path) -> list:
    """Read a raw-measurement CSV (one row per sequence)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    rows = list(csv.reader(text.splitlines()))
    if not rows:
        raise ParseError(f"{path}: empty file")
    header = tuple(h.strip() for h in rows[0])
    if header != RAW_CSV_HEADER:
        raise ParseError(f"{path}: bad header {','.join(header)!r}; expected {','.join(RAW_CSV_HEADER)!r}")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        rec = {"file": str(path), "line": lineno}
        if len(row) != len(RAW_CSV_HEADER):
            raise ParseError(f"{path}:{lineno}: expected {len(RAW_CSV_HEADER)} fields, got {len(row)}", rec)
        try:
            m = RawMeasurement(
                sequence_id=row[0].strip(),
                width=int(row[1]),
                height=int(row[2]),
                frame_rate=float(row[3]),
                bit_depth=int(row[4]),
                bits_per_pixel=float(row[5]),
                mse=float(row[6]),
            )
        except ValueError as exc:
            if isinstance(exc, InvariantViolation):
                exc.record = rec
                raise
            raise ParseError(f"{path}:{lineno}: {exc}", rec) from exc
        out.append(m)
    if not out:
        raise ParseError(f"{path}: no measurement rows")
    return out


# -- dataset documents ------------------------------------------------------

_ENTRY_KEYS = {"name", "mode", "complexity_kmac_per_pixel", "points", "synthetic", "note"}
_POINT_KEYS = {"rate_mbps", "mse", "kmac_per_pixel"}


def _codec_from_entry(entry, index):
    rec = {"entry": index}
    if not isinstance(entry, dict):
        raise ParseError(f"entry {index}: expected an object", rec)
    if isinstance(entry.get("name"), str):
        rec["codec"] = entry["name"]
    unknown = set(entry) - _ENTRY_KEYS
    if unknown:
        raise ParseError(f"entry {index}: unknown fields {sorted(unknown)}", rec)
    for key in ("name", "points"):
        if key not in entry:
            raise ParseError(f"entry {index}: missing field {key!r}", rec)
    mode = entry.get("mode", "curve")
    codec_c = entry.get("complexity_kmac_per_pixel")
    raw_points = entry["points"]
    if not isinstance(raw_points, list):
        raise ParseError(f"entry {index}: 'points' must be a list", rec)
    pts = []
    for j, p in enumerate(raw_points):
        prec = dict(rec, point=j)
        if not isinstance(p, dict):
            raise ParseError(f"entry {index} point {j}: expected an object", prec)
        unknown = set(p) - _POINT_KEYS
        if unknown:
            raise ParseError(f"entry {index} point {j}: unknown fields {sorted(unknown)}", prec)
        if "rate_mbps" not in p or "mse" not in p:
            raise ParseError(f"entry {index} point {j}: needs 'rate_mbps' and 'mse'", prec)
        c = p.get("kmac_per_pixel", codec_c)
        if c is None:
            raise InvariantViolation(
                f"entry {index} point {j}: no complexity (set kmac_per_pixel or complexity_kmac_per_pixel)", prec)
        try:
            pts.append(RdcPoint(p["rate_mbps"], p["mse"], c))
        except InvariantViolation as exc:
            exc.record = prec
            raise
    if mode == "curve":
        pts.sort(key=lambda q: q.rate)
    try:
        return CodecDataset(entry["name"], tuple(pts), mode)
    except InvariantViolation as exc:
        exc.record = rec
        raise


def parse_dataset(doc) -> list:
    """Build codec datasets from an already-decoded document."""
    if not isinstance(doc, list):
        raise ParseError("dataset document must be a list of codec entries")
    if not doc:
        raise ParseError("dataset document has no codec entries")
    codecs = []
    seen = set()
    for i, entry in enumerate(doc):
        codec = _codec_from_entry(entry, i)
        if codec.name in seen:
            raise DuplicateCodec(f"duplicate codec name {codec.name!r} (entry {i})", {"entry": i, "codec": codec.name})
        seen.add(codec.name)
        codecs.append(codec)
    return codecs


def load_dataset(path, format: str | None = None) -> list:
    """Load and validate a dataset file.

    ``format`` defaults to the file extension; only ``"json"`` is supported.
    """
    path = Path(path)
    fmt = (format or path.suffix.lstrip(".") or "json").lower()
    if fmt != "json":
        raise ParseError(f"unsupported dataset format {fmt!r}")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        raise ParseError(f"{path}: empty file")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return parse_dataset(doc)


def dataset_to_doc(codecs: Iterable[CodecDataset]) -> list:
    doc = []
    for codec in codecs:
        cs = {p.complexity for p in codec.points}
        entry = {"name": codec.name, "mode": codec.mode}
        if len(cs) == 1:
            entry["complexity_kmac_per_pixel"] = cs.pop()
            entry["points"] = [{"rate_mbps": p.rate, "mse": p.distortion} for p in codec.points]
        else:
            entry["points"] = [{"rate_mbps": p.rate, "mse": p.distortion, "kmac_per_pixel": p.complexity}
                               for p in codec.points]
        doc.append(entry)
    return doc


def save_dataset(codecs: Iterable[CodecDataset], path) -> None:
    codecs = list(codecs)
    names = [c.name for c in codecs]
    if len(set(names)) != len(names):
        raise DuplicateCodec("duplicate codec names in dataset")
    Path(path).write_text(json.dumps(dataset_to_doc(codecs), indent=2) + "\n", encoding="utf-8")


def bundled_table1_path():
    """Path of the bundled fixture: the 17 evaluated codecs with their decoder
    complexities and *synthetic* rate/MSE points."""
    return resources.files("rdcbench") / "data" / BUNDLED_TABLE1


def load_table1():
    with resources.as_file(bundled_table1_path()) as p:
        return load_dataset(p)


TABLE1_COMPLEXITY = {
    "CANF-VC": 1748,
    "DCVC": 762,
    "DCVC-TCM": 924,
    "DCVC-HEM": 1252,
    "DCVC-DC": 924,
    "DCVC-FM": 878,
    "MaskCRT": 767,
    "C16": 541,
    "C32": 592,
    "C64": 762,
    "CR16": 541,
    "CR32": 593,
    "CR64": 764,
    "MCR16": 598,
    "MCR32": 649,
    "MCR64": 821,
    "HyTIP": 873,
}
"""Decoder complexity (kMAC/pixel) of each evaluated codec, in table order."""
