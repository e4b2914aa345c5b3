"""Bjontegaard deltas: the classic 2D form, the rotated delta(lambda) and the
projected deltas in the rate-distortion-complexity volume.

Sign convention: every delta is ``A - B`` on the ordinate axis, so a negative
value means codec A needs less of the measured quantity (it is better).

Rotations act on the raw plane coordinates (Mb/s, kMAC/pixel and MSE in dB
or linear MSE) with no rescaling, so delta(lambda) depends on those units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import interp
from .errors import DegenerateProjection, DomainError, InvariantViolation, NoOverlap, NonMonotone

PLANES = ("RD", "RC", "DC")
DISTORTION_SCALES = ("mse_db", "linear_mse")

# (plane, lambda endpoint) -> metric name; lambda = 0 keeps the first plane
# coordinate as abscissa, lambda = inf swaps the roles.
AXIS_METRICS = {
    ("RD", 0.0): "dD_R",
    ("RD", math.inf): "dR_D",
    ("RC", 0.0): "dC_R",
    ("RC", math.inf): "dR_C",
    ("DC", 0.0): "dC_D",
    ("DC", math.inf): "dD_C",
}


def mse_to_db(mse):
    """``10 log10(mse)``; negative for mse < 1."""
    arr = np.asarray(mse, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"MSE must be positive to convert to dB, got {mse!r}")
    out = 10.0 * np.log10(arr)
    return float(out) if out.ndim == 0 else out


def psnr_from_mse(mse, peak: float = 255.0):
    arr = np.asarray(mse, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"MSE must be positive to compute PSNR, got {mse!r}")
    out = 10.0 * np.log10(peak**2 / arr)
    return float(out) if out.ndim == 0 else out


def mse_from_psnr(psnr, peak: float = 255.0):
    return peak**2 * 10.0 ** (-np.asarray(psnr, dtype=float) / 10.0)


def theta_from_lambda(lam) -> float:
    """Inclination of the projection line: ``tan(theta) = -lambda``."""
    lam = float(lam)
    if math.isnan(lam) or lam < 0:
        raise DomainError(f"lambda must be non-negative or inf, got {lam!r}")
    if math.isinf(lam):
        return -math.pi / 2
    return -math.atan(lam)


def _cos_sin(theta):
    # snap the quarter turn so that lambda = inf swaps axes exactly
    if theta == -math.pi / 2:
        return 0.0, -1.0
    return math.cos(theta), math.sin(theta)


def rotate_points(points, theta: float) -> np.ndarray:
    """Rotate ``(r, d)`` pairs so that the line of inclination ``theta`` becomes the abscissa.

    ``x = r cos(theta) + d sin(theta)``, ``y = -r sin(theta) + d cos(theta)``.
    """
    p = np.asarray(points, dtype=float).reshape(-1, 2)
    c, s = _cos_sin(theta)
    r, d = p[:, 0], p[:, 1]
    return np.column_stack([r * c + d * s, -r * s + d * c])


@dataclass(frozen=True)
class ProjectionSpec:
    plane: str = "RD"
    theta: float = 0.0
    distortion_scale: str = "mse_db"
    lam_value: Optional[float] = None  # exact lambda when built from one

    def __post_init__(self):
        if self.plane not in PLANES:
            raise InvariantViolation(f"plane must be one of {PLANES}, got {self.plane!r}")
        if not (-math.pi / 2 <= self.theta <= 0):
            raise InvariantViolation(f"theta must lie in [-pi/2, 0], got {self.theta!r}")
        if self.distortion_scale not in DISTORTION_SCALES:
            raise InvariantViolation(f"distortion_scale must be one of {DISTORTION_SCALES}")

    @property
    def lam(self) -> float:
        if self.lam_value is not None:
            return self.lam_value
        if self.theta == -math.pi / 2:
            return math.inf
        return -math.tan(self.theta)


@dataclass(frozen=True)
class BdResult:
    value: float
    t0: float
    t1: float
    axis_spec: Optional[ProjectionSpec] = None
    method: str = "monotone_cubic"
    name: Optional[str] = None

    def as_dict(self):
        out = {"value": self.value, "t0": self.t0, "t1": self.t1, "method": self.method}
        if self.name:
            out["metric"] = self.name
        if self.axis_spec is not None:
            out.update(plane=self.axis_spec.plane, lam=self.axis_spec.lam, theta=self.axis_spec.theta,
                       distortion_scale=self.axis_spec.distortion_scale)
        return out


def overlap(xa, xb):
    return max(float(np.min(xa)), float(np.min(xb))), min(float(np.max(xa)), float(np.max(xb)))


def bd_delta(set_a, set_b, method: str = "monotone_cubic", axis_spec=None, name=None) -> BdResult:
    """Average ordinate difference ``A - B`` over the common abscissa range.

    Each set is a sequence of ``(x, y)`` pairs. Integration runs over
    ``[max(min x), min(max x)]`` only; nothing is extrapolated.
    """
    a = np.asarray(set_a, dtype=float).reshape(-1, 2)
    b = np.asarray(set_b, dtype=float).reshape(-1, 2)
    t0, t1 = overlap(a[:, 0], b[:, 0])
    if not t0 < t1:
        ra = [float(a[:, 0].min()), float(a[:, 0].max())]
        rb = [float(b[:, 0].min()), float(b[:, 0].max())]
        raise NoOverlap(f"abscissa ranges do not overlap: A in {ra}, B in {rb}", {"range_a": ra, "range_b": rb})
    ca = interp.fit(a, method)
    cb = interp.fit(b, method)
    ia = interp.integrate(ca, t0, t1)
    ib = interp.integrate(cb, t0, t1)
    return BdResult((ia - ib) / (t1 - t0), t0, t1, axis_spec, method, name)


TIE_RTOL = 1e-12


def _untie(xy, method):
    """Sort rotated points by abscissa; merge ties and drop to linear.

    Abscissae closer than ``TIE_RTOL`` relative to the largest magnitude are
    ties (rotation by an irrational angle rarely yields exact equality).
    Returns ``None`` when every abscissa is tied.
    """
    order = np.argsort(xy[:, 0], kind="stable")
    xy = xy[order]
    x = xy[:, 0]
    tol = TIE_RTOL * float(np.max(np.abs(x)))
    gaps = np.diff(x) > tol
    if not np.any(gaps):
        return None, method
    if np.all(gaps):
        return xy, method
    group = np.concatenate([[0], np.cumsum(gaps)])
    counts = np.bincount(group)
    ux = np.bincount(group, weights=x) / counts
    uy = np.bincount(group, weights=xy[:, 1]) / counts
    return np.column_stack([ux, uy]), "linear"


def _require_curve(codec):
    if codec.mode != "curve":
        raise InvariantViolation(f"codec {codec.name!r} is in {codec.mode} mode; BD needs curve mode",
                                 {"codec": codec.name})


def _plane_coords(codec, plane, distortion_scale):
    r, c = codec.rates, codec.complexities
    d = codec.distortions
    if distortion_scale == "mse_db":
        d = mse_to_db(d)
    elif distortion_scale != "linear_mse":
        raise InvariantViolation(f"distortion_scale must be one of {DISTORTION_SCALES}")
    if plane == "RD":
        return np.column_stack([r, d])
    if plane == "RC":
        return np.column_stack([r, c])
    if plane == "DC":
        return np.column_stack([d, c])
    raise InvariantViolation(f"plane must be one of {PLANES}, got {plane!r}")


def _rotated_delta(pa, pb, lam, spec, method, degenerate_exc, names):
    theta = spec.theta
    ra, method_a = _untie(rotate_points(pa, theta), method)
    rb, method_b = _untie(rotate_points(pb, theta), method)
    for name, pts in zip(names, (ra, rb)):
        if pts is None:
            raise degenerate_exc(
                f"codec {name!r}: all points share one abscissa after projection "
                f"(plane {spec.plane}, lambda {lam!r})", {"codec": name, "plane": spec.plane, "lambda": lam})
    used = "linear" if "linear" in (method_a, method_b) else method
    metric = None
    key = (spec.plane, float(lam))
    if key in AXIS_METRICS:
        metric = AXIS_METRICS[key]
    return bd_delta(ra, rb, used, spec, metric)


def delta_lambda(codec_a, codec_b, lam, distortion_scale: str = "mse_db",
                 method: str = "monotone_cubic") -> BdResult:
    """Rate-distortion delta measured along the direction set by ``lam``.

    ``lam = 0`` gives the distortion delta over the rate overlap, ``lam = inf``
    the rate delta over the distortion overlap. Both codecs must be curves.
    Values depend on the units of both axes.
    """
    _require_curve(codec_a)
    _require_curve(codec_b)
    spec = ProjectionSpec("RD", theta_from_lambda(lam), distortion_scale, float(lam))
    pa = _plane_coords(codec_a, "RD", distortion_scale)
    pb = _plane_coords(codec_b, "RD", distortion_scale)
    return _rotated_delta(pa, pb, lam, spec, method, NonMonotone, (codec_a.name, codec_b.name))


def delta_3d(codec_a, codec_b, plane: str, lam, distortion_scale: str = "mse_db",
             method: str = "monotone_cubic") -> BdResult:
    """Delta(lambda) after projecting the RDC points onto a coordinate plane.

    ``RD`` drops complexity, ``RC`` drops distortion, ``DC`` drops rate. The
    first coordinate of the plane name is the abscissa at ``lam = 0``.
    """
    _require_curve(codec_a)
    _require_curve(codec_b)
    spec = ProjectionSpec(plane, theta_from_lambda(lam), distortion_scale, float(lam))
    pa = _plane_coords(codec_a, plane, distortion_scale)
    pb = _plane_coords(codec_b, plane, distortion_scale)
    return _rotated_delta(pa, pb, lam, spec, method, DegenerateProjection, (codec_a.name, codec_b.name))


def axis_deltas(codec_a, codec_b, distortion_scale: str = "mse_db", method: str = "monotone_cubic") -> dict:
    """All six axis-oriented deltas; failures are returned as the exception instance."""
    out = {}
    for (plane, lam), name in AXIS_METRICS.items():
        try:
            out[name] = delta_3d(codec_a, codec_b, plane, lam, distortion_scale, method)
        except (NoOverlap, DegenerateProjection, NonMonotone) as exc:
            out[name] = exc
    return out


def bd_psnr(codec_a, codec_b, method: str = "monotone_cubic") -> float:
    """Conventional BD-PSNR in dB (positive when A has higher quality); the negated MSE-dB delta."""
    return -delta_lambda(codec_a, codec_b, 0.0, "mse_db", method).value


def bd_rate_percent(codec_a, codec_b, method: str = "monotone_cubic") -> BdResult:
    """Conventional BD-rate in percent (negative when A saves rate).

    Interpolates log10(rate) against MSE in dB and reports ``100 (10**BD - 1)``.
    This is the customary percentage form, not one of the rotated deltas.
    """
    _require_curve(codec_a)
    _require_curve(codec_b)
    for codec in (codec_a, codec_b):
        if np.any(codec.rates <= 0):
            raise DomainError(f"codec {codec.name!r}: BD-rate needs positive rates")
    pa = np.column_stack([mse_to_db(codec_a.distortions), np.log10(codec_a.rates)])
    pb = np.column_stack([mse_to_db(codec_b.distortions), np.log10(codec_b.rates)])
    ra, ma = _untie(pa, method)
    rb, mb = _untie(pb, method)
    if ra is None or rb is None:
        raise NonMonotone("all points share one distortion value")
    used = "linear" if "linear" in (ma, mb) else method
    res = bd_delta(ra, rb, used, name="bd_rate_percent")
    return BdResult(100.0 * (10.0**res.value - 1.0), res.t0, res.t1, None, used, "bd_rate_percent")
