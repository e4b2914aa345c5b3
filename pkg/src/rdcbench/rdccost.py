"""Geometry of the Lagrangian cost plane ``D + lambda R + gamma C = 0``.

Point arrays use the column order (rate, distortion, complexity), the same as
:meth:`CodecDataset.as_array`. Scalar helpers accept an :class:`RdcPoint`,
a 3-tuple, or an ``(..., 3)`` array and broadcast over leading axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import CodecDataset, RdcPoint
from .errors import DegenerateCurve, InvariantViolation

REDUCERS = ("min", "mean")


@dataclass(frozen=True)
class CostPlane:
    """Weights of rate (``lam``, MSE per Mb/s) and complexity (``gamma``, MSE per kMAC/pixel)."""

    lam: float
    gamma: float

    def __post_init__(self):
        for name in ("lam", "gamma"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v >= 0):
                raise InvariantViolation(f"{name} must be finite and non-negative, got {v!r}")
            object.__setattr__(self, name, v)

    @property
    def normal(self):
        """Plane normal in (r, d, c) order."""
        return np.array([self.lam, 1.0, self.gamma])

    @property
    def norm_sq(self):
        return 1.0 + self.lam**2 + self.gamma**2


@dataclass(frozen=True)
class CurveCostBreakdown:
    total: float
    per_segment: tuple  # of (length, mean distance)

    def recompute_total(self):
        ell = np.array([s[0] for s in self.per_segment])
        z = np.array([s[1] for s in self.per_segment])
        return float(np.sum(ell * z) / np.sum(ell))


def _as_points(p):
    if isinstance(p, RdcPoint):
        return np.array(p.as_tuple())
    return np.asarray(p, dtype=float)


def lagrangian(p, lam, gamma):
    """Unnormalized cost ``d + lam r + gamma c``."""
    p = _as_points(p)
    return p[..., 1] + lam * p[..., 0] + gamma * p[..., 2]


def plane_distance(p, plane: CostPlane):
    """Signed distance to the cost plane; non-negative for non-negative coordinates."""
    out = lagrangian(p, plane.lam, plane.gamma) / math.sqrt(plane.norm_sq)
    return float(out) if np.ndim(out) == 0 else out


def project_onto_plane(p, plane: CostPlane):
    """Orthogonal projection onto the cost plane, returned in (r, d, c) order."""
    p = _as_points(p)
    q = lagrangian(p, plane.lam, plane.gamma) / plane.norm_sq
    q = np.asarray(q)[..., None]
    return p - q * plane.normal


def linear_cost(s, u) -> float:
    """Dot product of a cost vector with an importance vector."""
    s = np.asarray(s, dtype=float).ravel()
    u = np.asarray(u, dtype=float).ravel()
    if s.size == 0 or s.size != u.size:
        raise InvariantViolation(f"cost and importance vectors must have equal non-zero length ({s.size} vs {u.size})")
    return float(np.dot(s, u))


def _curve_terms(pts, lam, gamma):
    """Per-segment projected lengths and mean distances.

    ``lam`` and ``gamma`` may be arrays of any common shape; the outputs have
    shape ``lam.shape + (N - 1,)``.
    """
    lam = np.asarray(lam, dtype=float)[..., None]
    gamma = np.asarray(gamma, dtype=float)[..., None]
    norm_sq = 1.0 + lam**2 + gamma**2
    r, d, c = pts[:, 0], pts[:, 1], pts[:, 2]
    j = d + lam * r + gamma * c
    z = j / np.sqrt(norm_sq)
    q = j / norm_sq
    rp = r - q * lam
    dp = d - q
    cp = c - q * gamma
    ell = np.sqrt(np.diff(dp, axis=-1) ** 2 + np.diff(rp, axis=-1) ** 2 + np.diff(cp, axis=-1) ** 2)
    zbar = (z[..., :-1] + z[..., 1:]) / 2
    return ell, zbar


def _curve_total(ell, zbar):
    den = np.sum(ell, axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.sum(ell * zbar, axis=-1) / den


def curve_cost(codec: CodecDataset, plane: CostPlane) -> CurveCostBreakdown:
    """Length-weighted mean distance of a polyline codec to the cost plane.

    Each segment contributes the mean of its end-point distances, weighted by
    the length of the segment's projection on the plane. Segments that
    project to a single point carry zero weight.
    """
    pts = codec.as_array() if isinstance(codec, CodecDataset) else np.asarray(codec, dtype=float)
    if len(pts) < 2:
        raise InvariantViolation("curve cost needs at least 2 points")
    ell, zbar = _curve_terms(pts, plane.lam, plane.gamma)
    if not np.sum(ell) > 0:
        name = getattr(codec, "name", None)
        raise DegenerateCurve(f"curve {name!r} projects onto a single point of the cost plane", {"codec": name})
    total = float(_curve_total(ell, zbar))
    return CurveCostBreakdown(total, tuple(zip(ell.tolist(), zbar.tolist())))


def point_costs(codec, plane: CostPlane) -> np.ndarray:
    pts = codec.as_array() if isinstance(codec, CodecDataset) else np.asarray(codec, dtype=float).reshape(-1, 3)
    return lagrangian(pts, plane.lam, plane.gamma)


def cloud_cost(codec, plane: CostPlane, reducer: str = "min") -> float:
    """Minimum or mean of the per-point costs ``d + lam r + gamma c``.

    These costs are not divided by ``sqrt(1 + lam**2 + gamma**2)``, unlike
    :func:`plane_distance`.
    """
    j = point_costs(codec, plane)
    if j.size == 0:
        raise InvariantViolation("cloud cost needs at least 1 point")
    if reducer == "min":
        return float(np.min(j))
    if reducer == "mean":
        return float(np.mean(j))
    raise InvariantViolation(f"reducer must be one of {REDUCERS}, got {reducer!r}")
