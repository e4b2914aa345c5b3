"""Piecewise-cubic interpolation with exact integration.

Curves are stored as per-interval polynomial coefficients in the local
variable ``s = t - t_k``, so integrals are evaluated from the antiderivative
rather than by quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvariantViolation

METHODS = ("monotone_cubic", "linear")


def _pchip_slopes(h, delta):
    """Knot derivatives of the monotone (Fritsch-Carlson / Fritsch-Butland) Hermite cubic."""
    n = len(h) + 1
    m = np.zeros(n)
    if n == 2:
        m[:] = delta[0]
        return m
    d0, d1 = delta[:-1], delta[1:]
    h0, h1 = h[:-1], h[1:]
    w1 = 2 * h1 + h0
    w2 = h1 + 2 * h0
    same = (np.sign(d0) * np.sign(d1)) > 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        harm = (w1 + w2) / (w1 / d0 + w2 / d1)
    m[1:-1] = np.where(same, harm, 0.0)
    m[0] = _edge_slope(h[0], h[1], delta[0], delta[1])
    m[-1] = _edge_slope(h[-1], h[-2], delta[-1], delta[-2])
    return m


def _edge_slope(h0, h1, d0, d1):
    # one-sided three-point estimate, clipped to keep the end interval monotone
    m = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1)
    if np.sign(m) != np.sign(d0):
        return 0.0
    if np.sign(d0) != np.sign(d1) and abs(m) > abs(3 * d0):
        return 3 * d0
    return float(m)


@dataclass(frozen=True, eq=False)
class Curve1D:
    """Piecewise polynomial through ``knots`` with no extrapolation.

    ``coef[k]`` holds ``(c0, c1, c2, c3)`` for the interval ``[t[k], t[k+1]]``.
    """

    t: np.ndarray
    y: np.ndarray
    method: str
    coef: np.ndarray

    @property
    def knots(self):
        return list(zip(self.t.tolist(), self.y.tolist()))

    @property
    def t_min(self):
        return float(self.t[0])

    @property
    def t_max(self):
        return float(self.t[-1])

    def __call__(self, t):
        return evaluate(self, t)

    def integrate(self, a, b):
        return integrate(self, a, b)


def fit(points, method: str = "monotone_cubic") -> Curve1D:
    """Interpolate ``(t, y)`` pairs. Points are sorted by ``t``; repeated ``t`` is rejected."""
    if method not in METHODS:
        raise InvariantViolation(f"unknown interpolation method {method!r}")
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvariantViolation("points must be a sequence of (t, y) pairs")
    if len(arr) < 2:
        raise InvariantViolation(f"need at least 2 points to interpolate, got {len(arr)}")
    if not np.all(np.isfinite(arr)):
        raise InvariantViolation("interpolation points must be finite")
    order = np.argsort(arr[:, 0], kind="stable")
    t = arr[order, 0].copy()
    y = arr[order, 1].copy()
    h = np.diff(t)
    if np.any(h <= 0):
        raise InvariantViolation("duplicate abscissae")
    delta = np.diff(y) / h
    if method == "linear":
        coef = np.column_stack([y[:-1], delta, np.zeros_like(h), np.zeros_like(h)])
    else:
        m = _pchip_slopes(h, delta)
        c2 = (3 * delta - 2 * m[:-1] - m[1:]) / h
        c3 = (m[:-1] + m[1:] - 2 * delta) / h**2
        coef = np.column_stack([y[:-1], m[:-1], c2, c3])
    t.flags.writeable = False
    y.flags.writeable = False
    coef.flags.writeable = False
    return Curve1D(t, y, method, coef)


def _check_domain(c: Curve1D, t):
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t < c.t[0]) or np.any(t > c.t[-1]):
        raise DomainError(f"query outside curve domain [{c.t[0]!r}, {c.t[-1]!r}]")
    return t


def _piece(c: Curve1D, t):
    return np.clip(np.searchsorted(c.t, t, side="right") - 1, 0, len(c.t) - 2)


def evaluate(c: Curve1D, t):
    """Evaluate the curve at ``t`` (scalar or array). Knots return their ordinate exactly."""
    t = _check_domain(c, t)
    k = _piece(c, t)
    s = t - c.t[k]
    c0, c1, c2, c3 = c.coef[k].T
    out = c0 + s * (c1 + s * (c2 + s * c3))
    at_end = t == c.t[-1]
    out = np.where(at_end, c.y[-1], out)
    return float(out) if out.ndim == 0 else out


def _antiderivative(coef, s):
    c0, c1, c2, c3 = coef
    return s * (c0 + s * (c1 / 2 + s * (c2 / 3 + s * c3 / 4)))


def integrate(c: Curve1D, a, b) -> float:
    """Exact integral of the piecewise polynomial over ``[a, b]``."""
    a, b = float(a), float(b)
    _check_domain(c, [a, b])
    if a > b:
        raise DomainError(f"integration bounds reversed: {a!r} > {b!r}")
    if a == b:
        return 0.0
    ka = int(_piece(c, a))
    kb = int(_piece(c, b))
    if b == c.t[kb] and kb > ka:
        kb -= 1
    total = 0.0
    for k in range(ka, kb + 1):
        lo = a if k == ka else c.t[k]
        hi = b if k == kb else c.t[k + 1]
        total += _antiderivative(c.coef[k], hi - c.t[k]) - _antiderivative(c.coef[k], lo - c.t[k])
    return float(total)
