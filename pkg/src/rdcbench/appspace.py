"""Application space: mapping an application's economics to ``(lambda, gamma)``
and comparing codecs over a whole ``(lambda, gamma)`` grid.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .dataset import CodecDataset
from .errors import DegenerateCurve, GridMismatch, InvariantViolation
from .rdccost import REDUCERS, _curve_terms, _curve_total

COST_KINDS = ("cloud", "curve")
THREADS_ENV = "RDC_BENCH_THREADS"


@dataclass(frozen=True)
class ApplicationModel:
    """Business parameters of an application.

    Prices are in one currency. ``gpu_capacity`` is the kMAC/pixel the GPU can
    sustain for the target video format, ``gpu_power`` is in kW and the
    reference codec is described by ``ref_complexity`` (kMAC/pixel) and
    ``ref_rate`` (Mb/s). Users are assumed to subscribe at ``psnr_full`` dB and
    to leave at ``psnr_none`` dB.
    """

    n_users: float
    hours: float
    energy_price: float
    data_price: float
    gpu_cost: float
    gpu_capacity: float
    gpu_power: float
    ref_complexity: float
    ref_rate: float
    revenue_multiplier: float = 2.0
    psnr_full: float = 40.0
    psnr_none: float = 30.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise InvariantViolation(f"{f.name} must be a finite number, got {v!r}")
        for name in ("n_users", "hours", "gpu_capacity"):
            if getattr(self, name) <= 0:
                raise InvariantViolation(f"{name} must be positive")
        for name in ("energy_price", "data_price", "gpu_cost", "gpu_power", "ref_complexity", "ref_rate"):
            if getattr(self, name) < 0:
                raise InvariantViolation(f"{name} must be non-negative")
        if self.revenue_multiplier < 1:
            raise InvariantViolation("revenue_multiplier must be at least 1")
        if not self.psnr_full > self.psnr_none:
            raise InvariantViolation("psnr_full must exceed psnr_none")

    @classmethod
    def from_dict(cls, doc):
        names = {f.name for f in fields(cls)}
        unknown = set(doc) - names
        if unknown:
            raise InvariantViolation(f"unknown application-model fields {sorted(unknown)}")
        try:
            return cls(**doc)
        except TypeError as exc:
            raise InvariantViolation(str(exc)) from exc

    def to_dict(self):
        return asdict(self)


STREAMING_EXAMPLE = ApplicationModel(
    n_users=1000,
    hours=1000,
    energy_price=0.15,
    data_price=0.08,
    gpu_cost=700,
    gpu_capacity=128,
    gpu_power=0.32,
    ref_complexity=7,
    ref_rate=3,
    revenue_multiplier=2,
    psnr_full=40,
    psnr_none=30,
)
"""The HD streaming case: 1000 users watching 1000 hours, an RTX 3080-class
decoder and an HEVC reference at 7 kMAC/pixel and 3 Mb/s."""


@dataclass(frozen=True)
class AppPoint:
    lam: float
    gamma: float
    alpha: tuple  # (distortion, rate, complexity) weights in currency per unit
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        a1, a2, a3 = self.alpha
        if not a1 > 0 or a2 < 0 or a3 < 0:
            raise InvariantViolation(f"invalid alpha weights {self.alpha!r}")

    @property
    def db(self):
        """``(10 log10 lambda, 10 log10 gamma)``; zero weights map to ``-inf``."""
        with np.errstate(divide="ignore"):
            return float(10 * np.log10(self.lam)), float(10 * np.log10(self.gamma))


def _round_sig(x, digits):
    if x == 0:
        return 0.0
    return round(x, digits - 1 - int(math.floor(math.log10(abs(x)))))


def app_calculator(m: ApplicationModel, paper_rounding: bool = False) -> AppPoint:
    """Translate an application model into currency weights and ``(lambda, gamma)``.

    With ``paper_rounding`` the hand-calculation shortcuts are reproduced: the
    per-kMAC cost truncated to 3 decimals, revenue rounded to 2 significant
    figures and the MSE gap rounded to 2 decimals.
    """
    hw_per_kmac = m.gpu_cost / m.gpu_capacity
    energy_per_kmac_hour = m.gpu_power * m.energy_price / m.gpu_capacity
    per_kmac = hw_per_kmac + m.hours * energy_per_kmac_hour
    if paper_rounding:
        per_kmac = math.floor(round(per_kmac * 1000, 9)) / 1000
    alpha3 = per_kmac * m.n_users
    if paper_rounding:
        alpha3 = round(alpha3, 6)
    gb_per_mbps = m.hours * 3600 * m.n_users / 8 / 1000
    alpha2 = gb_per_mbps * m.data_price
    operating_ref = m.ref_complexity * alpha3 + m.ref_rate * alpha2
    revenue = m.revenue_multiplier * operating_ref
    revenue_used = _round_sig(revenue, 2) if paper_rounding else revenue
    mse_full = 255.0**2 * 10 ** (-m.psnr_full / 10)
    mse_none = 255.0**2 * 10 ** (-m.psnr_none / 10)
    delta_mse = mse_none - mse_full
    if paper_rounding:
        delta_mse = round(delta_mse, 2)
    if not delta_mse > 0:
        raise InvariantViolation(f"quality range gives a non-positive MSE gap ({delta_mse!r})")
    if not revenue_used > 0:
        raise InvariantViolation("reference revenue must be positive")
    alpha1 = revenue_used / delta_mse
    details = {
        "hw_per_kmac": hw_per_kmac,
        "energy_per_kmac_hour": energy_per_kmac_hour,
        "cost_per_kmac_per_user": per_kmac,
        "gb_per_mbps": gb_per_mbps,
        "operating_ref": operating_ref,
        "revenue": revenue,
        "revenue_used": revenue_used,
        "mse_full": mse_full,
        "mse_none": mse_none,
        "delta_mse": delta_mse,
        "paper_rounding": paper_rounding,
    }
    return AppPoint(alpha2 / alpha1, alpha3 / alpha1, (alpha1, alpha2, alpha3), details)


# -- grids ------------------------------------------------------------------


def db_axis(lo: float, hi: float, step: float) -> np.ndarray:
    """``lo, lo + step, ...`` up to ``hi`` inclusive.

    Built as ``lo + step * k`` so that halving the step reproduces every
    original value bit for bit.
    """
    if not (math.isfinite(lo) and math.isfinite(hi) and step > 0 and hi >= lo):
        raise InvariantViolation(f"bad axis range {lo!r}:{hi!r}:{step!r}")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n, dtype=float)


def parse_range(text: str):
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise InvariantViolation(f"range must be lo:hi:step, got {text!r}") from exc
    return lo, hi, step


@dataclass(frozen=True)
class GridSpec:
    lambda_db: tuple = (-20.0, 40.0, 0.5)
    gamma_db: tuple = (-30.0, 30.0, 0.5)

    def axes(self):
        return db_axis(*self.lambda_db), db_axis(*self.gamma_db)


@dataclass(frozen=True, eq=False)
class AppSpaceGrid:
    """Per-codec cost surfaces over a dB-spaced ``(lambda, gamma)`` lattice.

    ``surfaces[i, g, l]`` is codec ``i``'s linear cost at
    ``gamma = 10**(gamma_db_axis[g] / 10)`` and
    ``lambda = 10**(lambda_db_axis[l] / 10)``. An axis may start at ``-inf``
    to include a zero weight.
    """

    lambda_db_axis: np.ndarray
    gamma_db_axis: np.ndarray
    codec_names: tuple
    surfaces: np.ndarray
    reducer: str
    cost_kind: str
    best_map: np.ndarray

    @property
    def lambdas(self):
        return 10.0 ** (self.lambda_db_axis / 10.0)

    @property
    def gammas(self):
        return 10.0 ** (self.gamma_db_axis / 10.0)

    def surfaces_db(self):
        with np.errstate(divide="ignore", invalid="ignore"):
            out = 10.0 * np.log10(self.surfaces)
        return np.where(self.surfaces > 0, out, -np.inf)

    def surface(self, name_or_index, db=False):
        i = name_or_index if isinstance(name_or_index, int) else self.codec_names.index(name_or_index)
        return self.surfaces_db()[i] if db else self.surfaces[i]

    def winners(self):
        return sorted(set(np.unique(self.best_map).tolist()))


def _check_axis(axis, name):
    axis = np.asarray(axis, dtype=float).ravel()
    if axis.size == 0:
        raise InvariantViolation(f"{name} axis is empty")
    if np.any(np.isnan(axis)) or np.any(axis == np.inf) or np.any(np.diff(axis) <= 0):
        raise InvariantViolation(f"{name} axis must be strictly increasing and below +inf")
    return axis


def _codec_surface(pts, lam, gam, reducer, cost_kind, name):
    # lam: (1, L), gam: (G, 1)
    if cost_kind == "cloud":
        j = pts[:, 1] + lam[..., None] * pts[:, 0] + gam[..., None] * pts[:, 2]
        return np.min(j, axis=-1) if reducer == "min" else np.mean(j, axis=-1)
    lam_b, gam_b = np.broadcast_arrays(lam, gam)
    ell, zbar = _curve_terms(pts, lam_b, gam_b)
    total = _curve_total(ell, zbar)
    if not np.all(np.isfinite(total)):
        raise DegenerateCurve(f"curve {name!r} projects onto a single point somewhere on the grid",
                              {"codec": name})
    return total


def thread_count(threads=None):
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InvariantViolation(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return min(8, os.cpu_count() or 1)


def cost_surface(codecs, grid_spec: GridSpec | None = None, reducer: str = "min", cost_kind: str = "cloud",
                 lambda_db_axis=None, gamma_db_axis=None, threads=None) -> AppSpaceGrid:
    """Evaluate every codec's cost on the grid and the per-cell best codec.

    Costs are computed in closed form at each cell. ``cloud`` uses the min or
    mean of ``d + lambda r + gamma c`` over the codec's points; ``curve`` uses
    :func:`rdcbench.rdccost.curve_cost` and ignores ``reducer``. Work is split
    per codec across threads; results do not depend on the thread count.
    """
    codecs = list(codecs)
    if not codecs:
        raise InvariantViolation("need at least one codec")
    if reducer not in REDUCERS:
        raise InvariantViolation(f"reducer must be one of {REDUCERS}, got {reducer!r}")
    if cost_kind not in COST_KINDS:
        raise InvariantViolation(f"cost_kind must be one of {COST_KINDS}, got {cost_kind!r}")
    if lambda_db_axis is None or gamma_db_axis is None:
        la, ga = (grid_spec or GridSpec()).axes()
        lambda_db_axis = la if lambda_db_axis is None else lambda_db_axis
        gamma_db_axis = ga if gamma_db_axis is None else gamma_db_axis
    lax = _check_axis(lambda_db_axis, "lambda")
    gax = _check_axis(gamma_db_axis, "gamma")
    lam = (10.0 ** (lax / 10.0))[None, :]
    gam = (10.0 ** (gax / 10.0))[:, None]
    for c in codecs:
        if cost_kind == "curve" and c.mode != "curve":
            raise InvariantViolation(f"codec {c.name!r} is in cloud mode; curve cost needs curve mode",
                                     {"codec": c.name})

    def work(codec):
        return _codec_surface(codec.as_array(), lam, gam, reducer, cost_kind, codec.name)

    n = thread_count(threads)
    if n == 1 or len(codecs) == 1:
        surfaces = [work(c) for c in codecs]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            surfaces = list(pool.map(work, codecs))
    surfaces = np.stack(surfaces)
    surfaces.flags.writeable = False
    bm = np.argmin(surfaces, axis=0)
    bm.flags.writeable = False
    return AppSpaceGrid(lax, gax, tuple(c.name for c in codecs), surfaces, reducer, cost_kind, bm)


def cost_difference(surf_a, surf_b, domain: str = "db") -> np.ndarray:
    """Cellwise ``J_A - J_B``; in the ``db`` domain negative cells are where A costs less."""
    a = np.asarray(surf_a, dtype=float)
    b = np.asarray(surf_b, dtype=float)
    if a.shape != b.shape:
        raise GridMismatch(f"surface shapes differ: {a.shape} vs {b.shape}")
    if domain == "linear":
        return a - b
    if domain != "db":
        raise InvariantViolation(f"domain must be 'db' or 'linear', got {domain!r}")
    with np.errstate(divide="ignore", invalid="ignore"):
        return 10.0 * np.log10(a) - 10.0 * np.log10(b)


def grid_difference(grid: AppSpaceGrid, a, b, domain: str = "db") -> np.ndarray:
    return cost_difference(grid.surface(a), grid.surface(b), domain)


def best_map(grid: AppSpaceGrid):
    """Index of the cheapest codec at every cell (lowest index on ties) and the set of winners."""
    if len(grid.codec_names) < 2:
        raise InvariantViolation("best-codec map needs at least two codecs")
    bm = np.argmin(grid.surfaces, axis=0)
    return bm, sorted(set(np.unique(bm).tolist()))


def check_congruent(ga: AppSpaceGrid, gb: AppSpaceGrid):
    if not (np.array_equal(ga.lambda_db_axis, gb.lambda_db_axis)
            and np.array_equal(ga.gamma_db_axis, gb.gamma_db_axis)):
        raise GridMismatch("grids have different axes")
