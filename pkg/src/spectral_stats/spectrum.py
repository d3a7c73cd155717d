"""2D power spectra, rotationally averaged spectra, power-law fits, autocorrelation.

Conventions, fixed package-wide:
  - forward transform is unnormalized (sum convention), inverse carries 1/N^2;
  - integer wavenumbers k_x, k_y in [-N/2, N/2), radius r = round(|k|);
  - radial bins run 1..floor(N/2); DC is excluded and the corner region
    beyond floor(N/2) is dropped (those annuli are incomplete).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from .errors import (
    DegenerateInputError,
    EmptyEnsembleError,
    FormatError,
    InsufficientDataError,
    ShapeError,
)

__all__ = [
    "RadialSpectrum",
    "PowerLawFit",
    "RadialCorrelation",
    "CorrelationFit",
    "dft2",
    "idft2",
    "power_grid",
    "radial_average",
    "ensemble_spectrum",
    "fit_power_law",
    "autocorrelation",
    "ensemble_correlation",
    "fit_correlation",
    "write_spectrum_csv",
    "read_spectrum_csv",
]


# ---------------------------------------------------------------------------
# containers


@dataclass
class RadialSpectrum:
    """Mean power per integer frequency annulus, bins 1..floor(N/2).

    `power` is non-negative for true power spectra; the same container also
    carries signed radial cross-spectra (see distill.cross_power).
    """

    bins: np.ndarray  # int, 1..k_max
    power: np.ndarray  # float64, annulus means
    counts: np.ndarray  # int64, grid points per annulus
    jacobian_applied: bool = False

    @property
    def k_max(self) -> int:
        return int(self.bins[-1])


@dataclass
class PowerLawFit:
    """Least-squares slope of log power vs log radius (natural log)."""

    alpha: float
    log_amplitude: float
    r2: float
    k_min: int
    k_max: int
    n_zero_bins: int = 0  # bins dropped because power <= 0 (not serialized)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "log_amplitude": self.log_amplitude,
            "r2": self.r2,
            "k_min": self.k_min,
            "k_max": self.k_max,
        }


@dataclass
class RadialCorrelation:
    """Mean spatial correlation per integer displacement radius, 0..floor(N/2)."""

    radii: np.ndarray  # int, 0..k_max
    corr: np.ndarray  # float64


@dataclass
class CorrelationFit:
    """Fit of corr(r) = c1 + c2 * r**exponent over a radius range."""

    c1: float
    c2: float
    exponent: float
    residual: float

    def to_dict(self) -> dict:
        return {
            "c1": self.c1,
            "c2": self.c2,
            "exponent": self.exponent,
            "residual": self.residual,
        }


# ---------------------------------------------------------------------------
# transform and binning machinery


def _require_square(a: np.ndarray, minimum: int = 4) -> int:
    if a.ndim != 2:
        raise ShapeError(f"expected a rank-2 map, got rank {a.ndim}")
    n, m = a.shape
    if n != m:
        raise ShapeError(f"expected a square map, got {n}x{m}")
    if n < minimum:
        raise ShapeError(f"side {n} below minimum {minimum}")
    return n


def dft2(t: np.ndarray) -> np.ndarray:
    """Unnormalized forward 2D DFT of a square real map (complex128 output)."""
    _require_square(np.asarray(t))
    return np.fft.fft2(np.asarray(t, dtype=np.float64))


def idft2(g: np.ndarray) -> np.ndarray:
    """Inverse of dft2 (carries the 1/N^2 factor)."""
    return np.fft.ifft2(np.asarray(g, dtype=np.complex128))


def power_grid(g: np.ndarray) -> np.ndarray:
    """Elementwise squared magnitude |G|^2; satisfies Parseval against the input."""
    g = np.asarray(g)
    _require_square(g)
    return (g.real * g.real + g.imag * g.imag).astype(np.float64)


@lru_cache(maxsize=64)
def _radial_bins(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Bin index grid and per-bin counts for an n x n frequency plane.

    Index layout matches the unshifted DFT grid. Bin b holds points with
    round(|k|) == b for b <= floor(n/2); everything farther out maps to the
    sentinel bin floor(n/2)+1 and is dropped by callers.
    """
    k = np.fft.fftfreq(n) * n  # 0, 1, ..., n/2-1, -n/2, ..., -1
    ky, kx = np.meshgrid(k, k, indexing="ij")
    r = np.rint(np.sqrt(kx * kx + ky * ky)).astype(np.int32)
    k_max = n // 2
    idx = np.where(r > k_max, np.int32(k_max + 1), r)
    idx = np.ascontiguousarray(idx, dtype=np.int32)
    counts = np.bincount(idx.ravel(), minlength=k_max + 2).astype(np.int64)
    idx.setflags(write=False)
    counts.setflags(write=False)
    return idx, counts


def _radial_mean(values: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Annulus means of an n x n grid for bins 0..floor(n/2) (bins, means, counts)."""
    n = values.shape[0]
    idx, counts = _radial_bins(n)
    k_max = n // 2
    sums = _backend.bin_sum(
        np.ascontiguousarray(values, dtype=np.float64), idx, k_max + 1
    )
    means = sums / counts[: k_max + 1]
    return np.arange(k_max + 1), means, counts[: k_max + 1].copy()


def radial_average(p: np.ndarray, jacobian: bool = False) -> RadialSpectrum:
    """Rotationally average a power grid into integer annuli 1..floor(N/2).

    With jacobian=True each annulus mean is additionally multiplied by its
    radius (the polar-coordinates area factor).
    """
    p = np.asarray(p, dtype=np.float64)
    _require_square(p)
    if p.min() < 0:
        raise ShapeError("power grid must be non-negative")
    bins, means, counts = _radial_mean(p)
    power = means[1:]
    if jacobian:
        power = power * bins[1:]
    return RadialSpectrum(
        bins=bins[1:].astype(np.int64),
        power=power,
        counts=counts[1:],
        jacobian_applied=jacobian,
    )


def _as_map_list(items: Iterable[np.ndarray]) -> list[np.ndarray]:
    maps = [np.asarray(x, dtype=np.float64) for x in items]
    if not maps:
        raise EmptyEnsembleError("ensemble is empty")
    _require_square(maps[0])
    for x in maps[1:]:
        if x.shape != maps[0].shape:
            raise ShapeError(
                f"mixed shapes in ensemble: {x.shape} vs {maps[0].shape}"
            )
    return maps


def ensemble_spectrum(
    items: Sequence[np.ndarray],
    jacobian: bool = False,
    subtract_mean: bool = False,
) -> RadialSpectrum:
    """Arithmetic mean of the items' radial power spectra, in item order.

    Accumulation order is fixed, so repeated runs are bit-identical.
    subtract_mean removes each item's own mean first; for bins >= 1 this
    only perturbs rounding (the mean lives entirely in the excluded DC term).
    """
    maps = _as_map_list(items)
    acc = None
    first = None
    for x in maps:
        if subtract_mean:
            x = x - x.mean()
        s = radial_average(power_grid(dft2(x)), jacobian=jacobian)
        if acc is None:
            acc = s.power.copy()
            first = s
        else:
            acc += s.power
    assert first is not None
    return RadialSpectrum(
        bins=first.bins,
        power=acc / len(maps),
        counts=first.counts,
        jacobian_applied=jacobian,
    )


# ---------------------------------------------------------------------------
# fitting


def fit_power_law(
    s: RadialSpectrum, k_min: int | None = None, k_max: int | None = None
) -> PowerLawFit:
    """OLS of log(power) on log(radius) over bins [k_min, k_max].

    Defaults to the high-frequency half [floor(top/2), top]. Bins with
    power <= 0 are dropped (counted in n_zero_bins); a range with no
    positive power raises DegenerateInputError, fewer than 3 usable points
    raises InsufficientDataError.
    """
    top = int(s.bins[-1])
    if k_max is None:
        k_max = top
    if k_min is None:
        k_min = max(1, k_max // 2)
    if not (1 <= k_min < k_max <= top):
        raise ValueError(
            f"fit range [{k_min}, {k_max}] invalid for bins 1..{top}"
        )

    sel = (s.bins >= k_min) & (s.bins <= k_max)
    r = s.bins[sel].astype(np.float64)
    p = s.power[sel]
    usable = p > 0
    n_zero = int(np.count_nonzero(~usable))
    if not np.any(usable):
        raise DegenerateInputError(
            f"no positive power in fit range [{k_min}, {k_max}]"
        )
    if np.count_nonzero(usable) < 3:
        raise InsufficientDataError(
            f"only {int(np.count_nonzero(usable))} usable points in "
            f"[{k_min}, {k_max}]; need at least 3"
        )

    x = np.log(r[usable])
    y = np.log(p[usable])
    xm = x.mean()
    ym = y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    sst = float(np.sum((y - ym) ** 2))
    if sst == 0.0:
        r2 = 1.0
    else:
        r2 = float(np.clip(1.0 - np.sum(resid**2) / sst, 0.0, 1.0))
    return PowerLawFit(
        alpha=slope,
        log_amplitude=intercept,
        r2=r2,
        k_min=int(k_min),
        k_max=int(k_max),
        n_zero_bins=n_zero,
    )


# ---------------------------------------------------------------------------
# spatial correlation


def autocorrelation(t: np.ndarray, subtract_mean: bool = True) -> RadialCorrelation:
    """Radially averaged periodic autocorrelation via the power spectrum.

    corr[r] is the annulus mean of (1/N^2) * sum_x f(x) f(x+d) over integer
    displacement radii 0..floor(N/2); corr[0] is the mean squared value.
    """
    t = np.asarray(t, dtype=np.float64)
    _require_square(t)
    n = t.shape[0]
    f = t - t.mean() if subtract_mean else t
    grid = np.fft.ifft2(power_grid(np.fft.fft2(f))).real / (n * n)
    radii, means, _counts = _radial_mean(grid)
    return RadialCorrelation(radii=radii.astype(np.int64), corr=means)


def ensemble_correlation(
    items: Sequence[np.ndarray], subtract_mean: bool = True
) -> RadialCorrelation:
    """Mean of the items' radial autocorrelations, accumulated in item order."""
    maps = _as_map_list(items)
    acc = None
    radii = None
    for x in maps:
        c = autocorrelation(x, subtract_mean=subtract_mean)
        if acc is None:
            acc = c.corr.copy()
            radii = c.radii
        else:
            acc += c.corr
    assert acc is not None and radii is not None
    return RadialCorrelation(radii=radii, corr=acc / len(maps))


def fit_correlation(
    c: RadialCorrelation,
    r_min: int,
    r_max: int,
    exponent_range: tuple[float, float] = (-4.0, 0.0),
    exponent_step: float = 0.01,
) -> CorrelationFit:
    """Fit corr(r) = c1 + c2 * r**e by grid search over e with linear LSQ per candidate.

    Keeps the (c1, c2, e) triple minimizing the sum of squared residuals.
    The default exponent grid [-4, 0] covers decaying correlations; pass an
    explicit range for growing ones.
    """
    if r_min < 1:
        raise ValueError(f"r_min must be >= 1, got {r_min}")
    if r_max <= r_min:
        raise ValueError(f"need r_min < r_max, got [{r_min}, {r_max}]")
    sel = (c.radii >= r_min) & (c.radii <= r_max)
    r = c.radii[sel].astype(np.float64)
    y = c.corr[sel]
    if r.size < 4:
        raise InsufficientDataError(
            f"only {r.size} points in [{r_min}, {r_max}]; need at least 4"
        )
    if float(np.var(y)) < 1e-12:
        raise DegenerateInputError("correlation is flat over the fit range")

    lo, hi = exponent_range
    if not lo < hi:
        raise ValueError(f"invalid exponent range [{lo}, {hi}]")
    n_steps = int(round((hi - lo) / exponent_step))
    best: tuple[float, float, float, float] | None = None
    ones = np.ones_like(r)
    for i in range(n_steps + 1):
        e = lo + i * exponent_step
        basis = r**e
        a = np.column_stack([ones, basis])
        coef, _res, _rank, _sv = np.linalg.lstsq(a, y, rcond=None)
        resid = y - a @ coef
        ssr = float(resid @ resid)
        if best is None or ssr < best[3]:
            best = (float(coef[0]), float(coef[1]), float(e), ssr)
    assert best is not None
    c1, c2, e, ssr = best
    return CorrelationFit(c1=c1, c2=c2, exponent=e, residual=max(ssr, 0.0))


# ---------------------------------------------------------------------------
# CSV round trip (header `k,power,count`, full float precision)


def write_spectrum_csv(s: RadialSpectrum, path: str | Path) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write("k,power,count\n")
        for k, p, n in zip(s.bins, s.power, s.counts):
            fh.write(f"{int(k)},{float(p)!r},{int(n)}\n")


def read_spectrum_csv(path: str | Path) -> RadialSpectrum:
    bins, power, counts = [], [], []
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["k", "power", "count"]:
            raise FormatError(f"{path}: expected header k,power,count, got {header}")
        for row in reader:
            if not row:
                continue
            if len(row) != 3:
                raise FormatError(f"{path}: malformed row {row}")
            try:
                bins.append(int(row[0]))
                power.append(float(row[1]))
                counts.append(int(row[2]))
            except ValueError as exc:
                raise FormatError(f"{path}: malformed row {row}") from exc
    if not bins:
        raise FormatError(f"{path}: no spectrum rows")
    return RadialSpectrum(
        bins=np.asarray(bins, dtype=np.int64),
        power=np.asarray(power, dtype=np.float64),
        counts=np.asarray(counts, dtype=np.int64),
    )
