"""Spectral comparison metrics for teacher/student feature maps.

Two metrics over reduced (common-channel-count) feature maps: an L1
distance in the frequency domain, and a cross-power-spectrum loss that
compares rotationally averaged spectra. Cross-entropy and the pixel-wise
distillation term are accepted as externally computed scalars only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveEpsilonError, ShapeError
from .spectrum import RadialSpectrum, _radial_mean, _require_square

__all__ = [
    "ReducedFeatureMap",
    "LossReport",
    "channel_reduce",
    "fourier_l1",
    "cross_power",
    "cps_loss",
    "total_loss",
]

CPS_VARIANTS = ("paper", "normalized")


@dataclass
class ReducedFeatureMap:
    """A stack of M square maps playing the teacher or student role."""

    data: np.ndarray  # (M, H, W), H == W
    role: str = "teacher"

    def __post_init__(self) -> None:
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 3:
            raise ShapeError(f"expected rank-3 (C,H,W), got rank {self.data.ndim}")
        if self.data.shape[0] < 1:
            raise ShapeError("need at least one channel")
        _require_square(self.data[0])
        if self.role not in ("teacher", "student"):
            raise ValueError(f"role must be teacher|student, got {self.role!r}")


@dataclass
class LossReport:
    """Weighted combination total = ce + alpha*overhaul + beta*l1 + gamma*cps."""

    l1_fourier: float
    cps: float
    ce: float | None
    overhaul: float | None
    total: float
    weights: dict
    variant: str | None = None
    epsilon: float | None = None

    def to_dict(self) -> dict:
        return {
            "l1_fourier": self.l1_fourier,
            "cps": self.cps,
            "ce": self.ce,
            "overhaul": self.overhaul,
            "total": self.total,
            "weights": dict(self.weights),
            "variant": self.variant,
            "epsilon": self.epsilon,
        }


def _as_stack(x) -> np.ndarray:
    if isinstance(x, ReducedFeatureMap):
        return x.data
    a = np.asarray(x, dtype=np.float64)
    if a.ndim == 2:
        a = a[None, :, :]
    if a.ndim != 3:
        raise ShapeError(f"expected rank-2 or rank-3 input, got rank {a.ndim}")
    _require_square(a[0])
    return a


def channel_reduce(t: np.ndarray, m: int, method: str = "mean-group",
                   role: str = "teacher") -> ReducedFeatureMap:
    """Reduce a (C,H,W) stack to M channels.

    mean-group: channel i is the mean of its contiguous C/M-channel group
    (M must divide C); first-M: the first M channels unchanged. A fixed
    stand-in for learned channel projections.
    """
    a = np.asarray(t, dtype=np.float64)
    if a.ndim != 3:
        raise ShapeError(f"expected rank-3 (C,H,W), got rank {a.ndim}")
    c = a.shape[0]
    if m < 1 or m > c:
        raise ShapeError(f"target channels {m} out of range 1..{c}")
    if method == "mean-group":
        if c % m != 0:
            raise ShapeError(f"mean-group needs M | C, got C={c}, M={m}")
        reduced = a.reshape(m, c // m, *a.shape[1:]).mean(axis=1)
    elif method == "first-M":
        reduced = a[:m].copy()
    else:
        raise ValueError(f"unknown reduction method {method!r}")
    return ReducedFeatureMap(data=reduced, role=role)


def fourier_l1(t, s) -> float:
    """Mean over channels of the summed magnitude of the transform difference.

    Symmetric, zero iff the inputs are equal, homogeneous of degree 1, and
    (unlike the radial losses) sensitive to one-sided translation.
    """
    a = _as_stack(t)
    b = _as_stack(s)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    total = 0.0
    for m in range(a.shape[0]):
        diff = np.fft.fft2(a[m]) - np.fft.fft2(b[m])
        total += float(np.abs(diff).sum())
    return total / a.shape[0]


def cross_power(x: np.ndarray, y: np.ndarray) -> RadialSpectrum:
    """Radial average of Re[conj(F(x)) * F(y)], DC excluded.

    cross_power(x, x) is the ordinary radial power spectrum (non-negative);
    for x != y the values are signed.
    """
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    _require_square(a)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    cp = (np.conj(np.fft.fft2(a)) * np.fft.fft2(b)).real
    bins, means, counts = _radial_mean(cp)
    return RadialSpectrum(
        bins=bins[1:].astype(np.int64),
        power=means[1:],
        counts=counts[1:],
        jacobian_applied=False,
    )


def cps_loss(t, s, variant: str = "normalized", epsilon: float = 1e-8) -> float:
    """Cross-power-spectrum loss, averaged over radial bins then channels.

    Per channel: mean over r of 1 - Pts(r)/den(r), where den is
    Ptt(r)*Pss(r) + eps for the "paper" variant and sqrt(Ptt(r)*Pss(r)) + eps
    for the "normalized" variant. Only the normalized form is zero at
    identity (and 2 at sign flip); the ratio-of-product form is kept verbatim
    for comparability despite its dimensional asymmetry.
    """
    if variant not in CPS_VARIANTS:
        raise ValueError(f"variant must be one of {CPS_VARIANTS}, got {variant!r}")
    if not epsilon > 0:
        raise NonPositiveEpsilonError(f"epsilon must be > 0, got {epsilon}")
    a = _as_stack(t)
    b = _as_stack(s)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    per_channel = []
    for m in range(a.shape[0]):
        pts = cross_power(a[m], b[m]).power
        ptt = cross_power(a[m], a[m]).power
        pss = cross_power(b[m], b[m]).power
        if variant == "paper":
            den = ptt * pss + epsilon
        else:
            den = np.sqrt(ptt * pss) + epsilon
        per_channel.append(float(np.mean(1.0 - pts / den)))
    return float(np.mean(per_channel))


def total_loss(
    l1: float,
    cps: float,
    ce: float | None = None,
    overhaul: float | None = None,
    alpha: float = 1e-4,
    beta: float = 1e-4,
    gamma: float = 0.01,
    variant: str | None = None,
    epsilon: float | None = None,
) -> LossReport:
    """Combine the metric terms with externally supplied scalars.

    Absent ce/overhaul contribute 0 (metric-only mode). Default weights are
    the CIFAR-100 recipe (alpha = beta = 1e-4, gamma = 0.01).
    """
    ce_term = 0.0 if ce is None else float(ce)
    overhaul_term = 0.0 if overhaul is None else float(overhaul)
    total = ce_term + alpha * overhaul_term + beta * float(l1) + gamma * float(cps)
    return LossReport(
        l1_fourier=float(l1),
        cps=float(cps),
        ce=None if ce is None else float(ce),
        overhaul=None if overhaul is None else float(overhaul),
        total=float(total),
        weights={"alpha": float(alpha), "beta": float(beta), "gamma": float(gamma)},
        variant=variant,
        epsilon=epsilon,
    )
