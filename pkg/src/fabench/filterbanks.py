"""Fixed psychoacoustic filterbanks and the compression stages applied on top.

Triangular banks are built on any FrequencyWarp: filter edges are equally
spaced in warp units, triangles are peak-normalized (height 1), and weights
are sampled at the FFT bin frequencies. Log compression and per-channel
energy normalization (PCEN) are the two supported compression stages; the
"mel+PCEN" front-end is the mel bank followed by PCEN instead of log.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError
from .scales import FrequencyWarp, warp_forward, warp_inverse
from .spectral import FeatureMatrix

__all__ = [
    "TriangularBank",
    "PcenParams",
    "build_triangular_bank",
    "apply_bank",
    "log_compress",
    "pcen",
    "LOG_FLOOR",
]

LOG_FLOOR = 1e-10


@dataclass(frozen=True)
class TriangularBank:
    """A bank of triangular band filters over FFT bins."""

    warp: FrequencyWarp
    n_filters: int
    f_min: float
    f_max: float
    weights: np.ndarray  # n_filters x fft_bins
    centers: np.ndarray  # Hz, strictly increasing


@dataclass(frozen=True)
class PcenParams:
    """PCEN constants; defaults follow the standard published settings."""

    smoother_coeff: float = 0.04
    alpha: float = 0.96
    delta: float = 2.0
    r: float = 0.5
    epsilon: float = 1e-6

    def __post_init__(self):
        if not (0 < self.smoother_coeff <= 1):
            raise DomainError("smoother_coeff must be in (0, 1]")
        if not (0 <= self.alpha <= 1):
            raise DomainError("alpha must be in [0, 1]")
        if self.delta < 0:
            raise DomainError("delta must be >= 0")
        if not (0 < self.r <= 1):
            raise DomainError("r must be in (0, 1]")
        if self.epsilon <= 0:
            raise DomainError("epsilon must be positive")


def build_triangular_bank(
    warp: FrequencyWarp,
    n_filters: int,
    f_min: float,
    f_max: float,
    fft_bins: int,
    sample_rate: float,
) -> TriangularBank:
    """Construct n_filters triangles with edges equally spaced in warp units.

    Edge points 0..n_filters+1 span [warp(f_min), warp(f_max)]; filter i is
    the unit-peak triangle over edges (i, i+1, i+2) sampled at the bin
    frequencies 0..sample_rate/2 (fft_bins points). Centers are the interior
    edge points mapped back to Hz.
    """
    nyquist = sample_rate / 2.0
    if n_filters < 1:
        raise DomainError("n_filters must be >= 1")
    if f_max > nyquist:
        raise DomainError(f"f_max {f_max} Hz above Nyquist {nyquist} Hz")
    if not (0 <= f_min < f_max):
        raise DomainError("need 0 <= f_min < f_max")
    if fft_bins < 2:
        raise DomainError("fft_bins must be >= 2")
    edges_scale = np.linspace(
        warp_forward(warp, f_min), warp_forward(warp, f_max), n_filters + 2
    )
    edges_hz = np.asarray(warp_inverse(warp, edges_scale), dtype=float)
    bin_freqs = np.linspace(0.0, nyquist, fft_bins)
    lo = edges_hz[:-2][:, None]
    mid = edges_hz[1:-1][:, None]
    hi = edges_hz[2:][:, None]
    up = (bin_freqs[None, :] - lo) / np.maximum(mid - lo, 1e-12)
    down = (hi - bin_freqs[None, :]) / np.maximum(hi - mid, 1e-12)
    weights = np.maximum(0.0, np.minimum(up, down))
    return TriangularBank(warp, n_filters, f_min, f_max, weights, edges_hz[1:-1])


def apply_bank(bank: TriangularBank, spec_power: FeatureMatrix) -> FeatureMatrix:
    """Pool a power spectrogram through the bank: out[t, i] = sum_k w[i,k] P[t,k]."""
    if spec_power.n_channels != bank.weights.shape[1]:
        raise ShapeError(
            f"spectrogram has {spec_power.n_channels} bins, "
            f"bank expects {bank.weights.shape[1]}"
        )
    values = spec_power.values @ bank.weights.T
    return FeatureMatrix(values, spec_power.frame_spec, bank.centers)


def log_compress(features: FeatureMatrix, floor: float = LOG_FLOOR) -> FeatureMatrix:
    """Natural log with a positive floor: out = ln(max(x, floor))."""
    if floor <= 0:
        raise DomainError("floor must be positive")
    if np.any(features.values < 0):
        raise DomainError("log_compress requires nonnegative features")
    values = np.log(np.maximum(features.values, floor))
    return FeatureMatrix(values, features.frame_spec, features.channel_freqs)


def pcen(features: FeatureMatrix, params: PcenParams = PcenParams()) -> FeatureMatrix:
    """Per-channel energy normalization.

    M[0] = E[0]; M[t] = (1 - s) M[t-1] + s E[t];
    out[t] = (E[t] / (eps + M[t])^alpha + delta)^r - delta^r.
    The smoother runs sequentially over frames, independently per channel.
    """
    E = features.values
    if np.any(E < 0):
        raise DomainError("pcen requires nonnegative features")
    s = params.smoother_coeff
    M = np.empty_like(E)
    if E.shape[0]:
        M[0] = E[0]
        for t in range(1, E.shape[0]):
            M[t] = (1.0 - s) * M[t - 1] + s * E[t]
    out = (
        E / np.power(params.epsilon + M, params.alpha) + params.delta
    ) ** params.r - params.delta ** params.r
    return FeatureMatrix(out, features.frame_spec, features.channel_freqs)
