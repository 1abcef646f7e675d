"""Constant-Q transform front-end: geometrically spaced bins, fixed Q.

Kernels are Hann-windowed complex exponentials with per-bin lengths
N_k = ceil(Q * sample_rate / f_k), unit L2 norm. The transform takes direct
time-domain inner products on a frame grid shared with the spectrogram
front-ends (frames centered on the 25 ms / 10 ms grid, zero-padded at the
edges), so frame counts line up across front-ends for the same clip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptyInputError
from .spectral import AudioBuffer, FeatureMatrix, FrameSpec

__all__ = ["CqtSpec", "CqtKernel", "build_cqt_kernels", "cqt_transform"]

DEFAULT_F_MIN = 32.70  # musical C1; 7 octaves end below an 8 kHz Nyquist


@dataclass(frozen=True)
class CqtSpec:
    f_min: float = DEFAULT_F_MIN
    bins_per_octave: int = 12
    n_bins: int = 84
    sample_rate: float = 16000.0
    hop_ms: float = 10.0
    window_ms: float = 25.0  # frame-grid alignment with spectrogram front-ends

    def __post_init__(self):
        if self.f_min <= 0 or self.n_bins < 1 or self.bins_per_octave < 1:
            raise DomainError("invalid CQT configuration")
        if self.top_frequency() >= self.sample_rate / 2.0:
            raise DomainError(
                f"top CQT bin {self.top_frequency():.1f} Hz reaches Nyquist"
            )

    @property
    def q_factor(self) -> float:
        return 1.0 / (2.0 ** (1.0 / self.bins_per_octave) - 1.0)

    def bin_frequency(self, k: int) -> float:
        return self.f_min * 2.0 ** (k / self.bins_per_octave)

    def bin_frequencies(self) -> np.ndarray:
        return self.f_min * 2.0 ** (np.arange(self.n_bins) / self.bins_per_octave)

    def top_frequency(self) -> float:
        return self.bin_frequency(self.n_bins - 1)


@dataclass(frozen=True)
class CqtKernel:
    """Per-bin complex time-domain kernels; lengths decrease with bin index."""

    spec: CqtSpec
    kernels: tuple  # of complex ndarrays, unit L2 norm
    lengths: np.ndarray

    @property
    def max_length(self) -> int:
        return int(self.lengths[0])


def build_cqt_kernels(spec: CqtSpec) -> CqtKernel:
    """Hann-windowed complex exponentials at each bin center, L2-normalized."""
    q = spec.q_factor
    kernels = []
    lengths = []
    for k in range(spec.n_bins):
        f_k = spec.bin_frequency(k)
        n_k = int(math.ceil(q * spec.sample_rate / f_k))
        t = np.arange(n_k) - (n_k - 1) / 2.0
        window = np.hanning(n_k)
        kern = window * np.exp(2j * np.pi * f_k * t / spec.sample_rate)
        kern /= np.linalg.norm(kern)
        kernels.append(kern)
        lengths.append(n_k)
    return CqtKernel(spec, tuple(kernels), np.asarray(lengths))


def cqt_transform(
    audio: AudioBuffer, spec: CqtSpec, kernel: CqtKernel | None = None
) -> FeatureMatrix:
    """Magnitude CQT, frames x n_bins.

    out[t, k] = |<frame_t, kernel_k>| with frame_t centered on the shared
    hop grid; samples beyond the clip boundary count as zero. Passing a
    prebuilt kernel set skips reconstruction on repeated calls.
    """
    if audio.sample_rate != spec.sample_rate:
        raise DomainError(
            f"audio rate {audio.sample_rate} != CQT rate {spec.sample_rate}"
        )
    if kernel is None or kernel.spec != spec:
        kernel = build_cqt_kernels(spec)
    sr = spec.sample_rate
    hop = max(1, int(round(spec.hop_ms * sr / 1000.0)))
    win = int(round(spec.window_ms * sr / 1000.0))
    n = len(audio)
    if n < kernel.max_length:
        raise EmptyInputError(
            f"audio ({n} samples) shorter than the longest CQT kernel "
            f"({kernel.max_length} samples)"
        )
    n_frames = (n - win) // hop + 1
    if n_frames < 1:
        raise EmptyInputError("audio shorter than one frame")
    centers = np.arange(n_frames) * hop + win // 2
    pad = kernel.max_length  # generous zero margin on both sides
    x = np.concatenate([np.zeros(pad), audio.samples, np.zeros(pad)])
    out = np.empty((n_frames, spec.n_bins))
    stride = x.strides[0]
    for k in range(spec.n_bins):
        kern = kernel.kernels[k]
        n_k = kern.size
        first = int(centers[0]) + pad - n_k // 2
        frames = np.lib.stride_tricks.as_strided(
            x[first:], shape=(n_frames, n_k), strides=(stride * hop, stride)
        )
        # two real matvecs beat one complex one (no complex promotion of frames)
        re = frames @ kern.real
        im = frames @ kern.imag
        out[:, k] = np.sqrt(re * re + im * im)
    return FeatureMatrix(
        out,
        FrameSpec(window_ms=spec.window_ms, hop_ms=spec.hop_ms),
        spec.bin_frequencies(),
    )
