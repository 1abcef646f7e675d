"""Audio ingestion, framing, windowing, and power spectra.

This is the shared substrate for the spectrogram-based front-ends: a minimal
RIFF/WAVE reader (PCM16 and IEEE float32 only), a 64-tap Kaiser-windowed sinc
resampler, and a power spectrogram whose per-frame bin sum equals the
windowed frame's energy (one-sided, energy-normalized scaling).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, EmptyInputError, FormatError, ShapeError

__all__ = [
    "AudioBuffer",
    "WindowFn",
    "FrameSpec",
    "FeatureMatrix",
    "load_audio",
    "resample",
    "frame_count",
    "power_spectrogram",
]

RESAMPLE_TAPS = 64
RESAMPLE_BETA = 8.0


@dataclass(frozen=True)
class AudioBuffer:
    """Mono audio samples in [-1, 1] at a fixed sample rate."""

    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if self.sample_rate <= 0:
            raise DomainError("sample_rate must be positive")
        if samples.ndim != 1:
            raise ShapeError("AudioBuffer samples must be 1-D")
        if samples.size and not np.all(np.isfinite(samples)):
            raise DomainError("AudioBuffer rejects NaN/Inf samples")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate


class WindowFn(str, Enum):
    HANN = "hann"
    HAMMING = "hamming"


@dataclass(frozen=True)
class FrameSpec:
    """Framing parameters: 25 ms windows with a 10 ms hop by default.

    fft_size, when left None, is resolved per sample rate to the smallest
    power of two holding one window.
    """

    window_ms: float = 25.0
    hop_ms: float = 10.0
    window_fn: WindowFn = WindowFn.HANN
    fft_size: int | None = None

    def __post_init__(self):
        if not (0 < self.hop_ms <= self.window_ms):
            raise DomainError("need 0 < hop_ms <= window_ms")
        if self.fft_size is not None and self.fft_size & (self.fft_size - 1):
            raise DomainError("fft_size must be a power of two")

    def window_samples(self, sample_rate: float) -> int:
        return int(round(self.window_ms * sample_rate / 1000.0))

    def hop_samples(self, sample_rate: float) -> int:
        return max(1, int(round(self.hop_ms * sample_rate / 1000.0)))

    def resolve_fft_size(self, sample_rate: float) -> int:
        win = self.window_samples(sample_rate)
        if self.fft_size is not None:
            if self.fft_size < win:
                raise DomainError("fft_size smaller than the window")
            return self.fft_size
        n = 1
        while n < win:
            n *= 2
        return n

    def to_dict(self) -> dict:
        return {
            "window_ms": self.window_ms,
            "hop_ms": self.hop_ms,
            "window_fn": self.window_fn.value,
            "fft_size": self.fft_size,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FrameSpec":
        return cls(
            window_ms=d["window_ms"],
            hop_ms=d["hop_ms"],
            window_fn=WindowFn(d["window_fn"]),
            fft_size=d.get("fft_size"),
        )


@dataclass
class FeatureMatrix:
    """frames x channels features plus frame metadata.

    channel_freqs carries the center frequency per channel, or an empty
    array when channels have no frequency interpretation.
    """

    values: np.ndarray
    frame_spec: FrameSpec
    channel_freqs: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.channel_freqs = np.asarray(self.channel_freqs, dtype=float)
        if self.values.ndim != 2:
            raise ShapeError("FeatureMatrix values must be 2-D (frames x channels)")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("FeatureMatrix rejects non-finite values")
        if self.channel_freqs.size and self.channel_freqs.size != self.values.shape[1]:
            raise ShapeError("channel_freqs length must match channel count")

    @property
    def n_frames(self) -> int:
        return self.values.shape[0]

    @property
    def n_channels(self) -> int:
        return self.values.shape[1]


# ---------------------------------------------------------------------------
# WAV reading

_FORMAT_NAMES = {
    0x0000: "UNKNOWN",
    0x0001: "PCM",
    0x0002: "ADPCM",
    0x0003: "IEEE_FLOAT",
    0x0006: "ALAW",
    0x0007: "MULAW",
    0x0055: "MP3",
    0xFFFE: "EXTENSIBLE",
}


def _read_wav(path: str) -> tuple[np.ndarray, int]:
    """Parse a RIFF/WAVE file, returning (channels x samples float array, rate).

    Only uncompressed PCM 16-bit and IEEE float32 payloads are accepted;
    anything else raises FormatError naming the codec found.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 12:
        raise FormatError(f"{path}: file too short to be a WAV")
    if data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise FormatError(
            f"{path}: expected RIFF/WAVE header, found chunk {data[:4]!r}"
        )
    pos = 12
    fmt = None
    payload = None
    while pos + 8 <= len(data):
        cid = data[pos : pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8 : pos + 8 + size]
        if cid == b"fmt ":
            if len(body) < 16:
                raise FormatError(f"{path}: truncated fmt chunk")
            tag, n_ch, rate, _, _, bits = struct.unpack_from("<HHIIHH", body, 0)
            if tag == 0xFFFE and len(body) >= 40:
                # extensible: the real codec sits in the subformat GUID
                (tag,) = struct.unpack_from("<H", body, 24)
            fmt = (tag, n_ch, rate, bits)
        elif cid == b"data":
            payload = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned
    if fmt is None:
        raise FormatError(f"{path}: no fmt chunk found")
    if payload is None:
        raise FormatError(f"{path}: no data chunk found")
    tag, n_ch, rate, bits = fmt
    if n_ch < 1:
        raise FormatError(f"{path}: fmt chunk declares zero channels")
    if tag == 0x0001 and bits == 16:
        raw = np.frombuffer(payload[: len(payload) // 2 * 2], dtype="<i2")
        samples = raw.astype(float) / 32768.0
    elif tag == 0x0003 and bits == 32:
        raw = np.frombuffer(payload[: len(payload) // 4 * 4], dtype="<f4")
        samples = raw.astype(float)
    else:
        name = _FORMAT_NAMES.get(tag, hex(tag))
        raise FormatError(
            f"{path}: unsupported WAV codec {name} ({bits}-bit); "
            "only PCM16 and IEEE float32 are readable"
        )
    n_frames = samples.size // n_ch
    return samples[: n_frames * n_ch].reshape(n_frames, n_ch).T, rate


def _kaiser_sinc_kernel(offsets: np.ndarray, cutoff: float) -> np.ndarray:
    """Windowed-sinc taps at fractional offsets (input-sample units)."""
    half = RESAMPLE_TAPS / 2.0
    x = offsets / half
    win = np.where(
        np.abs(x) <= 1.0,
        np.i0(RESAMPLE_BETA * np.sqrt(np.maximum(0.0, 1.0 - x * x)))
        / np.i0(RESAMPLE_BETA),
        0.0,
    )
    return 2.0 * cutoff * np.sinc(2.0 * cutoff * offsets) * win


def resample(audio: AudioBuffer, target_rate: float) -> AudioBuffer:
    """Resample by direct windowed-sinc interpolation (64 taps, Kaiser beta=8)."""
    if target_rate <= 0:
        raise DomainError("target_rate must be positive")
    if target_rate == audio.sample_rate:
        return audio
    x = audio.samples
    if x.size == 0:
        return AudioBuffer(x, target_rate)
    ratio = audio.sample_rate / target_rate
    n_out = int(round(x.size / ratio))
    # anti-alias at the narrower Nyquist (in cycles per input sample)
    cutoff = 0.5 * min(1.0, 1.0 / ratio)
    centers = np.arange(n_out) * ratio
    base = np.floor(centers).astype(int)
    taps = np.arange(-(RESAMPLE_TAPS // 2 - 1), RESAMPLE_TAPS // 2 + 1)
    idx = base[:, None] + taps[None, :]
    offsets = idx - centers[:, None]
    kernel = _kaiser_sinc_kernel(offsets, cutoff)
    padded = np.concatenate(
        [np.zeros(RESAMPLE_TAPS), x, np.zeros(RESAMPLE_TAPS)]
    )
    y = np.sum(padded[idx + RESAMPLE_TAPS] * kernel, axis=1)
    np.clip(y, -1.0, 1.0, out=y)
    return AudioBuffer(y, target_rate)


def load_audio(path: str, target_rate: float) -> AudioBuffer:
    """Load a WAV file as mono audio at target_rate.

    Channels are averaged; rate conversion uses the windowed-sinc resampler.
    """
    channels, rate = _read_wav(path)
    if channels.shape[1] == 0:
        raise EmptyInputError(f"{path}: audio payload is empty")
    mono = channels.mean(axis=0)
    if not np.all(np.isfinite(mono)):
        raise FormatError(f"{path}: float WAV contains NaN/Inf samples")
    np.clip(mono, -1.0, 1.0, out=mono)
    return resample(AudioBuffer(mono, rate), target_rate)


def frame_count(n_samples: int, win: int, hop: int) -> int:
    """Number of full frames: floor((n - win) / hop) + 1, or 0 if too short."""
    if n_samples < win:
        return 0
    return (n_samples - win) // hop + 1


def _window(kind: WindowFn, n: int) -> np.ndarray:
    if kind == WindowFn.HANN:
        return np.hanning(n)
    return np.hamming(n)


def frame_signal(x: np.ndarray, win: int, hop: int) -> np.ndarray:
    """Stack full frames of length win hopped by hop into a (frames, win) view."""
    n = frame_count(x.size, win, hop)
    if n == 0:
        return np.empty((0, win))
    strided = np.lib.stride_tricks.as_strided(
        x, shape=(n, win), strides=(x.strides[0] * hop, x.strides[0])
    )
    return strided


def power_spectrogram(audio: AudioBuffer, spec: FrameSpec) -> FeatureMatrix:
    """One-sided power spectrogram, frames x (fft_size/2 + 1) bins.

    Scaled so that each row sums to the windowed frame's energy
    (sum over bins of P[t, k] == sum over n of (frame * window)[n]^2).
    """
    sr = audio.sample_rate
    win = spec.window_samples(sr)
    hop = spec.hop_samples(sr)
    if len(audio) < win:
        raise EmptyInputError(
            f"audio ({len(audio)} samples) shorter than one {win}-sample window"
        )
    nfft = spec.resolve_fft_size(sr)
    frames = frame_signal(audio.samples, win, hop) * _window(spec.window_fn, win)
    spectrum = np.fft.rfft(frames, n=nfft, axis=1)
    power = (spectrum.real ** 2 + spectrum.imag ** 2) / nfft
    power[:, 1:-1] *= 2.0  # fold negative frequencies; DC and Nyquist are unique
    freqs = np.arange(nfft // 2 + 1) * (sr / nfft)
    return FeatureMatrix(power, spec, freqs)
