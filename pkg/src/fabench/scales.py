"""Perceptual frequency scales and the filterbank resolution-deficit analysis.

Four warps are supported: mel (2595 / 700 constants), ERB-rate
(Glasberg & Moore), Bark (Zwicker-style two-arctan form), and plain log2.
Each warp provides a strictly increasing forward map Hz -> scale units, an
inverse, and the derivative of the inverse (Hz per scale unit), which is
what turns a filter-center spacing in scale units into a bandwidth in Hz.

All functions are pure and accept scalars or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError

__all__ = [
    "WarpKind",
    "FrequencyWarp",
    "ResolutionRow",
    "warp_forward",
    "warp_inverse",
    "warp_inverse_derivative",
    "mel_resolution_derivative",
    "erb_bandwidth",
    "jnd",
    "resolution_table",
]

# Mel constants
MEL_SCALE = 2595.0
MEL_BREAK = 700.0

# Glasberg & Moore ERB-rate constants
ERB_SCALE = 21.4
ERB_SLOPE = 4.37 / 1000.0

LN10 = math.log(10.0)


class WarpKind(str, Enum):
    MEL = "mel"
    ERB_RATE = "erb"
    BARK = "bark"
    LOG2 = "log2"


@dataclass(frozen=True)
class FrequencyWarp:
    """A monotone map between Hz and a perceptual scale.

    The constants are fixed per kind; they are stored so that serialized
    configurations are self-describing.
    """

    kind: WarpKind
    parameters: dict = field(default_factory=dict)

    @classmethod
    def mel(cls) -> "FrequencyWarp":
        return cls(WarpKind.MEL, {"scale": MEL_SCALE, "break_hz": MEL_BREAK})

    @classmethod
    def erb_rate(cls) -> "FrequencyWarp":
        return cls(WarpKind.ERB_RATE, {"scale": ERB_SCALE, "slope_per_hz": ERB_SLOPE})

    @classmethod
    def bark(cls) -> "FrequencyWarp":
        return cls(WarpKind.BARK, {})

    @classmethod
    def log2(cls) -> "FrequencyWarp":
        return cls(WarpKind.LOG2, {"ref_hz": 1.0})

    @classmethod
    def from_name(cls, name: str) -> "FrequencyWarp":
        try:
            kind = WarpKind(name)
        except ValueError:
            raise DomainError(f"unknown warp kind: {name!r}") from None
        return {
            WarpKind.MEL: cls.mel,
            WarpKind.ERB_RATE: cls.erb_rate,
            WarpKind.BARK: cls.bark,
            WarpKind.LOG2: cls.log2,
        }[kind]()


@dataclass(frozen=True)
class ResolutionRow:
    """One row of the resolution-deficit table.

    bandwidth_hz is the local center spacing of the bank at freq_hz and
    deficit_ratio = bandwidth_hz / jnd_hz.
    """

    freq_hz: float
    scale_value: float
    bandwidth_hz: float
    jnd_hz: float
    deficit_ratio: float


def _bark_forward(f):
    return 13.0 * np.arctan(0.00076 * f) + 3.5 * np.arctan((f / 7500.0) ** 2)


def _bark_forward_dhz(f):
    # derivative of the Zwicker form w.r.t. f, in Bark per Hz
    t1 = 13.0 * 0.00076 / (1.0 + (0.00076 * f) ** 2)
    t2 = 3.5 * (2.0 * f / 7500.0 ** 2) / (1.0 + (f / 7500.0) ** 4)
    return t1 + t2


def _bark_inverse_scalar(z: float) -> float:
    # No closed form; bracketed Newton with bisection fallback.
    if z == 0.0:
        return 0.0
    lo, hi = 0.0, 4.0e7
    if z >= _bark_forward(hi):
        raise DomainError(f"Bark value {z} is beyond the scale's range")
    f = 600.0 * math.sinh(z / 6.0)  # good low/mid-range seed
    f = min(max(f, lo), hi)
    for _ in range(100):
        err = _bark_forward(f) - z
        if err > 0:
            hi = f
        else:
            lo = f
        step = err / _bark_forward_dhz(f)
        f_new = f - step
        if not (lo < f_new < hi):
            f_new = 0.5 * (lo + hi)
        if abs(f_new - f) <= 1e-13 * max(f_new, 1.0):
            return f_new
        f = f_new
    return f


def warp_forward(warp: FrequencyWarp, f):
    """Map frequency in Hz to scale units. Strictly increasing in f."""
    f = np.asarray(f, dtype=float)
    if np.any(f < 0):
        raise DomainError("frequency must be nonnegative")
    if warp.kind == WarpKind.MEL:
        out = MEL_SCALE * np.log10(1.0 + f / MEL_BREAK)
    elif warp.kind == WarpKind.ERB_RATE:
        out = ERB_SCALE * np.log10(1.0 + ERB_SLOPE * f)
    elif warp.kind == WarpKind.BARK:
        out = _bark_forward(f)
    else:  # LOG2 is undefined at 0
        if np.any(f <= 0):
            raise DomainError("log2 warp requires f > 0")
        out = np.log2(f)
    return out if out.ndim else float(out)


def warp_inverse(warp: FrequencyWarp, v):
    """Map scale units back to Hz; inverse of warp_forward."""
    v = np.asarray(v, dtype=float)
    if warp.kind != WarpKind.LOG2 and np.any(v < 0):
        raise DomainError("scale value must be nonnegative")
    if warp.kind == WarpKind.MEL:
        out = MEL_BREAK * (np.power(10.0, v / MEL_SCALE) - 1.0)
    elif warp.kind == WarpKind.ERB_RATE:
        out = (np.power(10.0, v / ERB_SCALE) - 1.0) / ERB_SLOPE
    elif warp.kind == WarpKind.BARK:
        out = np.vectorize(_bark_inverse_scalar, otypes=[float])(v)
    else:
        out = np.exp2(v)
    return out if out.ndim else float(out)


def warp_inverse_derivative(warp: FrequencyWarp, v):
    """Derivative of warp_inverse in Hz per scale unit, evaluated at v."""
    v = np.asarray(v, dtype=float)
    if warp.kind == WarpKind.MEL:
        out = (MEL_BREAK * LN10 / MEL_SCALE) * np.power(10.0, v / MEL_SCALE)
    elif warp.kind == WarpKind.ERB_RATE:
        out = (LN10 / (ERB_SCALE * ERB_SLOPE)) * np.power(10.0, v / ERB_SCALE)
    elif warp.kind == WarpKind.BARK:
        f = warp_inverse(warp, v)
        out = 1.0 / _bark_forward_dhz(np.asarray(f, dtype=float))
    else:
        out = math.log(2.0) * np.exp2(v)
    return out if np.ndim(out) else float(out)


def mel_resolution_derivative(m):
    """Hz of frequency per mel at mel value m: (700 ln10 / 2595) * 10^(m/2595).

    The constant factor is 0.6211 Hz/mel, growing tenfold per 2595 mel.
    """
    m = np.asarray(m, dtype=float)
    if np.any(m < 0):
        raise DomainError("mel value must be nonnegative")
    out = (MEL_BREAK * LN10 / MEL_SCALE) * np.power(10.0, m / MEL_SCALE)
    return out if out.ndim else float(out)


def erb_bandwidth(f):
    """Equivalent rectangular bandwidth in Hz at frequency f (Glasberg & Moore)."""
    f = np.asarray(f, dtype=float)
    out = 24.7 * (ERB_SLOPE * f + 1.0)
    return out if out.ndim else float(out)


def jnd(f):
    """Just-noticeable frequency difference, modeled as 1% of frequency."""
    f = np.asarray(f, dtype=float)
    if np.any(f <= 0):
        raise DomainError("jnd is defined for f > 0")
    out = 0.01 * f
    return out if out.ndim else float(out)


def resolution_table(
    warp: FrequencyWarp,
    n_filters: int,
    f_min: float,
    f_max: float,
    probe_freqs,
) -> list[ResolutionRow]:
    """Resolution-deficit rows for a bank of n_filters between f_min and f_max.

    The local bandwidth at a probe frequency f is the bank's center spacing
    there: (d Hz / d scale at warp(f)) * delta, where delta is the scale-unit
    spacing of triangular-filter centers, (warp(f_max) - warp(f_min)) /
    (n_filters + 1). Deficit ratio is bandwidth / jnd.
    """
    if n_filters < 2:
        raise DomainError("n_filters must be >= 2")
    if not (0 <= f_min < f_max):
        raise DomainError("need 0 <= f_min < f_max")
    lo = warp_forward(warp, f_min)
    hi = warp_forward(warp, f_max)
    delta = (hi - lo) / (n_filters + 1)
    rows = []
    for f in probe_freqs:
        f = float(f)
        if not (f_min < f < f_max):
            raise DomainError(f"probe frequency {f} Hz outside ({f_min}, {f_max})")
        v = warp_forward(warp, f)
        bw = warp_inverse_derivative(warp, v) * delta
        j = jnd(f)
        rows.append(ResolutionRow(f, v, bw, j, bw / j))
    return rows
