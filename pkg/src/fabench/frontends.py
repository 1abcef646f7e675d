"""Named front-end configurations and a single extraction entry point.

The seven configurations: mel (40 filters), erb (32), bark (24), mel-pcen
(mel bank + PCEN), cqt (84 bins, 12 per octave), leaf (64 Gabor filters),
sincnet (64 sinc filters). Channel counts and the 25 ms / 10 ms framing are
fixed defaults; sample rate and individual fields can be overridden.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .scales import FrequencyWarp
from .spectral import AudioBuffer, FeatureMatrix, FrameSpec, power_spectrogram
from .filterbanks import (
    PcenParams,
    apply_bank,
    build_triangular_bank,
    log_compress,
    pcen,
)
from .cqt import CqtSpec, build_cqt_kernels, cqt_transform
from .parametric import (
    gabor_response,
    init_gabor_bank,
    init_sinc_bank,
    sinc_response,
)

__all__ = ["FRONTEND_NAMES", "FrontendConfig", "default_frontend", "frontend_channels"]

FRONTEND_NAMES = ("mel", "erb", "bark", "cqt", "leaf", "sincnet", "mel-pcen")

_BANK_SPECS = {
    "mel": (FrequencyWarp.mel, 40),
    "erb": (FrequencyWarp.erb_rate, 32),
    "bark": (FrequencyWarp.bark, 24),
    "mel-pcen": (FrequencyWarp.mel, 40),
}


@dataclass
class FrontendConfig:
    """A named front-end with its §-defaults resolved for one sample rate."""

    name: str
    sample_rate: float = 16000.0
    frame_spec: FrameSpec = field(default_factory=FrameSpec)
    n_filters: int | None = None  # bank size override for mel/erb/bark
    f_min: float = 0.0
    f_max: float | None = None  # default: Nyquist
    pcen_params: PcenParams = field(default_factory=PcenParams)
    cqt_spec: CqtSpec | None = None

    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.name not in FRONTEND_NAMES:
            raise ConfigError(
                f"unknown frontend {self.name!r}; expected one of {FRONTEND_NAMES}"
            )
        if self.name == "cqt" and self.cqt_spec is None:
            self.cqt_spec = CqtSpec(
                sample_rate=self.sample_rate,
                hop_ms=self.frame_spec.hop_ms,
                window_ms=self.frame_spec.window_ms,
            )

    @property
    def n_channels(self) -> int:
        if self.name in _BANK_SPECS:
            return self.n_filters or _BANK_SPECS[self.name][1]
        if self.name == "cqt":
            return self.cqt_spec.n_bins
        return 64  # leaf / sincnet

    def min_samples(self) -> int:
        """Shortest clip the front-end accepts (longest kernel or one window)."""
        win = self.frame_spec.window_samples(self.sample_rate)
        if self.name == "cqt":
            kernel = self._get_cqt_kernelset()
            return max(win, kernel.max_length)
        if self.name in ("leaf", "sincnet"):
            return win
        return win

    def _get_bank(self, fft_bins: int):
        key = ("bank", fft_bins)
        if key not in self._cache:
            warp_factory, default_n = _BANK_SPECS[self.name]
            f_max = self.f_max if self.f_max is not None else self.sample_rate / 2.0
            self._cache[key] = build_triangular_bank(
                warp_factory(),
                self.n_filters or default_n,
                self.f_min,
                f_max,
                fft_bins,
                self.sample_rate,
            )
        return self._cache[key]

    def _get_cqt_kernelset(self):
        if "cqt" not in self._cache:
            self._cache["cqt"] = build_cqt_kernels(self.cqt_spec)
        return self._cache["cqt"]

    def _get_parametric_bank(self):
        if "pbank" not in self._cache:
            if self.name == "leaf":
                self._cache["pbank"] = init_gabor_bank(sample_rate=self.sample_rate)
            else:
                self._cache["pbank"] = init_sinc_bank(sample_rate=self.sample_rate)
        return self._cache["pbank"]

    def extract(self, audio: AudioBuffer) -> FeatureMatrix:
        """Features for one clip; frames x n_channels."""
        if self.name in _BANK_SPECS:
            spec_power = power_spectrogram(audio, self.frame_spec)
            feats = apply_bank(self._get_bank(spec_power.n_channels), spec_power)
            if self.name == "mel-pcen":
                return pcen(feats, self.pcen_params)
            return log_compress(feats)
        if self.name == "cqt":
            return cqt_transform(audio, self.cqt_spec, self._get_cqt_kernelset())
        bank = self._get_parametric_bank()
        if self.name == "leaf":
            return gabor_response(bank, audio, self.frame_spec.hop_ms)
        return sinc_response(bank, audio, self.frame_spec.hop_ms)


def default_frontend(name: str, sample_rate: float = 16000.0) -> FrontendConfig:
    return FrontendConfig(name=name, sample_rate=sample_rate)


def frontend_channels(name: str) -> int:
    return default_frontend(name).n_channels
