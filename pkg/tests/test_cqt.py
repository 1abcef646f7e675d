"""Constant-Q transform: kernel properties and the transform itself."""

import numpy as np
import pytest

from fabench.cqt import CqtSpec, build_cqt_kernels, cqt_transform
from fabench.errors import DomainError, EmptyInputError
from fabench.evalkit import synth_tone_clip
from fabench.spectral import AudioBuffer


def tone(freq, dur=0.7, rate=16000.0, amp=0.5):
    t = np.arange(int(dur * rate)) / rate
    return AudioBuffer(amp * np.sin(2 * np.pi * freq * t), rate)


class TestCqtSpec:
    def test_q_factor(self):
        # 1 / (2^(1/12) - 1), high-precision oracle value
        assert CqtSpec().q_factor == pytest.approx(16.8172, abs=1e-3)
        assert CqtSpec().q_factor == pytest.approx(16.817, abs=1e-3)

    def test_top_bin_frequency(self):
        # 32.70 * 2^(83/12) = 3950.68 Hz (mpmath oracle), below an 8 kHz Nyquist
        spec = CqtSpec()
        assert spec.top_frequency() == pytest.approx(3950.680, abs=0.01)
        assert spec.top_frequency() < 8000.0

    def test_octave_doubling(self):
        spec = CqtSpec()
        assert spec.bin_frequency(12) == pytest.approx(2 * spec.f_min, rel=1e-12)

    def test_nyquist_violation_rejected(self):
        with pytest.raises(DomainError):
            CqtSpec(f_min=200.0, n_bins=84)  # 200 * 2^(83/12) ~ 24 kHz


class TestKernels:
    def test_unit_norm_and_decreasing_lengths(self):
        kernel = build_cqt_kernels(CqtSpec())
        for k in kernel.kernels:
            assert np.linalg.norm(k) == pytest.approx(1.0, rel=1e-12)
        assert np.all(np.diff(kernel.lengths) <= 0)

    def test_lengths_formula(self):
        spec = CqtSpec()
        kernel = build_cqt_kernels(spec)
        q = spec.q_factor
        for k in (0, 40, 83):
            expected = int(np.ceil(q * spec.sample_rate / spec.bin_frequency(k)))
            assert kernel.lengths[k] == expected

    def test_constant_q_property(self):
        # measured -3 dB bandwidth of each kernel: f_k / BW_k stays within 1%
        # of a single constant (the midpoint of the per-bin ratios)
        spec = CqtSpec()
        kernel = build_cqt_kernels(spec)
        ratios = []
        for k in range(spec.n_bins):
            kk = kernel.kernels[k]
            nfft = 1 << int(np.ceil(np.log2(kk.size * 64)))
            mag = np.abs(np.fft.fft(kk, nfft))
            peak = int(mag.argmax())
            half = mag[peak] / np.sqrt(2.0)
            i = peak
            while mag[i] > half:
                i += 1
            hi = (i - 1 + (mag[i - 1] - half) / (mag[i - 1] - mag[i])) * spec.sample_rate / nfft
            j = peak
            while mag[j] > half:
                j -= 1
            lo = (j + (half - mag[j]) / (mag[j + 1] - mag[j])) * spec.sample_rate / nfft
            ratios.append(spec.bin_frequency(k) / (hi - lo))
        ratios = np.asarray(ratios)
        center = 0.5 * (ratios.min() + ratios.max())
        assert np.max(np.abs(ratios - center) / center) < 0.01


class TestTransform:
    def test_tone_at_bin_center_argmax(self):
        spec = CqtSpec()
        feats = cqt_transform(tone(spec.bin_frequency(36)), spec)
        interior = feats.values[8:-8]
        assert np.all(interior.argmax(axis=1) == 36)

    def test_octave_shift_covariance(self):
        spec = CqtSpec()
        a = cqt_transform(tone(spec.bin_frequency(30)), spec).values[10:-10]
        b = cqt_transform(tone(spec.bin_frequency(42)), spec).values[10:-10]
        assert np.all(b.argmax(axis=1) - a.argmax(axis=1) == 12)

    def test_quarter_tone_stays_adjacent(self):
        spec = CqtSpec()
        k = 40
        shifted = tone(spec.bin_frequency(k) * 2 ** (50.0 / 1200.0))
        feats = cqt_transform(shifted, spec).values[10:-10]
        assert np.all(np.isin(feats.argmax(axis=1), (k, k + 1)))

    def test_amplitude_linearity(self):
        spec = CqtSpec()
        f = spec.bin_frequency(36)
        a = cqt_transform(tone(f, amp=0.2), spec).values
        b = cqt_transform(tone(f, amp=0.4), spec).values
        np.testing.assert_allclose(b, 2.0 * a, rtol=1e-9, atol=1e-12)

    def test_silence(self):
        audio = AudioBuffer(np.zeros(16000), 16000.0)
        assert np.all(cqt_transform(audio, CqtSpec()).values == 0.0)

    def test_frame_grid_matches_spectrogram_frontends(self):
        feats = cqt_transform(tone(440.0, dur=1.0), CqtSpec())
        assert feats.values.shape == (98, 84)
        assert feats.channel_freqs[0] == pytest.approx(32.70)

    def test_too_short_rejected(self):
        with pytest.raises(EmptyInputError):
            cqt_transform(AudioBuffer(np.zeros(4000), 16000.0), CqtSpec())

    def test_rate_mismatch_rejected(self):
        with pytest.raises(DomainError):
            cqt_transform(AudioBuffer(np.zeros(16000), 8000.0), CqtSpec())

    def test_synth_clip_argmax(self):
        spec = CqtSpec()
        clip = synth_tone_clip([spec.bin_frequency(48)], 1, None, 0.7, seed=0)
        feats = cqt_transform(clip, spec)
        assert np.all(feats.values[10:-10].argmax(axis=1) == 48)
