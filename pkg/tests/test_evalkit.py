"""Balanced sampling, tone synthesis, the bound integrator, and benchmarks.

The slow ABX probe behavior (front-end contrasts, monotonicity) lives in
test_acceptance.py; here the probe only runs in cheap configurations.
"""

import json

import numpy as np
import pytest

from fabench.errors import DataError, DomainError, EmptyInputError, QuotaError
from fabench.evalkit import (
    BoundSpec,
    GROUP_PRESETS,
    Manifest,
    ManifestEntry,
    bound_integral,
    discrimination_probe,
    excess_bound_integral,
    load_bound_csv,
    make_tone_task,
    overhead_benchmark,
    sample_balanced,
    synth_tone_clip,
    uniform_bound_preset,
)
from fabench.scales import FrequencyWarp, jnd, resolution_table
from fabench.spectral import FrameSpec, power_spectrogram


def synthetic_manifest(per_label=30, labels=("Mandarin", "English"), scenes=None):
    grouping = {
        "tonal": [l for l in labels if l in GROUP_PRESETS["tonal"]],
        "non_tonal": [l for l in labels if l in GROUP_PRESETS["non_tonal"]],
        "eu1": [l for l in labels if l in GROUP_PRESETS["europe_1"]],
        "eu2": [l for l in labels if l in GROUP_PRESETS["europe_2"]],
    }
    grouping = {k: v for k, v in grouping.items() if v}
    owner = {label: gid for gid, ls in grouping.items() for label in ls}
    entries = []
    for label in labels:
        for i in range(per_label):
            extra = {"scene": scenes[i % len(scenes)]} if scenes else {}
            entries.append(
                ManifestEntry(f"{label}/{i}.wav", owner[label], label, extra)
            )
    return Manifest(tuple(entries), grouping)


class TestManifest:
    def test_duplicate_paths_rejected(self):
        e = ManifestEntry("a.wav", "tonal", "Mandarin")
        with pytest.raises(DataError):
            Manifest((e, e), {"tonal": ["Mandarin"]})

    def test_label_must_map_to_group(self):
        e = ManifestEntry("a.wav", "tonal", "English")
        with pytest.raises(DataError):
            Manifest((e,), {"tonal": ["Mandarin"], "non_tonal": ["English"]})

    def test_label_in_two_groups_rejected(self):
        e = ManifestEntry("a.wav", "g1", "Mandarin")
        with pytest.raises(DataError):
            Manifest((e,), {"g1": ["Mandarin"], "g2": ["Mandarin"]})

    def test_json_roundtrip(self, tmp_path):
        m = synthetic_manifest()
        path = tmp_path / "m.json"
        m.save(str(path))
        back = Manifest.load(str(path))
        assert back.entries == m.entries
        assert back.grouping == m.grouping

    def test_group_presets_verbatim(self):
        assert GROUP_PRESETS["tonal"] == [
            "Mandarin", "Vietnamese", "Thai", "Punjabi", "Cantonese",
        ]
        assert GROUP_PRESETS["non_tonal"] == [
            "English", "Spanish", "German", "French", "Italian", "Dutch",
        ]
        assert GROUP_PRESETS["europe_1"] == [
            "Helsinki", "Stockholm", "Amsterdam", "London", "Prague",
        ]
        assert GROUP_PRESETS["europe_2"] == [
            "Barcelona", "Lisbon", "Paris", "Lyon", "Vienna",
        ]


class TestSampleBalanced:
    def test_exact_quota_per_label(self):
        labels = tuple(GROUP_PRESETS["tonal"]) + tuple(GROUP_PRESETS["non_tonal"])
        m = synthetic_manifest(per_label=30, labels=labels)
        out = sample_balanced(m, 20, seed=0)
        counts = {}
        for e in out.entries:
            counts[e.language_or_tradition] = counts.get(e.language_or_tradition, 0) + 1
        assert all(counts[l] == 20 for l in labels)
        assert len(counts) == 11

    def test_zero_quota(self):
        m = synthetic_manifest()
        assert sample_balanced(m, 0, seed=0).entries == ()

    def test_deterministic(self):
        m = synthetic_manifest(per_label=50)
        a = sample_balanced(m, 10, seed=7)
        b = sample_balanced(m, 10, seed=7)
        assert a.entries == b.entries
        c = sample_balanced(m, 10, seed=8)
        assert c.entries != a.entries

    def test_without_replacement(self):
        m = synthetic_manifest(per_label=25)
        out = sample_balanced(m, 25, seed=1)
        paths = [e.path for e in out.entries]
        assert len(set(paths)) == len(paths)

    def test_quota_error_names_group(self):
        m = synthetic_manifest(per_label=5)
        # labels are processed in sorted order, so English is reported first
        with pytest.raises(QuotaError, match="English"):
            sample_balanced(m, 10, seed=0)

    def test_scene_stratification(self):
        scenes = [f"scene{i}" for i in range(10)]
        m = synthetic_manifest(per_label=40, labels=("Helsinki", "Paris"), scenes=scenes)
        out = sample_balanced(m, 20, seed=0, stratify_key="scene")
        for label in ("Helsinki", "Paris"):
            per_scene = {}
            for e in out.entries:
                if e.language_or_tradition == label:
                    per_scene[e.extra["scene"]] = per_scene.get(e.extra["scene"], 0) + 1
            assert all(v == 2 for v in per_scene.values())
            assert len(per_scene) == 10

    def test_stratify_quota_not_divisible(self):
        scenes = ["a", "b", "c"]
        m = synthetic_manifest(per_label=30, labels=("Helsinki",), scenes=scenes)
        with pytest.raises(DataError):
            sample_balanced(m, 10, seed=0, stratify_key="scene")

    def test_metadata_preserved(self):
        scenes = ["park", "metro"]
        m = synthetic_manifest(per_label=10, labels=("London",), scenes=scenes)
        out = sample_balanced(m, 4, seed=0)
        assert all(e.extra.get("scene") in scenes for e in out.entries)


class TestSynthToneClip:
    def test_flat_tone_spectral_peaks(self):
        clip = synth_tone_clip([220.0], 3, None, 0.5, seed=0)
        feats = power_spectrogram(clip, FrameSpec(fft_size=4096))
        mean = feats.values.mean(axis=0)
        freqs = feats.channel_freqs
        for target in (220.0, 440.0, 660.0):
            window = (freqs > target - 30) & (freqs < target + 30)
            peak_f = freqs[window][mean[window].argmax()]
            assert abs(peak_f - target) < 6.0

    def test_zero_length_rejected(self):
        with pytest.raises(EmptyInputError):
            synth_tone_clip([], 3, 20.0, 0.3, seed=0)
        with pytest.raises(EmptyInputError):
            synth_tone_clip([220.0], 3, 20.0, 0.0, seed=0)

    def test_same_seed_identical(self):
        a = synth_tone_clip([300.0], 3, 10.0, 0.3, seed=5)
        b = synth_tone_clip([300.0], 3, 10.0, 0.3, seed=5)
        assert np.array_equal(a.samples, b.samples)

    def test_nyquist_guard(self):
        with pytest.raises(DomainError):
            synth_tone_clip([3000.0], 3, 20.0, 0.3, seed=0)  # 9 kHz > 8 kHz

    def test_peak_normalized(self):
        clip = synth_tone_clip([220.0], 3, 5.0, 0.3, seed=1)
        assert np.max(np.abs(clip.samples)) == pytest.approx(0.9)

    def test_onset_delay(self):
        clip = synth_tone_clip([220.0], 1, None, 0.4, seed=0, onset_s=0.1)
        assert np.all(clip.samples[:1600] == 0.0)
        assert np.any(clip.samples[1600:] != 0.0)

    def test_contour_tracking(self):
        contour = np.linspace(200.0, 400.0, 31)
        clip = synth_tone_clip(contour, 1, None, 0.3, seed=0)
        spec = power_spectrogram(clip, FrameSpec(fft_size=4096))
        first = spec.channel_freqs[spec.values[0].argmax()]
        last = spec.channel_freqs[spec.values[-1].argmax()]
        assert first < 260 and last > 340


class TestToneTask:
    def test_balanced_classes(self):
        task = make_tone_task(n_items=16, seed=0)
        assert np.bincount(task.labels).tolist() == [4, 4, 4, 4]
        assert task.n_classes == 4

    def test_deterministic(self):
        a = make_tone_task(n_items=8, seed=3)
        b = make_tone_task(n_items=8, seed=3)
        for ca, cb in zip(a.clips, b.clips):
            assert np.array_equal(ca.samples, cb.samples)


class TestDiscriminationProbe:
    def test_zero_cents_near_chance(self):
        r = discrimination_probe("mel", 0.0, [200.0, 500.0], 400, seed=0)
        assert abs(r.accuracy - 50.0) <= 5.0

    def test_octave_near_perfect(self):
        r = discrimination_probe("mel", 1200.0, [200.0, 500.0], 100, seed=0)
        assert r.accuracy >= 99.0

    def test_deterministic(self):
        a = discrimination_probe("mel", 50.0, [200.0, 500.0], 60, seed=9)
        b = discrimination_probe("mel", 50.0, [200.0, 500.0], 60, seed=9)
        assert a == b

    def test_min_pairs(self):
        with pytest.raises(DomainError):
            discrimination_probe("mel", 50.0, [200.0, 500.0], 10, seed=0)

    def test_unknown_frontend(self):
        from fabench.errors import ConfigError

        with pytest.raises(ConfigError):
            discrimination_probe("gammatone", 50.0, [200.0, 500.0], 60, seed=0)


class TestBoundIntegral:
    def grid_spec(self, res_factor=30.0):
        f = np.linspace(200.0, 500.0, 61)
        return BoundSpec(
            freq_hz=f,
            info=np.ones_like(f),
            density=np.full_like(f, 1.0 / 300.0),
            min_res=0.01 * f,
            res=res_factor * 0.01 * f,
        )

    def test_zero_when_resolution_sufficient(self):
        spec = self.grid_spec(res_factor=0.5)  # res below the JND requirement
        assert bound_integral(spec) == 0.0

    def test_indicator_fires_everywhere_for_mel_deficits(self):
        mel = FrequencyWarp.mel()
        rows = resolution_table(mel, 40, 0.0, 8000.0, np.linspace(210, 490, 29))
        f = np.array([r.freq_hz for r in rows])
        spec = BoundSpec(
            freq_hz=f,
            info=np.ones_like(f),
            density=np.full_like(f, 1.0 / (f[-1] - f[0])),
            min_res=np.array([jnd(x) for x in f]),
            res=np.array([r.bandwidth_hz for r in rows]),
        )
        assert np.all(spec.res > spec.min_res)
        assert bound_integral(spec) == pytest.approx(1.0, abs=1e-9)

    def test_matches_fine_riemann_sum(self):
        # smooth integrand; oracle = left Riemann sum on a 10x finer grid
        lo, hi = 200.0, 500.0
        info = lambda f: 1.0 + 0.5 * np.sin(f / 40.0)
        dens_unnorm = lambda f: 1.0 + (f - lo) / (hi - lo)
        f_norm = np.linspace(lo, hi, 4001)
        z = np.trapezoid(dens_unnorm(f_norm), f_norm)

        f = np.linspace(lo, hi, 301)
        spec = BoundSpec(f, info(f), dens_unnorm(f) / z, 0.01 * f, 0.30 * f)
        fine = np.linspace(lo, hi, 3001)
        width = (hi - lo) / 3000
        riemann = float(np.sum(info(fine[:-1]) * dens_unnorm(fine[:-1]) / z * width))
        assert bound_integral(spec) == pytest.approx(riemann, rel=1e-3)

    def test_excess_bound_monotone_in_resolution(self):
        a = excess_bound_integral(self.grid_spec(res_factor=10.0))
        b = excess_bound_integral(self.grid_spec(res_factor=20.0))
        assert b > a
        assert excess_bound_integral(self.grid_spec(res_factor=0.5)) == 0.0

    def test_excess_bound_scales_with_c(self):
        spec = self.grid_spec()
        assert excess_bound_integral(spec, c=2.0) == pytest.approx(
            2.0 * excess_bound_integral(spec, c=1.0)
        )

    def test_density_normalization_enforced(self):
        f = np.linspace(200.0, 500.0, 31)
        with pytest.raises(DomainError):
            BoundSpec(f, np.ones_like(f), np.ones_like(f), 0.01 * f, f)

    def test_descending_grid_rejected(self):
        f = np.linspace(500.0, 200.0, 31)
        with pytest.raises(DomainError):
            BoundSpec(f, np.ones_like(f), np.full_like(f, 1 / 300), 0.01 * f, f)

    def test_uniform_preset(self):
        spec = uniform_bound_preset(lambda f: 60.0)
        assert bound_integral(spec) == pytest.approx(1.0, abs=1e-9)

    def test_csv_loading(self, tmp_path):
        path = tmp_path / "bound.csv"
        f = np.linspace(200.0, 500.0, 31)
        lines = ["f_hz,info,density,min_res,res"]
        for x in f:
            lines.append(f"{x},1.0,{1.0 / 300.0},{0.01 * x},{0.3 * x}")
        path.write_text("\n".join(lines) + "\n")
        spec = load_bound_csv(str(path))
        assert spec.freq_hz.size == 31
        assert bound_integral(spec) == pytest.approx(1.0, abs=1e-6)


class TestOverheadBenchmark:
    def test_mel_self_ratio(self):
        audio = synth_tone_clip([220.0], 3, 20.0, 0.25, seed=0)
        ratios = overhead_benchmark(["mel"], audio, n_passes=120)
        assert ratios["mel"] == 1.0

    def test_bank_variants_close_to_mel(self):
        audio = synth_tone_clip([220.0], 3, 20.0, 0.5, seed=0)
        ratios = overhead_benchmark(["mel", "erb", "bark"], audio, n_passes=150)
        assert ratios["erb"] <= 1.05
        assert ratios["bark"] <= 1.05

    def test_min_passes(self):
        audio = synth_tone_clip([220.0], 3, 20.0, 0.25, seed=0)
        with pytest.raises(DomainError):
            overhead_benchmark(["mel"], audio, n_passes=10)
