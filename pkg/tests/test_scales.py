"""Frequency-warp math and the resolution-deficit table.

Expected values for the derived cases were computed with mpmath at 40
significant digits from the closed-form warp definitions; they are frozen
here so the tests do not depend on the implementation under test.
"""

import numpy as np
import pytest

from fabench.errors import DomainError
from fabench.scales import (
    FrequencyWarp,
    erb_bandwidth,
    jnd,
    mel_resolution_derivative,
    resolution_table,
    warp_forward,
    warp_inverse,
    warp_inverse_derivative,
)

ALL_WARPS = [
    FrequencyWarp.mel(),
    FrequencyWarp.erb_rate(),
    FrequencyWarp.bark(),
    FrequencyWarp.log2(),
]

MEL = FrequencyWarp.mel()

# mpmath oracle: 2595*log10(1 + f/700) at the seven table probes
MEL_TABLE_VALUES = {
    80: 121.956080145,
    100: 150.489102407,
    200: 283.229898158,
    250: 344.163341888,
    300: 401.970586163,
    400: 509.384604149,
    500: 607.445919657,
}
MEL_8000 = 2840.02304671  # mpmath oracle


class TestWarpForward:
    def test_mel_table_values(self):
        for f, expected in MEL_TABLE_VALUES.items():
            assert warp_forward(MEL, f) == pytest.approx(expected, abs=1e-6)

    def test_mel_published_row_300(self):
        # table row quotes 402.0 at one-decimal rounding
        assert warp_forward(MEL, 300.0) == pytest.approx(402.0, abs=0.1)

    def test_mel_zero(self):
        assert warp_forward(MEL, 0.0) == 0.0

    def test_mel_8000(self):
        assert warp_forward(MEL, 8000.0) == pytest.approx(MEL_8000, abs=0.1)

    def test_negative_frequency_rejected(self):
        for warp in ALL_WARPS:
            with pytest.raises(DomainError):
                warp_forward(warp, -1.0)

    def test_log2_zero_rejected(self):
        with pytest.raises(DomainError):
            warp_forward(FrequencyWarp.log2(), 0.0)

    def test_zero_maps_to_zero(self):
        for warp in ALL_WARPS[:3]:
            assert warp_forward(warp, 0.0) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("warp", ALL_WARPS, ids=lambda w: w.kind.value)
    def test_strictly_increasing(self, warp):
        rng = np.random.default_rng(123)
        f = rng.uniform(1.0, 8000.0, size=500)
        pairs = np.sort(f.reshape(250, 2), axis=1)
        lo = warp_forward(warp, pairs[:, 0])
        hi = warp_forward(warp, pairs[:, 1])
        keep = pairs[:, 1] > pairs[:, 0]
        assert np.all(hi[keep] > lo[keep])


class TestWarpInverse:
    def test_mel_inverse_of_table_value(self):
        # inverting the published 402.0 mel must land on (almost exactly) 300 Hz
        assert warp_inverse(MEL, 402.0) == pytest.approx(300.0, abs=0.05)

    def test_mel_inverse_zero(self):
        assert warp_inverse(MEL, 0.0) == 0.0

    def test_mel_inverse_2840(self):
        # bisection on the forward map gives 7999.822 Hz (mpmath oracle)
        assert warp_inverse(MEL, 2840.0) == pytest.approx(8000.0, abs=1.0)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            warp_inverse(MEL, -5.0)

    @pytest.mark.parametrize("warp", ALL_WARPS, ids=lambda w: w.kind.value)
    def test_roundtrip(self, warp):
        rng = np.random.default_rng(7)
        f = np.concatenate([[20.0, 8000.0], rng.uniform(20.0, 8000.0, 300)])
        back = warp_inverse(warp, warp_forward(warp, f))
        assert np.max(np.abs(back - f) / f) < 1e-9


class TestInverseDerivative:
    @pytest.mark.parametrize("warp", ALL_WARPS, ids=lambda w: w.kind.value)
    def test_matches_central_difference(self, warp):
        v = warp_forward(warp, np.geomspace(25.0, 7500.0, 40))
        h = 1e-5 * np.maximum(np.abs(v), 1.0)
        fd = (warp_inverse(warp, v + h) - warp_inverse(warp, v - h)) / (2 * h)
        an = warp_inverse_derivative(warp, v)
        assert np.max(np.abs(an - fd) / np.abs(fd)) < 1e-6


class TestMelResolutionDerivative:
    def test_constant_at_zero(self):
        assert mel_resolution_derivative(0.0) == pytest.approx(0.621, abs=1e-3)
        assert mel_resolution_derivative(0.0) == pytest.approx(0.6211, abs=5e-5)

    def test_one_decade(self):
        assert mel_resolution_derivative(2595.0) == pytest.approx(6.2112, abs=1e-3)

    def test_at_402_matches_inverse_derivative(self):
        # finite difference of the inverse map is the oracle: 0.88734 Hz/mel
        m = 402.0
        h = 1e-3
        fd = (warp_inverse(MEL, m + h) - warp_inverse(MEL, m - h)) / (2 * h)
        assert mel_resolution_derivative(m) == pytest.approx(fd, rel=1e-6)
        assert mel_resolution_derivative(m) == pytest.approx(0.887, abs=1e-3)

    def test_consistent_with_forward(self):
        f = np.geomspace(30.0, 7900.0, 25)
        m = warp_forward(MEL, f)
        h = 1e-4 * np.maximum(m, 1.0)
        fd = (warp_inverse(MEL, m + h) - warp_inverse(MEL, m - h)) / (2 * h)
        assert np.max(np.abs(mel_resolution_derivative(m) - fd) / fd) < 1e-6

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            mel_resolution_derivative(-1.0)


class TestJnd:
    @pytest.mark.parametrize(
        "f,expected", [(300.0, 3.0), (100.0, 1.0), (1000.0, 10.0), (80.0, 0.8)]
    )
    def test_one_percent(self, f, expected):
        assert jnd(f) == pytest.approx(expected, rel=1e-12)

    def test_nonpositive_rejected(self):
        with pytest.raises(DomainError):
            jnd(0.0)


class TestErbBandwidth:
    def test_reference_points(self):
        # 24.7 * (4.37 f / 1000 + 1): 132.6 Hz at 1 kHz
        assert erb_bandwidth(1000.0) == pytest.approx(24.7 * 5.37, rel=1e-12)
        assert erb_bandwidth(0.0) == pytest.approx(24.7, rel=1e-12)


class TestResolutionTable:
    PROBES = [80.0, 100.0, 200.0, 250.0, 300.0, 400.0, 500.0]
    PUBLISHED_BW = [51.6, 51.6, 58.6, 62.4, 66.4, 70.7, 80.2]
    PUBLISHED_DEFICIT = [65.0, 52.0, 29.0, 25.0, 22.0, 18.0, 16.0]

    def rows(self):
        return resolution_table(MEL, 40, 0.0, 8000.0, self.PROBES)

    def test_scale_values(self):
        for row in self.rows():
            assert row.scale_value == pytest.approx(
                MEL_TABLE_VALUES[int(row.freq_hz)], abs=1e-6
            )

    def test_bandwidths_near_published(self):
        for row, published in zip(self.rows(), self.PUBLISHED_BW):
            assert abs(row.bandwidth_hz - published) / published < 0.15

    def test_deficits_near_published(self):
        for row, published in zip(self.rows(), self.PUBLISHED_DEFICIT):
            assert abs(row.deficit_ratio - published) / published < 0.15

    def test_jnd_exact(self):
        for row in self.rows():
            assert row.jnd_hz == pytest.approx(0.01 * row.freq_hz, rel=1e-12)
            assert row.deficit_ratio == pytest.approx(
                row.bandwidth_hz / row.jnd_hz, rel=1e-12
            )

    def test_deficit_monotone_trend(self):
        rows = self.rows()
        assert rows[0].deficit_ratio > rows[-1].deficit_ratio

    def test_log2_constant_relative_bandwidth(self):
        rows = resolution_table(
            FrequencyWarp.log2(), 24, 50.0, 8000.0, [100.0, 300.0, 1000.0, 3000.0]
        )
        ratios = [r.bandwidth_hz / r.freq_hz for r in rows]
        assert np.max(np.abs(np.diff(ratios))) / ratios[0] < 1e-6

    def test_probe_outside_range_rejected(self):
        with pytest.raises(DomainError):
            resolution_table(MEL, 40, 0.0, 8000.0, [9000.0])
        with pytest.raises(DomainError):
            resolution_table(MEL, 40, 100.0, 8000.0, [50.0])
