"""The seven named front-end configurations."""

import numpy as np
import pytest

from fabench.errors import ConfigError
from fabench.evalkit import synth_tone_clip
from fabench.frontends import FRONTEND_NAMES, default_frontend

EXPECTED_CHANNELS = {
    "mel": 40,
    "erb": 32,
    "bark": 24,
    "cqt": 84,
    "leaf": 64,
    "sincnet": 64,
    "mel-pcen": 40,
}


class TestRegistry:
    def test_all_seven_present(self):
        assert set(FRONTEND_NAMES) == set(EXPECTED_CHANNELS)

    def test_unknown_name_rejected(self):
        with pytest.raises(ConfigError):
            default_frontend("plp")

    @pytest.mark.parametrize("name", FRONTEND_NAMES)
    def test_channel_counts(self, name):
        config = default_frontend(name)
        assert config.n_channels == EXPECTED_CHANNELS[name]

    @pytest.mark.parametrize("name", FRONTEND_NAMES)
    def test_extraction_shapes(self, name):
        config = default_frontend(name)
        clip = synth_tone_clip([220.0], 3, 20.0, 1.0, seed=0)
        feats = config.extract(clip)
        # 1 s at 16 kHz with 25 ms / 10 ms framing: 98 frames
        assert feats.values.shape == (98, EXPECTED_CHANNELS[name])
        assert np.all(np.isfinite(feats.values))
        assert feats.channel_freqs.size == EXPECTED_CHANNELS[name]

    @pytest.mark.parametrize("name", FRONTEND_NAMES)
    def test_deterministic(self, name):
        config = default_frontend(name)
        clip = synth_tone_clip([300.0], 3, 10.0, 1.0, seed=1)
        a = config.extract(clip).values
        b = config.extract(clip).values
        assert np.array_equal(a, b)

    def test_min_samples(self):
        assert default_frontend("mel").min_samples() == 400
        assert default_frontend("cqt").min_samples() == 8229  # longest kernel
