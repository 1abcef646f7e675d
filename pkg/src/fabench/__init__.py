"""fabench: audio front-end analysis and cross-group fairness bench.

Library layout:

- scales: perceptual frequency warps, JND model, resolution-deficit table
- spectral: WAV loading, resampling, framing, power spectrograms
- filterbanks: triangular banks (mel/ERB/Bark), log compression, PCEN
- cqt: constant-Q transform front-end
- parametric: learnable Gabor/sinc banks with analytic gradients
- fairness: worst-group score, performance gap, disparate impact, bootstrap
- evalkit: balanced sampling, tone synthesis, ABX probes, bound integrator,
  overhead benchmark
- frontends: the seven named front-end configurations
- cli: the fabench command
"""

__version__ = "0.1.0"

from .scales import (
    FrequencyWarp,
    ResolutionRow,
    WarpKind,
    jnd,
    mel_resolution_derivative,
    resolution_table,
    warp_forward,
    warp_inverse,
)
from .spectral import AudioBuffer, FeatureMatrix, FrameSpec, WindowFn, load_audio, power_spectrogram
from .filterbanks import PcenParams, TriangularBank, apply_bank, build_triangular_bank, log_compress, pcen
from .cqt import CqtSpec, build_cqt_kernels, cqt_transform
from .parametric import (
    AllocationStat,
    GaborBank,
    SincBank,
    adapt_toy,
    allocation_fraction,
    gabor_param_grads,
    gabor_response,
    init_gabor_bank,
    init_sinc_bank,
    sinc_param_grads,
    sinc_response,
)
from .fairness import (
    FairnessReport,
    GroupResult,
    Task,
    bootstrap_report,
    disparate_impact,
    gap_reduction,
    performance_gap,
    worst_group_score,
)
from .evalkit import (
    BoundSpec,
    Manifest,
    ManifestEntry,
    ProbeResult,
    ToneTask,
    bound_integral,
    discrimination_probe,
    excess_bound_integral,
    make_tone_task,
    overhead_benchmark,
    sample_balanced,
    synth_tone_clip,
)
from .frontends import FrontendConfig, default_frontend

__all__ = [name for name in dir() if not name.startswith("_")]
