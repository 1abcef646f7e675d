"""Learnable front-ends: Gabor and sinc filterbanks with analytic gradients.

Both banks hold 64 band filters parameterized by center/width (Gabor) or
low-cut/bandwidth (sinc). Responses are computed by FFT convolution, pooled
onto the shared 25 ms / 10 ms frame grid, and log-compressed. Parameter
gradients are exact chain-rule derivatives through kernel construction,
L2 normalization, convolution, rectification, and pooling, and are checked
against finite differences in the test suite.

Adaptation runs plain gradient descent on unconstrained surrogates
(logit for center/0.5, log for width) so parameter constraints hold by
construction after any step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, NumericError, ShapeError
from .scales import FrequencyWarp, warp_forward, warp_inverse, warp_inverse_derivative
from .spectral import AudioBuffer, FeatureMatrix, FrameSpec
from .filterbanks import LOG_FLOOR

__all__ = [
    "GaborBank",
    "SincBank",
    "AllocationStat",
    "init_gabor_bank",
    "init_sinc_bank",
    "gabor_response",
    "gabor_param_grads",
    "sinc_response",
    "sinc_param_grads",
    "allocation_fraction",
    "gabor_gradient_step",
    "sinc_gradient_step",
    "adapt_toy",
]

DEFAULT_KERNEL_LEN = 401  # 25 ms at 16 kHz
DEFAULT_POOLING_WIDTH = 80.0  # samples; Gaussian lowpass sigma for Gabor pooling
INIT_F_LO = 60.0
CRITICAL_BAND = (80.0, 500.0)


@dataclass(frozen=True)
class GaborBank:
    """Complex Gabor filters: center eta in cycles/sample, width sigma in samples."""

    centers: np.ndarray  # normalized frequency, each in (0, 0.5)
    widths: np.ndarray  # sigma in samples, > 0
    sample_rate: float
    kernel_len: int = DEFAULT_KERNEL_LEN
    pooling_width: float = DEFAULT_POOLING_WIDTH

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=float)
        widths = np.asarray(self.widths, dtype=float)
        if centers.shape != widths.shape or centers.ndim != 1:
            raise ShapeError("centers and widths must be matching 1-D arrays")
        if np.any(centers <= 0) or np.any(centers >= 0.5):
            raise DomainError("Gabor centers must lie in (0, 0.5) cycles/sample")
        if np.any(widths <= 0):
            raise DomainError("Gabor widths must be positive")
        if self.kernel_len % 2 == 0:
            raise DomainError("kernel_len must be odd")
        if self.pooling_width <= 0:
            raise DomainError("pooling_width must be positive")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "widths", widths)

    @property
    def n_filters(self) -> int:
        return self.centers.size

    @property
    def center_freqs_hz(self) -> np.ndarray:
        return self.centers * self.sample_rate

    def to_json_dict(self) -> dict:
        return {
            "kind": "gabor",
            "sample_rate": self.sample_rate,
            "kernel_len": self.kernel_len,
            "pooling_width": self.pooling_width,
            "center_hz": [float(f) for f in self.center_freqs_hz],
            "sigma_samples": [float(s) for s in self.widths],
        }


@dataclass(frozen=True)
class SincBank:
    """Band-pass sinc filters parameterized by low cut and bandwidth in Hz."""

    low_cut_hz: np.ndarray
    bandwidth_hz: np.ndarray
    sample_rate: float
    kernel_len: int = DEFAULT_KERNEL_LEN

    def __post_init__(self):
        lo = np.asarray(self.low_cut_hz, dtype=float)
        bw = np.asarray(self.bandwidth_hz, dtype=float)
        if lo.shape != bw.shape or lo.ndim != 1:
            raise ShapeError("low_cut_hz and bandwidth_hz must be matching 1-D arrays")
        if self.kernel_len % 2 == 0:
            raise DomainError("kernel_len must be odd")
        object.__setattr__(self, "low_cut_hz", lo)
        object.__setattr__(self, "bandwidth_hz", bw)

    @property
    def n_filters(self) -> int:
        return self.low_cut_hz.size

    def effective_bands(self) -> tuple[np.ndarray, np.ndarray]:
        """Constraint map: (f1, f2) in Hz with 0 <= f1 < f2 <= Nyquist."""
        nyq = self.sample_rate / 2.0
        f1 = np.clip(np.abs(self.low_cut_hz), 0.0, nyq - 2.0)
        f2 = np.clip(f1 + np.abs(self.bandwidth_hz), f1 + 1.0, nyq)
        return f1, f2

    @property
    def center_freqs_hz(self) -> np.ndarray:
        f1, f2 = self.effective_bands()
        return 0.5 * (f1 + f2)

    def to_json_dict(self) -> dict:
        f1, f2 = self.effective_bands()
        return {
            "kind": "sinc",
            "sample_rate": self.sample_rate,
            "kernel_len": self.kernel_len,
            "low_cut_hz": [float(x) for x in f1],
            "bandwidth_hz": [float(x) for x in f2 - f1],
        }


@dataclass(frozen=True)
class AllocationStat:
    """Fraction of filter centers falling inside [band_lo, band_hi] Hz."""

    band_lo: float
    band_hi: float
    fraction: float
    n_in_band: int


def allocation_fraction(centers, band_lo: float, band_hi: float) -> AllocationStat:
    """Count centers inside the band, endpoints inclusive."""
    if band_lo >= band_hi:
        raise DomainError("band_lo must be below band_hi")
    centers = np.asarray(centers, dtype=float)
    n_in = int(np.count_nonzero((centers >= band_lo) & (centers <= band_hi)))
    frac = n_in / centers.size if centers.size else 0.0
    return AllocationStat(band_lo, band_hi, frac, n_in)


# ---------------------------------------------------------------------------
# Initialization: mel-spaced centers with mel-matched bandwidths

def _mel_init_grid(n_filters: int, sample_rate: float):
    """64 mel-spaced centers over [60 Hz, 0.95 Nyquist] and local bandwidths."""
    mel = FrequencyWarp.mel()
    lo = warp_forward(mel, INIT_F_LO)
    hi = warp_forward(mel, 0.95 * sample_rate / 2.0)
    points = np.linspace(lo, hi, n_filters)
    centers_hz = np.asarray(warp_inverse(mel, points), dtype=float)
    spacing = (hi - lo) / (n_filters - 1)
    bw_hz = np.asarray(warp_inverse_derivative(mel, points), dtype=float) * spacing
    return centers_hz, bw_hz


def init_gabor_bank(
    n_filters: int = 64,
    sample_rate: float = 16000.0,
    kernel_len: int = DEFAULT_KERNEL_LEN,
    pooling_width: float = DEFAULT_POOLING_WIDTH,
) -> GaborBank:
    """Mel-initialized Gabor bank.

    sigma is chosen so the Gaussian envelope's -3 dB power bandwidth equals
    the local mel bandwidth: bw_hz = sample_rate * sqrt(ln 2) / (pi * sigma).
    """
    centers_hz, bw_hz = _mel_init_grid(n_filters, sample_rate)
    sigma = sample_rate * math.sqrt(math.log(2.0)) / (np.pi * bw_hz)
    return GaborBank(
        centers_hz / sample_rate, sigma, sample_rate, kernel_len, pooling_width
    )


def init_sinc_bank(
    n_filters: int = 64,
    sample_rate: float = 16000.0,
    kernel_len: int = DEFAULT_KERNEL_LEN,
) -> SincBank:
    """Mel-initialized sinc bank with the same centers and bandwidths."""
    centers_hz, bw_hz = _mel_init_grid(n_filters, sample_rate)
    low = np.maximum(0.0, centers_hz - bw_hz / 2.0)
    return SincBank(low, bw_hz, sample_rate, kernel_len)


# ---------------------------------------------------------------------------
# Shared convolution/pooling machinery

def _next_pow2(n: int) -> int:
    m = 1
    while m < n:
        m *= 2
    return m


def _offsets(kernel_len: int) -> np.ndarray:
    half = (kernel_len - 1) // 2
    return np.arange(kernel_len) - half


def _kernel_spectra(owner, kernels: np.ndarray, nfft: int) -> np.ndarray:
    """FFT of reversed kernels, cached on the owning bank (kernels are fixed
    across the many convolutions a probe or training batch performs)."""
    cache = getattr(owner, "_kernel_fft_cache", None)
    if cache is None:
        cache = {}
        object.__setattr__(owner, "_kernel_fft_cache", cache)
    if nfft not in cache:
        cache[nfft] = np.fft.fft(kernels[:, ::-1], nfft, axis=1)
    return cache[nfft]


def _conv_center(x: np.ndarray, kernels: np.ndarray, owner=None) -> np.ndarray:
    """y[j, m] = sum_n x[m + t_n] * k[j, n], zero-padded, for m in [0, len(x))."""
    n = x.size
    length = kernels.shape[1]
    half = (length - 1) // 2
    nfft = _next_pow2(n + length - 1)
    xf = np.fft.fft(x, nfft)
    if owner is not None:
        kf = _kernel_spectra(owner, kernels, nfft)
    else:
        kf = np.fft.fft(kernels[:, ::-1], nfft, axis=1)
    full = np.fft.ifft(xf[None, :] * kf, axis=1)
    y = full[:, half : half + n]
    if not np.iscomplexobj(kernels):
        y = y.real
    return y


def _corr_at_kernel_lags(x: np.ndarray, b: np.ndarray, kernel_len: int) -> np.ndarray:
    """d[j, n] = sum_m b[j, m] * x[m + t_n] for the kernel's offsets t_n."""
    n = x.size
    half = (kernel_len - 1) // 2
    nfft = _next_pow2(2 * n)
    xf = np.fft.fft(x, nfft)
    bf = np.fft.fft(b[:, ::-1], nfft, axis=1)
    full = np.fft.ifft(xf[None, :] * bf, axis=1)
    # full conv of (x, reversed b) evaluated at len(b) - 1 + t_n
    return full[:, n - 1 - half : n + half]


def _frame_grid(n_samples: int, sample_rate: float, hop_ms: float):
    spec = FrameSpec(window_ms=25.0, hop_ms=hop_ms)
    win = spec.window_samples(sample_rate)
    hop = spec.hop_samples(sample_rate)
    n_frames = (n_samples - win) // hop + 1 if n_samples >= win else 0
    centers = np.arange(n_frames) * hop + win // 2
    return spec, win, centers


def _pool(energy: np.ndarray, centers: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """pooled[t, j] = sum_u w[u] * energy[j, c_t + u], zeros beyond the edges."""
    n = energy.shape[1]
    u_half = (weights.size - 1) // 2
    padded = np.concatenate(
        [np.zeros((energy.shape[0], u_half)), energy, np.zeros((energy.shape[0], u_half))],
        axis=1,
    )
    out = np.empty((centers.size, energy.shape[0]))
    for t, c in enumerate(centers):
        seg = padded[:, c : c + weights.size]
        out[t] = seg @ weights
    return out


def _pool_backward(
    grad_pooled: np.ndarray, centers: np.ndarray, weights: np.ndarray, n: int
) -> np.ndarray:
    """Adjoint of _pool: scatter frame gradients back onto sample positions."""
    u_half = (weights.size - 1) // 2
    acc = np.zeros((grad_pooled.shape[1], n + 2 * u_half))
    for t, c in enumerate(centers):
        acc[:, c : c + weights.size] += grad_pooled[t][:, None] * weights[None, :]
    return acc[:, u_half : u_half + n]


def _gaussian_pool_weights(sigma: float) -> np.ndarray:
    half = int(math.ceil(3.0 * sigma))
    u = np.arange(-half, half + 1)
    w = np.exp(-0.5 * (u / sigma) ** 2)
    return w / w.sum()


# ---------------------------------------------------------------------------
# Gabor forward / backward

def _gabor_kernels(bank: GaborBank):
    t = _offsets(bank.kernel_len)[None, :]
    eta = bank.centers[:, None]
    sigma = bank.widths[:, None]
    envelope = np.exp(-(t ** 2) / (2.0 * sigma ** 2))
    raw = envelope * np.exp(2j * np.pi * eta * t)
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    return raw / norms, t


def _gabor_forward(bank: GaborBank, x: np.ndarray, sample_rate: float, hop_ms: float):
    kernels, t = _gabor_kernels(bank)
    y = _conv_center(x, kernels, owner=bank)
    energy = y.real ** 2 + y.imag ** 2
    spec, win, centers = _frame_grid(x.size, sample_rate, hop_ms)
    if centers.size == 0:
        raise DomainError("audio shorter than one 25 ms frame")
    weights = _gaussian_pool_weights(bank.pooling_width)
    pooled = _pool(energy, centers, weights)
    features = np.log(np.maximum(pooled, LOG_FLOOR))
    return {
        "kernels": kernels,
        "t": t,
        "y": y,
        "pooled": pooled,
        "features": features,
        "spec": spec,
        "centers": centers,
        "weights": weights,
    }


def gabor_response(
    bank: GaborBank, audio: AudioBuffer, hop_ms: float = 10.0
) -> FeatureMatrix:
    """Log-compressed, Gaussian-pooled squared modulus of the Gabor filtering."""
    state = _gabor_forward(bank, audio.samples, audio.sample_rate, hop_ms)
    return FeatureMatrix(state["features"], state["spec"], bank.center_freqs_hz)


def _gabor_backward(bank: GaborBank, x: np.ndarray, state: dict, loss_grad: np.ndarray):
    pooled = state["pooled"]
    grad_pooled = np.where(pooled > LOG_FLOOR, loss_grad / np.maximum(pooled, LOG_FLOOR), 0.0)
    a = _pool_backward(grad_pooled, state["centers"], state["weights"], x.size)
    b = 2.0 * a * state["y"]  # dL/dy as a complex array (re, im packed)
    d = _corr_at_kernel_lags(x, b, bank.kernel_len)  # dL/dk per tap, complex
    k = state["kernels"]
    t = state["t"]
    sigma = bank.widths[:, None]
    cross = np.conj(k) * d
    grad_eta = 2.0 * np.pi * np.sum(t * cross.imag, axis=1)
    # normalization-aware width gradient: dk/dsigma = k * (t^2/s^3 - sum |k|^2 t^2/s^3)
    phi = t ** 2 / sigma ** 3
    phi = phi - np.sum(np.abs(k) ** 2 * phi, axis=1, keepdims=True)
    grad_sigma = np.sum(phi * cross.real, axis=1)
    return grad_eta, grad_sigma


def gabor_param_grads(
    bank: GaborBank,
    audio: AudioBuffer,
    loss_grad,
    hop_ms: float = 10.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Analytic (dLoss/d eta, dLoss/d sigma) per filter.

    loss_grad holds dLoss/dfeature for the output of gabor_response with the
    same hop; shapes must match.
    """
    g = loss_grad.values if isinstance(loss_grad, FeatureMatrix) else np.asarray(loss_grad, float)
    state = _gabor_forward(bank, audio.samples, audio.sample_rate, hop_ms)
    if g.shape != state["features"].shape:
        raise ShapeError(
            f"loss_grad shape {g.shape} != response shape {state['features'].shape}"
        )
    return _gabor_backward(bank, audio.samples, state, g)


# ---------------------------------------------------------------------------
# Sinc forward / backward

def _sinc_kernels(bank: SincBank):
    t = _offsets(bank.kernel_len)[None, :]
    f1, f2 = bank.effective_bands()
    nu1 = (f1 / bank.sample_rate)[:, None]
    nu2 = (f2 / bank.sample_rate)[:, None]
    window = np.hamming(bank.kernel_len)[None, :]
    raw = (2.0 * nu2 * np.sinc(2.0 * nu2 * t) - 2.0 * nu1 * np.sinc(2.0 * nu1 * t)) * window
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    return raw / norms, norms[:, 0], t, window, nu1, nu2


def _sinc_forward(bank: SincBank, x: np.ndarray, sample_rate: float, hop_ms: float):
    kernels, norms, t, window, nu1, nu2 = _sinc_kernels(bank)
    y = _conv_center(x, kernels, owner=bank)
    mag = np.abs(y)
    spec, win, centers = _frame_grid(x.size, sample_rate, hop_ms)
    if centers.size == 0:
        raise DomainError("audio shorter than one 25 ms frame")
    weights = np.full(win, 1.0 / win)
    pooled = _pool(mag, centers, weights)
    features = np.log(np.maximum(pooled, LOG_FLOOR))
    return {
        "kernels": kernels,
        "norms": norms,
        "t": t,
        "window": window,
        "nu1": nu1,
        "nu2": nu2,
        "y": y,
        "pooled": pooled,
        "features": features,
        "spec": spec,
        "centers": centers,
        "weights": weights,
    }


def sinc_response(
    bank: SincBank, audio: AudioBuffer, hop_ms: float = 10.0
) -> FeatureMatrix:
    """Log-compressed, average-pooled magnitude of the sinc band filtering."""
    state = _sinc_forward(bank, audio.samples, audio.sample_rate, hop_ms)
    return FeatureMatrix(state["features"], state["spec"], bank.center_freqs_hz)


def _sinc_backward(bank: SincBank, x: np.ndarray, state: dict, loss_grad: np.ndarray):
    pooled = state["pooled"]
    grad_pooled = np.where(pooled > LOG_FLOOR, loss_grad / np.maximum(pooled, LOG_FLOOR), 0.0)
    a = _pool_backward(grad_pooled, state["centers"], state["weights"], x.size)
    b = a * np.sign(state["y"])
    d = _corr_at_kernel_lags(x, b, bank.kernel_len).real  # dL/dk per tap
    k = state["kernels"]
    t = state["t"]
    window = state["window"]
    norms = state["norms"][:, None]
    # through normalization: dL/dh = (d - k * sum(k * d)) / ||h||
    dh = (d - k * np.sum(k * d, axis=1, keepdims=True)) / norms
    dcos2 = 2.0 * np.cos(2.0 * np.pi * state["nu2"] * t) * window
    dcos1 = 2.0 * np.cos(2.0 * np.pi * state["nu1"] * t) * window
    # raw kernel derivative w.r.t. normalized nu1 is -dcos1; w.r.t. nu2 is +dcos2
    grad_nu1 = np.sum(dh * (-dcos1), axis=1)
    grad_nu2 = np.sum(dh * dcos2, axis=1)
    # bank parameters in Hz: nu1 = f1/fs, nu2 = (f1 + bw)/fs
    grad_low = (grad_nu1 + grad_nu2) / bank.sample_rate
    grad_bw = grad_nu2 / bank.sample_rate
    return grad_low, grad_bw


def sinc_param_grads(
    bank: SincBank,
    audio: AudioBuffer,
    loss_grad,
    hop_ms: float = 10.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Analytic (dLoss/d low_cut_hz, dLoss/d bandwidth_hz) per filter.

    Gradients are taken at the effective (constraint-mapped) band edges, so
    they are meaningful whenever the raw parameters sit inside the feasible
    region (the constraint map is the identity there).
    """
    g = loss_grad.values if isinstance(loss_grad, FeatureMatrix) else np.asarray(loss_grad, float)
    state = _sinc_forward(bank, audio.samples, audio.sample_rate, hop_ms)
    if g.shape != state["features"].shape:
        raise ShapeError(
            f"loss_grad shape {g.shape} != response shape {state['features'].shape}"
        )
    return _sinc_backward(bank, audio.samples, state, g)


# ---------------------------------------------------------------------------
# Constrained gradient steps on surrogate parameters

def _logit(p: np.ndarray) -> np.ndarray:
    return np.log(p) - np.log1p(-p)


# surrogate clamps: keep exp/sigmoid away from float under/overflow so even
# adversarial gradient magnitudes cannot push parameters onto the boundary
ETA_MARGIN = 1e-9
SIGMA_RANGE = (1e-3, 1e7)
BW_RANGE = (1e-3, 1e7)


def gabor_gradient_step(bank: GaborBank, grad_eta, grad_sigma, learn_rate: float) -> GaborBank:
    """One descent step on (logit(2 eta), log sigma); constraints hold by construction."""
    if learn_rate == 0.0:
        return bank
    u = _logit(2.0 * bank.centers)
    v = np.log(bank.widths)
    du = np.asarray(grad_eta) * bank.centers * (1.0 - 2.0 * bank.centers)  # deta/du
    dv = np.asarray(grad_sigma) * bank.widths
    u = u - learn_rate * du
    v = v - learn_rate * dv
    eta = np.clip(0.5 / (1.0 + np.exp(-u)), ETA_MARGIN, 0.5 - ETA_MARGIN)
    sigma = np.clip(np.exp(v), *SIGMA_RANGE)
    return replace(bank, centers=eta, widths=sigma)


def sinc_gradient_step(bank: SincBank, grad_low, grad_bw, learn_rate: float) -> SincBank:
    """One descent step on (low cut via abs-reparameterization, log bandwidth)."""
    if learn_rate == 0.0:
        return bank
    f1, f2 = bank.effective_bands()
    bw = f2 - f1
    low = f1 - learn_rate * np.asarray(grad_low)
    v = np.log(bw) - learn_rate * np.asarray(grad_bw) * bw
    return replace(bank, low_cut_hz=np.abs(low), bandwidth_hz=np.clip(np.exp(v), *BW_RANGE))


# ---------------------------------------------------------------------------
# Toy adaptation: gradient descent against a synthetic tone task

LR_DECAY_STEPS = 150.0  # 1/(1 + t/tau) schedule; late steps anneal diffusion


def adapt_toy(
    bank: GaborBank,
    task,
    steps: int,
    learn_rate: float,
    batch_size: int = 8,
    hop_ms: float = 10.0,
) -> tuple[GaborBank, list[AllocationStat]]:
    """Adapt Gabor centers/widths on a tone-classification task.

    task provides clips (AudioBuffer list), integer labels, n_classes, and a
    seed; the linear readout is drawn once from that seed and frozen, so only
    the bank parameters learn. Minibatch gradient descent with a 1/(1 + t/tau)
    learning-rate decay (constant steps keep random-walking once the loss has
    flattened; the decay freezes the migrated configuration). Returns the
    adapted bank and the allocation fraction in the 80-500 Hz band at
    initialization and after every step.
    """
    if steps < 0:
        raise DomainError("steps must be >= 0")
    lo, hi = CRITICAL_BAND
    trajectory = [allocation_fraction(bank.center_freqs_hz, lo, hi)]
    if steps == 0 or learn_rate == 0.0:
        trajectory.extend(
            allocation_fraction(bank.center_freqs_hz, lo, hi) for _ in range(steps)
        )
        return bank, trajectory

    clips = list(task.clips)
    labels = np.asarray(task.labels, dtype=int)
    n_classes = int(task.n_classes)
    if len(clips) == 0:
        raise DomainError("task has no clips")
    sample_rate = clips[0].sample_rate

    # probe one clip for feature dimensionality and scale, then freeze the
    # readout with unit-variance initial logits (keeps softmax unsaturated)
    probe = _gabor_forward(bank, clips[0].samples, sample_rate, hop_ms)
    feat_dim = probe["features"].size
    feat_rms = float(np.sqrt(np.mean(probe["features"] ** 2)))
    rng = np.random.default_rng(np.random.SeedSequence([int(task.seed), 0x52454144]))
    readout = rng.standard_normal((n_classes, feat_dim)) / (
        math.sqrt(feat_dim) * max(feat_rms, 1e-12)
    )

    order = np.arange(len(clips))
    pos = 0
    for step in range(steps):
        g_eta = np.zeros(bank.n_filters)
        g_sigma = np.zeros(bank.n_filters)
        loss_sum = 0.0
        for _ in range(min(batch_size, len(clips))):
            i = int(order[pos])
            pos = (pos + 1) % len(clips)
            x = clips[i].samples
            state = _gabor_forward(bank, x, sample_rate, hop_ms)
            feats = state["features"]
            logits = readout @ feats.reshape(-1)
            logits -= logits.max()
            expl = np.exp(logits)
            prob = expl / expl.sum()
            loss_sum += -math.log(max(prob[labels[i]], 1e-300))
            dlogits = prob.copy()
            dlogits[labels[i]] -= 1.0
            loss_grad = (dlogits @ readout).reshape(feats.shape)
            ge, gs = _gabor_backward(bank, x, state, loss_grad)
            g_eta += ge
            g_sigma += gs
        if not np.isfinite(loss_sum):
            raise NumericError(f"non-finite loss at step {step}")
        n_batch = min(batch_size, len(clips))
        lr_t = learn_rate / (1.0 + step / LR_DECAY_STEPS)
        bank = gabor_gradient_step(bank, g_eta / n_batch, g_sigma / n_batch, lr_t)
        trajectory.append(allocation_fraction(bank.center_freqs_hz, lo, hi))
    return bank, trajectory
