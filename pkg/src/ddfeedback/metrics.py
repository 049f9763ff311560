"""Evaluation quantities: estimation error, beamforming gain, and zero-forcing
multiuser rates.

Conventions: channels for the multiuser quantities are row vectors (one
receive antenna per user), stacked into K x M_T arrays. The precoder is
normalized to ||V||_F^2 = K; transmit power enters through the SINR formula,
not the precoder itself.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MultiuserContext",
    "nrmse",
    "beamforming_gain",
    "zf_precoder",
    "sinr_and_sum_rate",
]

_RCOND_FLOOR = 1e-10


def nrmse(h_hat, h):
    """Frobenius error of the estimate relative to the true channel's norm.

    The zero estimate scores exactly 1, which makes 1.0 the natural
    "no information" reference line.
    """
    h = np.asarray(h)
    h_hat = np.asarray(h_hat)
    denom = np.linalg.norm(h)
    if denom == 0.0:
        raise ValueError("true channel must be nonzero")
    return float(np.linalg.norm(h_hat - h) / denom)


def beamforming_gain(h, h_hat, p_t):
    """Received power when transmitting along the estimated direction.

    Scale-invariant in the estimate; the perfect-CSI ceiling is
    p_t * ||h||^2. A zero estimate carries no direction, so its gain is
    defined as 0.
    """
    h = np.asarray(h).ravel()
    h_hat = np.asarray(h_hat).ravel()
    denom = np.linalg.norm(h_hat) ** 2
    if denom == 0.0:
        return 0.0
    return float(p_t * np.abs(np.vdot(h, h_hat)) ** 2 / denom)


@dataclass(frozen=True)
class MultiuserContext:
    """Per-user true channels and estimates for the downlink rate evaluation.

    true_channels and estimates are K x M_T with one row per single-antenna
    user. u_c is the coherence-block symbol budget out of which n_tr symbols
    are spent on training.
    """

    true_channels: np.ndarray
    estimates: np.ndarray
    p_t: float
    noise_var: float
    u_c: int
    n_tr: int

    def __post_init__(self):
        true_channels = np.asarray(self.true_channels, dtype=complex)
        estimates = np.asarray(self.estimates, dtype=complex)
        if true_channels.ndim != 2 or estimates.shape != true_channels.shape:
            raise ValueError("true channels and estimates must be matching K x M_T")
        if true_channels.shape[0] > true_channels.shape[1]:
            raise ValueError("more users than transmit antennas")
        if self.u_c <= self.n_tr:
            raise ValueError("coherence block must exceed the training length")
        if self.p_t <= 0 or self.noise_var < 0:
            raise ValueError("need positive power and nonnegative noise variance")
        object.__setattr__(self, "true_channels", true_channels)
        object.__setattr__(self, "estimates", estimates)

    @property
    def num_users(self):
        return self.true_channels.shape[0]

    @property
    def training_prefactor(self):
        return 1.0 - self.n_tr / self.u_c


def zf_precoder(t_hat, p_t):
    """Zero-forcing precoder for the stacked estimated channels (K x M_T).

    V = t * T^H (T T^H)^-1 with t^2 = K / trace((T T^H)^-1), so T V = t I
    (no inter-user interference under the estimated channel) and
    ||V||_F^2 = K. p_t is accepted for signature uniformity with the rate
    computation; the power split multiplies in the SINR, not here.
    """
    t_hat = np.asarray(t_hat, dtype=complex)
    if t_hat.ndim != 2 or t_hat.shape[0] > t_hat.shape[1]:
        raise ValueError("need a K x M_T matrix with K <= M_T")
    gram = t_hat @ t_hat.conj().T
    svals = np.linalg.svd(gram, compute_uv=False)
    if svals[-1] <= _RCOND_FLOOR * svals[0]:
        raise ValueError("estimated channel matrix is rank deficient")
    gram_inv = np.linalg.inv(gram)
    scale = np.sqrt(t_hat.shape[0] / np.trace(gram_inv).real)
    return scale * (t_hat.conj().T @ gram_inv)


def sinr_and_sum_rate(ctx, v):
    """Per-user SINR under the given precoder and the training-discounted
    sum rate.

    gamma_k = p_t |h_k^H v_k|^2 / (sum_{k' != k} p_t |h_k^H v_k'|^2 + K sigma^2)
    and each user contributes (1 - n_tr/u_c) log2(1 + gamma_k).
    """
    v = np.asarray(v, dtype=complex)
    k = ctx.num_users
    if v.shape != (ctx.true_channels.shape[1], k):
        raise ValueError("precoder shape must be M_T x K")
    # channel rows multiply the precoder directly: row k of the context is
    # the signal map x -> h_k x seen by user k
    cross = ctx.true_channels @ v
    powers = ctx.p_t * np.abs(cross) ** 2
    signal = np.diag(powers).copy()
    interference = powers.sum(axis=1) - signal
    gamma = signal / (interference + k * ctx.noise_var)
    rates = ctx.training_prefactor * np.log2(1.0 + gamma)
    return gamma, float(rates.sum())
