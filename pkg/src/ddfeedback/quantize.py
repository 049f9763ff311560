"""Quantizers for the limited-feedback link.

Three quantizers live here: a Lloyd-Max scalar quantizer used to feed back
the nonzero coefficients of a sparse estimate, a per-element PSK vector
quantizer used by the least-squares baseline on single-antenna receivers,
and the sign quantizer that produces one-bit feedback from compressed
measurements.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ScalarCodebook",
    "SignBits",
    "lloyd_train",
    "sq_apply",
    "sq_reconstruct",
    "psk_vq",
    "psk_reconstruct",
    "sign_quantize",
]


@dataclass(frozen=True)
class ScalarCodebook:
    """Trained scalar quantizer: sorted reproduction levels and the midpoint
    decision thresholds between them.

    distortion_history records the mean-squared error after every training
    iteration (diagnostic only; tests assert it never increases).
    """

    levels: np.ndarray
    thresholds: np.ndarray
    distortion_history: tuple = field(default=(), compare=False)

    def __post_init__(self):
        levels = np.asarray(self.levels, dtype=float)
        thresholds = np.asarray(self.thresholds, dtype=float)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "thresholds", thresholds)
        if levels.ndim != 1 or levels.size == 0:
            raise ValueError("levels must be a nonempty 1-d array")
        if thresholds.shape != (levels.size - 1,):
            raise ValueError("need exactly one threshold between adjacent levels")
        if np.any(np.diff(levels) < 0):
            raise ValueError("levels must be sorted ascending")
        # thresholds interleave: levels[i] <= t[i] <= levels[i+1]
        if np.any(thresholds < levels[:-1]) or np.any(thresholds > levels[1:]):
            raise ValueError("thresholds must interleave the levels")

    @property
    def num_levels(self):
        return self.levels.size


@dataclass(frozen=True)
class SignBits:
    """One-bit feedback word: signs of the real parts stacked on top of the
    signs of the imaginary parts of the compressed measurements."""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=float)
        object.__setattr__(self, "bits", bits)
        if bits.ndim != 1 or bits.size % 2 != 0:
            raise ValueError("bits must be a 1-d array of even length")
        if not np.all(np.abs(bits) == 1.0):
            raise ValueError("bits must be +1 or -1")

    @property
    def num_measurements(self):
        return self.bits.size // 2

    @property
    def real_bits(self):
        return self.bits[: self.num_measurements]

    @property
    def imag_bits(self):
        return self.bits[self.num_measurements :]


def lloyd_train(samples, bits, max_iters=200, rel_tol=1e-10):
    """Train a 2^bits-level Lloyd-Max scalar quantizer on real samples.

    Levels start at the empirical quantiles of the data (deterministic) and
    then alternate centroid and midpoint-threshold updates until the
    mean-squared distortion improves by less than rel_tol relative, or
    max_iters passes. Cells that go empty keep their previous level, which
    keeps the distortion non-increasing.
    """
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size == 0:
        raise ValueError("cannot train on empty samples")
    if not 1 <= bits <= 16:
        raise ValueError("bits must be between 1 and 16")
    k = 2**bits
    # midpoint-type quantiles spread the initial levels over the sample mass
    levels = np.quantile(samples, (np.arange(k) + 0.5) / k)
    levels = np.sort(levels)
    history = []
    prev = np.inf
    for _ in range(max_iters):
        thresholds = 0.5 * (levels[:-1] + levels[1:])
        cells = np.searchsorted(thresholds, samples, side="right")
        recon = levels[cells]
        distortion = float(np.mean((samples - recon) ** 2))
        history.append(distortion)
        if distortion == 0.0 or prev - distortion < rel_tol * max(prev, 1e-300):
            break
        prev = distortion
        sums = np.bincount(cells, weights=samples, minlength=k)
        counts = np.bincount(cells, minlength=k)
        occupied = counts > 0
        levels = np.where(occupied, sums / np.maximum(counts, 1), levels)
        levels = np.sort(levels)
    thresholds = 0.5 * (levels[:-1] + levels[1:])
    return ScalarCodebook(levels, thresholds, tuple(history))


def sq_apply(codebook, values):
    """Map real values to nearest-level indices.

    A value exactly on a decision threshold between two distinct levels goes
    to the upper cell. Indices of duplicated levels are canonicalized to the
    smallest index carrying that level value, so apply/reconstruct round
    trips are stable.
    """
    values = np.asarray(values, dtype=float)
    idx = np.searchsorted(codebook.thresholds, values, side="right")
    # canonical index: first occurrence of each level value
    first = np.searchsorted(codebook.levels, codebook.levels, side="left")
    return first[idx]


def sq_reconstruct(codebook, indices):
    """Look up reproduction levels; out-of-range indices raise."""
    indices = np.asarray(indices)
    if indices.size and (indices.min() < 0 or indices.max() >= codebook.num_levels):
        raise ValueError("quantizer index out of range")
    return codebook.levels[indices]


def psk_vq(h, bits):
    """Quantize the phases of a complex vector onto a 2^bits-PSK grid.

    The first element is the global phase reference; each remaining element
    maps to the nearest PSK phase 2*pi*q/2^bits, q = 0..2^bits-1, with ties
    broken toward the lower index. Costs bits*(len(h)-1) feedback bits.
    """
    h = np.asarray(h, dtype=complex).ravel()
    if h.size < 2:
        raise ValueError("need at least two elements to phase-quantize")
    if not np.any(h != 0):
        raise ValueError("cannot quantize the all-zero vector")
    k = 2**bits
    rel = np.angle(h[1:]) - np.angle(h[0])
    rel = np.mod(rel, 2 * np.pi)
    pos = rel / (2 * np.pi / k)
    base = np.floor(pos).astype(int)
    frac = pos - base
    idx = np.where(frac > 0.5, base + 1, base) % k
    return idx


def psk_reconstruct(indices, bits):
    """PSK codeword for the given indices: leading reference element 1
    followed by unit-modulus phasors."""
    indices = np.asarray(indices)
    k = 2**bits
    if indices.size and (indices.min() < 0 or indices.max() >= k):
        raise ValueError("PSK index out of range")
    phases = 2 * np.pi * indices / k
    return np.concatenate([[1.0 + 0j], np.exp(1j * phases)])


def sign_quantize(p, y):
    """One-bit feedback: signs of real and imaginary parts of P^H y,
    stacked [real; imag]. sign(0) is +1."""
    p = np.asarray(p)
    y = np.asarray(y).ravel()
    if p.shape[0] != y.size:
        raise ValueError("compression matrix and measurement length mismatch")
    z = p.conj().T @ y
    b_re = np.where(z.real >= 0, 1.0, -1.0)
    b_im = np.where(z.imag >= 0, 1.0, -1.0)
    return SignBits(np.concatenate([b_re, b_im]))
