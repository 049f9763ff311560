"""Shared numerics: stable Gaussian-tail helpers and small linear algebra.

Everything here is a pure function of its inputs and safe to call from
concurrent trial workers. Arrays are dense numpy float64/complex128; dimensions
travel with the arrays.
"""

import warnings

import numpy as np
import scipy.linalg
from scipy import special

# Asymptotic branch of the inverse Mills ratio starts here; below it the
# scaled-erfc evaluation is exact to machine precision, above it the series
# avoids the 0/0 tail.
_MILLS_ASYMPTOTIC_CUTOFF = 30.0
# erfcx(x/sqrt(2)) overflows once x^2/2 > 709; switch to the direct ratio
# (where Q(x) ~ 1 anyway) well before that.
_MILLS_DIRECT_CUTOFF = -30.0


def q_function(x):
    """Gaussian upper-tail probability Q(x) = P(N(0,1) > x).

    Monotone decreasing, Q(0) = 0.5, saturates to 0/1 in the deep tails
    without warnings.
    """
    x = np.asarray(x, dtype=float)
    return special.ndtr(-x)


def log_q_stable(x):
    """ln Q(x) without underflow, good to ~1e-10 relative on [-38, 38].

    Q(38) ~ 3e-316 underflows in naive evaluation; the log-tail form keeps the
    one-bit likelihood finite for any finite argument.
    """
    x = np.asarray(x, dtype=float)
    return special.log_ndtr(-x)


def inverse_mills_ratio(x):
    """phi(x)/Q(x) for the standard normal, stable over the whole real line.

    Three branches: direct ratio when Q(x) ~ 1 (x very negative), scaled
    complementary error function in the bulk, and the asymptotic series
    x + 1/x - 2/x^3 + 10/x^5 - 74/x^7 in the deep right tail where the ratio
    of two underflowing quantities would otherwise go 0/0.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)

    left = x <= _MILLS_DIRECT_CUTOFF
    right = x > _MILLS_ASYMPTOTIC_CUTOFF
    mid = ~(left | right)

    if np.any(left):
        xl = x[left]
        # Q(x) ~ 1 here, so the plain ratio is exact; phi underflows to 0 for
        # x < -38.6, which is the correct limit.
        out[left] = np.exp(-0.5 * xl * xl) / np.sqrt(2 * np.pi) / special.ndtr(-xl)
    if np.any(mid):
        xm = x[mid]
        # phi(x)/Q(x) = sqrt(2/pi) / erfcx(x/sqrt(2)); erfcx cancels the
        # exp(-x^2/2) analytically so neither factor underflows.
        out[mid] = np.sqrt(2 / np.pi) / special.erfcx(xm / np.sqrt(2))
    if np.any(right):
        xr = x[right]
        t = 1.0 / (xr * xr)
        out[right] = xr + (1.0 / xr) * (1.0 + t * (-2.0 + t * (10.0 - 74.0 * t)))

    return out[0] if scalar else out


def erfinv(y):
    """Inverse of erf on (-1, 1); raises ValueError outside the open interval."""
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(y) >= 1.0):
        raise ValueError("erfinv argument must lie in the open interval (-1, 1)")
    return special.erfinv(y)


def spectral_norm_sq(a, rel_change_tol=1e-12, max_iters=10000):
    """Largest squared singular value of `a` via power iteration on the Gram matrix.

    The Gram matrix is formed on the smaller side (columns or rows), so each
    iteration is O(min(m,n)^2) after a one-time O(m*n*min(m,n)) product. Block
    power iteration (block 4 with Rayleigh-Ritz extraction) is used so that a
    clustered top of the spectrum, where the single-vector method stalls, still
    converges. The start block is a fixed deterministic matrix, so the result
    is run-to-run reproducible.
    """
    a = np.asarray(a)
    if a.size == 0:
        raise ValueError("spectral_norm_sq needs a nonempty matrix")
    if a.ndim != 2:
        raise ValueError("spectral_norm_sq expects a 2-d matrix")
    m, n = a.shape
    if n <= m:
        gram = a.conj().T @ a
    else:
        gram = a @ a.conj().T
    k = gram.shape[0]

    p = min(4, k)
    v0 = np.empty((k, p))
    idx = np.arange(k)
    v0[:, 0] = 1.0
    if p > 1:
        v0[:, 1] = np.where(idx % 2 == 0, 1.0, -1.0)
    if p > 2:
        v0[:, 2] = idx + 1.0
    if p > 3:
        v0[:, 3] = np.where(idx == 0, -1.0, 1.0)
    v, _ = np.linalg.qr(v0)

    lam = 0.0
    for it in range(max_iters):
        z = gram @ v
        if not np.any(z):
            return 0.0
        v, _ = np.linalg.qr(z)
        ritz = v.conj().T @ (gram @ v)
        lam_new = float(np.linalg.eigvalsh((ritz + ritz.conj().T) / 2)[-1])
        if it > 0 and abs(lam_new - lam) < rel_change_tol * max(1.0, abs(lam_new)):
            return lam_new
        lam = lam_new
    return lam


class PseudoInverseFallbackWarning(RuntimeWarning):
    """Raised (as a warning) when the ridge-regularized path had to be used."""


def pseudo_inverse_apply(a, b, rcond=1e-12):
    """Minimum-norm least-squares solution X of A X = B, i.e. pinv(A) @ B.

    Tall full-column-rank A goes through an economic QR; wide full-row-rank A
    through the QR of its adjoint (min-norm solution). If the triangular
    factor is numerically rank-deficient, falls back to ridge-regularized
    normal equations (ridge = 1e-12 * trace-scale) and warns that it did.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2:
        raise ValueError("A must be a 2-d matrix")
    if b.shape[0] != a.shape[0]:
        raise ValueError(
            f"dimension mismatch: A is {a.shape}, B leads with {b.shape[0]}"
        )
    m, n = a.shape
    if m >= n:
        q, r = np.linalg.qr(a)
        diag = np.abs(np.diag(r))
        if diag.size and diag.min() > rcond * max(diag.max(), 1e-300):
            return scipy.linalg.solve_triangular(r, q.conj().T @ b)
    else:
        q, r = np.linalg.qr(a.conj().T)
        diag = np.abs(np.diag(r))
        if diag.size and diag.min() > rcond * max(diag.max(), 1e-300):
            # x = A^H (A A^H)^-1 b = Q R^-H b for A^H = QR
            w = scipy.linalg.solve_triangular(r, b, trans="C", lower=False)
            return q @ w
    # Rank-deficient triangular factor: ridge-regularized normal equations.
    warnings.warn(
        "rank-deficient system, ridge fallback engaged",
        PseudoInverseFallbackWarning,
        stacklevel=2,
    )
    gram = a.conj().T @ a
    k = gram.shape[0]
    tr = np.real(np.trace(gram))
    ridge = rcond * (tr / k if tr > 0 else 1.0)
    return np.linalg.solve(gram + ridge * np.eye(k), a.conj().T @ b)


def apply_right_pinv(b, a, rcond=1e-12):
    """B @ pinv(A), via the adjoint identity (pinv(A^H) @ B^H)^H."""
    return pseudo_inverse_apply(a.conj().T, b.conj().T, rcond=rcond).conj().T


def kron(a, b):
    """Kronecker product (thin wrapper so all call sites share one import)."""
    return np.kron(np.asarray(a), np.asarray(b))


def vec(a):
    """Column-major vectorization: stacks the columns of `a`."""
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError("vec expects a 2-d matrix")
    return a.reshape(-1, order="F")


def unvec(v, rows, cols):
    """Inverse of `vec`: reshape a length rows*cols vector column-major."""
    v = np.asarray(v)
    if v.ndim != 1 or v.size != rows * cols:
        raise ValueError(f"cannot unvec length-{v.size} vector into {rows}x{cols}")
    return v.reshape(rows, cols, order="F")
