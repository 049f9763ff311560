"""Independent reference implementations used only by the tests.

Everything here is deliberately slow and simple: extended-precision tail
probabilities via mpmath, adaptive quadrature for cumulative pattern
integrals, finite differences for gradients/Hessians, a projected subgradient
method and a plain (non-accelerated) proximal gradient loop for the one-bit
solvers. The library under test never imports this module.
"""

import math

import mpmath as mp
import numba
import numpy as np
from scipy import integrate

mp.mp.dps = 50


def q_tail_mp(x):
    """Q(x) with 50 decimal digits."""
    return mp.erfc(mp.mpf(x) / mp.sqrt(2)) / 2


def log_q_mp(x):
    return float(mp.log(q_tail_mp(x)))


def mills_ratio_mp(x):
    """phi(x)/Q(x) with 50 decimal digits."""
    x = mp.mpf(x)
    return float(mp.npdf(x) / q_tail_mp(x))


def erfinv_bisect(y, tol=1e-12):
    """Invert erf by bisection; independent of scipy's rational approximation."""
    lo, hi = mp.mpf(-10), mp.mpf(10)
    y = mp.mpf(y)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if mp.erf(mid) < y:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


def cumulative_by_quadrature(pattern_fn, a, phi, breakpoints=()):
    """Adaptive quadrature of the directivity pattern from a to phi.

    breakpoints lists angles where the integrand is non-smooth (pattern
    kinks); quad subdivides there so the estimate reaches full accuracy.
    """
    pts = [p for p in breakpoints if a < p < phi] or None
    val, _err = integrate.quad(pattern_fn, a, phi, limit=400, points=pts)
    return val


def fd_gradient(f, x, step=1e-5):
    """Central finite-difference gradient."""
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        g[i] = (f(x + e) - f(x - e)) / (2 * step)
    return g


def fd_hessian(f, x, step=1e-4):
    """Central finite-difference Hessian (symmetrized)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    h = np.zeros((n, n))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = step
        for j in range(i, n):
            ej = np.zeros(n)
            ej[j] = step
            val = (
                f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
            ) / (4 * step * step)
            h[i, j] = val
            h[j, i] = val
    return h


def onebit_cs_objective(x, c, b, zeta):
    """-x^T C b + zeta * ||x||_1, the convex surrogate the closed form solves."""
    return float(-x @ (c @ b) + zeta * np.abs(x).sum())


def projected_subgradient_cs(c, b, zeta, r2, iters=200000, seed=0):
    """Minimize -x^T Cb + zeta||x||_1 over ||x||_2 <= r2 by projected subgradient.

    Polyak-style steps with a running best-value estimate: the plain 1/sqrt(t)
    schedule needs ~1e9 iterations for a 1e-4 gap on these instances, while the
    estimate-based step converges in a few thousand. Still a bona fide
    projected subgradient method, independent of the closed form.
    """
    rng = np.random.default_rng(seed)
    w = c @ b
    n = w.size
    x = np.zeros(n)
    best_x = x.copy()
    best_val = onebit_cs_objective(x, c, b, zeta)
    # Decreasing target offset: f_best - delta_k plays the role of f* in the
    # Polyak step; delta shrinks whenever the method stops improving.
    delta = max(1.0, abs(best_val)) * 0.5
    since_improved = 0
    for _t in range(iters):
        sub = -w + zeta * np.sign(x)
        # subgradient of |.| at 0 can be anything in [-1, 1]; a random element
        # keeps the method from stalling on the axes
        zero = x == 0
        if zero.any():
            sub[zero] = -w[zero] + zeta * rng.uniform(-1, 1, zero.sum())
        ns = float(np.dot(sub, sub))
        if ns == 0.0:
            break
        val = onebit_cs_objective(x, c, b, zeta)
        step = (val - (best_val - delta)) / ns
        x = x - step * sub
        nx = np.linalg.norm(x)
        if nx > r2:
            x *= r2 / nx
        val = onebit_cs_objective(x, c, b, zeta)
        if val < best_val - 1e-14 * max(1.0, abs(best_val)):
            best_val = val
            best_x = x.copy()
            since_improved = 0
        else:
            since_improved += 1
            if since_improved >= 200:
                delta *= 0.5
                since_improved = 0
                if delta < 1e-12:
                    break
    return best_x, best_val


def soft_threshold(v, t):
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


@numba.njit(cache=False)
def _hazard(u):
    """phi(u)/Q(u): erfc route up to u=30, asymptotic series beyond."""
    if u > 30.0:
        t = 1.0 / (u * u)
        return u + (1.0 / u) * (1.0 + t * (-2.0 + t * (10.0 - 74.0 * t)))
    q = 0.5 * math.erfc(u / math.sqrt(2.0))
    return math.exp(-0.5 * u * u) / math.sqrt(2.0 * math.pi) / q


@numba.njit(cache=False)
def _ista_loop(c, ct, b, sigma_z, zeta, step, iters):
    x = np.zeros(c.shape[0])
    w = np.empty(b.size)
    for _ in range(iters):
        u = ct @ x
        for i in range(b.size):
            w[i] = -(b[i] / sigma_z) * _hazard(-b[i] * u[i] / sigma_z)
        grad = c @ w
        delta = 0.0
        for j in range(x.size):
            v = x[j] - step * grad[j]
            mag = abs(v) - step * zeta
            new = math.copysign(mag, v) if mag > 0.0 else 0.0
            d = abs(new - x[j])
            if d > delta:
                delta = d
            x[j] = new
        if delta < 1e-16:
            break
    return x


def ista_onebit_mle(c, b, sigma_z, zeta, iters=1_000_000):
    """Plain proximal gradient for the one-bit MLE with a fixed global step.

    Uses the global Lipschitz bound L = ||C||_2^2 / sigma_z^2 (the curvature
    weights m_i are bounded by 1/sigma_z^2), so no per-iteration curvature
    estimate is needed. No momentum, no restart: a deliberately dumb oracle,
    jitted so a million iterations stay affordable.
    """
    c = np.asarray(c, dtype=float)
    b = np.asarray(b, dtype=float)
    lip = np.linalg.norm(c, 2) ** 2 / sigma_z**2
    return _ista_loop(
        np.ascontiguousarray(c),
        np.ascontiguousarray(c.T),
        b,
        float(sigma_z),
        float(zeta),
        1.0 / lip,
        iters,
    )


def onebit_mle_objective(x, c, b, sigma_z, zeta):
    from scipy.special import log_ndtr

    u = -(b * (c.T @ x)) / sigma_z
    return float(-log_ndtr(-u).sum() + zeta * np.abs(x).sum())
