"""Sparse estimation engines.

Three solvers: orthogonal matching pursuit on the complex sensing model
(used at the UE), a closed-form one-bit compressed-sensing estimator, and an
l1-regularized one-bit maximum-likelihood estimator solved by an accelerated
proximal gradient method with adaptive restart (both used at the BS on the
real-stacked model). Reduced-support variants support the hybrid feedback
scheme: the BS re-solves the one-bit problem only over the rows the UE
reported.
"""

from dataclasses import dataclass, field

import numpy as np

from . import numerics

__all__ = [
    "SparseEstimate",
    "MleConfig",
    "CsConfig",
    "default_omp_eps",
    "omp",
    "shrink",
    "onebit_cs",
    "mle_objective",
    "mle_gradient",
    "mle_lipschitz",
    "mle_fista",
    "fista_momentum",
    "restrict_rows",
    "embed",
]


@dataclass(frozen=True)
class SparseEstimate:
    """Solver output: the (mostly zero) coefficient vector, its support,
    the iteration count, and solver diagnostics.

    coefficients is complex for the matching-pursuit path (dictionary
    domain) and real for the one-bit solvers (stacked [real; imag] domain).
    support always lists the sorted indices of the nonzero entries.
    """

    coefficients: np.ndarray
    support: np.ndarray
    iterations_used: int
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        support = np.asarray(self.support, dtype=int)
        object.__setattr__(self, "support", support)
        if not np.array_equal(support, np.flatnonzero(self.coefficients)):
            raise ValueError("support must list the nonzero coefficient indices")


@dataclass(frozen=True)
class MleConfig:
    """Settings for the one-bit likelihood solver.

    zeta weights the l1 penalty; with zeta_mode "relative" the effective
    weight is zeta * ||grad f(0)||_inf, which keeps it inside the range
    where the all-zero solution is not forced. sigma_z is the per-component
    noise std of the real-stacked model (sigma / sqrt(2)).
    """

    zeta: float = 0.1
    sigma_z: float = 1.0
    max_iters: int = 500
    rel_tol: float = 1e-6
    zeta_mode: str = "relative"

    def __post_init__(self):
        if self.zeta < 0:
            raise ValueError("zeta must be nonnegative")
        if self.sigma_z <= 0:
            raise ValueError("sigma_z must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.zeta_mode not in ("absolute", "relative"):
            raise ValueError("zeta_mode must be 'absolute' or 'relative'")


@dataclass(frozen=True)
class CsConfig:
    """Settings for the closed-form one-bit estimator.

    r2 bounds the output norm; with r2_mode "from-path-power" the caller
    supplies the aggregate path power at solve time instead (genie side
    information in the simulations). zeta_mode mirrors MleConfig, relative
    to ||C b||_inf.
    """

    zeta: float = 0.1
    r2: float = 1.0
    zeta_mode: str = "relative"
    r2_mode: str = "fixed"

    def __post_init__(self):
        if self.zeta < 0:
            raise ValueError("zeta must be nonnegative")
        if self.r2_mode not in ("fixed", "from-path-power"):
            raise ValueError("r2_mode must be 'fixed' or 'from-path-power'")
        if self.r2_mode == "fixed" and self.r2 <= 0:
            raise ValueError("r2 must be positive")
        if self.zeta_mode not in ("absolute", "relative"):
            raise ValueError("zeta_mode must be 'absolute' or 'relative'")


def default_omp_eps(q, noise_std):
    """Universal-threshold residual tolerance: noise_std * sqrt(2 ln G)
    scaled by the median dictionary column norm."""
    col_norms = np.linalg.norm(q, axis=0)
    g = q.shape[1]
    return float(noise_std * np.sqrt(2.0 * np.log(g)) * np.median(col_norms))


def omp(q, y, max_atoms, eps=None, noise_std=None):
    """Orthogonal matching pursuit.

    Greedily picks the dictionary column most correlated with the residual
    (smallest index on ties), then re-fits all selected coefficients by
    least squares, until the peak correlation drops to eps or max_atoms
    columns are in play. eps defaults from noise_std via default_omp_eps.
    """
    q = np.asarray(q)
    y = np.asarray(y).ravel()
    if q.shape[0] != y.size:
        raise ValueError("dictionary and measurement dimensions differ")
    if max_atoms < 1:
        raise ValueError("max_atoms must be at least 1")
    if eps is None:
        if noise_std is None:
            raise ValueError("either eps or noise_std is required")
        eps = default_omp_eps(q, noise_std)

    g = np.zeros(q.shape[1], dtype=complex)
    support = []
    coeffs = np.zeros(0, dtype=complex)
    residual = y.astype(complex)
    residual_norms = [float(np.linalg.norm(residual))]
    peak = 0.0
    for _ in range(max_atoms):
        corr = q.conj().T @ residual
        peak = float(np.max(np.abs(corr)))
        if peak <= eps:
            break
        support.append(int(np.argmax(np.abs(corr))))
        coeffs = numerics.pseudo_inverse_apply(q[:, support], y)
        residual = y - q[:, support] @ coeffs
        residual_norms.append(float(np.linalg.norm(residual)))
    g[support] = coeffs
    diagnostics = {
        "residual_norm": residual_norms[-1],
        "residual_norms": tuple(residual_norms),
        "max_correlation": peak,
    }
    return SparseEstimate(g, np.flatnonzero(g), len(support), diagnostics)


def shrink(v, x):
    """Soft threshold: (|x_i| - v)_+ with the sign of x_i."""
    if v < 0:
        raise ValueError("threshold must be nonnegative")
    x = np.asarray(x)
    return np.sign(x) * np.maximum(np.abs(x) - v, 0.0)


def onebit_cs(c, bits, cfg, path_power=None):
    """Closed-form one-bit estimate: soft threshold C b and rescale onto
    the radius-R2 sphere; all-zero when the threshold dominates."""
    c = np.asarray(c, dtype=float)
    b = np.asarray(bits.bits, dtype=float)
    if c.shape[1] != b.size:
        raise ValueError("sign bits do not match the sensing matrix")
    if cfg.r2_mode == "from-path-power":
        if path_power is None or path_power <= 0:
            raise ValueError("r2_mode 'from-path-power' needs a positive path_power")
        r2 = float(path_power)
    else:
        r2 = cfg.r2
    w = c @ b
    w_inf = float(np.max(np.abs(w))) if w.size else 0.0
    zeta = cfg.zeta * w_inf if cfg.zeta_mode == "relative" else cfg.zeta
    if w_inf <= zeta:
        x_hat = np.zeros_like(w)
    else:
        t = shrink(zeta, w)
        x_hat = r2 * t / np.linalg.norm(t)
    objective = float(-x_hat @ w + zeta * np.sum(np.abs(x_hat)))
    diagnostics = {"objective": objective, "zeta": float(zeta), "r2": r2}
    return SparseEstimate(x_hat, np.flatnonzero(x_hat), 1, diagnostics)


def _scaled_correlates(c, b, x, sigma_z):
    """Per-measurement arguments u_i = -b_i c_i^T x / sigma_z."""
    return -b * (c.T @ x) / sigma_z


def mle_objective(c, b, x, cfg):
    """Negative one-bit log-likelihood, evaluated through the stable
    log-tail so it stays finite for any finite x."""
    u = _scaled_correlates(c, b, x, cfg.sigma_z)
    return float(-np.sum(numerics.log_q_stable(u)))


def mle_gradient(c, b, x, cfg):
    """Gradient of the negative log-likelihood; the per-measurement weight
    is a scaled Gaussian hazard evaluated overflow-free."""
    u = _scaled_correlates(c, b, x, cfg.sigma_z)
    w = -(b / cfg.sigma_z) * numerics.inverse_mills_ratio(u)
    return c @ w


_CURVATURE_SERIES_CUTOFF = 100.0


def _mills_curvature(u):
    """R(u) * (R(u) - u) where R is the Gaussian hazard: the curvature of
    -ln Q(u). Direct product below the cutoff; a 1/u^2 series above it,
    where the subtraction would cancel."""
    u = np.asarray(u, dtype=float)
    r = numerics.inverse_mills_ratio(u)
    direct = r * (r - u)
    safe = np.where(np.abs(u) > 1.0, u, 1.0)
    t = 1.0 / (safe * safe)
    series = 1.0 + t * (-1.0 + t * (6.0 - 50.0 * t))
    return np.where(u > _CURVATURE_SERIES_CUTOFF, series, direct)


def mle_lipschitz(c_norm_sq, c, b, x, cfg):
    """Local Lipschitz bound ||C||_2^2 * ||m(x)||_inf on the gradient,
    with m the diagonal curvature of the likelihood at x."""
    u = _scaled_correlates(c, b, x, cfg.sigma_z)
    m = _mills_curvature(u) / cfg.sigma_z**2
    bound = float(c_norm_sq * np.max(np.abs(m)))
    return max(bound, np.finfo(float).tiny)


def fista_momentum(beta):
    """Nesterov momentum update beta -> (1 + sqrt(1 + 4 beta^2)) / 2."""
    return 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * beta * beta))


def mle_fista(c, bits, cfg, x0=None, c_norm_sq=None, trace=False):
    """l1-regularized one-bit ML estimation by accelerated proximal
    gradient with gradient-based adaptive restart.

    Each step soft-thresholds a gradient step from the momentum point with
    a local Lipschitz step size; momentum resets whenever the gradient at
    the momentum point aligns with the step just taken. Always returns;
    diagnostics carry the convergence flag, restart count, and final
    objective (with the penalty term).
    """
    c = np.asarray(c, dtype=float)
    b = np.asarray(bits.bits, dtype=float)
    if c.shape[1] != b.size:
        raise ValueError("sign bits do not match the sensing matrix")
    if c_norm_sq is None:
        c_norm_sq = numerics.spectral_norm_sq(c)
    x = np.zeros(c.shape[0]) if x0 is None else np.asarray(x0, dtype=float).copy()

    if cfg.zeta_mode == "relative":
        grad0 = mle_gradient(c, b, np.zeros(c.shape[0]), cfg)
        zeta = cfg.zeta * float(np.max(np.abs(grad0)))
    else:
        zeta = cfg.zeta

    u = x.copy()
    beta = 1.0
    restarts = 0
    converged = False
    iterations = 0
    history = []
    for iterations in range(1, cfg.max_iters + 1):
        grad_u = mle_gradient(c, b, u, cfg)
        lip = mle_lipschitz(c_norm_sq, c, b, u, cfg)
        x_next = shrink(zeta / lip, u - grad_u / lip)
        step = x_next - x
        if grad_u @ step > 0:
            beta = 1.0
            u = x_next
            restarts += 1
        else:
            beta_next = fista_momentum(beta)
            u = x_next + ((beta - 1.0) / beta_next) * step
            beta = beta_next
        if trace:
            history.append(
                (mle_objective(c, b, x_next, cfg) + zeta * np.sum(np.abs(x_next)),
                 1.0 / lip)
            )
        done = np.linalg.norm(step) <= cfg.rel_tol * max(1.0, np.linalg.norm(x))
        x = x_next
        if done:
            converged = True
            break

    objective = mle_objective(c, b, x, cfg) + zeta * float(np.sum(np.abs(x)))
    diagnostics = {
        "objective": objective,
        "zeta": float(zeta),
        "converged": converged,
        "restarts": restarts,
    }
    if trace:
        diagnostics["trace"] = tuple(history)
    return SparseEstimate(x, np.flatnonzero(x), iterations, diagnostics)


def _check_support(support, size):
    support = np.asarray(support, dtype=int)
    if support.ndim != 1:
        raise ValueError("support must be a flat index list")
    if support.size and (support.min() < 0 or support.max() >= size):
        raise ValueError("support index out of range")
    if np.unique(support).size != support.size:
        raise ValueError("support indices must be distinct")
    return support


def restrict_rows(c, support):
    """Rows of C for the reported support: the reduced one-bit model
    b_i = sign(sum_{j in S} C_{ji} x_j + z_i)."""
    c = np.asarray(c)
    support = _check_support(support, c.shape[0])
    return c[support, :]


def embed(x_reduced, support, size):
    """Scatter a reduced solution back into the full coordinate vector."""
    x_reduced = np.asarray(x_reduced)
    support = _check_support(support, size)
    if support.size != x_reduced.size:
        raise ValueError("reduced vector and support must have equal length")
    out = np.zeros(size, dtype=x_reduced.dtype)
    out[support] = x_reduced
    return out
