"""Angle dictionaries and every matrix derived from them.

Two grid constructions: a plain uniform grid, and a companded grid that places
points by equal-area partition of the directivity pattern's cumulative
integral, so angular regions where the element radiates strongly get more
dictionary entries. For the clamped-parabola pattern the cumulative function
and its inverse have closed forms (linear tails, erf middle); anything else
goes through adaptive quadrature plus bisection.

Also builds the protocol matrices shared by encoder and decoder: the scaled
steering dictionaries, the training matrix, the vectorized sensing matrix, the
DFT compression matrix, and the real-stacked measurement matrix.
"""

from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import erf

from . import channel as _channel
from .numerics import erfinv, kron


@dataclass(frozen=True)
class AngleDictionary:
    """Strictly increasing angle grid on [lower, upper)."""

    angles: np.ndarray
    lower: float
    upper: float
    construction: str  # "uniform" | "companded"

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=float)
        object.__setattr__(self, "angles", angles)
        if angles.ndim != 1 or angles.size < 1:
            raise ValueError("dictionary needs at least one angle")
        if np.any(np.diff(angles) <= 0):
            raise ValueError("angles must be strictly increasing")
        if angles[0] < self.lower or angles[-1] >= self.upper:
            raise ValueError("angles must lie inside [lower, upper)")

    def __len__(self):
        return len(self.angles)


def uniform_grid(a, b, n):
    """n equispaced angles strictly inside (a, b): a + j*(b-a)/(n+1), j=1..n."""
    if a >= b:
        raise ValueError("need a < b")
    if n < 1:
        raise ValueError("need at least one grid point")
    j = np.arange(1, n + 1)
    return AngleDictionary(a + j * (b - a) / (n + 1), a, b, "uniform")


def _phi_zero(pattern):
    """Angle where the parabolic rolloff meets the front-to-back floor."""
    return pattern.phi_3db * np.sqrt(pattern.front_back_db / 12.0)


def _floor_gain(pattern):
    return 10.0 ** ((pattern.max_gain_dbi - pattern.front_back_db) / 20.0)


def _peak_gain(pattern):
    return 10.0 ** (pattern.max_gain_dbi / 20.0)


def _erf_scale(pattern):
    """sqrt(c) for the middle branch, where the pattern is peak*exp(-c*phi^2)."""
    return np.sqrt(0.6 * np.log(10.0)) / pattern.phi_3db


def cumulative_3gpp(phi, pattern, a):
    """Closed-form integral of the clamped-parabola pattern from a to phi.

    Valid when a <= -phi_0 (phi_0 = phi_3db*sqrt(A_m/12), where the rolloff
    hits the floor): constant-floor tail below -phi_0, a Gaussian-integral
    (erf) middle, constant-floor tail above +phi_0. Vectorized over phi.
    """
    phi = np.asarray(phi, dtype=float)
    phi0 = _phi_zero(pattern)
    if a > -phi0:
        raise ValueError("closed form needs the sector to start at or below -phi_0")
    if np.any(phi < a):
        raise ValueError("evaluation point below the sector start")

    floor = _floor_gain(pattern)
    peak = _peak_gain(pattern)
    sc = _erf_scale(pattern)
    half_width = np.sqrt(np.pi) / (2.0 * sc)  # integral of exp(-c x^2) over half line / erf

    g_left = floor * (np.minimum(phi, -phi0) - a)

    mid = np.clip(phi, -phi0, phi0)
    g_mid = peak * half_width * (erf(sc * mid) + erf(sc * phi0))

    g_right = floor * np.maximum(phi - phi0, 0.0)
    return g_left + g_mid + g_right


def inverse_cumulative_3gpp(y, pattern, a, b):
    """Inverse of cumulative_3gpp on [0, G(b)), vectorized over y."""
    y = np.asarray(y, dtype=float)
    phi0 = _phi_zero(pattern)
    if a > -phi0:
        raise ValueError("closed form needs the sector to start at or below -phi_0")
    total = cumulative_3gpp(b, pattern, a)
    if np.any(y < 0) or np.any(y >= total):
        raise ValueError("target value outside [0, G(b))")

    floor = _floor_gain(pattern)
    peak = _peak_gain(pattern)
    sc = _erf_scale(pattern)
    half_width = np.sqrt(np.pi) / (2.0 * sc)

    y_minus = cumulative_3gpp(-phi0, pattern, a)
    y_zero = cumulative_3gpp(0.0, pattern, a)
    y_plus = cumulative_3gpp(min(phi0, b), pattern, a)

    out = np.empty_like(y)
    left = y < y_minus
    right = y >= y_plus if b > phi0 else np.zeros_like(y, dtype=bool)
    mid = ~(left | right)

    out[left] = a + y[left] / floor
    if np.any(mid):
        arg = np.abs(y[mid] - y_zero) / (peak * half_width)
        out[mid] = np.sign(y[mid] - y_zero) * erfinv(arg) / sc
    if np.any(right):
        out[right] = phi0 + (y[right] - y_plus) / floor
    return out


def companded_grid(pattern, a, b, n):
    """n angles placed by equal-area partition of the pattern's cumulative.

    Point k sits at G^-1(k * G_total / (n+1)): more points where the pattern
    is stronger, and a constant pattern degenerates to the uniform grid. Uses
    the closed form when the clamped-parabola sector condition holds,
    otherwise adaptive quadrature with bisection to 1e-10.
    """
    if a >= b:
        raise ValueError("need a < b")
    if n < 1:
        raise ValueError("need at least one grid point")

    if isinstance(pattern, _channel.ThreeGPP):
        phi0 = _phi_zero(pattern)
        if a <= -phi0 and phi0 <= b:
            total = cumulative_3gpp(b, pattern, a)
            targets = np.arange(1, n + 1) * total / (n + 1)
            angles = inverse_cumulative_3gpp(targets, pattern, a, b)
            return AngleDictionary(angles, a, b, "companded")

    if isinstance(pattern, _channel.UniformSector):
        if a < pattern.lower or b > pattern.upper:
            raise ValueError("sector pattern is zero on part of [a, b)")

    def q(phi):
        return float(_channel.directivity(pattern, phi))

    probe = np.linspace(a, b, 257, endpoint=False)
    if np.any(_channel.directivity(pattern, probe) <= 0):
        raise ValueError("pattern must be positive on [a, b)")

    total, _ = integrate.quad(q, a, b, limit=400)
    targets = np.arange(1, n + 1) * total / (n + 1)
    angles = np.empty(n)
    for i, target in enumerate(targets):
        lo, hi = a, b
        while hi - lo > 1e-10:
            mid = 0.5 * (lo + hi)
            val, _ = integrate.quad(q, a, mid, limit=400)
            if val < target:
                lo = mid
            else:
                hi = mid
        angles[i] = 0.5 * (lo + hi)
    return AngleDictionary(angles, a, b, "companded")


def build_dictionary_matrices(dict_t, dict_r, tx, rx):
    """Directivity-scaled steering dictionaries: column k is c(phi_k)*a(phi_k).

    `tx`/`rx` are (ArrayConfig, DirectivityPattern) pairs; returns
    (A_tilde_T, A_tilde_R) of shapes M_T x G_T and M_R x G_R.
    """
    tx_array, tx_pattern = tx
    rx_array, rx_pattern = rx
    a_t = _channel.steering_matrix(tx_array, dict_t.angles)
    a_r = _channel.steering_matrix(rx_array, dict_r.angles)
    a_tilde_t = a_t * _channel.directivity(tx_pattern, dict_t.angles)
    a_tilde_r = a_r * _channel.directivity(rx_pattern, dict_r.angles)
    return a_tilde_t, a_tilde_r


def make_training(num_tx, n_tr, p_t, rng):
    """Training matrix with i.i.d. uniform QPSK entries scaled to power p_t.

    Every column satisfies ||s_n||^2 = p_t exactly (unit-modulus symbols), so
    the per-symbol transmit power is flat across the training block.
    """
    symbols = np.exp(1j * (np.pi / 4 + np.pi / 2 * rng.integers(0, 4, (num_tx, n_tr))))
    return np.sqrt(p_t / num_tx) * symbols


def build_sensing(s, a_tilde_t, a_tilde_r):
    """Sensing matrix Q = (S^T conj(A_T)) kron A_R of shape (M_R*N_tr) x (G_T*G_R).

    Q maps the column-stacked interaction matrix to the column-stacked
    noiseless training observation: vec(A_R G A_T^H S) = Q vec(G).
    """
    if s.shape[0] != a_tilde_t.shape[0]:
        raise ValueError("training matrix rows must match the tx dictionary rows")
    return kron(s.T @ a_tilde_t.conj(), a_tilde_r)


def build_compression(num_measurements, n_fb, rng, selection=None):
    """N_fb distinct columns of the unitary num_measurements-point DFT matrix.

    Columns are chosen uniformly without replacement (or supplied explicitly
    via `selection` for exact reproduction); the result is semi-unitary,
    P^H P = I.
    """
    if n_fb > num_measurements:
        raise ValueError("cannot select more DFT columns than the DFT size")
    if selection is None:
        selection = np.sort(rng.choice(num_measurements, size=n_fb, replace=False))
    else:
        selection = np.asarray(selection, dtype=int)
        if len(np.unique(selection)) != len(selection):
            raise ValueError("column selection must be duplicate-free")
        if selection.min() < 0 or selection.max() >= num_measurements:
            raise ValueError("column selection out of range")
    rows = np.arange(num_measurements)[:, None]
    p = np.exp(-2j * np.pi * rows * selection[None, :] / num_measurements)
    return p / np.sqrt(num_measurements)


def build_real_stacked(q, p):
    """Real-stacked measurement matrix C (2G x 2N_fb) from Q and P.

    With M = Q^H P, C = [[Re M, -Im M], [Im M, Re M]]; then for any complex g
    and x = [Re g; Im g], C^T x stacks Re(P^H Q g) over Im(P^H Q g).
    """
    m = q.conj().T @ p
    return np.block(
        [[m.real, -m.imag], [m.imag, m.real]]
    )


@dataclass(frozen=True)
class DictionaryMatrices:
    """Every protocol matrix both link ends agree on before feedback starts."""

    dict_t: AngleDictionary
    dict_r: AngleDictionary
    a_tilde_t: np.ndarray  # M_T x G_T
    a_tilde_r: np.ndarray  # M_R x G_R
    s: np.ndarray  # M_T x N_tr
    q: np.ndarray  # (M_R N_tr) x G
    p: np.ndarray  # (M_R N_tr) x N_fb
    c: np.ndarray  # 2G x 2N_fb

    @property
    def g_t(self):
        return self.a_tilde_t.shape[1]

    @property
    def g_r(self):
        return self.a_tilde_r.shape[1]

    @property
    def g(self):
        return self.g_t * self.g_r

    @property
    def n_fb(self):
        return self.p.shape[1]


def assemble_matrices(dict_t, dict_r, tx, rx, s, p):
    """Bundle dictionaries, training, compression and the derived Q and C."""
    a_tilde_t, a_tilde_r = build_dictionary_matrices(dict_t, dict_r, tx, rx)
    q = build_sensing(s, a_tilde_t, a_tilde_r)
    if p.shape[0] != q.shape[0]:
        raise ValueError("compression matrix rows must match M_R * N_tr")
    c = build_real_stacked(q, p)
    return DictionaryMatrices(
        dict_t=dict_t,
        dict_r=dict_r,
        a_tilde_t=a_tilde_t,
        a_tilde_r=a_tilde_r,
        s=s,
        q=q,
        p=p,
        c=c,
    )


def export_matrix(path, array, binary=True):
    """Write a matrix to a portable file for debugging.

    Format: one ASCII header line "rows cols {complex|real} {binary|text}",
    then row-major entries. Binary payload is little-endian float64, complex
    entries as (real, imaginary) pairs; text payload is one row per line with
    the same ordering in decimal.
    """
    array = np.atleast_2d(np.asarray(array))
    is_complex = np.iscomplexobj(array)
    kind = "complex" if is_complex else "real"
    if is_complex:
        flat = np.empty((array.shape[0], array.shape[1] * 2))
        flat[:, 0::2] = array.real
        flat[:, 1::2] = array.imag
    else:
        flat = array.astype(float)
    mode = "binary" if binary else "text"
    header = f"{array.shape[0]} {array.shape[1]} {kind} {mode}\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        if binary:
            fh.write(flat.astype("<f8").tobytes())
        else:
            for row in flat:
                fh.write((" ".join(f"{v:.17g}" for v in row) + "\n").encode("ascii"))


def load_matrix(path):
    """Read back a matrix written by export_matrix."""
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").split()
        rows, cols, kind, mode = int(header[0]), int(header[1]), header[2], header[3]
        width = cols * 2 if kind == "complex" else cols
        if mode == "binary":
            flat = np.frombuffer(fh.read(), dtype="<f8").reshape(rows, width)
        else:
            flat = np.loadtxt(fh, ndmin=2).reshape(rows, width)
    if kind == "complex":
        return flat[:, 0::2] + 1j * flat[:, 1::2]
    return flat.copy()
