"""Double-directional multipath channel model.

A realization is a set of L paths, each with a complex gain, an angle of
departure seen by the transmit array, and an angle of arrival seen by the
receive array. Arrays are uniform linear; per-element directivity patterns
weight each path on both ends. Gains are Rician; an optional pathloss model
adds distance decay and log-normal shadowing on top.
"""

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 2.998e8  # m/s


@dataclass(frozen=True)
class ArrayConfig:
    """Uniform linear array: element count and spacing in wavelengths."""

    num_elements: int
    element_spacing_wavelengths: float = 0.5

    def __post_init__(self):
        if self.num_elements < 1:
            raise ValueError("array needs at least one element")
        if self.element_spacing_wavelengths <= 0:
            raise ValueError("element spacing must be positive")


class Isotropic:
    """Unit gain in every direction."""

    def __eq__(self, other):
        return isinstance(other, Isotropic)

    def __hash__(self):
        return hash("Isotropic")

    def __repr__(self):
        return "Isotropic()"


@dataclass(frozen=True)
class UniformSector:
    """Unit gain inside [lower, upper), zero outside."""

    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError("sector needs lower < upper")


@dataclass(frozen=True)
class ThreeGPP:
    """Clamped-parabola element pattern: parabolic rolloff in dB around
    boresight, floored at the front-to-back ratio, plus a maximum gain offset.

    phi_3db is the half-power beamwidth parameter in radians, front_back_db
    the floor depth A_m in dB, max_gain_dbi the boresight gain G_dB in dBi.
    """

    phi_3db: float
    front_back_db: float
    max_gain_dbi: float

    def __post_init__(self):
        if self.phi_3db <= 0:
            raise ValueError("phi_3db must be positive")
        if self.front_back_db <= 0:
            raise ValueError("front_back_db must be positive")


@dataclass(frozen=True)
class PathlossModel:
    """Distance-dependent decay with a common random exponent per realization
    and per-path log-normal shadowing."""

    distance_range: tuple  # meters, uniform draw per path
    exponent_mean: float
    exponent_std: float
    shadowing_std_db: float
    carrier_hz: float

    def __post_init__(self):
        lo, hi = self.distance_range
        if not (0 < lo <= hi):
            raise ValueError("distance range must be positive and ordered")
        if self.carrier_hz <= 0:
            raise ValueError("carrier frequency must be positive")

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.carrier_hz


@dataclass(frozen=True)
class ScenarioModel:
    """Everything the channel drawer needs to produce one realization."""

    num_paths_range: tuple  # inclusive (lo, hi) for L, discrete uniform
    angle_support: tuple  # [a, b) in radians, subset of [-pi, pi)
    angle_mode: str  # "off-grid" | "on-grid"
    rician_k_range: tuple  # [lo, hi) for kappa_l
    p_t: float  # transmit power budget, Watts
    noise_power: float  # sigma^2, Watts
    pathloss: PathlossModel | None = None

    def __post_init__(self):
        lo, hi = self.num_paths_range
        if not (1 <= lo <= hi):
            raise ValueError("num_paths_range must be ordered and >= 1")
        a, b = self.angle_support
        if not (-np.pi <= a < b <= np.pi):
            raise ValueError("angle support must be an interval inside [-pi, pi]")
        if self.angle_mode not in ("off-grid", "on-grid"):
            raise ValueError("angle_mode must be 'off-grid' or 'on-grid'")
        klo, khi = self.rician_k_range
        if not (0 <= klo <= khi):
            raise ValueError("rician_k_range must be ordered and nonnegative")
        if self.p_t <= 0 or self.noise_power < 0:
            raise ValueError("powers must be positive (noise may be zero)")


@dataclass(frozen=True)
class PathRealization:
    """One channel draw: per-path combined complex gains (the Rician
    coefficient times the delay phase times sqrt(M_T*M_R/L)), angles, and the
    aggregate path power P_alpha = sqrt(sum of per-path mean-square gains)."""

    gains: np.ndarray
    aoa: np.ndarray
    aod: np.ndarray
    p_alpha: float

    def __post_init__(self):
        if len(self.gains) < 1:
            raise ValueError("a realization needs at least one path")
        if not (len(self.gains) == len(self.aoa) == len(self.aod)):
            raise ValueError("per-path arrays must share one length")
        if self.p_alpha <= 0:
            raise ValueError("aggregate path power must be positive")

    @property
    def num_paths(self):
        return len(self.gains)


def steering_vector(array, phi):
    """ULA response toward azimuth phi, unit Euclidean norm.

    Entry m is exp(-j*2*pi*spacing*m*sin(phi)) / sqrt(M).
    """
    m = np.arange(array.num_elements)
    phase = -2j * np.pi * array.element_spacing_wavelengths * np.sin(phi)
    return np.exp(phase * m) / np.sqrt(array.num_elements)


def steering_matrix(array, phis):
    """Steering vectors for several azimuths as columns (M x len(phis))."""
    phis = np.asarray(phis, dtype=float)
    m = np.arange(array.num_elements)[:, None]
    phase = -2j * np.pi * array.element_spacing_wavelengths * np.sin(phis)[None, :]
    return np.exp(phase * m) / np.sqrt(array.num_elements)


def directivity(pattern, phi):
    """Element amplitude gain of `pattern` toward azimuth phi (vectorized)."""
    phi = np.asarray(phi, dtype=float)
    if isinstance(pattern, Isotropic):
        return np.ones_like(phi)
    if isinstance(pattern, UniformSector):
        return np.where((phi >= pattern.lower) & (phi < pattern.upper), 1.0, 0.0)
    if isinstance(pattern, ThreeGPP):
        rolloff = -0.6 * (phi / pattern.phi_3db) ** 2
        floor = -pattern.front_back_db / 20.0
        return 10.0 ** (pattern.max_gain_dbi / 20.0 + np.maximum(rolloff, floor))
    raise TypeError(f"unknown directivity pattern {pattern!r}")


def _complex_normal(mean, variance, rng):
    """CN(mean, variance) draws; real mean, circularly symmetric spread."""
    spread = np.sqrt(np.asarray(variance) / 2.0)
    z = rng.standard_normal(np.shape(mean)) + 1j * rng.standard_normal(np.shape(mean))
    return mean + spread * z


def draw_paths(scenario, num_tx, num_rx, rng, dictionaries=None):
    """Draw one path realization.

    `dictionaries` is the (tx, rx) angle-dictionary pair, required in on-grid
    mode. The angle draws go through shared uniforms (u -> a + u*(b-a) off
    grid, u -> grid[floor(u*len)] on grid) so paired comparisons of the two
    modes under one seed see the same underlying randomness.

    Draw order is fixed: L, aod uniforms, aoa uniforms, kappas, pathloss block
    (distances, exponent, shadowing), Rician gains, delay phases.
    """
    lo, hi = scenario.num_paths_range
    num_paths = int(rng.integers(lo, hi + 1))
    a, b = scenario.angle_support

    u_aod = rng.random(num_paths)
    u_aoa = rng.random(num_paths)
    if scenario.angle_mode == "on-grid":
        if dictionaries is None:
            raise ValueError("on-grid mode needs the (tx, rx) dictionary pair")
        dict_t, dict_r = dictionaries
        grid_t = np.asarray(dict_t.angles)
        grid_r = np.asarray(dict_r.angles)
        # floor(u*n) with a clamp: u < 1 but u*n can round up to n in float
        aod = grid_t[np.minimum((u_aod * len(grid_t)).astype(int), len(grid_t) - 1)]
        aoa = grid_r[np.minimum((u_aoa * len(grid_r)).astype(int), len(grid_r) - 1)]
    else:
        aod = a + u_aod * (b - a)
        aoa = a + u_aoa * (b - a)

    klo, khi = scenario.rician_k_range
    kappa = klo + (khi - klo) * rng.random(num_paths)

    if scenario.pathloss is None:
        v = np.ones(num_paths)
    else:
        pl = scenario.pathloss
        dlo, dhi = pl.distance_range
        dist = dlo + (dhi - dlo) * rng.random(num_paths)
        # one decay exponent per realization, shared by all its paths
        exponent = pl.exponent_mean + pl.exponent_std * rng.standard_normal()
        rho = (pl.wavelength / (4 * np.pi)) ** 2 * dist ** (-exponent)
        shadow_db = pl.shadowing_std_db * rng.standard_normal(num_paths)
        v = 10.0 ** ((10.0 * np.log10(rho) + shadow_db) / 10.0)

    # Rician: deterministic line-of-sight part sqrt(kappa*v/(kappa+1)) plus
    # scattered part of variance v/(kappa+1); second moment is exactly v
    alpha = _complex_normal(np.sqrt(kappa * v / (kappa + 1)), v / (kappa + 1), rng)
    delay_phase = np.exp(2j * np.pi * rng.random(num_paths))
    gains = np.sqrt(num_tx * num_rx / num_paths) * alpha * delay_phase

    return PathRealization(
        gains=gains, aoa=aoa, aod=aod, p_alpha=float(np.sqrt(v.sum()))
    )


def assemble_channel(paths, tx, rx):
    """Build the M_R x M_T channel matrix from a path realization.

    `tx` and `rx` are (ArrayConfig, DirectivityPattern) pairs. Each path
    contributes gain * c_T(aod) * c_R(aoa) * a_R(aoa) a_T(aod)^H.
    """
    tx_array, tx_pattern = tx
    rx_array, rx_pattern = rx
    a_t = steering_matrix(tx_array, paths.aod)
    a_r = steering_matrix(rx_array, paths.aoa)
    weights = paths.gains * directivity(tx_pattern, paths.aod) * directivity(
        rx_pattern, paths.aoa
    )
    return (a_r * weights) @ a_t.conj().T


def simulate_training(h, s, noise_power, rng):
    """One training block: Y = H S + N with i.i.d. CN(0, noise_power) noise."""
    h = np.asarray(h)
    s = np.asarray(s)
    if h.shape[1] != s.shape[0]:
        raise ValueError(f"H is {h.shape} but S leads with {s.shape[0]}")
    y = h @ s
    if noise_power > 0:
        y = y + _complex_normal(np.zeros(y.shape), noise_power, rng)
    return y
