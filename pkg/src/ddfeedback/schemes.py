"""End-to-end limited-feedback protocols.

Each scheme pairs a UE-side encoder (observation matrix in, feedback payload
out) with a BS-side decoder (payload plus shared protocol objects in,
channel estimate out). Payload bit counts follow the closed-form accounting
used throughout the evaluation; shared side information (training matrix,
compression matrix, dictionaries, scalar-quantizer codebooks, noise level,
path-power bound) is deliberately not counted, and each payload records
which side information its decoder relies on.
"""

from dataclasses import dataclass, field

import numpy as np

from . import numerics, quantize, recovery

__all__ = [
    "ceil_log2",
    "bits_omp_sq",
    "bits_onebit",
    "bits_hybrid",
    "bits_ls_sq",
    "bits_ls_vq",
    "bits_omp_vq",
    "OmpSqPayload",
    "OneBitPayload",
    "HybridPayload",
    "LsSqPayload",
    "LsVqPayload",
    "ChannelEstimate",
    "ue_encode_omp_sq",
    "bs_decode_omp_sq",
    "ue_encode_onebit",
    "bs_decode_onebit",
    "ue_encode_hybrid",
    "bs_decode_hybrid",
    "ue_encode_ls_sq",
    "bs_decode_ls_sq",
    "ue_encode_ls_vq",
    "bs_decode_ls_vq",
    "serialize_payload",
    "deserialize_omp_sq",
    "deserialize_onebit",
    "deserialize_hybrid",
    "deserialize_ls_sq",
    "deserialize_ls_vq",
]


def ceil_log2(n):
    """Smallest w with 2^w >= n, the index width for n dictionary atoms."""
    if n < 1:
        raise ValueError("need a positive count")
    return int(n - 1).bit_length()


# feedback-bit formulas; support_size is the realized support (worst case
# substitutes l_bar)
def bits_omp_sq(support_size, g_size, q_bits):
    return support_size * (ceil_log2(g_size) + 2 * q_bits)


def bits_onebit(n_fb):
    return 2 * n_fb


def bits_hybrid(n_fb, support_size, g_size):
    return 2 * n_fb + support_size * ceil_log2(g_size)


def bits_ls_sq(q_bits, num_tx, num_rx):
    return 2 * q_bits * num_tx * num_rx


def bits_ls_vq(q_bits, num_tx):
    return q_bits * (num_tx - 1)


def bits_omp_vq(l_bar, g_size):
    """Reporting-only accounting for the structured-VQ baseline; the scheme
    itself is not implemented here."""
    return l_bar * (ceil_log2(g_size) + 2) + 3


def _check_support(support, g_size):
    support = np.asarray(support, dtype=int)
    if support.size:
        if support.min() < 0 or support.max() >= g_size:
            raise ValueError("support index out of range")
        if np.any(np.diff(support) <= 0):
            raise ValueError("support must be sorted and distinct")
    return support


@dataclass(frozen=True)
class OmpSqPayload:
    """Support indices plus scalar-quantized coefficients; the codebook is
    side information. value_indices holds the real-part indices for the
    support in order, then the imaginary-part indices."""

    support: np.ndarray
    value_indices: np.ndarray
    codebook: object
    g_size: int
    q_bits: int
    l_bar: int

    def __post_init__(self):
        object.__setattr__(self, "support", _check_support(self.support, self.g_size))
        object.__setattr__(
            self, "value_indices", np.asarray(self.value_indices, dtype=int)
        )
        if self.value_indices.size != 2 * self.support.size:
            raise ValueError("need one real and one imaginary index per atom")

    @property
    def bit_count(self):
        return bits_omp_sq(self.support.size, self.g_size, self.q_bits)

    @property
    def worst_case_bit_count(self):
        return bits_omp_sq(self.l_bar, self.g_size, self.q_bits)

    side_information = ("codebook", "dictionaries")


@dataclass(frozen=True)
class OneBitPayload:
    bits: quantize.SignBits

    @property
    def bit_count(self):
        return bits_onebit(self.bits.num_measurements)

    side_information = ("compression", "dictionaries", "noise_std", "path_power")


@dataclass(frozen=True)
class HybridPayload:
    """Sign bits plus the dictionary-domain support found at the UE."""

    support: np.ndarray
    bits: quantize.SignBits
    g_size: int
    l_bar: int

    def __post_init__(self):
        object.__setattr__(self, "support", _check_support(self.support, self.g_size))

    @property
    def bit_count(self):
        return bits_hybrid(self.bits.num_measurements, self.support.size, self.g_size)

    @property
    def worst_case_bit_count(self):
        return bits_hybrid(self.bits.num_measurements, self.l_bar, self.g_size)

    side_information = ("compression", "dictionaries", "noise_std", "path_power")


@dataclass(frozen=True)
class LsSqPayload:
    """Scalar-quantized entries of the least-squares estimate, real parts
    (column-major) then imaginary parts."""

    value_indices: np.ndarray
    codebook: object
    num_tx: int
    num_rx: int
    q_bits: int
    underdetermined: bool = False

    def __post_init__(self):
        object.__setattr__(
            self, "value_indices", np.asarray(self.value_indices, dtype=int)
        )
        if self.value_indices.size != 2 * self.num_tx * self.num_rx:
            raise ValueError("need indices for every real and imaginary entry")

    @property
    def bit_count(self):
        return bits_ls_sq(self.q_bits, self.num_tx, self.num_rx)

    side_information = ("codebook", "training")


@dataclass(frozen=True)
class LsVqPayload:
    psk_indices: np.ndarray
    num_tx: int
    q_bits: int

    def __post_init__(self):
        object.__setattr__(self, "psk_indices", np.asarray(self.psk_indices, dtype=int))
        if self.psk_indices.size != self.num_tx - 1:
            raise ValueError("need one PSK symbol per non-reference antenna")

    @property
    def bit_count(self):
        return bits_ls_vq(self.q_bits, self.num_tx)

    side_information = ("training",)


@dataclass(frozen=True)
class ChannelEstimate:
    h_hat: np.ndarray
    provenance: str
    diagnostics: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# reconstruction


def _reconstruct(support, values, a_tilde_t, a_tilde_r):
    """H_hat from sparse dictionary coefficients, touching only the columns
    named by the support (receive index fastest)."""
    num_rx, g_r = a_tilde_r.shape
    num_tx = a_tilde_t.shape[0]
    support = np.asarray(support, dtype=int)
    if support.size == 0:
        return np.zeros((num_rx, num_tx), dtype=complex), 0
    r_idx = support % g_r
    t_idx = support // g_r
    values = np.asarray(values, dtype=complex)
    h = a_tilde_r[:, r_idx] @ (values[:, None] * a_tilde_t[:, t_idx].conj().T)
    return h, int(support.size)


# ---------------------------------------------------------------------------
# setup 1: support + scalar-quantized values from the UE


def ue_encode_omp_sq(y_mat, q, l_bar, q_bits, eps=None, noise_std=None):
    """Sparse-estimate the dictionary coefficients at the UE, then feed back
    the support and coarsely quantized nonzero values."""
    if q_bits < 1:
        raise ValueError("q_bits must be at least 1")
    est = recovery.omp(q, numerics.vec(y_mat), l_bar, eps=eps, noise_std=noise_std)
    support = est.support
    values = est.coefficients[support]
    if support.size == 0:
        return OmpSqPayload(
            support, np.zeros(0, dtype=int), None, q.shape[1], q_bits, l_bar
        )
    pooled = np.concatenate([values.real, values.imag])
    codebook = quantize.lloyd_train(pooled, q_bits)
    value_indices = quantize.sq_apply(codebook, pooled)
    return OmpSqPayload(support, value_indices, codebook, q.shape[1], q_bits, l_bar)


def bs_decode_omp_sq(payload, a_tilde_t, a_tilde_r):
    if payload.support.size == 0:
        h = np.zeros((a_tilde_r.shape[0], a_tilde_t.shape[0]), dtype=complex)
        return ChannelEstimate(h, "omp-sq", {"columns_touched": 0})
    recon = quantize.sq_reconstruct(payload.codebook, payload.value_indices)
    k = payload.support.size
    values = recon[:k] + 1j * recon[k:]
    h, touched = _reconstruct(payload.support, values, a_tilde_t, a_tilde_r)
    return ChannelEstimate(h, "omp-sq", {"columns_touched": touched})


# ---------------------------------------------------------------------------
# setup 2: one-bit compressed feedback


def ue_encode_onebit(y_mat, p):
    return OneBitPayload(quantize.sign_quantize(p, numerics.vec(y_mat)))


def _solve_onebit(c, bits, solver, path_power, c_norm_sq):
    if isinstance(solver, recovery.CsConfig):
        return recovery.onebit_cs(c, bits, solver, path_power=path_power)
    if isinstance(solver, recovery.MleConfig):
        return recovery.mle_fista(c, bits, solver, c_norm_sq=c_norm_sq)
    raise TypeError("solver must be a CsConfig or an MleConfig")


def _estimate_from_stacked(x_hat, a_tilde_t, a_tilde_r):
    g = x_hat.size // 2
    g_hat = x_hat[:g] + 1j * x_hat[g:]
    support = np.flatnonzero(g_hat)
    h, touched = _reconstruct(support, g_hat[support], a_tilde_t, a_tilde_r)
    return h, touched, g_hat


def bs_decode_onebit(payload, c, solver, a_tilde_t, a_tilde_r,
                     path_power=None, c_norm_sq=None):
    est = _solve_onebit(c, payload.bits, solver, path_power, c_norm_sq)
    h, touched, g_hat = _estimate_from_stacked(est.coefficients, a_tilde_t, a_tilde_r)
    name = "onebit-cs" if isinstance(solver, recovery.CsConfig) else "onebit-mle"
    diagnostics = dict(est.diagnostics)
    diagnostics["columns_touched"] = touched
    diagnostics["iterations"] = est.iterations_used
    diagnostics["coefficients"] = g_hat
    return ChannelEstimate(h, name, diagnostics)


# ---------------------------------------------------------------------------
# setup 3: hybrid support + sign feedback


def ue_encode_hybrid(y_mat, q, p, l_bar, eps=None, noise_std=None):
    est = recovery.omp(q, numerics.vec(y_mat), l_bar, eps=eps, noise_std=noise_std)
    bits = quantize.sign_quantize(p, numerics.vec(y_mat))
    return HybridPayload(est.support, bits, q.shape[1], l_bar)


def bs_decode_hybrid(payload, c, solver, a_tilde_t, a_tilde_r,
                     path_power=None, c_norm_sq=None):
    g_size = payload.g_size
    if payload.support.size == 0:
        # nothing reported: fall back to the full-dimension solve
        est = _solve_onebit(c, payload.bits, solver, path_power, c_norm_sq)
        x_hat = est.coefficients
    else:
        # stack the support for real and imaginary halves
        support_x = np.concatenate([payload.support, g_size + payload.support])
        c_red = recovery.restrict_rows(c, support_x)
        est = _solve_onebit(c_red, payload.bits, solver, path_power, None)
        x_hat = recovery.embed(est.coefficients, support_x, 2 * g_size)
    h, touched, g_hat = _estimate_from_stacked(x_hat, a_tilde_t, a_tilde_r)
    name = (
        "hybrid-cs" if isinstance(solver, recovery.CsConfig) else "hybrid-mle"
    )
    diagnostics = dict(est.diagnostics)
    diagnostics["columns_touched"] = touched
    diagnostics["iterations"] = est.iterations_used
    diagnostics["coefficients"] = g_hat
    diagnostics["reduced_dimension"] = (
        2 * payload.support.size if payload.support.size else 2 * g_size
    )
    return ChannelEstimate(h, name, diagnostics)


# ---------------------------------------------------------------------------
# least-squares baselines


def _ls_soft_estimate(y_mat, s):
    """Y S^+ : exact when training spans the transmit space, minimum-norm
    otherwise."""
    y_mat = np.asarray(y_mat)
    s = np.asarray(s)
    if y_mat.shape[1] != s.shape[1]:
        raise ValueError("observation and training lengths differ")
    h_ls = numerics.apply_right_pinv(y_mat.astype(complex), s.astype(complex))
    underdetermined = s.shape[1] < s.shape[0]
    return h_ls, underdetermined


def ue_encode_ls_sq(y_mat, s, q_bits):
    h_ls, underdetermined = _ls_soft_estimate(y_mat, s)
    pooled = np.concatenate(
        [h_ls.real.ravel(order="F"), h_ls.imag.ravel(order="F")]
    )
    codebook = quantize.lloyd_train(pooled, q_bits)
    value_indices = quantize.sq_apply(codebook, pooled)
    num_rx, num_tx = h_ls.shape
    return LsSqPayload(value_indices, codebook, num_tx, num_rx, q_bits,
                       underdetermined)


def bs_decode_ls_sq(payload):
    recon = quantize.sq_reconstruct(payload.codebook, payload.value_indices)
    n = payload.num_tx * payload.num_rx
    h = (
        recon[:n].reshape((payload.num_rx, payload.num_tx), order="F")
        + 1j * recon[n:].reshape((payload.num_rx, payload.num_tx), order="F")
    )
    return ChannelEstimate(h, "ls-sq", {"underdetermined": payload.underdetermined})


def ue_encode_ls_vq(y_mat, s, q_bits):
    h_ls, _ = _ls_soft_estimate(y_mat, s)
    if h_ls.shape[0] != 1:
        raise ValueError("PSK vector quantization supports single-antenna receivers")
    indices = quantize.psk_vq(h_ls[0], q_bits)
    return LsVqPayload(indices, h_ls.shape[1], q_bits)


def bs_decode_ls_vq(payload):
    w = quantize.psk_reconstruct(payload.psk_indices, payload.q_bits)
    return ChannelEstimate(w[None, :], "ls-vq", {})


# ---------------------------------------------------------------------------
# compact bit-exact serialization
#
# MSB-first layout, padded with zeros to a whole byte:
#   omp-sq: support indices (ceil_log2 G bits each), then all real-part SQ
#           indices, then all imaginary-part indices (q_bits each)
#   onebit: sign bits in stored order, +1 -> 1, -1 -> 0
#   hybrid: support indices, then sign bits
#   ls-sq:  SQ indices in stored order (q_bits each)
#   ls-vq:  PSK indices (q_bits each)
# The unpadded length always equals the payload's bit_count.


def _fields_to_bits(values, width):
    values = np.asarray(values, dtype=np.uint64)
    if width == 0:
        return np.zeros(0, dtype=np.uint8)
    shifts = np.arange(width - 1, -1, -1, dtype=np.uint64)
    return ((values[:, None] >> shifts) & 1).astype(np.uint8).ravel()


def _bits_to_fields(bitstream, count, width, offset):
    need = offset + count * width
    if need > bitstream.size:
        raise ValueError("bitstream too short for the declared layout")
    chunk = bitstream[offset:need].reshape(count, width).astype(np.uint64)
    weights = np.uint64(1) << np.arange(width - 1, -1, -1, dtype=np.uint64)
    return (chunk * weights).sum(axis=1).astype(int), need


def _sign_to_bits(sign_bits):
    return (np.asarray(sign_bits.bits) > 0).astype(np.uint8)


def _bits_to_sign(bitstream, count, offset):
    need = offset + count
    if need > bitstream.size:
        raise ValueError("bitstream too short for the declared layout")
    chunk = bitstream[offset:need]
    return quantize.SignBits(np.where(chunk > 0, 1.0, -1.0)), need


def serialize_payload(payload):
    """Pack a payload into its compact wire format. Returns bytes whose
    unpadded bit length equals payload.bit_count."""
    if isinstance(payload, OmpSqPayload):
        w = ceil_log2(payload.g_size)
        stream = np.concatenate(
            [
                _fields_to_bits(payload.support, w),
                _fields_to_bits(payload.value_indices, payload.q_bits),
            ]
        )
    elif isinstance(payload, OneBitPayload):
        stream = _sign_to_bits(payload.bits)
    elif isinstance(payload, HybridPayload):
        w = ceil_log2(payload.g_size)
        stream = np.concatenate(
            [_fields_to_bits(payload.support, w), _sign_to_bits(payload.bits)]
        )
    elif isinstance(payload, LsSqPayload):
        stream = _fields_to_bits(payload.value_indices, payload.q_bits)
    elif isinstance(payload, LsVqPayload):
        stream = _fields_to_bits(payload.psk_indices, payload.q_bits)
    else:
        raise TypeError("unknown payload type")
    if stream.size != payload.bit_count:
        raise AssertionError("serialized length disagrees with bit accounting")
    return np.packbits(stream).tobytes()


def _bitstream(data):
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def deserialize_omp_sq(data, num_support, g_size, q_bits, codebook, l_bar):
    stream = _bitstream(data)
    w = ceil_log2(g_size)
    support, offset = _bits_to_fields(stream, num_support, w, 0)
    value_indices, _ = _bits_to_fields(stream, 2 * num_support, q_bits, offset)
    return OmpSqPayload(support, value_indices, codebook, g_size, q_bits, l_bar)


def deserialize_onebit(data, n_fb):
    bits, _ = _bits_to_sign(_bitstream(data), 2 * n_fb, 0)
    return OneBitPayload(bits)


def deserialize_hybrid(data, num_support, g_size, n_fb, l_bar):
    stream = _bitstream(data)
    w = ceil_log2(g_size)
    support, offset = _bits_to_fields(stream, num_support, w, 0)
    bits, _ = _bits_to_sign(stream, 2 * n_fb, offset)
    return HybridPayload(support, bits, g_size, l_bar)


def deserialize_ls_sq(data, q_bits, num_tx, num_rx, codebook,
                      underdetermined=False):
    stream = _bitstream(data)
    value_indices, _ = _bits_to_fields(stream, 2 * num_tx * num_rx, q_bits, 0)
    return LsSqPayload(value_indices, codebook, num_tx, num_rx, q_bits,
                       underdetermined)


def deserialize_ls_vq(data, q_bits, num_tx):
    stream = _bitstream(data)
    indices, _ = _bits_to_fields(stream, num_tx - 1, q_bits, 0)
    return LsVqPayload(indices, num_tx, q_bits)
