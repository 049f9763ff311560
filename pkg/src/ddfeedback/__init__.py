"""Sparse double-directional MIMO channel estimation from limited feedback.

A base station sounds the downlink with training symbols, the user equipment
sends back a small number of bits describing what it saw, and the base station
reconstructs the channel from those bits. The library covers the whole loop:

- ``channel``: double-directional multipath channel realizations (uniform
  linear arrays, per-element directivity patterns, Rician gains, optional
  distance-based pathloss and shadowing).
- ``dictionary``: uniform and directivity-companded angle grids plus every
  derived protocol matrix (steering dictionaries, sensing matrix, DFT
  compression, real-stacked measurement matrix).
- ``quantize``: Lloyd-Max scalar codebooks, PSK vector quantization, and the
  one-bit sign quantizer.
- ``recovery``: OMP, the one-bit compressed-sensing closed form, and the
  one-bit sparse maximum-likelihood solver (FISTA with adaptive restart).
- ``schemes``: end-to-end feedback protocols with exact bit accounting and a
  compact serialized payload layout.
- ``metrics``: NRMSE, beamforming gain, ZF precoding, SINR and sum rate.
- ``harness``: Monte-Carlo experiment runner with deterministic seeding,
  presets, and CSV emission. CLI entry point in ``ddfeedback.cli``.
"""

__version__ = "0.1.0"
