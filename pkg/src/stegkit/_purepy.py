"""Numpy implementations of the hot kernels, used when the extension is unavailable."""

import numpy as np

LCG_MUL = np.uint64(6364136223846793005)
LCG_INC = np.uint64(1442695040888963407)


def pn_chips(seed, count):
    # state_i = a^i * seed + c * (a^0 + ... + a^(i-1)) mod 2^64, unrolled via cumulative ops
    if count == 0:
        return np.empty(0, dtype=np.int8)
    with np.errstate(over="ignore"):
        powers = np.cumprod(np.full(count, LCG_MUL, dtype=np.uint64))
        geometric = np.cumsum(np.concatenate(([np.uint64(1)], powers[:-1])), dtype=np.uint64)
        states = powers * np.uint64(seed) + LCG_INC * geometric
    return np.where(states >> np.uint64(63), -1, 1).astype(np.int8)


def inet_checksum(data):
    data = bytes(data)
    if len(data) % 2:
        data += b"\x00"
    total = int(np.frombuffer(data, dtype=">u2").sum(dtype=np.uint64))
    while total > 0xFFFF:
        total = (total & 0xFFFF) + (total >> 16)
    return ~total & 0xFFFF


def _usable_mask(coeffs):
    mask = (coeffs != 0) & (coeffs != 1)
    mask[::64] = False
    return mask


def jsteg_capacity(coeffs):
    return int(np.count_nonzero(_usable_mask(coeffs)))


def jsteg_embed(coeffs, bits):
    # writes never change usability of a coefficient, so the walk can be resolved up front
    idx = np.flatnonzero(_usable_mask(coeffs))[: len(bits)]
    c = coeffs[idx].astype(np.int32)
    r = c - (c & 1) + (np.asarray(bits[: len(idx)], dtype=np.int32) & 1)
    r = np.where(r == 0, np.where(c > 0, 2, -2), r)
    r = np.where(r == 1, 3, r)
    coeffs[idx] = r.astype(np.int16)
    return len(idx)


def jsteg_extract(coeffs, nbits):
    idx = np.flatnonzero(_usable_mask(coeffs))[:nbits]
    return (coeffs[idx] & 1).astype(np.uint8)
