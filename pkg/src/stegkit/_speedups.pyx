# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the loop-bound kernels; see stegkit.kernels."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, uint16_t, int16_t, uint8_t, int8_t

cnp.import_array()

cdef uint64_t LCG_MUL = 6364136223846793005ULL
cdef uint64_t LCG_INC = 1442695040888963407ULL


cdef enum:
    LANES = 8


def pn_chips(uint64_t seed, Py_ssize_t count):
    cdef cnp.ndarray[int8_t, ndim=1] out = np.empty(count, dtype=np.int8)
    cdef int8_t[::1] view = out
    cdef uint64_t lane[LANES]
    cdef uint64_t mul = 1, inc = 0, state = seed
    cdef Py_ssize_t i, j, head = min(count, LANES)
    # first LANES states serially, then leapfrog: s[i + LANES] = mul * s[i] + inc
    for j in range(LANES):
        state = state * LCG_MUL + LCG_INC
        lane[j] = state
        inc = inc * LCG_MUL + LCG_INC
        mul = mul * LCG_MUL
    for j in range(head):
        view[j] = 1 - 2 * <int8_t>(lane[j] >> 63)
    i = LANES
    while i + LANES <= count:
        for j in range(LANES):
            lane[j] = lane[j] * mul + inc
            view[i + j] = 1 - 2 * <int8_t>(lane[j] >> 63)
        i += LANES
    for j in range(count - i):
        lane[j] = lane[j] * mul + inc
        view[i + j] = 1 - 2 * <int8_t>(lane[j] >> 63)
    return out


def inet_checksum(const uint8_t[::1] data):
    cdef Py_ssize_t n = data.shape[0]
    cdef Py_ssize_t i
    # 64-bit accumulator cannot overflow below 2**48 words; fold once at the end
    cdef uint64_t total = 0
    for i in range(0, n - 1, 2):
        total += (<uint64_t>data[i] << 8) | data[i + 1]
    if n & 1:
        total += <uint64_t>data[n - 1] << 8
    while total > 0xFFFF:
        total = (total & 0xFFFF) + (total >> 16)
    return (~total) & 0xFFFF


cdef inline bint _usable(Py_ssize_t i, int16_t c) nogil:
    # c not in {0, 1}  <=>  c as unsigned exceeds 1
    return ((i & 63) != 0) & (<uint16_t>c > 1)


def jsteg_capacity(const int16_t[::1] coeffs):
    cdef Py_ssize_t b, j, size = coeffs.shape[0]
    cdef Py_ssize_t n = 0
    # per-block AC loop without the index test, so the compiler can vectorize it
    for b in range(0, size, 64):
        for j in range(b + 1, min(b + 64, size)):
            n += <uint16_t>coeffs[j] > 1
    return n


def jsteg_embed(int16_t[::1] coeffs, const uint8_t[::1] bits):
    cdef Py_ssize_t i, k = 0, nbits = bits.shape[0]
    cdef int c, r
    for i in range(coeffs.shape[0]):
        if k >= nbits:
            break
        c = coeffs[i]
        if not _usable(i, <int16_t>c):
            continue
        r = c - (c & 1) + (bits[k] & 1)
        if r == 0:
            r = 2 if c > 0 else -2
        elif r == 1:
            r = 3
        coeffs[i] = <int16_t>r
        k += 1
    return k


def jsteg_extract(const int16_t[::1] coeffs, Py_ssize_t nbits):
    # one spare slot lets the loop store unconditionally
    cdef cnp.ndarray[uint8_t, ndim=1] out = np.empty(nbits + 1, dtype=np.uint8)
    cdef uint8_t[::1] view = out
    cdef Py_ssize_t i, k = 0, n = coeffs.shape[0]
    cdef int16_t c
    for i in range(n):
        if k >= nbits:
            break
        c = coeffs[i]
        view[k] = c & 1
        k += _usable(i, c)
    return out[:k]
