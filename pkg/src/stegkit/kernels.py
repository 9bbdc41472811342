"""Backend selection for the hot kernels.

The compiled ``_speedups`` extension is used when it imports; otherwise the
numpy versions in ``_purepy`` are used. Setting ``STEGKIT_PURE_PYTHON=1``
forces the fallback. Both backends expose the same functions:

``pn_chips(seed, count)``
    ±1 chips (int8) of the 64-bit LCG pseudonoise generator.
``inet_checksum(data)``
    RFC 1071 one's-complement checksum of a byte string.
``jsteg_capacity(coeffs)`` / ``jsteg_embed(coeffs, bits)`` / ``jsteg_extract(coeffs, nbits)``
    Coefficient walk over flattened int16 zigzag blocks (64 per block),
    skipping each block's DC term and any coefficient equal to 0 or 1.
    ``jsteg_embed`` modifies ``coeffs`` in place and returns the number of
    bits written.
"""

import importlib
import os

import numpy as np

from . import _purepy

BACKENDS = ("compiled", "python")


def _load_compiled():
    try:
        return importlib.import_module("stegkit._speedups")
    except ImportError:
        return None


_compiled = _load_compiled()

if _compiled is not None and not os.environ.get("STEGKIT_PURE_PYTHON"):
    _active = _compiled
    BACKEND = "compiled"
else:
    _active = _purepy
    BACKEND = "python"


def available_backends():
    return [name for name in BACKENDS if name == "python" or _compiled is not None]


def get_backend(name):
    if name == "python":
        return _purepy
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def pn_chips(seed, count):
    return _active.pn_chips(int(seed) & 0xFFFFFFFFFFFFFFFF, int(count))


def inet_checksum(data):
    return _active.inet_checksum(np.frombuffer(bytes(data), dtype=np.uint8))


def jsteg_capacity(coeffs):
    return int(_active.jsteg_capacity(np.ascontiguousarray(coeffs, dtype=np.int16)))


def jsteg_embed(coeffs, bits):
    if coeffs.dtype != np.int16 or not coeffs.flags.c_contiguous or coeffs.ndim != 1:
        raise TypeError("coeffs must be a contiguous 1-D int16 array")
    return int(_active.jsteg_embed(coeffs, np.ascontiguousarray(bits, dtype=np.uint8)))


def jsteg_extract(coeffs, nbits):
    return np.asarray(_active.jsteg_extract(np.ascontiguousarray(coeffs, dtype=np.int16), int(nbits)))
