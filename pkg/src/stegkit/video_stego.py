"""Additive frame-domain embedding ``S = C' + alpha * b`` with known-carrier recovery.

Payload bits tile pixels in raster order, frame after frame. Bit 0/1 maps to
``b = -1/+1``. Each carrying pixel is first clamped into ``[alpha, 255 - alpha]``
(``C'``) so the modulated value never leaves the 8-bit range and the sign of
``S - C'`` always recovers the bit.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .bitcodec import bytes_of, read_frame
from .errors import BadAlpha, CapacityExceeded, DimensionMismatch, Malformed


@dataclass
class FrameSequence:
    """Grayscale frames, shape ``(n_frames, height, width)``."""

    frames: np.ndarray

    MAGIC = b"FRSQ"

    def __post_init__(self):
        f = np.asarray(self.frames)
        if f.ndim == 2:
            f = f[None]
        if f.ndim != 3 or min(f.shape) < 1:
            raise ValueError(f"expected (frames, height, width) with all dimensions >= 1, got {f.shape}")
        if f.dtype != np.uint8:
            if f.min() < 0 or f.max() > 255:
                raise ValueError("samples must lie in [0, 255]")
            f = f.astype(np.uint8)
        self.frames = f

    @property
    def n_frames(self):
        return self.frames.shape[0]

    @property
    def height(self):
        return self.frames.shape[1]

    @property
    def width(self):
        return self.frames.shape[2]

    @property
    def size(self):
        return self.frames.size

    def __eq__(self, other):
        if not isinstance(other, FrameSequence):
            return NotImplemented
        return self.frames.shape == other.frames.shape and np.array_equal(self.frames, other.frames)

    def to_bytes(self):
        return self.MAGIC + struct.pack("<III", self.width, self.height, self.n_frames) + self.frames.tobytes()

    @classmethod
    def from_bytes(cls, data):
        data = bytes(data)
        if len(data) < 16 or data[:4] != cls.MAGIC:
            raise Malformed("not an FRSQ frame file")
        w, h, n = struct.unpack_from("<III", data, 4)
        if min(w, h, n) < 1:
            raise Malformed("bad dimensions")
        if len(data) != 16 + w * h * n:
            raise Malformed(f"expected {w * h * n} frame bytes, got {len(data) - 16}")
        return cls(np.frombuffer(data, np.uint8, offset=16).reshape(n, h, w).copy())


def _check_alpha(alpha):
    if int(alpha) != alpha or not 1 <= alpha <= 127:
        raise BadAlpha(f"alpha must be an integer in [1, 127], got {alpha}")
    return int(alpha)


def _margin_clamp(values, alpha):
    return np.clip(values.astype(np.int64), alpha, 255 - alpha)


def video_embed(cover, bits, alpha):
    alpha = _check_alpha(alpha)
    bits = np.asarray(bits, dtype=np.int64)
    if len(bits) > cover.size:
        raise CapacityExceeded(f"{len(bits)} bits into {cover.size} pixels")
    flat = cover.frames.reshape(-1).astype(np.int64)
    n = len(bits)
    flat[:n] = _margin_clamp(flat[:n], alpha) + alpha * (2 * bits - 1)
    return FrameSequence(flat.reshape(cover.frames.shape))


def video_extract_known(stego, cover, alpha, bit_count):
    alpha = _check_alpha(alpha)
    if stego.frames.shape != cover.frames.shape:
        raise DimensionMismatch(f"stego {stego.frames.shape} vs cover {cover.frames.shape}")
    if bit_count > cover.size:
        raise CapacityExceeded(f"{bit_count} bits requested from {cover.size} pixels")
    s = stego.frames.reshape(-1)[:bit_count].astype(np.int64)
    c = _margin_clamp(cover.frames.reshape(-1)[:bit_count], alpha)
    return (s - c > 0).astype(np.uint8)


def video_reveal(stego, cover, alpha, key=None):
    return read_frame(lambda n: bytes_of(video_extract_known(stego, cover, alpha, n)), cover.size, key)
