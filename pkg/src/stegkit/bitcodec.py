"""Message framing, bit streams and the optional repeating-key XOR transform.

Every channel carries a frame::

    b"SG" | length (u32, big-endian) | payload

The magic doubles as the "no hidden message" signal, and the length tells an
extractor where to stop. Bits are always most-significant first.
"""

import struct

import numpy as np

from .errors import BadMagic, Truncated

MAGIC = b"SG"
HEADER_SIZE = 6
HEADER_BITS = 8 * HEADER_SIZE


def _check_key(key):
    if key is not None and len(key) == 0:
        raise ValueError("stego key must be non-empty or None")


def xor_key(data, key=None):
    """Repeating-key XOR; the identity when ``key`` is None. Applying it twice is a no-op."""
    _check_key(key)
    data = bytes(data)
    if key is None or not data:
        return data
    buf = np.frombuffer(data, dtype=np.uint8)
    k = np.frombuffer(bytes(key), dtype=np.uint8)
    return (buf ^ np.resize(k, buf.shape)).tobytes()


def frame_encode(message, key=None):
    message = bytes(message)
    if len(message) >= 1 << 32:
        raise ValueError("message too long for a 32-bit length field")
    return MAGIC + struct.pack(">I", len(message)) + xor_key(message, key)


def frame_length(header):
    """Validate a 6-byte frame header and return the payload length it declares."""
    header = bytes(header)
    if len(header) < HEADER_SIZE or header[:2] != MAGIC:
        raise BadMagic("no frame magic found")
    return struct.unpack(">I", header[2:HEADER_SIZE])[0]


def frame_decode(data, key=None):
    """Inverse of :func:`frame_encode`. Bytes past the declared length are ignored."""
    data = bytes(data)
    length = frame_length(data)
    if HEADER_SIZE + length > len(data):
        raise Truncated(f"frame declares {length} bytes, only {len(data) - HEADER_SIZE} available")
    return xor_key(data[HEADER_SIZE:HEADER_SIZE + length], key)


def read_frame(read_bits, capacity_bits, key=None):
    """Two-phase extraction: read the header, then exactly the declared body.

    ``read_bits(n)`` must return the first ``n`` carried bits packed into bytes.
    """
    if capacity_bits < HEADER_BITS:
        raise BadMagic("medium too small to hold a frame header")
    length = frame_length(read_bits(HEADER_BITS))
    total = HEADER_BITS + 8 * length
    if total > capacity_bits:
        raise Truncated(f"frame declares {length} bytes but the medium carries at most "
                        f"{(capacity_bits - HEADER_BITS) // 8}")
    return frame_decode(read_bits(total), key)


def bits_of(data):
    """MSB-first bit expansion of a byte string as a uint8 array of 0/1."""
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))


def bytes_of(bits):
    """Pack 0/1 values MSB-first; a trailing partial byte is zero-padded."""
    return np.packbits(np.asarray(bits, dtype=np.uint8) & 1).tobytes()


class BitStream:
    """Cursor over a sequence of bits."""

    def __init__(self, bits=()):
        self.bits = np.asarray(bits, dtype=np.uint8)
        self.cursor = 0

    @classmethod
    def from_bytes(cls, data):
        return cls(bits_of(data))

    def __len__(self):
        return len(self.bits)

    @property
    def remaining(self):
        return len(self.bits) - self.cursor

    def read(self, n):
        if n > self.remaining:
            raise Truncated(f"requested {n} bits, {self.remaining} remaining")
        out = self.bits[self.cursor:self.cursor + n]
        self.cursor += n
        return out

    def read_int(self, n):
        value = 0
        for b in self.read(n):
            value = (value << 1) | int(b)
        return value

    def to_bytes(self):
        return bytes_of(self.bits)
