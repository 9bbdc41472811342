"""Transform-domain embedding in quantized 8x8 DCT coefficients.

Pipeline: luma conversion, edge-replicated padding to multiples of 8, level
shift by -128, orthonormal 2-D DCT-II per block, quantization, then parity
substitution in the quantized coefficients. Blocks are walked left-to-right,
top-to-bottom; coefficients within a block in zigzag order. The DC term and
any coefficient equal to 0 or 1 is skipped on both embed and extract, which
keeps the two walks synchronized.

The result is kept as quantized coefficients in a small ``QDCT`` container
instead of an entropy-coded JPEG stream.
"""

import struct
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bitcodec import bits_of, bytes_of, read_frame
from .errors import CapacityExceeded, Malformed
from .image_stego import PixelImage

BLOCK = 8

# natural (row-major) index of each zigzag position
ZIGZAG = np.array([
    0, 1, 8, 16, 9, 2, 3, 10, 17, 24, 32, 25, 18, 11, 4, 5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6, 7, 14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
])
UNZIGZAG = np.argsort(ZIGZAG)

LUMINANCE_TABLE = np.array([
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99],
], dtype=np.int64)


def _dct_matrix(n=BLOCK):
    k = np.arange(n)[:, None]
    x = np.arange(n)[None, :]
    m = np.cos(np.pi * (2 * x + 1) * k / (2 * n)) * np.sqrt(2.0 / n)
    m[0] /= np.sqrt(2.0)
    return m


DCT_MATRIX = _dct_matrix()


def dct_forward(block):
    """Level-shifted orthonormal DCT-II of one or more 8x8 blocks (last two axes)."""
    shifted = np.asarray(block, dtype=np.float64) - 128.0
    return DCT_MATRIX @ shifted @ DCT_MATRIX.T


def dct_inverse(coeffs):
    return DCT_MATRIX.T @ np.asarray(coeffs, dtype=np.float64) @ DCT_MATRIX + 128.0


def round_half_away(x):
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def quantize(coeffs, table=LUMINANCE_TABLE):
    return round_half_away(np.asarray(coeffs) / np.asarray(table)).astype(np.int64)


def dequantize(block, table=LUMINANCE_TABLE):
    return np.asarray(block, dtype=np.float64) * np.asarray(table)


def _check_table(table):
    table = np.asarray(table, dtype=np.int64)
    if table.shape != (BLOCK, BLOCK):
        raise ValueError("quantization table must be 8x8")
    if table.min() < 1 or table.max() > 255:
        raise ValueError("quantization table entries must lie in [1, 255]")
    return table


@dataclass
class QdctContainer:
    """Quantized coefficients of a grayscale image.

    ``width``/``height`` are the original image dimensions; blocks cover the
    image padded up to multiples of 8. ``blocks`` has shape ``(n_blocks, 64)``
    in zigzag order, blocks in raster order.
    """

    width: int
    height: int
    table: np.ndarray
    blocks: np.ndarray

    MAGIC = b"QDCT"
    VERSION = 1

    def __post_init__(self):
        self.table = _check_table(self.table)
        self.blocks = np.ascontiguousarray(self.blocks, dtype=np.int16).reshape(-1, 64)
        if self.blocks.shape[0] != self.blocks_wide * self.blocks_high:
            raise Malformed(f"{self.blocks.shape[0]} blocks for a "
                            f"{self.blocks_wide}x{self.blocks_high} block grid")

    @property
    def blocks_wide(self):
        return -(-self.width // BLOCK)

    @property
    def blocks_high(self):
        return -(-self.height // BLOCK)

    def to_bytes(self):
        head = self.MAGIC + struct.pack("<BII", self.VERSION, self.width, self.height)
        table = self.table.reshape(-1)[ZIGZAG].astype(np.uint8).tobytes()
        return head + table + self.blocks.astype("<i2").tobytes()

    @classmethod
    def from_bytes(cls, data):
        data = bytes(data)
        if len(data) < 13 + 64 or data[:4] != cls.MAGIC:
            raise Malformed("not a QDCT container")
        version, width, height = struct.unpack_from("<BII", data, 4)
        if version != cls.VERSION:
            raise Malformed(f"unsupported QDCT version {version}")
        if width < 1 or height < 1:
            raise Malformed("bad dimensions")
        zz = np.frombuffer(data, np.uint8, 64, 13).astype(np.int64)
        table = zz[UNZIGZAG].reshape(BLOCK, BLOCK)
        n = (-(-width // BLOCK)) * (-(-height // BLOCK))
        body = data[13 + 64:]
        if len(body) != n * 128:
            raise Malformed(f"expected {n * 128} bytes of blocks, got {len(body)}")
        blocks = np.frombuffer(body, "<i2").reshape(n, 64)
        return cls(width, height, table, blocks)

    def __eq__(self, other):
        if not isinstance(other, QdctContainer):
            return NotImplemented
        return (self.width, self.height) == (other.width, other.height) and \
            np.array_equal(self.table, other.table) and np.array_equal(self.blocks, other.blocks)


def to_luma(image):
    if image.channels == 1:
        return image.samples[:, :, 0].astype(np.int64)
    rgb = image.samples.astype(np.float64)
    luma = 0.299 * rgb[:, :, 0] + 0.587 * rgb[:, :, 1] + 0.114 * rgb[:, :, 2]
    return np.clip(np.floor(luma + 0.5), 0, 255).astype(np.int64)


def _to_blocks(plane):
    h, w = plane.shape
    return plane.reshape(h // BLOCK, BLOCK, w // BLOCK, BLOCK).swapaxes(1, 2).reshape(-1, BLOCK, BLOCK)


def _from_blocks(blocks, bh, bw):
    return blocks.reshape(bh, bw, BLOCK, BLOCK).swapaxes(1, 2).reshape(bh * BLOCK, bw * BLOCK)


def analyze(cover, table=None):
    """Quantized coefficients of ``cover`` with nothing embedded."""
    table = _check_table(LUMINANCE_TABLE if table is None else table)
    plane = to_luma(cover)
    h, w = plane.shape
    padded = np.pad(plane, ((0, -h % BLOCK), (0, -w % BLOCK)), mode="edge")
    q = quantize(dct_forward(_to_blocks(padded)), table)
    zz = q.reshape(-1, 64)[:, ZIGZAG]
    return QdctContainer(w, h, table, zz)


def capacity(container):
    """Number of usable coefficients (one payload bit each)."""
    return kernels.jsteg_capacity(container.blocks.reshape(-1))


def dct_embed(cover, payload, table=None):
    """Embed ``payload`` bytes (normally a frame) into the quantized coefficients of ``cover``."""
    container = analyze(cover, table)
    bits = bits_of(payload)
    flat = container.blocks.reshape(-1)
    usable = kernels.jsteg_capacity(flat)
    if len(bits) > usable:
        raise CapacityExceeded(f"{len(bits)} bits but only {usable} usable coefficients")
    kernels.jsteg_embed(flat, bits)
    return container


def dct_extract_bits(container, bit_count):
    return kernels.jsteg_extract(container.blocks.reshape(-1), bit_count)


def dct_extract(container, key=None):
    """Read a frame from the coefficient walk and return the decoded message."""
    flat = container.blocks.reshape(-1)
    return read_frame(lambda n: bytes_of(kernels.jsteg_extract(flat, n)),
                      kernels.jsteg_capacity(flat), key)


def dct_reconstruct(container):
    natural = container.blocks.astype(np.int64)[:, UNZIGZAG].reshape(-1, BLOCK, BLOCK)
    pixels = dct_inverse(dequantize(natural, container.table))
    plane = _from_blocks(pixels, container.blocks_high, container.blocks_wide)
    plane = np.clip(round_half_away(plane), 0, 255).astype(np.uint8)
    return PixelImage(plane[: container.height, : container.width])
