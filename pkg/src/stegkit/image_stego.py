"""Uncompressed BMP container and spatial-domain LSB embedding.

Samples are walked in raster order from the top-left pixel, channels R, G, B
within a pixel. For palettized images the palette indices are the samples.
"""

import struct
from dataclasses import dataclass, field

import numpy as np

from .bitcodec import bits_of, bytes_of, frame_encode, read_frame
from .errors import CapacityExceeded, Malformed, UnsupportedBmp

_FILE_HEADER = struct.Struct("<2sIHHI")
_INFO_HEADER = struct.Struct("<IiiHHIIiiII")


@dataclass
class PixelImage:
    """Raster of 8-bit samples, shape ``(height, width, channels)``."""

    samples: np.ndarray
    palette: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim == 2:
            s = s[:, :, None]
        if s.ndim != 3 or s.shape[2] not in (1, 3):
            raise ValueError(f"expected (height, width, 1|3) samples, got shape {s.shape}")
        if s.shape[0] < 1 or s.shape[1] < 1:
            raise ValueError("image dimensions must be positive")
        if s.dtype != np.uint8:
            if s.size and (s.min() < 0 or s.max() > 255):
                raise ValueError("samples must lie in [0, 255]")
            s = s.astype(np.uint8)
        self.samples = s

    @property
    def height(self):
        return self.samples.shape[0]

    @property
    def width(self):
        return self.samples.shape[1]

    @property
    def channels(self):
        return self.samples.shape[2]

    @property
    def size(self):
        return self.samples.size

    def flat(self):
        return self.samples.reshape(-1)

    def replace(self, samples):
        return PixelImage(np.asarray(samples, dtype=np.uint8).reshape(self.samples.shape), self.palette)

    def __eq__(self, other):
        if not isinstance(other, PixelImage):
            return NotImplemented
        return self.samples.shape == other.samples.shape and bool(np.array_equal(self.samples, other.samples))


def _row_stride(width, bpp):
    return (width * bpp // 8 + 3) & ~3


def bmp_read(data):
    data = bytes(data)
    if len(data) < _FILE_HEADER.size + _INFO_HEADER.size:
        raise Malformed("file shorter than BMP headers")
    magic, file_size, _, _, offset = _FILE_HEADER.unpack_from(data, 0)
    if magic != b"BM":
        raise Malformed("missing BM signature")
    if file_size != len(data):
        raise Malformed(f"declared file size {file_size} != actual {len(data)}")
    (hdr_size, width, height, planes, bpp, compression,
     _, _, _, colors_used, _) = _INFO_HEADER.unpack_from(data, _FILE_HEADER.size)
    if hdr_size < _INFO_HEADER.size:
        raise UnsupportedBmp(f"info header of {hdr_size} bytes not supported")
    if compression != 0:
        raise UnsupportedBmp(f"compression {compression} not supported")
    if bpp not in (8, 24):
        raise UnsupportedBmp(f"{bpp} bits per pixel not supported")
    if width <= 0 or height == 0 or planes != 1:
        raise Malformed("bad dimensions or plane count")
    top_down = height < 0
    height = abs(height)
    stride = _row_stride(width, bpp)
    if offset + stride * height > len(data):
        raise Malformed("pixel data runs past end of file")
    palette = None
    if bpp == 8:
        n_colors = colors_used or 256
        pal_start = _FILE_HEADER.size + hdr_size
        if pal_start + 4 * n_colors > offset:
            raise Malformed("palette overlaps pixel data")
        pal = np.frombuffer(data, np.uint8, 4 * n_colors, pal_start).reshape(n_colors, 4)
        palette = pal[:, 2::-1].copy()  # BGRX -> RGB
    rows = np.frombuffer(data, np.uint8, stride * height, offset).reshape(height, stride)
    pixels = rows[:, : width * bpp // 8]
    if not top_down:
        pixels = pixels[::-1]
    if bpp == 24:
        samples = pixels.reshape(height, width, 3)[:, :, ::-1]
    else:
        samples = pixels.reshape(height, width, 1)
    return PixelImage(samples.copy(), palette)


def bmp_write(image):
    """Serialize as a bottom-up BMP: 24-bit for RGB, 8-bit palettized for one channel."""
    h, w, ch = image.samples.shape
    bpp = 24 if ch == 3 else 8
    stride = _row_stride(w, bpp)
    palette = b""
    if bpp == 8:
        pal = image.palette if image.palette is not None else np.repeat(np.arange(256, dtype=np.uint8)[:, None], 3, 1)
        quad = np.zeros((len(pal), 4), dtype=np.uint8)
        quad[:, :3] = np.asarray(pal, dtype=np.uint8)[:, ::-1]
        palette = quad.tobytes()
    pixels = image.samples[::-1]
    if bpp == 24:
        pixels = pixels[:, :, ::-1]
    rows = np.zeros((h, stride), dtype=np.uint8)
    rows[:, : w * bpp // 8] = pixels.reshape(h, -1)
    offset = _FILE_HEADER.size + _INFO_HEADER.size + len(palette)
    body = rows.tobytes()
    n_colors = len(palette) // 4
    header = _FILE_HEADER.pack(b"BM", offset + len(body), 0, 0, offset)
    info = _INFO_HEADER.pack(_INFO_HEADER.size, w, h, 1, bpp, 0, len(body), 2835, 2835, n_colors, 0)
    return header + info + palette + body


def lsb_capacity(image):
    return image.size


def lsb_embed(cover, payload):
    """Replace the LSB of sample ``i`` with payload bit ``i``; other bits are untouched."""
    bits = bits_of(payload)
    flat = cover.flat().copy()
    if len(bits) > flat.size:
        raise CapacityExceeded(f"{len(bits)} bits into {flat.size} samples")
    flat[: len(bits)] = (flat[: len(bits)] & 0xFE) | bits
    return cover.replace(flat)


def lsb_extract(stego, bit_count):
    flat = stego.flat()
    if bit_count > flat.size:
        raise CapacityExceeded(f"{bit_count} bits requested from {flat.size} samples")
    return bytes_of(flat[:bit_count] & 1)


def lsb_hide(cover, message, key=None):
    return lsb_embed(cover, frame_encode(message, key))


def lsb_reveal(stego, key=None):
    return read_frame(lambda n: lsb_extract(stego, n), stego.size, key)


def psnr(a, b, peak=255.0):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    mse = np.mean((a - b) ** 2)
    if mse == 0:
        return float("inf")
    return float(10 * np.log10(peak * peak / mse))
