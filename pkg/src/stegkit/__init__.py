"""Multi-cover steganography toolkit.

Embedding and extraction over text, BMP images, quantized DCT blocks, PCM
audio, raw video frames and IPv4/TCP/UDP/ICMP headers, plus a steganalysis
battery for detecting those embeddings.
"""

from . import errors
from .bitcodec import frame_decode, frame_encode
from .kernels import BACKEND

__all__ = ["BACKEND", "errors", "frame_decode", "frame_encode"]
__version__ = "0.1.0"
