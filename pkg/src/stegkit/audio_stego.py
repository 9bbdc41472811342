"""Audio techniques over 16-bit mono PCM: LSB, phase coding, DSSS and echo hiding.

All sample arithmetic rounds half away from zero and clamps to the int16 range.
"""

import struct
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bitcodec import bits_of, bytes_of, frame_encode, read_frame
from .errors import CapacityExceeded, ClipTooShort, Malformed, StrengthTooSmall, UnsupportedWav

INT16_MIN, INT16_MAX = -32768, 32767


@dataclass
class PcmClip:
    sample_rate: int
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim != 1 or s.size == 0:
            raise ValueError("samples must be a non-empty 1-D sequence")
        if s.dtype != np.int16:
            if s.min() < INT16_MIN or s.max() > INT16_MAX:
                raise ValueError("samples must fit in 16 bits")
            s = s.astype(np.int16)
        self.samples = s

    def __len__(self):
        return self.samples.size

    def __eq__(self, other):
        if not isinstance(other, PcmClip):
            return NotImplemented
        return self.sample_rate == other.sample_rate and np.array_equal(self.samples, other.samples)


def to_pcm(x):
    """Round half away from zero, clamp to int16."""
    x = np.asarray(x, dtype=np.float64)
    r = np.sign(x) * np.floor(np.abs(x) + 0.5)
    return np.clip(r, INT16_MIN, INT16_MAX).astype(np.int16)


# -- RIFF/WAVE ---------------------------------------------------------------

def wav_read(data):
    data = bytes(data)
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise Malformed("not a RIFF/WAVE file")
    riff_size = struct.unpack_from("<I", data, 4)[0]
    if riff_size != len(data) - 8:
        raise Malformed(f"RIFF size {riff_size} != {len(data) - 8}")
    pos = 12
    fmt = None
    samples = None
    while pos + 8 <= len(data):
        cid, size = struct.unpack_from("<4sI", data, pos)
        body = pos + 8
        if body + size > len(data):
            raise Malformed(f"chunk {cid!r} runs past end of file")
        if cid == b"fmt ":
            if size < 16:
                raise Malformed("fmt chunk too short")
            fmt = struct.unpack_from("<HHIIHH", data, body)
        elif cid == b"data":
            if fmt is None:
                raise Malformed("data chunk before fmt chunk")
            samples = data[body:body + size]
        pos = body + size + (size & 1)
    if pos != len(data):
        raise Malformed("trailing bytes after last chunk")
    if fmt is None or samples is None:
        raise Malformed("missing fmt or data chunk")
    tag, channels, rate, byte_rate, align, bits = fmt
    if tag != 1:
        raise UnsupportedWav(f"format tag {tag} (only PCM = 1)")
    if bits != 16:
        raise UnsupportedWav(f"{bits}-bit samples (only 16)")
    if channels != 1:
        raise UnsupportedWav(f"{channels} channels (only mono)")
    if align != 2 or byte_rate != 2 * rate:
        raise Malformed("inconsistent block align / byte rate")
    if len(samples) % 2:
        raise Malformed("odd data chunk size")
    return PcmClip(rate, np.frombuffer(samples, "<i2").astype(np.int16))


def wav_write(clip):
    body = clip.samples.astype("<i2").tobytes()
    fmt = struct.pack("<HHIIHH", 1, 1, clip.sample_rate, 2 * clip.sample_rate, 2, 16)
    chunks = b"fmt " + struct.pack("<I", len(fmt)) + fmt + b"data" + struct.pack("<I", len(body)) + body
    return b"RIFF" + struct.pack("<I", 4 + len(chunks)) + b"WAVE" + chunks


# -- LSB ---------------------------------------------------------------------

def audio_lsb_embed(cover, payload):
    bits = bits_of(payload)
    if len(bits) > len(cover):
        raise CapacityExceeded(f"{len(bits)} bits into {len(cover)} samples")
    out = cover.samples.view(np.uint16).copy()
    out[: len(bits)] = (out[: len(bits)] & 0xFFFE) | bits
    return PcmClip(cover.sample_rate, out.view(np.int16))


def audio_lsb_extract(stego, bit_count):
    if bit_count > len(stego):
        raise CapacityExceeded(f"{bit_count} bits requested from {len(stego)} samples")
    return bytes_of(stego.samples[:bit_count] & 1)


def audio_lsb_hide(cover, message, key=None):
    return audio_lsb_embed(cover, frame_encode(message, key))


def audio_lsb_reveal(stego, key=None):
    return read_frame(lambda n: audio_lsb_extract(stego, n), len(stego), key)


# -- phase coding ------------------------------------------------------------

def _check_phase_params(n_samples, segment_len, bins):
    if segment_len < 4 or segment_len & (segment_len - 1):
        raise ValueError(f"segment length must be a power of two, got {segment_len}")
    if not 1 <= bins <= segment_len // 2 - 1:
        raise ValueError(f"bins must lie in [1, {segment_len // 2 - 1}]")
    if n_samples < segment_len:
        raise ClipTooShort(f"clip of {n_samples} samples shorter than one segment ({segment_len})")


def phase_embed(cover, bits, segment_len=1024, bins=16):
    """Encode bits as +pi/2 (0) or -pi/2 (1) phases of bins 1..m of the first segment.

    Later segments keep their original phase differences relative to the
    segment before, so the relative phase structure of the clip is preserved.
    Unused bins up to ``bins`` carry 0.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    n = len(cover)
    _check_phase_params(n, segment_len, bins)
    if len(bits) > bins:
        raise CapacityExceeded(f"{len(bits)} bits but only {bins} phase bins")
    n_seg = -(-n // segment_len)
    x = np.zeros(n_seg * segment_len)
    x[:n] = cover.samples
    spectra = np.fft.rfft(x.reshape(n_seg, segment_len), axis=1)
    mag = np.abs(spectra)
    phase = np.angle(spectra)
    deltas = np.diff(phase, axis=0)

    coded = np.zeros(bins, dtype=np.uint8)
    coded[: len(bits)] = bits
    new_phase = phase.copy()
    new_phase[0, 1:bins + 1] = np.where(coded == 0, np.pi / 2, -np.pi / 2)
    for i in range(1, n_seg):
        new_phase[i] = new_phase[i - 1] + deltas[i - 1]
    y = np.fft.irfft(mag * np.exp(1j * new_phase), n=segment_len, axis=1).reshape(-1)[:n]
    return PcmClip(cover.sample_rate, to_pcm(y))


def phase_extract(stego, segment_len=1024, bins=16, bit_count=None):
    _check_phase_params(len(stego), segment_len, bins)
    bit_count = bins if bit_count is None else bit_count
    if bit_count > bins:
        raise CapacityExceeded(f"{bit_count} bits but only {bins} phase bins")
    spectrum = np.fft.rfft(stego.samples[:segment_len].astype(np.float64))
    return (np.angle(spectrum[1:bit_count + 1]) <= 0).astype(np.uint8)


# -- direct-sequence spread spectrum -----------------------------------------

class PnSequence:
    """Pseudonoise chips from a 64-bit LCG.

    ``state <- state * 6364136223846793005 + 1442695040888963407 (mod 2**64)``;
    chip ``i`` is +1 when the top bit of the state after ``i + 1`` steps is 0.
    """

    def __init__(self, seed=0):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF

    def chips(self, count):
        return kernels.pn_chips(self.seed, count)

    def __getitem__(self, i):
        return int(self.chips(i + 1)[i])


def dsss_amplitude(strength):
    amp = int(to_pcm(strength * INT16_MAX))
    if amp < 1:
        raise StrengthTooSmall(f"strength {strength} rounds to zero amplitude")
    return amp


def dsss_embed(cover, bits, pn, chips_per_bit=1024, strength=0.005):
    """Add ``A * b_i * chip_j`` to sample ``j``, where bit ``i = j // chips_per_bit`` maps 0/1 to -1/+1."""
    bits = np.asarray(bits, dtype=np.int64)
    amp = dsss_amplitude(strength)
    span = chips_per_bit * len(bits)
    if span > len(cover):
        raise CapacityExceeded(f"{len(bits)} bits x {chips_per_bit} chips > {len(cover)} samples")
    symbols = np.repeat(2 * bits - 1, chips_per_bit)
    out = cover.samples.astype(np.int64)
    out[:span] += amp * symbols * pn.chips(span)
    return PcmClip(cover.sample_rate, np.clip(out, INT16_MIN, INT16_MAX))


def _despread(signal, pn, chips_per_bit, bit_count):
    span = chips_per_bit * bit_count
    if span > len(signal):
        raise CapacityExceeded(f"{bit_count} bits x {chips_per_bit} chips > {len(signal)} samples")
    corr = (signal[:span] * pn.chips(span)).reshape(bit_count, chips_per_bit).sum(axis=1)
    return (corr > 0).astype(np.uint8)


def dsss_extract_known(stego, cover, pn, chips_per_bit, bit_count):
    """De-spread the stego/cover difference; exact whenever no sample clamped."""
    if len(stego) != len(cover):
        raise ValueError("stego and cover lengths differ")
    diff = stego.samples.astype(np.int64) - cover.samples.astype(np.int64)
    return _despread(diff, pn, chips_per_bit, bit_count)


def dsss_extract_blind(stego, pn, chips_per_bit, bit_count):
    """Best-effort correlation against the stego signal alone; no accuracy guarantee."""
    return _despread(stego.samples.astype(np.int64), pn, chips_per_bit, bit_count)


# -- echo hiding -------------------------------------------------------------

@dataclass(frozen=True)
class EchoParams:
    amplitude: float = 0.4
    delay_zero: int = 40
    delay_one: int = 80
    segment_len: int = 4096

    def __post_init__(self):
        if not 0 < self.amplitude < 1:
            raise ValueError("echo amplitude must lie in (0, 1)")
        if not 0 < self.delay_zero < self.delay_one < self.segment_len:
            raise ValueError("need 0 < delay_zero < delay_one < segment_len")


def echo_embed(cover, bits, params=EchoParams()):
    """Add ``amplitude * s[n - d]`` in each segment, ``d`` chosen by that segment's bit."""
    bits = np.asarray(bits, dtype=np.uint8)
    L = params.segment_len
    if len(bits) * L > len(cover):
        raise CapacityExceeded(f"{len(bits)} bits x {L} samples > {len(cover)}")
    s = cover.samples.astype(np.float64)
    echo0 = np.zeros_like(s)
    echo0[params.delay_zero:] = s[:-params.delay_zero]
    echo1 = np.zeros_like(s)
    echo1[params.delay_one:] = s[:-params.delay_one]
    mask = np.zeros(len(s), dtype=bool)
    mask[: len(bits) * L] = np.repeat(bits.astype(bool), L)
    echo = np.where(mask, echo1, echo0)
    echo[len(bits) * L:] = 0
    delta = to_pcm(params.amplitude * echo).astype(np.int64)
    out = cover.samples.astype(np.int64) + delta
    return PcmClip(cover.sample_rate, np.clip(out, INT16_MIN, INT16_MAX))


def real_cepstrum(segment, eps=1e-12):
    """Inverse FFT of the log power spectrum."""
    power = np.abs(np.fft.rfft(np.asarray(segment, dtype=np.float64))) ** 2
    return np.fft.irfft(np.log(power + eps), n=len(segment))


def echo_extract(stego, params=EchoParams(), bit_count=None):
    L = params.segment_len
    bit_count = len(stego) // L if bit_count is None else bit_count
    if bit_count * L > len(stego):
        raise CapacityExceeded(f"{bit_count} bits x {L} samples > {len(stego)}")
    segs = stego.samples[: bit_count * L].astype(np.float64).reshape(bit_count, L)
    power = np.abs(np.fft.rfft(segs, axis=1)) ** 2
    ceps = np.fft.irfft(np.log(power + 1e-12), n=L, axis=1)
    return (ceps[:, params.delay_zero] <= ceps[:, params.delay_one]).astype(np.uint8)


def bits_reader(extract_bits):
    """Adapt a ``bit_count -> bits`` extractor to the byte reader used by framing."""
    return lambda n: bytes_of(extract_bits(n))
