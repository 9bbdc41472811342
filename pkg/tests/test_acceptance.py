"""Acceptance battery. Each test carries a ``criterion`` mark; the terminal
summary prints one PASS/FAIL line per criterion with the measured figures."""

import time

import numpy as np
import pytest
from scipy import signal

from conftest import PHOTO_COVERS
from stegkit import audio_stego as A
from stegkit import dct_stego as D
from stegkit import net
from stegkit.bitcodec import bits_of, frame_decode, frame_encode
from stegkit.errors import BadMagic, ChecksumMismatch
from stegkit.image_stego import PixelImage, lsb_embed, lsb_extract, lsb_hide, lsb_reveal, psnr
from stegkit.steganalysis import lsb_chi_square, lsb_scrub, whitespace_scan
from stegkit.text_stego import charkey_extract, gap_capacity, gap_embed
from stegkit.video_stego import FrameSequence, video_embed, video_extract_known

CASES = 200


@pytest.fixture
def measured(request):
    return lambda text: request.node.user_properties.append(("measured", text))


def best_ms(fn, repeat=20):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return 1e3 * min(times)


# -- 1: worked examples ----------------------------------------------------------

@pytest.mark.criterion("1a", "image LSB 8-pixel example, exact, < 1 ms")
def test_1a_image_lsb_example(measured):
    cover = PixelImage(np.array([[0b00100111, 0b11101001, 0b11001000, 0b00100111,
                                  0b11001000, 0b11101001, 0b11001000, 0b00100111]], np.uint8))
    expected = [0b00100110, 0b11101001, 0b11001001, 0b00100110,
                0b11001000, 0b11101001, 0b11001000, 0b00100111]
    assert lsb_embed(cover, bytes([0b01100101])).flat().tolist() == expected
    ms = best_ms(lambda: lsb_embed(cover, bytes([0b01100101])))
    measured(f"{ms:.3f} ms")
    assert ms < 1


@pytest.mark.criterion("1b", "audio LSB 8-sample table, exact, < 1 ms")
def test_1b_audio_lsb_table(measured):
    cover = ["1001100000111100", "1101101100111000", "1011110000111101", "1011111100111100",
             "1011101001111111", "1111100000111100", "1101110001111000", "1000100000011111"]
    stego = ["1001100000111100", "1101101100111001", "1011110000111101", "1011111100111100",
             "1011101001111110", "1111100000111101", "1101110001111000", "1000100000011111"]
    as16 = lambda rows: np.array([int(r, 2) for r in rows], np.uint16).view(np.int16)
    clip = A.PcmClip(44100, as16(cover))
    bits = bytes([0b01100101])
    out = A.audio_lsb_embed(clip, bits)
    assert [format(v, "016b") for v in out.samples.view(np.uint16)] == stego
    ms = best_ms(lambda: A.audio_lsb_embed(clip, bits))
    measured(f"{ms:.3f} ms")
    assert ms < 1


@pytest.mark.criterion("1c", "text selected-character example, exact, < 1 ms")
def test_1c_text_example(measured):
    args = ("A team of five men joined today", [1, 1, 2, 3, 4, 2, 4])
    assert charkey_extract(*args) == "Atfvoa"
    ms = best_ms(lambda: charkey_extract(*args))
    measured(f"{ms:.3f} ms")
    assert ms < 1


@pytest.mark.criterion("1d", "DF channel flag bits 010 / 000, offset 0, < 1 ms")
def test_1d_df_flags(measured):
    template = net.Ipv4Header(total_length=576)
    one, zero = net.df_channel_encode([1, 0], template, 1500)
    for h, flags in ((one, 0b010), (zero, 0b000)):
        wire = h.to_bytes()
        assert wire[6] >> 5 == flags
        assert int.from_bytes(wire[6:8], "big") & 0x1FFF == 0
    ms = best_ms(lambda: net.df_channel_encode([1, 0], template, 1500))
    measured(f"{ms:.3f} ms")
    assert ms < 1


@pytest.mark.criterion("1e", "ISN handshake ack arithmetic on 1000 random ISNs, < 100 ms")
def test_1e_isn_handshake(measured):
    rng = np.random.default_rng(1)
    isns = rng.integers(0, 2**32, 1000).tolist()
    server_isns = rng.integers(0, 2**32, 1000).tolist()

    def run():
        out = []
        for w, s in zip(isns, server_isns):
            out.append(net.isn_channel_connect(w, net.HandshakeState(net.Role.CLIENT),
                                               net.HandshakeState(net.Role.SERVER, isn=s)))
        return out

    t = time.perf_counter()
    traces = run()
    ms = 1e3 * (time.perf_counter() - t)
    for w, s, (syn, synack, ack) in zip(isns, server_isns, traces):
        assert syn.sequence_number == w
        assert synack.ack_number == (w + 1) % 2**32
        assert synack.sequence_number == s
        assert ack.ack_number == (s + 1) % 2**32
    measured(f"{ms:.1f} ms")
    assert ms < 100


# -- 2: round-trip suites --------------------------------------------------------

def _frame(rng):
    msg = rng.bytes(int(rng.integers(0, 300)))
    key = rng.bytes(int(rng.integers(1, 9))) if rng.random() < 0.5 else None
    return frame_decode(frame_encode(msg, key), key) == msg


def _image_lsb(rng):
    h, w = (int(v) for v in rng.integers(1, 65, 2))
    cover = PixelImage(rng.integers(0, 256, (h, w, int(rng.choice([1, 3]))), dtype=np.uint8))
    payload = rng.bytes(int(rng.integers(0, cover.size // 8 + 1)))
    return lsb_extract(lsb_embed(cover, payload), 8 * len(payload)) == payload


def _dct(rng, covers):
    cap = -1
    while cap < 0:  # smooth crops may not even hold a frame header
        source = covers[PHOTO_COVERS[int(rng.integers(len(PHOTO_COVERS)))]]
        h, w = (int(v) for v in rng.integers(24, 97, 2))
        y, x = int(rng.integers(0, 257 - h)), int(rng.integers(0, 257 - w))
        cover = PixelImage(source.samples[y:y + h, x:x + w])
        cap = D.capacity(D.analyze(cover)) // 8 - 6
    msg = rng.bytes(int(rng.integers(0, cap + 1)))
    return D.dct_extract(D.QdctContainer.from_bytes(D.dct_embed(cover, frame_encode(msg)).to_bytes())) == msg


def _audio_lsb(rng):
    clip = A.PcmClip(8000, rng.integers(-32768, 32768, int(rng.integers(1, 4000))))
    payload = rng.bytes(int(rng.integers(0, len(clip) // 8 + 1)))
    return A.audio_lsb_extract(A.audio_lsb_embed(clip, payload), 8 * len(payload)) == payload


def _phase(rng):
    clip = A.PcmClip(44100, rng.integers(-8000, 8000, int(rng.integers(4096, 4096 * 3))))
    bits = rng.integers(0, 2, int(rng.integers(0, 17)))
    return np.array_equal(A.phase_extract(A.phase_embed(clip, bits), bit_count=len(bits)), bits)


def _dsss(rng):
    c = int(rng.choice([64, 256, 1024]))
    n = int(rng.integers(1, 65))
    clip = A.PcmClip(44100, rng.integers(-20000, 20000, c * n + int(rng.integers(0, 100))))
    bits = rng.integers(0, 2, n)
    pn = A.PnSequence(int(rng.integers(0, 2**63)))
    stego = A.dsss_embed(clip, bits, pn, c, 0.005)
    return np.array_equal(A.dsss_extract_known(stego, clip, pn, c, n), bits)


def _echo_impulse(rng):
    n = int(rng.integers(1, 9))
    x = np.zeros(n * 4096)
    pos = np.arange(n) * 4096 + rng.integers(0, 4096 - 81, n)
    x[pos] = rng.choice([-1, 1], n) * rng.integers(1000, 30000, n)
    bits = rng.integers(0, 2, n)
    stego = A.echo_embed(A.PcmClip(44100, x), bits)
    return np.array_equal(A.echo_extract(stego, bit_count=n), bits)


def _video(rng):
    cover = FrameSequence(rng.integers(0, 256, tuple(int(v) for v in rng.integers(1, 17, 3)), dtype=np.uint8))
    alpha = int(rng.integers(1, 128))
    bits = rng.integers(0, 2, int(rng.integers(0, cover.size + 1)))
    return np.array_equal(video_extract_known(video_embed(cover, bits, alpha), cover, alpha, len(bits)), bits)


def _wire(items):
    delivered, events = net.path_transmit(items, net.PathConfig(mtu=1500))
    assert not events
    return [net.Datagram.from_bytes(d.to_bytes()) for d in delivered]


def _channels(rng):
    template = net.Ipv4Header(total_length=int(rng.integers(60, 1500)), flag_df=1,
                              src_addr=int(rng.integers(0, 2**32)), dst_addr=int(rng.integers(0, 2**32)))
    payload = rng.bytes(int(rng.integers(1, 65)))
    bits = bits_of(payload)
    even = payload + b"\0" * (len(payload) % 2)
    word = payload + b"\0" * (-len(payload) % 4)
    df = net.df_channel_decode(_wire([net.Datagram(h) for h in
                                      net.df_channel_encode(bits, template, 1500, int(rng.integers(1 << 30)))]))
    ids = net.id_channel_decode(_wire([net.Datagram(h) for h in net.id_channel_encode(payload, template)]))
    udp = net.udp_port_decode(_wire(net.wrap(net.udp_port_encode(payload, net.UdpHeader(dst_port=53)), template)))
    icmp = net.icmp_code_decode(_wire(net.wrap(net.icmp_code_encode(payload, net.IcmpHeader()), template)))
    segs = [d.transport for d in _wire(net.wrap(
        [s for t in net.isn_channel_send(payload, int(rng.integers(1 << 30))) for s in t], template))]
    isn = net.isn_channel_receive([segs[i:i + 3] for i in range(0, len(segs), 3)])
    return [np.array_equal(df, bits), ids == even, udp == even, icmp == payload, isn == word]


@pytest.mark.criterion("2", "round-trip suites, 200 seeded cases each, 100% identity, < 60 s")
def test_2_roundtrip_suites(covers, measured):
    suites = {
        "frame": _frame, "image-lsb": _image_lsb, "dct": lambda r: _dct(r, covers),
        "audio-lsb": _audio_lsb, "phase": _phase, "dsss": _dsss, "echo-impulse": _echo_impulse,
        "video": _video,
    }
    t = time.perf_counter()
    failures = {}
    for k, (name, fn) in enumerate(suites.items()):
        failures[name] = sum(not fn(np.random.default_rng([k, seed])) for seed in range(CASES))
    channel_fail = np.zeros(5, int)
    for seed in range(CASES):
        channel_fail += np.logical_not(_channels(np.random.default_rng([99, seed])))
    for name, f in zip(("df", "id", "udp", "icmp", "isn"), channel_fail):
        failures[f"net-{name}"] = int(f)
    elapsed = time.perf_counter() - t
    measured(f"{len(failures)} suites x {CASES} cases, failures={sum(failures.values())}, {elapsed:.1f} s")
    assert failures == {k: 0 for k in failures}
    assert elapsed < 60


# -- 3: quality bounds -------------------------------------------------------------

@pytest.mark.criterion("3a", "full-capacity image LSB PSNR >= 48 dB on every cover")
def test_3a_lsb_psnr(covers, measured):
    values = {}
    for name, cover in covers.items():
        stego = lsb_embed(cover, np.random.default_rng(len(name)).bytes(cover.size // 8))
        values[name] = psnr(cover.samples, stego.samples)
    measured("min %.2f dB" % min(values.values()))
    assert min(values.values()) >= 48


@pytest.mark.criterion("3b", "DCT embedding costs <= 1 dB PSNR vs requantization on >= 3 photo covers")
def test_3b_dct_psnr(covers, measured):
    message = np.random.default_rng(3).bytes(256)
    drops = {}
    for name in PHOTO_COVERS:
        cover = covers[name]
        luma = D.to_luma(cover)
        base = psnr(luma, D.dct_reconstruct(D.analyze(cover)).samples[:, :, 0])
        stego = D.dct_reconstruct(D.dct_embed(cover, frame_encode(message)))
        drops[name] = base - psnr(luma, stego.samples[:, :, 0])
    measured("256-byte payload, drops " + ", ".join(f"{k} {v:.2f} dB" for k, v in drops.items()))
    assert sum(v <= 1.0 for v in drops.values()) >= 3


# -- 4: serializer conformance -------------------------------------------------------

def _random_header(rng):
    opts = rng.bytes(4 * int(rng.integers(0, 11)))
    return net.Ipv4Header(
        tos=int(rng.integers(256)), identification=int(rng.integers(1 << 16)),
        flag_reserved=int(rng.integers(2)), flag_df=int(rng.integers(2)), flag_mf=int(rng.integers(2)),
        fragment_offset=int(rng.integers(1 << 13)), ttl=int(rng.integers(256)),
        protocol=int(rng.integers(256)), src_addr=int(rng.integers(1 << 32)),
        dst_addr=int(rng.integers(1 << 32)), options=opts,
        total_length=int(rng.integers(20 + len(opts), 1 << 16)),
    )


@pytest.mark.criterion("4", "IPv4 parse/serialize identity on 10,000 headers; every bit flip caught; < 5 s")
def test_4_serializer(measured):
    rng = np.random.default_rng(4)
    t = time.perf_counter()
    flips = 0
    for i in range(10_000):
        h = _random_header(rng)
        wire = net.ipv4_serialize(h)
        back = net.ipv4_parse(wire)
        assert back == h and net.ipv4_serialize(back) == wire
        if i % 50 == 0:
            for bit in range(8 * len(wire)):
                bad = bytearray(wire)
                bad[bit // 8] ^= 0x80 >> (bit % 8)
                with pytest.raises(ChecksumMismatch):
                    net.ipv4_parse(bytes(bad))
                flips += 1
    elapsed = time.perf_counter() - t
    measured(f"{flips} single-bit flips, {elapsed:.2f} s")
    assert elapsed < 5


# -- 5: fragility -----------------------------------------------------------------

@pytest.mark.criterion("5", "DF dropped past small MTU; ID channel destroyed by normalization; < 1 s")
def test_5_fragility(measured):
    t = time.perf_counter()
    rng = np.random.default_rng(5)
    bits = rng.integers(0, 2, 64)
    template = net.Ipv4Header(total_length=1000)
    sent = net.df_channel_encode(bits, template, 1500)
    delivered, events = net.path_transmit(sent, net.PathConfig(mtu=576))
    needed = {e.index for e in events if e.kind is net.EventKind.FRAGMENTATION_NEEDED}
    assert needed == set(np.flatnonzero(bits == 1).tolist())
    assert not any(h.flag_df for h in delivered)
    assert not np.array_equal(net.df_channel_decode(delivered), bits)

    destroyed = 0
    for trial in range(20):
        payload = rng.bytes(int(rng.integers(16, 129)))
        hdrs = net.id_channel_encode(payload, net.Ipv4Header(total_length=100, flag_df=1))
        out, ev = net.path_transmit(hdrs, net.PathConfig(normalize_identification=True, seed=trial))
        assert sum(e.kind is net.EventKind.ID_REWRITTEN for e in ev) == len(hdrs)
        destroyed += net.id_channel_decode(out)[:len(payload)] != payload
    elapsed = time.perf_counter() - t
    measured(f"{len(needed)} FragmentationNeeded, {destroyed}/20 ID payloads destroyed, {1e3 * elapsed:.0f} ms")
    assert destroyed == 20 and elapsed < 1


# -- 6: detection separations ---------------------------------------------------------

@pytest.mark.criterion("6", "chi-square, whitespace and header-scan separations, < 10 s")
def test_6_detection(covers, prose, measured):
    t = time.perf_counter()
    pairs = {}
    for name in PHOTO_COVERS:
        cover = covers[name]
        stego = lsb_embed(cover, np.random.default_rng(6).bytes(cover.size // 8))
        pairs[name] = (lsb_chi_square(cover).p_value, lsb_chi_square(stego).p_value)
    separated = sum(s > c for c, s in pairs.values())
    assert separated >= 3

    table = ["", "a", "b", "c"]
    gap_stego = gap_embed(prose, [1 + i % 3 for i in range(gap_capacity(prose))], table)
    assert whitespace_scan(gap_stego)[1]
    assert not whitespace_scan(prose)[1]

    rng = np.random.default_rng(6)
    stream = net.id_channel_encode(rng.bytes(128), net.Ipv4Header(total_length=100, flag_df=1))
    assert len(stream) == 64
    p_stego = net.header_anomaly_scan(stream)["id_byte_chi_square_p"].statistic
    sizes = rng.integers(40, 1500, 64)
    clean_in = [net.Ipv4Header(total_length=int(s), flag_df=int(s > 1000)) for s in sizes]
    clean, _ = net.path_transmit(clean_in, net.PathConfig(normalize_identification=True, seed=6))
    clean_report = net.header_anomaly_scan(clean)
    elapsed = time.perf_counter() - t
    measured(f"chi2 separated {separated}/{len(pairs)}, id p={p_stego:.2g} vs counter "
             f"p={clean_report['id_byte_chi_square_p'].statistic:.2g}, {elapsed:.2f} s")
    assert p_stego < 0.01
    assert not clean_report.flagged
    assert elapsed < 10


# -- 7: scrub ------------------------------------------------------------------------

@pytest.mark.criterion("7", "lsb_scrub leaves BadMagic over 50 seeded trials, < 5 s")
def test_7_scrub(covers, measured):
    names = sorted(covers)
    t = time.perf_counter()
    for seed in range(50):
        rng = np.random.default_rng([7, seed])
        cover = covers[names[seed % len(names)]]
        key = rng.bytes(4) if seed % 2 else None
        stego = lsb_hide(cover, rng.bytes(int(rng.integers(1, 2000))), key)
        with pytest.raises(BadMagic):
            lsb_reveal(lsb_scrub(stego, seed), key)
    elapsed = time.perf_counter() - t
    measured(f"{elapsed:.2f} s")
    assert elapsed < 5


# -- 8: echo BER -----------------------------------------------------------------------

def speechlike(rng, n, rate=44100):
    sos = signal.butter(4, [100, 4000], btype="bandpass", fs=rate, output="sos")
    x = signal.sosfilt(sos, rng.standard_normal(n))
    x *= 0.6 + 0.4 * np.sin(2 * np.pi * 3 * np.arange(n) / rate)
    return A.PcmClip(rate, A.to_pcm(x / np.abs(x).max() * 12000))


@pytest.mark.criterion("8", "echo hiding BER = 0 on 32 bits over 10 filtered-noise trials, < 10 s")
def test_8_echo_ber(measured):
    t = time.perf_counter()
    errors = 0
    for trial in range(10):
        rng = np.random.default_rng([8, trial])
        cover = speechlike(rng, 32 * 4096 + 100)
        bits = rng.integers(0, 2, 32)
        errors += int((A.echo_extract(A.echo_embed(cover, bits), bit_count=32) != bits).sum())
    elapsed = time.perf_counter() - t
    measured(f"{errors} bit errors / 320, {elapsed:.2f} s")
    assert errors == 0 and elapsed < 10
