"""Command-line front end: embed / extract / analyze / covert / scrub.

Exit status: 0 on success, 1 on usage errors, 2 on capacity or format errors.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import audio_stego as audio
from . import dct_stego as dct
from . import image_stego as image
from . import net
from . import steganalysis
from . import text_stego as text
from . import video_stego as video
from .bitcodec import bits_of, bytes_of, frame_decode, frame_encode, read_frame
from .errors import StegoError

MEDIA = ("text-key", "text-gap", "image-lsb", "image-dct", "audio-lsb", "audio-phase",
         "audio-dsss", "audio-echo", "video")
CHANNELS = ("df", "id", "isn", "udp", "icmp")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _key(args):
    return args.key.encode() if args.key else None


def _read(path):
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"input file not found: {path}")
    return p.read_bytes()


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--medium {args.medium} requires " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _echo_params(args):
    return audio.EchoParams(args.amplitude, args.delay0, args.delay1, args.segment_len or 4096)


def _phase_params(args):
    seg = args.segment_len or 1024
    return seg, args.bins or seg // 2 - 1


def _numeric_checks(args):
    if getattr(args, "alpha", None) is not None and not 1 <= args.alpha <= 127:
        raise UsageError("--alpha must lie in [1, 127]")
    if getattr(args, "strength", None) is not None and not 0 < args.strength < 1:
        raise UsageError("--strength must lie in (0, 1)")
    if getattr(args, "chips_per_bit", None) is not None and args.chips_per_bit < 1:
        raise UsageError("--chips-per-bit must be positive")
    try:
        if args.medium == "audio-echo":
            _echo_params(args)
        if args.medium == "audio-phase":
            seg, bins = _phase_params(args)
            audio._check_phase_params(seg, seg, bins)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_embed(args):
    _numeric_checks(args)
    m = args.medium
    message = _read(args.message)
    cover = _read(args.cover)
    key = _key(args)
    if m == "text-key":
        series = text.charkey_generate(cover.decode("utf-8"), message.decode("utf-8").rstrip("\n"))
        out = (",".join(map(str, series)) + "\n").encode()
    elif m == "text-gap":
        _need(args, "table")
        table = _read(args.table).decode("utf-8").split("\n")
        lines = message.decode("utf-8").rstrip("\n").split("\n")
        out = text.gap_encode_lines(cover.decode("utf-8"), lines, table).encode("utf-8")
    elif m == "image-lsb":
        out = image.bmp_write(image.lsb_hide(image.bmp_read(cover), message, key))
    elif m == "image-dct":
        out = dct.dct_embed(image.bmp_read(cover), frame_encode(message, key)).to_bytes()
    elif m == "video":
        _need(args, "alpha")
        seq = video.FrameSequence.from_bytes(cover)
        out = video.video_embed(seq, bits_of(frame_encode(message, key)), args.alpha).to_bytes()
    else:
        clip = audio.wav_read(cover)
        payload = frame_encode(message, key)
        if m == "audio-lsb":
            stego = audio.audio_lsb_embed(clip, payload)
        elif m == "audio-phase":
            seg, _ = _phase_params(args)
            # touch only the bins the payload needs: aligning many phases peaks the
            # first segment past the int16 range and clamping then flips bits
            bins = args.bins or max(16, 8 * len(payload))
            stego = audio.phase_embed(clip, bits_of(payload), seg, bins)
        elif m == "audio-dsss":
            stego = audio.dsss_embed(clip, bits_of(payload), audio.PnSequence(args.seed),
                                     args.chips_per_bit, args.strength)
        else:
            stego = audio.echo_embed(clip, bits_of(payload), _echo_params(args))
        out = audio.wav_write(stego)
    Path(args.out).write_bytes(out)
    return 0


def cmd_extract(args):
    _numeric_checks(args)
    m = args.medium
    stego = _read(args.stego)
    key = _key(args)
    if m == "text-key":
        _need(args, "series")
        series = [int(s) for s in _read(args.series).decode().replace(",", " ").split()]
        message = text.charkey_extract(stego.decode("utf-8"), series).encode("utf-8")
    elif m == "text-gap":
        _need(args, "table")
        table = _read(args.table).decode("utf-8").split("\n")
        message = "\n".join(text.gap_extract(stego.decode("utf-8"), table)).encode("utf-8")
    elif m == "image-lsb":
        message = image.lsb_reveal(image.bmp_read(stego), key)
    elif m == "image-dct":
        message = dct.dct_extract(dct.QdctContainer.from_bytes(stego), key)
    elif m == "video":
        _need(args, "cover", "alpha")
        cover = video.FrameSequence.from_bytes(_read(args.cover))
        message = video.video_reveal(video.FrameSequence.from_bytes(stego), cover, args.alpha, key)
    else:
        clip = audio.wav_read(stego)
        if m == "audio-lsb":
            message = audio.audio_lsb_reveal(clip, key)
        elif m == "audio-phase":
            seg, bins = _phase_params(args)
            message = read_frame(lambda n: bytes_of(audio.phase_extract(clip, seg, bins, n)), bins, key)
        elif m == "audio-dsss":
            _need(args, "cover")
            cover = audio.wav_read(_read(args.cover))
            pn = audio.PnSequence(args.seed)
            c = args.chips_per_bit
            message = read_frame(
                lambda n: bytes_of(audio.dsss_extract_known(clip, cover, pn, c, n)), len(clip) // c, key)
        else:
            p = _echo_params(args)
            message = read_frame(lambda n: bytes_of(audio.echo_extract(clip, p, n)),
                                 len(clip) // p.segment_len, key)
    Path(args.out).write_bytes(message)
    return 0


def _kind(args):
    if args.kind:
        return args.kind
    suffix = Path(args.stego).suffix.lower()
    kind = {".bmp": "image", ".txt": "text", ".pkts": "packets"}.get(suffix)
    if kind is None:
        raise UsageError(f"cannot infer input kind from {suffix!r}; pass --kind")
    return kind


def cmd_analyze(args):
    kind = _kind(args)
    data = _read(args.stego)
    if kind == "image":
        cover_bytes = _read(args.cover) if args.cover else None
        cover = image.bmp_read(cover_bytes) if cover_bytes else None
        thresholds = steganalysis.Thresholds(chi_square_p=args.chi_p)
        report = steganalysis.analyze_image(image.bmp_read(data), cover, thresholds,
                                            stego_bytes=data, cover_bytes=cover_bytes)
    elif kind == "text":
        thresholds = steganalysis.Thresholds(whitespace_fraction=args.gap_fraction)
        report = steganalysis.analyze_text(data.decode("utf-8"), thresholds)
    else:
        dgrams = [net.Datagram.from_bytes(r) for r in net.read_transcript(data)]
        report = net.header_anomaly_scan(dgrams, net.ScanThresholds(id_alpha=args.id_alpha))
    plan = steganalysis.classify_attack(stego=data, cover=args.cover)
    print(f"# attack class: {plan.attack.value}", file=sys.stderr)
    for note in report.notes:
        print(f"# {note}", file=sys.stderr)
    out = report.to_text()
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return 0


def cmd_covert(args):
    if args.bits is not None:
        if set(args.bits) - {"0", "1"}:
            raise UsageError("--bits must be a string of 0/1")
        payload_bits = np.array([int(b) for b in args.bits], dtype=np.uint8)
    elif args.message:
        payload_bits = bits_of(frame_encode(_read(args.message), _key(args)))
    else:
        raise UsageError("covert requires --message or --bits")
    framed = args.bits is None
    payload = bytes_of(payload_bits)
    cfg = net.PathConfig(args.mtu, args.normalize_id, not args.no_fragment, args.seed)
    template = net.Ipv4Header(total_length=args.template_size, flag_df=int(args.channel != "df"),
                              ttl=64, protocol=net.headers.PROTO_TCP,
                              src_addr=0x0A000001, dst_addr=0x0A000002)
    ch = args.channel
    if ch == "df":
        sent = [net.Datagram(h) for h in net.df_channel_encode(payload_bits, template, args.mtu, args.seed)]
    elif ch == "id":
        sent = [net.Datagram(h) for h in net.id_channel_encode(payload, template)]
    elif ch == "udp":
        sent = net.wrap(net.udp_port_encode(payload, net.UdpHeader(dst_port=53, length=8)), template)
    elif ch == "icmp":
        sent = net.wrap(net.icmp_code_encode(payload, net.IcmpHeader(type=8)), template)
    else:
        segs = [s for t in net.isn_channel_send(payload, args.seed) for s in t]
        sent = net.wrap(segs, template)

    delivered, events = net.path_transmit(sent, cfg)
    for e in events:
        print(f"event\t{e}")
    if args.out:
        Path(args.out).write_bytes(net.write_transcript([d.to_bytes() for d in delivered]))
    print(net.header_anomaly_scan(delivered).to_text(), end="")

    if ch == "df":
        received = bytes_of(net.df_channel_decode(delivered))
        got_bits = net.df_channel_decode(delivered)
    elif ch == "id":
        received = net.id_channel_decode(delivered)
    elif ch == "udp":
        received = net.udp_port_decode(delivered)
    elif ch == "icmp":
        received = net.icmp_code_decode(delivered)
    else:
        segs = [d.transport for d in delivered]
        received = net.isn_channel_receive([segs[i:i + 3] for i in range(0, len(segs) - len(segs) % 3, 3)])
    if ch != "df":
        got_bits = bits_of(received)
    print("bits\t" + "".join(map(str, got_bits[: len(payload_bits)])))
    if framed:
        message = frame_decode(received, _key(args))
        print("message\t" + message.decode("utf-8", "replace"))
    return 0


def cmd_scrub(args):
    data = _read(args.stego)
    if data[:2] == b"BM":
        out = image.bmp_write(steganalysis.lsb_scrub(image.bmp_read(data), args.seed))
    elif data[:4] == b"RIFF":
        clip = audio.wav_read(data)
        rng = np.random.default_rng(args.seed)
        u = clip.samples.view(np.uint16)
        noisy = (u & 0xFFFE) | rng.integers(0, 2, u.size, dtype=np.uint16)
        out = audio.wav_write(audio.PcmClip(clip.sample_rate, noisy.view(np.int16)))
    else:
        raise UsageError("scrub supports BMP images and WAV audio")
    Path(args.out).write_bytes(out)
    return 0


def build_parser():
    parser = _Parser(prog="stegkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def media_opts(p):
        p.add_argument("--medium", required=True, choices=MEDIA)
        p.add_argument("--out", required=True)
        p.add_argument("--key", help="optional stego key (repeating XOR)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--table", help="gap lookup table, one entry per line (text-gap)")
        p.add_argument("--alpha", type=int, help="video modulation strength")
        p.add_argument("--strength", type=float, default=0.005, help="DSSS strength beta")
        p.add_argument("--chips-per-bit", type=int, default=1024)
        p.add_argument("--segment-len", type=int)
        p.add_argument("--bins", type=int, help="phase-coding bins (embed: payload size, extract: segment_len/2 - 1)")
        p.add_argument("--amplitude", type=float, default=0.4)
        p.add_argument("--delay0", type=int, default=40)
        p.add_argument("--delay1", type=int, default=80)

    p = sub.add_parser("embed", help="hide a message in a cover")
    media_opts(p)
    p.add_argument("--cover", required=True)
    p.add_argument("--message", required=True)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover a hidden message")
    media_opts(p)
    p.add_argument("--stego", required=True)
    p.add_argument("--cover", help="original cover (audio-dsss, video)")
    p.add_argument("--series", help="key series file (text-key)")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("analyze", help="run the steganalysis battery")
    p.add_argument("--stego", required=True)
    p.add_argument("--cover")
    p.add_argument("--kind", choices=("image", "text", "packets"))
    p.add_argument("--out")
    p.add_argument("--chi-p", type=float, default=0.95)
    p.add_argument("--gap-fraction", type=float, default=0.05)
    p.add_argument("--id-alpha", type=float, default=0.01)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("covert", help="send a message through a header covert channel")
    p.add_argument("--channel", required=True, choices=CHANNELS)
    p.add_argument("--message")
    p.add_argument("--bits")
    p.add_argument("--key")
    p.add_argument("--mtu", type=int, default=1500)
    p.add_argument("--template-size", type=int, default=60)
    p.add_argument("--normalize-id", action="store_true")
    p.add_argument("--no-fragment", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write delivered datagrams as a PKTS transcript")
    p.set_defaults(func=cmd_covert)

    p = sub.add_parser("scrub", help="randomize LSBs to destroy hidden payloads")
    p.add_argument("--stego", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_scrub)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "covert" and args.mtu < 68:
            raise UsageError("--mtu must be at least 68")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except StegoError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (UnicodeDecodeError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
