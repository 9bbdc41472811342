"""Bit-exact IPv4, TCP, UDP and ICMP header records (network byte order)."""

import struct
from dataclasses import dataclass, field, replace

from .. import kernels
from ..errors import BadVersion, ChecksumMismatch, Malformed, Truncated

PROTO_ICMP = 1
PROTO_TCP = 6
PROTO_UDP = 17

_IPV4 = struct.Struct("!BBHHHBBH4s4s")
_TCP = struct.Struct("!HHIIBBHHH")
_UDP = struct.Struct("!HHHH")
_ICMP = struct.Struct("!BBHI")


def inet_checksum(data):
    """One's complement of the one's-complement sum of 16-bit words."""
    return kernels.inet_checksum(data)


def _u(value, bits, name):
    if not 0 <= value < 1 << bits:
        raise ValueError(f"{name}={value} does not fit in {bits} bits")


@dataclass
class Ipv4Header:
    version: int = 4
    tos: int = 0
    total_length: int = 20
    identification: int = 0
    flag_reserved: int = 0
    flag_df: int = 0
    flag_mf: int = 0
    fragment_offset: int = 0
    ttl: int = 64
    protocol: int = PROTO_TCP
    src_addr: int = 0
    dst_addr: int = 0
    options: bytes = b""
    # recomputed on serialization; kept for inspection of parsed headers
    header_checksum: int = field(default=0, compare=False)

    @property
    def header_length(self):
        """Header length in 32-bit words."""
        return 5 + len(self.options) // 4

    @property
    def payload_length(self):
        return self.total_length - 4 * self.header_length

    @property
    def flags(self):
        return (self.flag_reserved << 2) | (self.flag_df << 1) | self.flag_mf

    def validate(self):
        if self.version != 4:
            raise BadVersion(f"version {self.version}")
        if len(self.options) % 4 or len(self.options) > 40:
            raise Malformed("options must be padded to a multiple of 4 bytes, at most 40")
        for name, bits in (("tos", 8), ("total_length", 16), ("identification", 16),
                           ("flag_reserved", 1), ("flag_df", 1), ("flag_mf", 1),
                           ("fragment_offset", 13), ("ttl", 8), ("protocol", 8),
                           ("src_addr", 32), ("dst_addr", 32)):
            _u(getattr(self, name), bits, name)
        if self.total_length < 4 * self.header_length:
            raise Malformed(f"total_length {self.total_length} shorter than header")

    def _pack(self, checksum):
        return _IPV4.pack(
            (self.version << 4) | self.header_length, self.tos, self.total_length,
            self.identification, (self.flags << 13) | self.fragment_offset,
            self.ttl, self.protocol, checksum,
            self.src_addr.to_bytes(4, "big"), self.dst_addr.to_bytes(4, "big"),
        ) + bytes(self.options)

    def to_bytes(self):
        """Serialize with a freshly computed header checksum."""
        self.validate()
        return self._pack(inet_checksum(self._pack(0)))

    def with_checksum(self):
        return replace(self, header_checksum=struct.unpack_from("!H", self.to_bytes(), 10)[0])

    @classmethod
    def from_bytes(cls, data):
        """Parse and verify a header; trailing bytes past the header are ignored."""
        data = bytes(data)
        if len(data) < 20:
            raise Truncated(f"{len(data)} bytes, need at least 20")
        ihl = data[0] & 0x0F
        # checksum is verified before any field is trusted
        span = 4 * ihl if ihl >= 5 and len(data) >= 4 * ihl else 20
        if inet_checksum(data[:span]) != 0:
            raise ChecksumMismatch("IPv4 header checksum does not verify")
        if ihl < 5:
            raise Malformed(f"header length {ihl} words")
        if len(data) < 4 * ihl:
            raise Truncated(f"header declares {4 * ihl} bytes, got {len(data)}")
        vihl, tos, total, ident, frag, ttl, proto, csum, src, dst = _IPV4.unpack_from(data)
        version = vihl >> 4
        if version != 4:
            raise BadVersion(f"version {version}")
        h = cls(
            version=version, tos=tos, total_length=total, identification=ident,
            flag_reserved=frag >> 15, flag_df=(frag >> 14) & 1, flag_mf=(frag >> 13) & 1,
            fragment_offset=frag & 0x1FFF, ttl=ttl, protocol=proto,
            src_addr=int.from_bytes(src, "big"), dst_addr=int.from_bytes(dst, "big"),
            options=data[20:4 * ihl], header_checksum=csum,
        )
        if total < 4 * ihl:
            raise Malformed(f"total_length {total} shorter than header")
        return h


def ipv4_serialize(h):
    return h.to_bytes()


def ipv4_parse(data):
    return Ipv4Header.from_bytes(data)


def pseudo_header(src_addr, dst_addr, protocol, length):
    return struct.pack("!4s4sBBH", src_addr.to_bytes(4, "big"), dst_addr.to_bytes(4, "big"),
                       0, protocol, length)


@dataclass
class TcpHeader:
    src_port: int = 0
    dst_port: int = 0
    sequence_number: int = 0
    ack_number: int = 0
    data_offset: int = 5
    urg: int = 0
    ack: int = 0
    psh: int = 0
    rst: int = 0
    syn: int = 0
    fin: int = 0
    window: int = 65535
    urgent_pointer: int = 0
    checksum: int = field(default=0, compare=False)

    SIZE = 20

    @property
    def flag_bits(self):
        return (self.urg << 5) | (self.ack << 4) | (self.psh << 3) | (self.rst << 2) | (self.syn << 1) | self.fin

    def validate(self):
        if not 5 <= self.data_offset <= 15:
            raise Malformed(f"data offset {self.data_offset}")
        for name, bits in (("src_port", 16), ("dst_port", 16), ("sequence_number", 32),
                           ("ack_number", 32), ("window", 16), ("urgent_pointer", 16)):
            _u(getattr(self, name), bits, name)
        for name in ("urg", "ack", "psh", "rst", "syn", "fin"):
            _u(getattr(self, name), 1, name)

    def _pack(self, checksum):
        return _TCP.pack(self.src_port, self.dst_port, self.sequence_number, self.ack_number,
                         self.data_offset << 4, self.flag_bits, self.window, checksum,
                         self.urgent_pointer) + bytes(4 * self.data_offset - self.SIZE)

    def to_bytes(self, src_addr=0, dst_addr=0):
        """Serialize; the checksum covers the pseudo-header and the header (no payload)."""
        self.validate()
        raw = self._pack(0)
        return self._pack(inet_checksum(pseudo_header(src_addr, dst_addr, PROTO_TCP, len(raw)) + raw))

    @classmethod
    def from_bytes(cls, data, src_addr=0, dst_addr=0, verify=True):
        data = bytes(data)
        if len(data) < cls.SIZE:
            raise Truncated(f"{len(data)} bytes, need 20")
        sp, dp, seq, ackn, off, flags, win, csum, urp = _TCP.unpack_from(data)
        offset = off >> 4
        if offset < 5:
            raise Malformed(f"data offset {offset}")
        if len(data) < 4 * offset:
            raise Truncated("options run past end of data")
        raw = data[:4 * offset]
        if verify and inet_checksum(pseudo_header(src_addr, dst_addr, PROTO_TCP, len(raw)) + raw) != 0:
            raise ChecksumMismatch("TCP checksum does not verify")
        return cls(sp, dp, seq, ackn, offset, (flags >> 5) & 1, (flags >> 4) & 1, (flags >> 3) & 1,
                   (flags >> 2) & 1, (flags >> 1) & 1, flags & 1, win, urp, csum)


@dataclass
class UdpHeader:
    src_port: int = 0
    dst_port: int = 0
    length: int = 8
    checksum: int = field(default=0, compare=False)

    SIZE = 8

    def validate(self):
        for name in ("src_port", "dst_port", "length"):
            _u(getattr(self, name), 16, name)
        if self.length < 8:
            raise Malformed(f"UDP length {self.length} < 8")

    def to_bytes(self, src_addr=0, dst_addr=0):
        self.validate()
        raw = _UDP.pack(self.src_port, self.dst_port, self.length, 0)
        csum = inet_checksum(pseudo_header(src_addr, dst_addr, PROTO_UDP, self.length) + raw)
        # zero means "no checksum" in UDP; a computed zero is sent as all ones
        return _UDP.pack(self.src_port, self.dst_port, self.length, csum or 0xFFFF)

    @classmethod
    def from_bytes(cls, data, src_addr=0, dst_addr=0, verify=True):
        data = bytes(data)
        if len(data) < cls.SIZE:
            raise Truncated(f"{len(data)} bytes, need 8")
        sp, dp, length, csum = _UDP.unpack_from(data)
        if length < 8:
            raise Malformed(f"UDP length {length} < 8")
        if verify and csum != 0:
            if inet_checksum(pseudo_header(src_addr, dst_addr, PROTO_UDP, length) + data[:8]) != 0:
                raise ChecksumMismatch("UDP checksum does not verify")
        return cls(sp, dp, length, csum)


@dataclass
class IcmpHeader:
    type: int = 8
    code: int = 0
    rest: int = 0
    checksum: int = field(default=0, compare=False)

    SIZE = 8

    def validate(self):
        _u(self.type, 8, "type")
        _u(self.code, 8, "code")
        _u(self.rest, 32, "rest")

    def to_bytes(self):
        self.validate()
        raw = _ICMP.pack(self.type, self.code, 0, self.rest)
        return _ICMP.pack(self.type, self.code, inet_checksum(raw), self.rest)

    @classmethod
    def from_bytes(cls, data, verify=True):
        data = bytes(data)
        if len(data) < cls.SIZE:
            raise Truncated(f"{len(data)} bytes, need 8")
        if verify and inet_checksum(data[:8]) != 0:
            raise ChecksumMismatch("ICMP checksum does not verify")
        t, c, csum, rest = _ICMP.unpack_from(data)
        return cls(t, c, rest, csum)
