"""IPv4 datagram records (header plus optional transport header) and PKTS transcripts.

Datagrams are header-only: ``total_length`` declares the size of a payload
that is never materialized, which is all the path simulator needs.
"""

import struct
from dataclasses import dataclass, replace

from ..errors import Malformed
from .headers import PROTO_ICMP, PROTO_TCP, PROTO_UDP, IcmpHeader, Ipv4Header, TcpHeader, UdpHeader

_TRANSPORT = {PROTO_TCP: TcpHeader, PROTO_UDP: UdpHeader, PROTO_ICMP: IcmpHeader}
_PROTO_OF = {TcpHeader: PROTO_TCP, UdpHeader: PROTO_UDP, IcmpHeader: PROTO_ICMP}


@dataclass
class Datagram:
    ip: Ipv4Header
    transport: TcpHeader | UdpHeader | IcmpHeader | None = None

    def transport_bytes(self):
        t = self.transport
        if t is None:
            return b""
        if isinstance(t, IcmpHeader):
            return t.to_bytes()
        return t.to_bytes(self.ip.src_addr, self.ip.dst_addr)

    def to_bytes(self):
        return self.ip.to_bytes() + self.transport_bytes()

    @classmethod
    def from_bytes(cls, data):
        ip = Ipv4Header.from_bytes(data)
        rest = bytes(data)[4 * ip.header_length:]
        kind = _TRANSPORT.get(ip.protocol)
        if not rest or kind is None or ip.fragment_offset:
            return cls(ip)
        if kind is IcmpHeader:
            return cls(ip, IcmpHeader.from_bytes(rest))
        return cls(ip, kind.from_bytes(rest, ip.src_addr, ip.dst_addr))


def wrap(transports, ip_template=None):
    """Place each transport header in a copy of ``ip_template`` with matching protocol and length."""
    ip_template = ip_template or Ipv4Header()
    out = []
    for t in transports:
        size = 4 * t.data_offset if isinstance(t, TcpHeader) else t.SIZE
        ip = replace(ip_template, protocol=_PROTO_OF[type(t)],
                     total_length=max(ip_template.total_length, 4 * ip_template.header_length + size))
        out.append(Datagram(ip, t))
    return out


def ip_of(item):
    return item.ip if isinstance(item, Datagram) else item


PKTS_MAGIC = b"PKTS"


def write_transcript(records):
    """``PKTS`` | u32 count | (u16 length, bytes)*, little-endian prefixes."""
    out = [PKTS_MAGIC, struct.pack("<I", len(records))]
    for rec in records:
        rec = bytes(rec)
        if len(rec) > 0xFFFF:
            raise ValueError("record longer than 65535 bytes")
        out.append(struct.pack("<H", len(rec)))
        out.append(rec)
    return b"".join(out)


def read_transcript(data):
    data = bytes(data)
    if len(data) < 8 or data[:4] != PKTS_MAGIC:
        raise Malformed("not a PKTS transcript")
    (count,) = struct.unpack_from("<I", data, 4)
    pos = 8
    records = []
    for _ in range(count):
        if pos + 2 > len(data):
            raise Malformed("transcript truncated")
        (n,) = struct.unpack_from("<H", data, pos)
        pos += 2
        if pos + n > len(data):
            raise Malformed("transcript record truncated")
        records.append(data[pos:pos + n])
        pos += n
    if pos != len(data):
        raise Malformed("trailing bytes after last record")
    return records
