"""IPv4/TCP/UDP/ICMP header model, covert channels, handshake machine, path simulator and detector."""

from .channels import (df_channel_decode, df_channel_encode, icmp_code_decode, icmp_code_encode,
                       id_channel_decode, id_channel_encode, udp_port_decode, udp_port_encode)
from .datagram import Datagram, read_transcript, wrap, write_transcript
from .detect import ScanThresholds, header_anomaly_scan
from .handshake import (HandshakeState, Role, TcpState, isn_channel_connect, isn_channel_observe,
                        isn_channel_receive, isn_channel_send)
from .headers import IcmpHeader, Ipv4Header, TcpHeader, UdpHeader, inet_checksum, ipv4_parse, ipv4_serialize
from .path import EventKind, PathConfig, PathEvent, fragment, path_transmit

__all__ = [
    "Datagram", "EventKind", "HandshakeState", "IcmpHeader", "Ipv4Header", "PathConfig", "PathEvent",
    "Role", "ScanThresholds", "TcpHeader", "TcpState", "UdpHeader", "df_channel_decode",
    "df_channel_encode", "header_anomaly_scan", "icmp_code_decode", "icmp_code_encode",
    "id_channel_decode", "id_channel_encode", "inet_checksum", "ipv4_parse", "ipv4_serialize",
    "isn_channel_connect", "isn_channel_observe", "isn_channel_receive", "isn_channel_send",
    "fragment", "path_transmit", "read_transcript", "udp_port_decode", "udp_port_encode", "wrap",
    "write_transcript",
]
