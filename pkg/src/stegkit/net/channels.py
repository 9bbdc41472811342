"""Header-field covert channels: DF flag, IP Identification, UDP source port, ICMP code."""

from dataclasses import replace

import numpy as np

from ..errors import TemplateTooLarge
from .datagram import ip_of


def _require_unfragmented(template):
    if template.flag_mf or template.fragment_offset:
        raise ValueError("template must describe an unfragmented datagram (MF = 0, offset 0)")


def _pairs(payload):
    payload = bytes(payload)
    if len(payload) % 2:
        payload += b"\x00"
    return [int.from_bytes(payload[i:i + 2], "big") for i in range(0, len(payload), 2)]


def df_channel_encode(bits, template, mtu, seed=0):
    """One datagram per bit, carried in DF; identification follows a seeded counter."""
    template.validate()
    _require_unfragmented(template)
    if template.total_length > mtu:
        raise TemplateTooLarge(f"template of {template.total_length} bytes exceeds path MTU {mtu}")
    start = int(np.random.default_rng(seed).integers(0, 1 << 16))
    return [replace(template, flag_df=int(b) & 1, flag_mf=0, fragment_offset=0,
                    identification=(start + i) & 0xFFFF)
            for i, b in enumerate(bits)]


def df_channel_decode(headers):
    return np.array([ip_of(h).flag_df for h in headers], dtype=np.uint8)


def id_channel_encode(payload, template):
    """Two payload bytes per datagram in the 16-bit Identification field (odd tail zero-padded)."""
    template.validate()
    _require_unfragmented(template)
    return [replace(template, identification=v) for v in _pairs(payload)]


def id_channel_decode(headers):
    return b"".join(ip_of(h).identification.to_bytes(2, "big") for h in headers)


def udp_port_encode(payload, template):
    template.validate()
    return [replace(template, src_port=v) for v in _pairs(payload)]


def udp_port_decode(headers):
    return b"".join(getattr(h, "transport", h).src_port.to_bytes(2, "big") for h in headers)


def icmp_code_encode(payload, template):
    template.validate()
    return [replace(template, code=b) for b in bytes(payload)]


def icmp_code_decode(headers):
    return bytes(getattr(h, "transport", h).code for h in headers)
