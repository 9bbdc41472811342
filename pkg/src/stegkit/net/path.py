"""Deterministic simulator of an IP path: MTU enforcement, fragmentation, ID normalization."""

import enum
from dataclasses import dataclass, replace

import numpy as np

from .datagram import Datagram


class EventKind(enum.Enum):
    FRAGMENTATION_NEEDED = "FragmentationNeeded"
    FRAGMENTED = "Fragmented"
    ID_REWRITTEN = "IdRewritten"
    DROPPED = "Dropped"


@dataclass(frozen=True)
class PathEvent:
    kind: EventKind
    index: int
    detail: str = ""

    def __str__(self):
        return f"{self.kind.value}[{self.index}] {self.detail}".rstrip()


@dataclass(frozen=True)
class PathConfig:
    mtu: int = 1500
    normalize_identification: bool = False
    fragment_when_needed: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.mtu < 68:
            raise ValueError(f"MTU {self.mtu} below the IPv4 minimum of 68")


def fragment(dgram, mtu):
    """Split into fragments whose payloads are multiples of 8 bytes (except the last)."""
    ip = dgram.ip
    hlen = 4 * ip.header_length
    chunk = (mtu - hlen) // 8 * 8
    if chunk < 8:
        return []
    remaining = ip.payload_length
    offset = 0
    frags = []
    while remaining > 0:
        size = min(chunk, remaining)
        last = size == remaining
        frag_ip = replace(ip, total_length=hlen + size, fragment_offset=ip.fragment_offset + offset // 8,
                          flag_mf=ip.flag_mf if last else 1)
        frags.append(Datagram(frag_ip, dgram.transport if offset == 0 else None))
        offset += size
        remaining -= size
    return frags


def path_transmit(datagrams, cfg=PathConfig()):
    """Push datagrams through the path in order; returns ``(delivered, events)``.

    Items may be :class:`Ipv4Header` or :class:`Datagram`; delivered items have
    the same type as the inputs. Checksums are recomputed on serialization, so
    every mutated header stays valid.
    """
    counter = int(np.random.default_rng(cfg.seed).integers(0, 1 << 16))
    delivered = []
    events = []
    for i, item in enumerate(datagrams):
        bare = not isinstance(item, Datagram)
        d = Datagram(item) if bare else item
        d.ip.validate()
        if cfg.normalize_identification:
            d = replace(d, ip=replace(d.ip, identification=counter))
            events.append(PathEvent(EventKind.ID_REWRITTEN, i, f"id={counter}"))
            counter = (counter + 1) & 0xFFFF
        out = [d]
        if d.ip.total_length > cfg.mtu:
            if d.ip.flag_df:
                events.append(PathEvent(EventKind.FRAGMENTATION_NEEDED, i,
                                        f"{d.ip.total_length} > mtu {cfg.mtu} with DF set"))
                continue
            out = fragment(d, cfg.mtu) if cfg.fragment_when_needed else []
            if not out:
                events.append(PathEvent(EventKind.DROPPED, i, f"{d.ip.total_length} > mtu {cfg.mtu}"))
                continue
            events.append(PathEvent(EventKind.FRAGMENTED, i, f"{len(out)} fragments"))
        delivered.extend(o.ip if bare else o for o in out)
    return delivered, events
