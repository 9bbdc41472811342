"""Three-way handshake state machine and the initial-sequence-number channel."""

import enum

import numpy as np

from ..errors import ProtocolViolation
from .headers import TcpHeader

MOD32 = 1 << 32


class TcpState(enum.Enum):
    CLOSED = "CLOSED"
    SYN_SENT = "SYN_SENT"
    SYN_RECEIVED = "SYN_RECEIVED"
    ESTABLISHED = "ESTABLISHED"


class Role(enum.Enum):
    CLIENT = "client"
    SERVER = "server"
    OBSERVER = "observer"


def _is_syn(seg):
    return seg.syn and not seg.ack and not seg.rst and not seg.fin


def _is_synack(seg):
    return seg.syn and seg.ack and not seg.rst and not seg.fin


def _is_ack(seg):
    return seg.ack and not seg.syn and not seg.rst and not seg.fin


class HandshakeState:
    """One endpoint (or a passive observer) of a single connection setup.

    Not safe for concurrent mutation; each machine has a single owner.
    """

    def __init__(self, role, client_port=49152, server_port=80, isn=None):
        self.role = Role(role)
        self.state = TcpState.CLOSED
        self.client_port = client_port
        self.server_port = server_port
        self.client_isn = isn if self.role is Role.CLIENT else None
        self.server_isn = isn if self.role is Role.SERVER else None

    def _violation(self, seg, why):
        raise ProtocolViolation(f"{self.role.value} in {self.state.value}: {why} "
                                f"(syn={seg.syn} ack={seg.ack} seq={seg.sequence_number} "
                                f"ack_no={seg.ack_number})")

    # segment 1
    def open(self):
        if self.role is not Role.CLIENT or self.state is not TcpState.CLOSED:
            raise ProtocolViolation(f"{self.role.value} in {self.state.value} cannot open")
        if self.client_isn is None:
            raise ProtocolViolation("client ISN not set")
        self.state = TcpState.SYN_SENT
        return TcpHeader(self.client_port, self.server_port, self.client_isn, 0, syn=1)

    def receive(self, seg):
        """Feed one segment; returns the reply segment, if the role sends one."""
        if self.role is Role.CLIENT:
            return self._client_receive(seg)
        if self.role is Role.SERVER:
            return self._server_receive(seg)
        self.observe(seg)
        return None

    def _client_receive(self, seg):
        if self.state is not TcpState.SYN_SENT or not _is_synack(seg):
            self._violation(seg, "expected SYN+ACK")
        if seg.ack_number != (self.client_isn + 1) % MOD32:
            self._violation(seg, "SYN+ACK does not acknowledge ISN+1")
        self.server_isn = seg.sequence_number
        self.state = TcpState.ESTABLISHED
        return TcpHeader(self.client_port, self.server_port, (self.client_isn + 1) % MOD32,
                         (self.server_isn + 1) % MOD32, ack=1)

    def _server_receive(self, seg):
        if self.state is TcpState.CLOSED:
            if not _is_syn(seg):
                self._violation(seg, "expected SYN")
            if self.server_isn is None:
                raise ProtocolViolation("server ISN not set")
            self.client_isn = seg.sequence_number
            self.state = TcpState.SYN_RECEIVED
            return TcpHeader(self.server_port, self.client_port, self.server_isn,
                             (self.client_isn + 1) % MOD32, syn=1, ack=1)
        if self.state is TcpState.SYN_RECEIVED:
            self._check_final_ack(seg)
            self.state = TcpState.ESTABLISHED
            return None
        self._violation(seg, "unexpected segment")

    def _check_final_ack(self, seg):
        if not _is_ack(seg):
            self._violation(seg, "expected ACK")
        if seg.ack_number != (self.server_isn + 1) % MOD32 or \
                seg.sequence_number != (self.client_isn + 1) % MOD32:
            self._violation(seg, "ACK does not acknowledge server ISN+1")

    def observe(self, seg):
        """Passively track a handshake seen on the wire."""
        if self.state is TcpState.CLOSED:
            if not _is_syn(seg):
                self._violation(seg, "expected SYN")
            self.client_isn = seg.sequence_number
            self.state = TcpState.SYN_SENT
        elif self.state is TcpState.SYN_SENT:
            if not _is_synack(seg) or seg.ack_number != (self.client_isn + 1) % MOD32:
                self._violation(seg, "expected SYN+ACK acknowledging ISN+1")
            self.server_isn = seg.sequence_number
            self.state = TcpState.SYN_RECEIVED
        elif self.state is TcpState.SYN_RECEIVED:
            self._check_final_ack(seg)
            self.state = TcpState.ESTABLISHED
        else:
            self._violation(seg, "handshake already complete")


def isn_channel_connect(secret_word, client=None, server=None, seed=0):
    """Run one handshake whose client ISN is ``secret_word``; returns the 3 segments."""
    if not 0 <= secret_word < MOD32:
        raise ValueError("secret word must fit in 32 bits")
    if client is None:
        client = HandshakeState(Role.CLIENT)
    if server is None:
        isn = int(np.random.default_rng(seed).integers(0, MOD32))
        server = HandshakeState(Role.SERVER, isn=isn)
    if client.state is not TcpState.CLOSED or server.state is not TcpState.CLOSED:
        raise ProtocolViolation("handshake requires fresh machines")
    client.client_isn = secret_word
    syn = client.open()
    synack = server.receive(syn)
    ack = client.receive(synack)
    server.receive(ack)
    return [syn, synack, ack]


def isn_channel_observe(transcript):
    observer = HandshakeState(Role.OBSERVER)
    for seg in transcript:
        observer.observe(seg)
    if observer.state is not TcpState.ESTABLISHED:
        raise ProtocolViolation("transcript does not complete a handshake")
    return observer.client_isn


def isn_channel_send(payload, seed=0):
    """One handshake per 32-bit big-endian word of ``payload`` (tail zero-padded)."""
    payload = bytes(payload)
    payload += b"\x00" * (-len(payload) % 4)
    rng = np.random.default_rng(seed)
    transcripts = []
    for i in range(0, len(payload), 4):
        client = HandshakeState(Role.CLIENT, client_port=49152 + (i // 4) % 16384)
        server = HandshakeState(Role.SERVER, isn=int(rng.integers(0, MOD32)))
        transcripts.append(isn_channel_connect(int.from_bytes(payload[i:i + 4], "big"), client, server))
    return transcripts


def isn_channel_receive(transcripts):
    return b"".join(isn_channel_observe(t).to_bytes(4, "big") for t in transcripts)
