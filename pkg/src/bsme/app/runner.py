"""Drive full protocol sessions over a channel, in-process or across hosts.

Randomness is compartmentalized per role: each party draws from
random.Random(f"{seed}:{role}"), the broadcast source from
random.Random(f"{seed}:source"), and default inputs from
random.Random(f"{seed}:input").  Two runs with the same seed therefore
produce byte-identical transcripts on either transport, and the two halves
of a cross-host session regenerate the same broadcast locally.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass

from ..bits import BitString
from ..commit import CommitMessage, Committer, OpenMessage, Verifier
from ..hashing import ToeplitzHash
from ..ihash import DependentQueryError
from ..infomath import CommitParams, OTParams
from ..ot import OTReceiver, OTSender, SetupAbort, TransferPayload
from ..reasons import Reason
from ..source import SourceConfig, SourcePair, generate
from .channel import memory_pair, socketpair_channels
from .framing import (
    AbortMsg,
    EBit,
    FrameError,
    HashDesc,
    IHQuery,
    IHResponse,
    ResultMsg,
    SetA,
    decode_message,
    encode_message,
)

__all__ = [
    "CommitOutcome",
    "OTOutcome",
    "run_commit_session",
    "run_ot_session",
    "commit_party",
    "ot_party",
    "role_rng",
    "build_source",
]

JOIN_TIMEOUT = 60.0


def role_rng(seed: int, role: str) -> random.Random:
    return random.Random(f"{seed}:{role}")


def build_source(n: int, alpha: float, delta: float, seed: int, error_model: str = "random") -> SourcePair:
    cfg = SourceConfig(n=n, alpha=alpha, delta=delta, error_model=error_model, seed=f"{seed}:source")
    return generate(cfg)


@dataclass(frozen=True)
class CommitOutcome:
    value: BitString
    accepted: bool
    reason: Reason
    opened: BitString | None
    transcript: tuple[tuple[str, bytes], ...]


@dataclass(frozen=True)
class OTOutcome:
    choice: int
    secrets: tuple[BitString, BitString]
    completed: bool
    reason: Reason
    output: BitString | None
    transcript: tuple[tuple[str, bytes], ...]

    @property
    def correct(self) -> bool:
        return self.completed and self.output == self.secrets[self.choice]


def _send(chan, msg) -> None:
    chan.send(encode_message(msg))


def _recv(chan):
    return decode_message(chan.recv())


def _drain(chan) -> None:
    # After an early abort the peer may still have frames in flight; keep
    # reading until it sees the abort and closes, so no send of ours races
    # a closed socket.
    try:
        while True:
            chan.recv()
    except (ConnectionError, FrameError):
        pass


# --------------------------------------------------------------------------
# commitment party loops


def _commit_committer(chan, params: CommitParams, pair: SourcePair, value: BitString, rng) -> dict:
    party = Committer(params, value, rng)
    party.transmit(pair)
    msg = _recv(chan)
    if not isinstance(msg, HashDesc):
        _send(chan, AbortMsg(Reason.MALFORMED_MESSAGE))
        return {"accepted": False, "reason": Reason.MALFORMED_MESSAGE, "opened": None}
    try:
        g = ToeplitzHash(params.k, params.digest_len, msg.diag)
    except ValueError:
        _send(chan, AbortMsg(Reason.MALFORMED_MESSAGE))
        return {"accepted": False, "reason": Reason.MALFORMED_MESSAGE, "opened": None}
    _send(chan, party.make_commitment(g))
    _send(chan, party.open())
    reply = _recv(chan)
    if isinstance(reply, ResultMsg):
        opened = reply.value if reply.ok else None
        return {"accepted": reply.ok, "reason": reply.reason, "opened": opened}
    if isinstance(reply, AbortMsg):
        return {"accepted": False, "reason": reply.reason, "opened": None}
    return {"accepted": False, "reason": Reason.MALFORMED_MESSAGE, "opened": None}


def _commit_verifier(chan, params: CommitParams, pair: SourcePair, rng) -> dict:
    party = Verifier(params, rng)
    party.transmit(pair)
    g = party.choose_hash()
    _send(chan, HashDesc(g.diag))
    msg = _recv(chan)
    if not isinstance(msg, CommitMessage):
        _send(chan, ResultMsg(False, Reason.MALFORMED_MESSAGE, BitString.zeros(0)))
        return {"accepted": False, "reason": Reason.MALFORMED_MESSAGE, "opened": None}
    party.receive_commitment(msg)
    opening = _recv(chan)
    if not isinstance(opening, OpenMessage):
        _send(chan, ResultMsg(False, Reason.MALFORMED_MESSAGE, BitString.zeros(0)))
        return {"accepted": False, "reason": Reason.MALFORMED_MESSAGE, "opened": None}
    res = party.verify(opening)
    opened = opening.value if res.accept else None
    _send(chan, ResultMsg(res.accept, res.reason, opened if opened is not None else BitString.zeros(0)))
    return {"accepted": res.accept, "reason": res.reason, "opened": opened}


# --------------------------------------------------------------------------
# transfer party loops


def _ot_sender(chan, params: OTParams, pair: SourcePair, s0: BitString, s1: BitString, rng) -> dict:
    party = OTSender(params, s0, s1, rng)
    party.transmit(pair)
    _send(chan, SetA(party.begin_setup()))
    while not party.querier.finished:
        _send(chan, IHQuery(party.next_query()))
        reply = _recv(chan)
        if isinstance(reply, AbortMsg):
            return {"completed": False, "reason": reply.reason}
        if not isinstance(reply, IHResponse):
            _send(chan, AbortMsg(Reason.MALFORMED_MESSAGE))
            return {"completed": False, "reason": Reason.MALFORMED_MESSAGE}
        party.take_response(reply.bit)
    msg = _recv(chan)
    if isinstance(msg, AbortMsg):
        return {"completed": False, "reason": msg.reason}
    if not isinstance(msg, EBit):
        _send(chan, AbortMsg(Reason.MALFORMED_MESSAGE))
        return {"completed": False, "reason": Reason.MALFORMED_MESSAGE}
    try:
        party.finish_setup()
    except SetupAbort as abort:
        _send(chan, AbortMsg(abort.reason))
        return {"completed": False, "reason": abort.reason}
    _send(chan, party.transfer(msg.e))
    final = _recv(chan)
    if isinstance(final, ResultMsg):
        return {"completed": final.ok, "reason": final.reason}
    return {"completed": False, "reason": Reason.MALFORMED_MESSAGE}


def _ot_receiver(chan, params: OTParams, pair: SourcePair, choice: int, rng, w_strategy=None) -> dict:
    party = OTReceiver(params, choice, rng, w_strategy=w_strategy)
    party.transmit(pair)
    msg = _recv(chan)
    if not isinstance(msg, SetA):
        _send(chan, AbortMsg(Reason.MALFORMED_MESSAGE))
        _drain(chan)
        return {"completed": False, "reason": Reason.MALFORMED_MESSAGE, "output": None}
    try:
        party.receive_positions(msg.positions)
    except SetupAbort as abort:
        _send(chan, AbortMsg(abort.reason))
        _drain(chan)
        return {"completed": False, "reason": abort.reason, "output": None}
    for _ in range(params.m - 1):
        q = _recv(chan)
        if not isinstance(q, IHQuery):
            _send(chan, AbortMsg(Reason.MALFORMED_MESSAGE))
            return {"completed": False, "reason": Reason.MALFORMED_MESSAGE, "output": None}
        try:
            bit = party.respond(q.q)
        except DependentQueryError:
            _send(chan, AbortMsg(Reason.DEPENDENT_QUERY))
            return {"completed": False, "reason": Reason.DEPENDENT_QUERY, "output": None}
        except ValueError:
            _send(chan, AbortMsg(Reason.MALFORMED_MESSAGE))
            return {"completed": False, "reason": Reason.MALFORMED_MESSAGE, "output": None}
        _send(chan, IHResponse(bit))
    try:
        e = party.finish_setup()
    except SetupAbort as abort:
        _send(chan, AbortMsg(abort.reason))
        return {"completed": False, "reason": abort.reason, "output": None}
    _send(chan, EBit(e))
    msg = _recv(chan)
    if isinstance(msg, AbortMsg):
        return {"completed": False, "reason": msg.reason, "output": None}
    if not isinstance(msg, TransferPayload):
        _send(chan, AbortMsg(Reason.MALFORMED_MESSAGE))
        return {"completed": False, "reason": Reason.MALFORMED_MESSAGE, "output": None}
    try:
        output = party.receive_payload(msg)
    except SetupAbort as abort:
        _send(chan, ResultMsg(False, abort.reason, BitString.zeros(0)))
        return {"completed": False, "reason": abort.reason, "output": None}
    if output is None:
        _send(chan, ResultMsg(False, Reason.DECODE_FAILURE, BitString.zeros(0)))
        return {"completed": False, "reason": Reason.DECODE_FAILURE, "output": None}
    _send(chan, ResultMsg(True, Reason.OK, BitString.zeros(0)))
    return {"completed": True, "reason": Reason.OK, "output": output}


# --------------------------------------------------------------------------
# in-process sessions


def _run_pair(side_a, side_b, chan_a, chan_b) -> tuple[dict, dict]:
    results: dict[str, object] = {}

    def wrap(name, fn, chan):
        try:
            results[name] = fn(chan)
        except BaseException as exc:  # propagated after join
            results[name] = exc
        finally:
            chan.close()

    ta = threading.Thread(target=wrap, args=("a", side_a, chan_a), daemon=True)
    tb = threading.Thread(target=wrap, args=("b", side_b, chan_b), daemon=True)
    ta.start()
    tb.start()
    ta.join(JOIN_TIMEOUT)
    tb.join(JOIN_TIMEOUT)
    if ta.is_alive() or tb.is_alive():
        raise RuntimeError("session deadlocked")
    for name in ("a", "b"):
        if isinstance(results[name], BaseException):
            raise results[name]
    return results["a"], results["b"]  # type: ignore[return-value]


def _make_channels(transport: str, transcript: list):
    if transport == "memory":
        return memory_pair(transcript)
    if transport == "socket":
        return socketpair_channels(transcript)
    raise ValueError(f"unknown transport {transport!r}")


def run_commit_session(
    params: CommitParams,
    value: BitString | None = None,
    seed: int = 0,
    transport: str = "memory",
    error_model: str = "random",
) -> CommitOutcome:
    if value is None:
        value = BitString.random(params.m, role_rng(seed, "input"))
    pair = build_source(params.n, params.alpha, params.delta, seed, error_model)
    transcript: list = []
    chan_a, chan_b = _make_channels(transport, transcript)
    rng_a = role_rng(seed, "alice")
    rng_b = role_rng(seed, "bob")
    res_a, res_b = _run_pair(
        lambda ch: _commit_committer(ch, params, pair, value, rng_a),
        lambda ch: _commit_verifier(ch, params, pair, rng_b),
        chan_a,
        chan_b,
    )
    return CommitOutcome(
        value=value,
        accepted=bool(res_b["accepted"]),
        reason=res_b["reason"],
        opened=res_b["opened"],
        transcript=tuple(transcript),
    )


def run_ot_session(
    params: OTParams,
    choice: int | None = None,
    secrets: tuple[BitString, BitString] | None = None,
    seed: int = 0,
    transport: str = "memory",
    error_model: str = "random",
    w_strategy=None,
) -> OTOutcome:
    rng_in = role_rng(seed, "input")
    if choice is None:
        choice = rng_in.getrandbits(1)
    if secrets is None:
        secrets = (
            BitString.random(params.payload_len, rng_in),
            BitString.random(params.payload_len, rng_in),
        )
    pair = build_source(params.n, params.alpha, params.delta, seed, error_model)
    transcript: list = []
    chan_a, chan_b = _make_channels(transport, transcript)
    rng_a = role_rng(seed, "alice")
    rng_b = role_rng(seed, "bob")
    res_a, res_b = _run_pair(
        lambda ch: _ot_sender(ch, params, pair, secrets[0], secrets[1], rng_a),
        lambda ch: _ot_receiver(ch, params, pair, choice, rng_b, w_strategy),
        chan_a,
        chan_b,
    )
    completed = bool(res_a["completed"]) and bool(res_b["completed"])
    reason = res_b["reason"] if res_b["reason"] != Reason.OK else res_a["reason"]
    return OTOutcome(
        choice=choice,
        secrets=secrets,
        completed=completed,
        reason=reason,
        output=res_b["output"],
        transcript=tuple(transcript),
    )


# --------------------------------------------------------------------------
# single-party entry points (cross-host sessions)


def commit_party(
    role: str,
    chan,
    params: CommitParams,
    seed: int,
    value: BitString | None = None,
    error_model: str = "random",
) -> dict:
    """Run one side of a commitment over an established channel.  Both hosts
    must share seed and parameters so they regenerate the same broadcast."""
    pair = build_source(params.n, params.alpha, params.delta, seed, error_model)
    if role == "committer":
        if value is None:
            value = BitString.random(params.m, role_rng(seed, "input"))
        out = _commit_committer(chan, params, pair, value, role_rng(seed, "alice"))
        out["value"] = value
        return out
    if role == "verifier":
        return _commit_verifier(chan, params, pair, role_rng(seed, "bob"))
    raise ValueError(f"unknown commit role {role!r}")


def ot_party(
    role: str,
    chan,
    params: OTParams,
    seed: int,
    choice: int | None = None,
    secrets: tuple[BitString, BitString] | None = None,
    error_model: str = "random",
) -> dict:
    pair = build_source(params.n, params.alpha, params.delta, seed, error_model)
    rng_in = role_rng(seed, "input")
    default_choice = rng_in.getrandbits(1)
    default_secrets = (
        BitString.random(params.payload_len, rng_in),
        BitString.random(params.payload_len, rng_in),
    )
    if role == "sender":
        s0, s1 = secrets if secrets is not None else default_secrets
        out = _ot_sender(chan, params, pair, s0, s1, role_rng(seed, "alice"))
        out["secrets"] = (s0, s1)
        return out
    if role == "receiver":
        c = choice if choice is not None else default_choice
        out = _ot_receiver(chan, params, pair, c, role_rng(seed, "bob"))
        out["choice"] = c
        return out
    raise ValueError(f"unknown transfer role {role!r}")
