"""Wire format: tagged frames of length-prefixed bit fields.

A frame is one tag byte, a 4-byte big-endian field count, then each field as
a 4-byte big-endian bit length followed by ceil(bits/8) bytes packed least
significant bit first.  Padding bits above the declared length must be zero.
Index sets travel as a single mask field whose bit length is the ground-set
size; the empty set over an empty ground is one zero-length field.

Example: the one-bit branch-flip message carrying e=1 encodes to
``05 00 00 00 01 00 00 00 01 01``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from ..bits import BitString, IndexSet
from ..commit import CommitMessage, OpenMessage
from ..ot import TransferPayload
from ..reasons import Reason

__all__ = [
    "FrameError",
    "TAG_HASH_DESC",
    "TAG_COMMIT",
    "TAG_OPEN",
    "TAG_SET_A",
    "TAG_E_BIT",
    "TAG_IH_QUERY",
    "TAG_IH_RESPONSE",
    "TAG_PAYLOAD",
    "TAG_ABORT",
    "TAG_RESULT",
    "HashDesc",
    "SetA",
    "EBit",
    "IHQuery",
    "IHResponse",
    "AbortMsg",
    "ResultMsg",
    "encode_frame",
    "decode_frame",
    "read_frame",
    "encode_message",
    "decode_message",
]

TAG_HASH_DESC = 0x01
TAG_COMMIT = 0x02
TAG_OPEN = 0x03
TAG_SET_A = 0x04
TAG_E_BIT = 0x05
TAG_IH_QUERY = 0x06
TAG_IH_RESPONSE = 0x07
TAG_PAYLOAD = 0x08
TAG_ABORT = 0x09
TAG_RESULT = 0x0A

# tag -> exact field count
_FIELD_COUNTS = {
    TAG_HASH_DESC: 1,
    TAG_COMMIT: 4,
    TAG_OPEN: 2,
    TAG_SET_A: 1,
    TAG_E_BIT: 1,
    TAG_IH_QUERY: 1,
    TAG_IH_RESPONSE: 1,
    TAG_PAYLOAD: 6,
    TAG_ABORT: 1,
    TAG_RESULT: 3,
}

MAX_FIELD_BITS = 1 << 26
MAX_FIELDS = 16


class FrameError(ValueError):
    """Malformed or unparseable frame."""


@dataclass(frozen=True)
class HashDesc:
    """Verifier's hash choice, carried as the Toeplitz diagonal."""

    diag: BitString


@dataclass(frozen=True)
class SetA:
    """Sample-position announcement, carried as a ground-set mask."""

    positions: IndexSet


@dataclass(frozen=True)
class EBit:
    e: int


@dataclass(frozen=True)
class IHQuery:
    q: BitString


@dataclass(frozen=True)
class IHResponse:
    bit: int


@dataclass(frozen=True)
class AbortMsg:
    reason: Reason


@dataclass(frozen=True)
class ResultMsg:
    """Session outcome report.  `value` is the accepted commitment value;
    transfer sessions leave it empty so the wire never reveals the output."""

    ok: bool
    reason: Reason
    value: BitString


def encode_frame(tag: int, fields: Sequence[BitString]) -> bytes:
    if tag not in _FIELD_COUNTS:
        raise FrameError(f"unknown tag 0x{tag:02X}")
    if len(fields) != _FIELD_COUNTS[tag]:
        raise FrameError(
            f"tag 0x{tag:02X} carries {_FIELD_COUNTS[tag]} fields, got {len(fields)}"
        )
    out = bytearray()
    out.append(tag)
    out += len(fields).to_bytes(4, "big")
    for f in fields:
        out += f.length.to_bytes(4, "big")
        out += f.to_bytes()
    return bytes(out)


def decode_frame(data: bytes) -> tuple[int, list[BitString]]:
    if len(data) < 5:
        raise FrameError("frame shorter than header")
    tag = data[0]
    if tag not in _FIELD_COUNTS:
        raise FrameError(f"unknown tag 0x{tag:02X}")
    count = int.from_bytes(data[1:5], "big")
    if count != _FIELD_COUNTS[tag]:
        raise FrameError(f"tag 0x{tag:02X} carries {_FIELD_COUNTS[tag]} fields, got {count}")
    fields: list[BitString] = []
    pos = 5
    for _ in range(count):
        if pos + 4 > len(data):
            raise FrameError("truncated field header")
        bits = int.from_bytes(data[pos : pos + 4], "big")
        if bits > MAX_FIELD_BITS:
            raise FrameError("field too large")
        pos += 4
        nbytes = (bits + 7) // 8
        if pos + nbytes > len(data):
            raise FrameError("truncated field body")
        try:
            fields.append(BitString.from_bytes(data[pos : pos + nbytes], bits))
        except ValueError as exc:
            raise FrameError(str(exc)) from exc
        pos += nbytes
    if pos != len(data):
        raise FrameError("trailing bytes after last field")
    return tag, fields


def read_frame(read_exact: Callable[[int], bytes]) -> bytes:
    """Reassemble one frame from a byte stream; frames are self-delimiting."""
    head = read_exact(5)
    tag = head[0]
    if tag not in _FIELD_COUNTS:
        raise FrameError(f"unknown tag 0x{tag:02X}")
    count = int.from_bytes(head[1:5], "big")
    if count > MAX_FIELDS:
        raise FrameError("field count too large")
    buf = bytearray(head)
    for _ in range(count):
        lenb = read_exact(4)
        bits = int.from_bytes(lenb, "big")
        if bits > MAX_FIELD_BITS:
            raise FrameError("field too large")
        buf += lenb
        buf += read_exact((bits + 7) // 8)
    return bytes(buf)


def _bit_field(f: BitString, what: str) -> int:
    if f.length != 1:
        raise FrameError(f"{what} must be a single bit")
    return f.to_int()


def _code_field(f: BitString) -> Reason:
    if f.length != 8:
        raise FrameError("reason code must be 8 bits")
    try:
        return Reason(f.to_int())
    except ValueError as exc:
        raise FrameError(f"unknown reason code {f.to_int()}") from exc


def encode_message(msg: object) -> bytes:
    if isinstance(msg, HashDesc):
        return encode_frame(TAG_HASH_DESC, [msg.diag])
    if isinstance(msg, CommitMessage):
        return encode_frame(TAG_COMMIT, [msg.masked, msg.digest, msg.a.to_mask(), msg.u])
    if isinstance(msg, OpenMessage):
        return encode_frame(TAG_OPEN, [msg.value, msg.w])
    if isinstance(msg, SetA):
        return encode_frame(TAG_SET_A, [msg.positions.to_mask()])
    if isinstance(msg, EBit):
        return encode_frame(TAG_E_BIT, [BitString(1, msg.e & 1)])
    if isinstance(msg, IHQuery):
        return encode_frame(TAG_IH_QUERY, [msg.q])
    if isinstance(msg, IHResponse):
        return encode_frame(TAG_IH_RESPONSE, [BitString(1, msg.bit & 1)])
    if isinstance(msg, TransferPayload):
        return encode_frame(
            TAG_PAYLOAD, [msg.z0, msg.r0, msg.p0, msg.z1, msg.r1, msg.p1]
        )
    if isinstance(msg, AbortMsg):
        return encode_frame(TAG_ABORT, [BitString(8, int(msg.reason))])
    if isinstance(msg, ResultMsg):
        return encode_frame(
            TAG_RESULT,
            [BitString(1, int(msg.ok)), BitString(8, int(msg.reason)), msg.value],
        )
    raise FrameError(f"cannot encode {type(msg).__name__}")


def decode_message(data: bytes) -> object:
    tag, f = decode_frame(data)
    if tag == TAG_HASH_DESC:
        return HashDesc(diag=f[0])
    if tag == TAG_COMMIT:
        return CommitMessage(masked=f[0], digest=f[1], a=IndexSet.from_mask(f[2]), u=f[3])
    if tag == TAG_OPEN:
        return OpenMessage(value=f[0], w=f[1])
    if tag == TAG_SET_A:
        return SetA(positions=IndexSet.from_mask(f[0]))
    if tag == TAG_E_BIT:
        return EBit(e=_bit_field(f[0], "e"))
    if tag == TAG_IH_QUERY:
        return IHQuery(q=f[0])
    if tag == TAG_IH_RESPONSE:
        return IHResponse(bit=_bit_field(f[0], "response"))
    if tag == TAG_PAYLOAD:
        return TransferPayload(z0=f[0], r0=f[1], p0=f[2], z1=f[3], r1=f[4], p1=f[5])
    if tag == TAG_ABORT:
        return AbortMsg(reason=_code_field(f[0]))
    if tag == TAG_RESULT:
        return ResultMsg(ok=bool(_bit_field(f[0], "ok")), reason=_code_field(f[1]), value=f[2])
    raise FrameError(f"unknown tag 0x{tag:02X}")
