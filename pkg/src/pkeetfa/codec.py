"""Binary serialization of keys, ciphertexts and trapdoors.

Every file is a fixed header followed by a payload::

    magic "PKEF" | version u16 | kind u8 | n u32 | q u64 | k u16 | m u16 | payload_len u64

little-endian. Ring coefficients are bit-packed at k = ceil(log2 q) bits each,
little-endian, and the payload is zero-padded to a byte boundary. Secret
keys and trapdoors begin their payload with a SENSITIVE flag byte.
"""

from __future__ import annotations

import enum
import math
import struct

import numpy as np

from .errors import CodecError, InvalidParams
from .params import Params, by_fingerprint
from .scheme import AuthTrapdoor, Ciphertext, PublicKey, SecretKey, Variant
from .trapdoor import GTrapdoor

MAGIC = b"PKEF"
VERSION = 1
HEADER = struct.Struct("<4sHBIQHHQ")
SENSITIVE = 0x01
MAX_PAYLOAD = 1 << 32


class Kind(enum.IntEnum):
    PK = 1
    SK = 2
    CT = 3
    TD = 4


# --- bit packing --------------------------------------------------------------


def pack_uint(values, width: int) -> bytes:
    """Little-endian bit-packing of non-negative integers below 2**width."""
    v = np.asarray(values, dtype=np.uint64).reshape(-1)
    if width < 64 and v.size and int(v.max()) >> width:
        raise CodecError(f"value does not fit in {width} bits")
    shifts = np.arange(width, dtype=np.uint64)
    bits = ((v[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    return np.packbits(bits.reshape(-1), bitorder="little").tobytes()


def unpack_uint(data: bytes, width: int, count: int) -> np.ndarray:
    if len(data) != math.ceil(count * width / 8):
        raise CodecError("packed field has the wrong length")
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    if np.any(bits[count * width :]):
        raise CodecError("nonzero padding bits")
    bits = bits[: count * width].reshape(count, width).astype(np.uint64)
    return (bits << np.arange(width, dtype=np.uint64)).sum(axis=1, dtype=np.uint64)


def pack_int(values, width: int) -> bytes:
    """Two's-complement bit-packing of signed integers."""
    v = np.asarray(values, dtype=np.int64).reshape(-1)
    lim = 1 << (width - 1)
    if v.size and (int(v.min()) < -lim or int(v.max()) >= lim):
        raise CodecError(f"value does not fit in {width} signed bits")
    return pack_uint(v.astype(np.uint64) & np.uint64((1 << width) - 1), width)


def unpack_int(data: bytes, width: int, count: int) -> np.ndarray:
    shift = np.uint64(64 - width)
    # sign-extend by moving the top field bit into bit 63
    return (unpack_uint(data, width, count) << shift).view(np.int64) >> np.int64(64 - width)


def secret_width(p: Params) -> int:
    """Bits per signed trapdoor coefficient: covers the t sigma tail cut."""
    tail = math.ceil(p.gauss.t * p.gauss.sigma) + 1
    return max(p.k, tail.bit_length() + 1)


# --- field layout -------------------------------------------------------------


class _Writer:
    def __init__(self, p: Params):
        self.p = p
        self.chunks: list[np.ndarray] = []

    def ring(self, arr) -> None:
        arr = np.asarray(arr, dtype=np.uint64)
        if arr.shape[-1] != self.p.n or (arr.size and int(arr.max()) >= self.p.q):
            raise CodecError("ring elements must be canonical residues mod q")
        self.chunks.append(arr.reshape(-1))

    def payload(self) -> bytes:
        if not self.chunks:
            return b""
        return pack_uint(np.concatenate(self.chunks), self.p.k)


class _Reader:
    def __init__(self, p: Params, data: bytes):
        self.p = p
        self.values = None
        self.data = data
        self.pos = 0

    def load(self, count_elems: int) -> None:
        self.values = unpack_uint(self.data, self.p.k, count_elems * self.p.n)
        if self.values.size and int(self.values.max()) >= self.p.q:
            raise CodecError("coefficient out of range")

    def ring(self, *lead) -> np.ndarray:
        count = int(np.prod(lead, dtype=np.int64)) * self.p.n
        out = self.values[self.pos : self.pos + count].reshape(lead + (self.p.n,))
        self.pos += count
        return out.copy()


def _header(kind: Kind, p: Params, payload: bytes) -> bytes:
    return HEADER.pack(MAGIC, VERSION, kind, p.n, p.q, p.k, p.m, len(payload)) + payload


def _sk_payload(p: Params, ta: GTrapdoor, tb: GTrapdoor) -> bytes:
    width = secret_width(p)
    return pack_int(np.concatenate([ta.T.reshape(-1), tb.T.reshape(-1)]), width)


def _sk_from(p: Params, data: bytes) -> tuple[GTrapdoor, GTrapdoor]:
    width = secret_width(p)
    count = (p.m - p.k) * p.k * p.n
    T = unpack_int(data, width, 2 * count).reshape(2, p.m - p.k, p.k, p.n)
    zero = np.zeros(p.n, dtype=np.uint64)
    return (GTrapdoor(T=T[0].copy(), tag=zero, sigma=p.gauss.sigma),
            GTrapdoor(T=T[1].copy(), tag=zero.copy(), sigma=p.gauss.sigma))


# --- public API -----------------------------------------------------------------


def encode(obj) -> bytes:
    """Serialize a PublicKey, SecretKey, Ciphertext or AuthTrapdoor."""
    if not isinstance(obj, (PublicKey, Ciphertext, SecretKey, AuthTrapdoor)):
        raise TypeError(f"cannot encode {type(obj).__name__}")
    p = obj.params
    if isinstance(obj, PublicKey):
        w = _Writer(p)
        w.ring(obj.a)
        w.ring(obj.b)
        w.ring(obj.u)
        return _header(Kind.PK, p, w.payload())
    if isinstance(obj, Ciphertext):
        w = _Writer(p)
        for part in (obj.v, obj.ct1, obj.ct2, obj.ct3, obj.ct4):
            w.ring(part)
        return _header(Kind.CT, p, w.payload())
    if isinstance(obj, SecretKey):
        return _header(Kind.SK, p, bytes([SENSITIVE]) + _sk_payload(p, obj.ta, obj.tb))
    head = bytes([SENSITIVE, int(obj.variant)])
    w = _Writer(p)
    if obj.variant.holds_trapdoor:
        w.ring(obj.b)
        w.ring(obj.u)
        body = w.payload() + pack_int(obj.tb.T.reshape(-1), secret_width(p))
    else:
        w.ring(obj.x)
        w.ring(obj.bound_v)
        body = w.payload()
    return _header(Kind.TD, p, head + body)


def read_header(data: bytes) -> tuple[Kind, Params, bytes]:
    if len(data) < HEADER.size:
        raise CodecError("file shorter than the header")
    magic, version, kind, n, q, k, m, length = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CodecError("bad magic")
    if version != VERSION:
        raise CodecError(f"unsupported format version {version}")
    try:
        kind = Kind(kind)
    except ValueError:
        raise CodecError(f"unknown object kind {kind}") from None
    try:
        p = by_fingerprint((n, q, k, m))
    except InvalidParams as exc:
        raise CodecError(str(exc)) from None
    if length > MAX_PAYLOAD or len(data) - HEADER.size != length:
        raise CodecError("payload length does not match the header")
    return kind, p, data[HEADER.size :]


def _split(data: bytes, sizes) -> list[bytes]:
    out, pos = [], 0
    for size in sizes:
        out.append(data[pos : pos + size])
        pos += size
    if pos != len(data):
        raise CodecError("payload has the wrong length")
    return out


def decode(data: bytes, expect: Kind | None = None):
    kind, p, body = read_header(bytes(data))
    if expect is not None and kind != expect:
        raise CodecError(f"expected a {expect.name} file, got {kind.name}")
    ring_bytes = lambda elems: math.ceil(elems * p.n * p.k / 8)  # noqa: E731
    if kind == Kind.PK:
        r = _Reader(p, _split(body, [ring_bytes(2 * p.m + 1)])[0])
        r.load(2 * p.m + 1)
        return PublicKey(p, r.ring(p.m), r.ring(p.m), r.ring())
    if kind == Kind.CT:
        r = _Reader(p, _split(body, [ring_bytes(2 * p.m + 3)])[0])
        r.load(2 * p.m + 3)
        return Ciphertext(p, r.ring(), r.ring(), r.ring(), r.ring(p.m), r.ring(p.m))
    count = (p.m - p.k) * p.k * p.n
    width = secret_width(p)
    if kind == Kind.SK:
        flag, rest = _split(body, [1, math.ceil(2 * count * width / 8)])
        if flag != bytes([SENSITIVE]):
            raise CodecError("missing SENSITIVE flag")
        ta, tb = _sk_from(p, rest)
        return SecretKey(p, ta, tb)
    if len(body) < 2 or body[0] != SENSITIVE:
        raise CodecError("missing SENSITIVE flag")
    try:
        variant = Variant(body[1])
    except ValueError:
        raise CodecError(f"unknown trapdoor variant {body[1]}") from None
    if variant.holds_trapdoor:
        pub, sec = _split(body[2:], [ring_bytes(p.m + 1), math.ceil(count * width / 8)])
        r = _Reader(p, pub)
        r.load(p.m + 1)
        b, u = r.ring(p.m), r.ring()
        T = unpack_int(sec, width, count).reshape(p.m - p.k, p.k, p.n)
        tb = GTrapdoor(T=T, tag=np.zeros(p.n, dtype=np.uint64), sigma=p.gauss.sigma)
        return AuthTrapdoor(p, variant, tb=tb, b=b, u=u)
    r = _Reader(p, _split(body[2:], [ring_bytes(p.m + 1)])[0])
    r.load(p.m + 1)
    return AuthTrapdoor(p, variant, x=r.ring(p.m), bound_v=r.ring())


def payload_bits(kind: Kind, p: Params) -> int:
    """Exact size in bits of the coefficient data (before byte padding)."""
    if kind == Kind.PK:
        return p.n * (2 * p.m + 1) * p.k
    if kind == Kind.CT:
        return p.n * (2 * p.m + 3) * p.k
    if kind == Kind.SK:
        return 2 * (p.m - p.k) * p.k * p.n * secret_width(p)
    raise ValueError("trapdoor sizes depend on the variant")
