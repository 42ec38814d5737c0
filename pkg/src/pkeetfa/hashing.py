"""Hash functions of the scheme.

``frd_encode`` (H) maps an identity vector v in Z_q^n to an invertible ring
element; ``hash_message`` (H') maps a binary message to an n-bit digest.
Both are SHAKE-256 based and domain separated.
"""

from __future__ import annotations

import hashlib
import struct

import numpy as np

from .errors import ExhaustedRejection
from .ring import Ring

_H_DOMAIN = b"pkeetfa/H/v1"
_HP_DOMAIN = b"pkeetfa/H'/v1"
MAX_ATTEMPTS = 256


def message_bytes(msg) -> bytes:
    """Canonical encoding: n bits packed little-endian, zero-padded."""
    bits = np.asarray(msg)
    if bits.ndim != 1 or np.any((bits != 0) & (bits != 1)):
        raise ValueError("a message is a 1-D array of bits")
    return np.packbits(bits.astype(np.uint8), bitorder="little").tobytes()


def message_from_bytes(data: bytes, n: int) -> np.ndarray:
    """Inverse of ``message_bytes``; the padding bits must be zero."""
    if len(data) != (n + 7) // 8:
        raise ValueError(f"expected {(n + 7) // 8} bytes for an {n}-bit message, got {len(data)}")
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    if np.any(bits[n:]):
        raise ValueError("nonzero padding bits")
    return bits[:n].astype(np.uint64)


def _expand_mod(seed: bytes, q: int, count: int) -> np.ndarray:
    """``count`` residues mod q from a SHAKE-256 stream by masked rejection."""
    mask = np.uint64((1 << (q - 1).bit_length()) - 1)
    words = 2 * count + 16
    while True:
        stream = np.frombuffer(hashlib.shake_256(seed).digest(8 * words), dtype="<u8").astype(np.uint64)
        cand = stream & mask
        cand = cand[cand < np.uint64(q)]
        if cand.size >= count:
            return cand[:count]
        words *= 2  # the longer stream extends the shorter one


def frd_encode(v, ring: Ring) -> np.ndarray:
    """H(v): first invertible candidate of a counter-indexed XOF expansion.

    Raises ``ExhaustedRejection`` if no candidate among ``MAX_ATTEMPTS`` is
    invertible.
    """
    v = np.asarray(v, dtype=np.uint64)
    if v.shape != (ring.n,):
        raise ValueError(f"identity vector must have shape ({ring.n},)")
    body = struct.pack("<IQ", ring.n, ring.q) + v.astype("<u8").tobytes()
    for attempt in range(MAX_ATTEMPTS):
        seed = _H_DOMAIN + struct.pack("<H", attempt) + body
        cand = _expand_mod(seed, ring.q, ring.n)
        if ring.is_invertible(cand):
            return cand
    raise ExhaustedRejection(f"no invertible candidate after {MAX_ATTEMPTS} attempts")


def hash_message(msg) -> np.ndarray:
    """H'(M): n digest bits (uint64 0/1) for an n-bit message M."""
    n = np.shape(msg)[-1]
    digest = hashlib.shake_256(_HP_DOMAIN + struct.pack("<I", n) + message_bytes(msg)).digest((n + 7) // 8)
    return np.unpackbits(np.frombuffer(digest, dtype=np.uint8), bitorder="little")[:n].astype(np.uint64)
