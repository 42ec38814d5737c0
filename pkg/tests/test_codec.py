import math
import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_message
from pkeetfa import codec, scheme
from pkeetfa.errors import CodecError
from pkeetfa.rng import Rng


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 64), st.lists(st.integers(0, 2**64 - 1), max_size=40))
def test_pack_uint_roundtrip(width, values):
    values = [v & ((1 << width) - 1) for v in values]
    data = codec.pack_uint(np.array(values, dtype=np.uint64), width)
    assert len(data) == math.ceil(len(values) * width / 8)
    assert codec.unpack_uint(data, width, len(values)).tolist() == values


def test_pack_uint_bit_order():
    # value 1 then value 2 at width 3: bits 1,0,0 | 0,1,0 -> 0b00010001
    assert codec.pack_uint(np.array([1, 2], dtype=np.uint64), 3) == bytes([0b00010001])


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 63), st.data())
def test_pack_int_roundtrip(width, data):
    lim = 1 << (width - 1)
    values = data.draw(st.lists(st.integers(-lim, lim - 1), max_size=30))
    out = codec.unpack_int(codec.pack_int(np.array(values, dtype=np.int64), width), width, len(values))
    assert out.tolist() == values


def test_pack_range_errors():
    with pytest.raises(CodecError):
        codec.pack_uint(np.array([8], dtype=np.uint64), 3)
    with pytest.raises(CodecError):
        codec.pack_int(np.array([4]), 3)
    with pytest.raises(CodecError):
        codec.unpack_uint(bytes([0xFF]), 3, 2)  # nonzero padding


def test_header_layout(toy17):
    pk, _ = scheme.setup(toy17, Rng(1))
    data = codec.encode(pk)
    magic, version, kind, n, q, k, m, length = struct.unpack_from("<4sHBIQHHQ", data)
    assert (magic, version, kind, n, q, k, m) == (b"PKEF", 1, 1, 8, 17, 5, 7)
    assert codec.HEADER.size == 31
    assert length == len(data) - 31 == math.ceil(8 * 15 * 5 / 8)


@pytest.mark.parametrize("name", ["toy17", "paper62"])
def test_object_size_formulas(name, request):
    p = request.getfixturevalue(name)
    rng = Rng(2)
    pk, sk = scheme.setup(p, rng)
    msg = np.zeros(p.n, dtype=np.uint64)
    ct = scheme.encrypt(pk, msg, rng)
    assert codec.payload_bits(codec.Kind.CT, p) == p.n * (2 * p.m + 3) * p.k
    assert len(codec.encode(ct)) - 31 == math.ceil(p.n * (2 * p.m + 3) * p.k / 8)
    assert len(codec.encode(pk)) - 31 == math.ceil(p.n * (2 * p.m + 1) * p.k / 8)
    assert len(codec.encode(sk)) - 31 == 1 + math.ceil(codec.payload_bits(codec.Kind.SK, p) / 8)


def test_secret_width():
    from pkeetfa.params import preset

    assert codec.secret_width(preset("paper62")) == 62  # 2 n k (m - k) log q
    assert codec.secret_width(preset("toy17")) == 7  # t sigma = 54.7 needs 7 signed bits


def test_roundtrip_every_kind_toy(toy17):
    rng = Rng(3)
    pk, sk = scheme.setup(toy17, rng)
    ct = scheme.encrypt(pk, random_message(rng, 8), rng)
    objs = [pk, sk, ct, scheme.td1(sk, pk), scheme.td2(sk, pk, ct, rng), scheme.td3_i(sk, pk, ct, rng),
            scheme.td3_j(sk, pk)]
    for obj in objs:
        data = codec.encode(obj)
        back = codec.decode(data)
        assert back == obj
        assert codec.encode(back) == data


def test_sensitive_flag(toy17):
    pk, sk = scheme.setup(toy17, Rng(4))
    assert codec.encode(sk)[31] == codec.SENSITIVE
    assert codec.encode(scheme.td1(sk, pk))[31] == codec.SENSITIVE


def test_malformed_inputs(toy17):
    rng = Rng(5)
    pk, sk = scheme.setup(toy17, rng)
    good = codec.encode(pk)
    cases = [
        b"",
        good[:10],
        b"XXXX" + good[4:],
        good[:4] + struct.pack("<H", 9) + good[6:],
        good[:6] + bytes([9]) + good[7:],
        good[:-1],
        good + b"\x00",
        good[:7] + struct.pack("<I", 16) + good[11:],  # unknown fingerprint
    ]
    for data in cases:
        with pytest.raises(CodecError):
            codec.decode(data)
    with pytest.raises(CodecError):
        codec.decode(good, expect=codec.Kind.CT)
    sk_data = bytearray(codec.encode(sk))
    sk_data[31] = 0
    with pytest.raises(CodecError):
        codec.decode(bytes(sk_data))
    # a coefficient >= q is rejected: set the first 5-bit field of the PK to 31
    bad = bytearray(good)
    bad[31] |= 0x1F
    with pytest.raises(CodecError):
        codec.decode(bytes(bad))


def test_encode_rejects_foreign_objects():
    with pytest.raises(TypeError):
        codec.encode(object())
