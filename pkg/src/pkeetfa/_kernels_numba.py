"""numba kernels mirroring ``_kernels_numpy``.

Deterministic kernels are bit-identical to the numpy ones. Rejection
samplers read a caller-supplied word buffer sequentially and return how many
words they consumed (-1 if the buffer ran dry; the caller retries larger).
"""

import math

import numpy as np
from numba import njit

_M32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S11 = np.uint64(11)
_U0 = np.uint64(0)
_U1 = np.uint64(1)


@njit(cache=True, inline="always")
def _mulhi(a, b):
    a0 = a & _M32
    a1 = a >> _S32
    b0 = b & _M32
    b1 = b >> _S32
    p00 = a0 * b0
    p01 = a0 * b1
    p10 = a1 * b0
    mid = (p00 >> _S32) + (p01 & _M32) + (p10 & _M32)
    return a1 * b1 + (p01 >> _S32) + (p10 >> _S32) + (mid >> _S32)


@njit(cache=True, inline="always")
def _montmul(a, b, q, qneg):
    lo = a * b
    m = lo * qneg
    carry = _U1 if lo != _U0 else _U0
    t = _mulhi(a, b) + _mulhi(m, q) + carry
    return t - q * np.uint64(t >= q)


@njit(cache=True, inline="always")
def _add(a, b, q):
    s = a + b
    return s - q * np.uint64(s >= q)


@njit(cache=True, inline="always")
def _sub(a, b, q):
    return a - b + q * np.uint64(a < b)


@njit(cache=True)
def _montmul_flat(a, b, q, qneg):
    out = np.empty_like(a)
    for i in range(a.size):
        out[i] = _montmul(a[i], b[i], q, qneg)
    return out


@njit(cache=True)
def _mulmod_flat(a, b, q, qneg, r2):
    out = np.empty_like(a)
    for i in range(a.size):
        out[i] = _montmul(_montmul(a[i], b[i], q, qneg), r2, q, qneg)
    return out


@njit(cache=True)
def _add_flat(a, b, q):
    out = np.empty_like(a)
    for i in range(a.size):
        out[i] = _add(a[i], b[i], q)
    return out


@njit(cache=True)
def _sub_flat(a, b, q):
    out = np.empty_like(a)
    for i in range(a.size):
        out[i] = _sub(a[i], b[i], q)
    return out


def _binary(flat_kernel, a, b, *consts):
    a, b = np.broadcast_arrays(np.asarray(a, dtype=np.uint64), np.asarray(b, dtype=np.uint64))
    shape = a.shape
    return flat_kernel(np.ascontiguousarray(a).reshape(-1), np.ascontiguousarray(b).reshape(-1), *consts).reshape(shape)


def montmul(a, b, q, qneg):
    return _binary(_montmul_flat, a, b, np.uint64(q), np.uint64(qneg))


def mulmod(a, b, q, qneg, r2):
    return _binary(_mulmod_flat, a, b, np.uint64(q), np.uint64(qneg), np.uint64(r2))


def add_mod(a, b, q):
    return _binary(_add_flat, a, b, np.uint64(q))


def sub_mod(a, b, q):
    return _binary(_sub_flat, a, b, np.uint64(q))


@njit(cache=True)
def _sum_rows(a, q):
    blocks, rows, n = a.shape
    out = np.empty((blocks, n), dtype=np.uint64)
    for bidx in range(blocks):
        for j in range(n):
            acc = a[bidx, 0, j]
            for i in range(1, rows):
                acc = _add(acc, a[bidx, i, j], q)
            out[bidx, j] = acc
    return out


def sum_mod(a, q):
    a = np.ascontiguousarray(a, dtype=np.uint64)
    lead = a.shape[:-2]
    out = _sum_rows(a.reshape((-1,) + a.shape[-2:]), np.uint64(q))
    return out.reshape(lead + (a.shape[-1],))


@njit(cache=True)
def _ntt_rows(x, q, qneg, zetas):
    rows, n = x.shape
    for r in range(rows):
        a = x[r]
        k = 1
        length = n // 2
        while length >= 1:
            start = 0
            while start < n:
                zeta = zetas[k]
                k += 1
                for j in range(start, start + length):
                    t = _montmul(a[j + length], zeta, q, qneg)
                    a[j + length] = _sub(a[j], t, q)
                    a[j] = _add(a[j], t, q)
                start += 2 * length
            length //= 2


@njit(cache=True)
def _intt_rows(x, q, qneg, zetas, ninv_mont):
    rows, n = x.shape
    for r in range(rows):
        a = x[r]
        k = n
        length = 1
        while length < n:
            start = 0
            while start < n:
                k -= 1
                zeta = q - zetas[k]
                for j in range(start, start + length):
                    t = a[j]
                    a[j] = _add(t, a[j + length], q)
                    a[j + length] = _montmul(_sub(t, a[j + length], q), zeta, q, qneg)
                start += 2 * length
            length *= 2
        for j in range(n):
            a[j] = _montmul(a[j], ninv_mont, q, qneg)


def ntt_forward(a, q, qneg, zetas):
    x = np.array(a, dtype=np.uint64, copy=True, order="C")
    shape = x.shape
    _ntt_rows(x.reshape(-1, shape[-1]), np.uint64(q), np.uint64(qneg), zetas)
    return x.reshape(shape)


def ntt_inverse(a, q, qneg, zetas, ninv_mont):
    x = np.array(a, dtype=np.uint64, copy=True, order="C")
    shape = x.shape
    _intt_rows(x.reshape(-1, shape[-1]), np.uint64(q), np.uint64(qneg), zetas, np.uint64(ninv_mont))
    return x.reshape(shape)


@njit(cache=True)
def _powmod_flat(a, e, q, qneg, r2, one_mont):
    out = np.empty_like(a)
    for i in range(a.size):
        base = _montmul(a[i], r2, q, qneg)
        acc = one_mont
        ee = e
        while ee:
            if ee & 1:
                acc = _montmul(acc, base, q, qneg)
            base = _montmul(base, base, q, qneg)
            ee >>= 1
        out[i] = _montmul(acc, _U1, q, qneg)
    return out


def powmod(a, e, q, qneg, r2, one_mont):
    a = np.ascontiguousarray(a, dtype=np.uint64)
    return _powmod_flat(a.reshape(-1), np.int64(e), np.uint64(q), np.uint64(qneg), np.uint64(r2),
                        np.uint64(one_mont)).reshape(a.shape)


@njit(cache=True)
def _cdt_flat(hi, lo, guide, low, words):
    count = words.size // 2
    out = np.empty(count, dtype=np.int64)
    shift = np.uint64(48)
    for i in range(count):
        w_hi = words[2 * i]
        w_lo = words[2 * i + 1]
        j = guide[w_hi >> shift]
        while j < hi.size and (hi[j] < w_hi or (hi[j] == w_hi and lo[j] <= w_lo)):
            j += 1
        out[i] = j + low
    return out


def cdt_sample(hi, lo, guide, low, words):
    words = np.ascontiguousarray(words, dtype=np.uint64)
    return _cdt_flat(hi, lo, guide, np.int64(low), words.reshape(-1))


@njit(cache=True)
def _reduce_small(a, q):
    out = np.empty(a.size, dtype=np.uint64)
    for i in range(a.size):
        v = a[i] % q
        out[i] = np.uint64(v + q if v < 0 else v)
    return out


def reduce_signed(a, q):
    a = np.ascontiguousarray(a, dtype=np.int64)
    return _reduce_small(a.reshape(-1), np.int64(q)).reshape(a.shape)


@njit(cache=True, inline="always")
def _samplerz_one(center, sigma, rcdt, inv_2smax2, tail, words, pos):
    """One D_{Z, sigma, center} draw; returns (value, new_pos) or pos -1."""
    fl = math.floor(center)
    r = center - fl
    nw = words.size
    size = rcdt.size
    while True:
        if pos + 2 > nw:
            return 0, -1
        w0 = words[pos]
        w1 = words[pos + 1]
        pos += 2
        z0 = size - np.searchsorted(rcdt, w0, side="right")
        b = np.int64(w1 & _U1)
        z = b + (2 * b - 1) * z0
        d = z - r
        x = d * d / (2.0 * sigma * sigma) - z0 * z0 * inv_2smax2
        u = np.float64(w1 >> _S11) * 2.0**-53
        if u < math.exp(-x) and abs(d) <= tail * sigma:
            return z + np.int64(fl), pos


@njit(cache=True)
def samplerz_words(centers, sigmas, rcdt, sigma_max, tail, words):
    out = np.empty(centers.size, dtype=np.int64)
    inv = 1.0 / (2.0 * sigma_max * sigma_max)
    pos = 0
    for i in range(centers.size):
        val, pos = _samplerz_one(centers[i], sigmas[i], rcdt, inv, tail, words, pos)
        if pos < 0:
            return out, -1
        out[i] = val
    return out, pos


@njit(cache=True)
def klein_words(bits, basis, gs, gs_sqnorm, alpha_std, rcdt, sigma_max, tail, words):
    count, k = bits.shape
    out = np.empty((count, k), dtype=np.int64)
    inv = 1.0 / (2.0 * sigma_max * sigma_max)
    widths = np.empty(k)
    for i in range(k):
        widths[i] = alpha_std / math.sqrt(gs_sqnorm[i])
    c = np.empty(k)
    pos = 0
    for row in range(count):
        for j in range(k):
            c[j] = bits[row, j]
            out[row, j] = bits[row, j]
        for i in range(k - 1, -1, -1):
            dot = 0.0
            for j in range(k):
                dot += c[j] * gs[j, i]
            zi, pos = _samplerz_one(dot / gs_sqnorm[i], widths[i], rcdt, inv, tail, words, pos)
            if pos < 0:
                return out, -1
            for j in range(k):
                step = zi * basis[j, i]
                c[j] -= step
                out[row, j] -= step
    return out, pos
