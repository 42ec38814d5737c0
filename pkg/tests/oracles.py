"""Slow, obviously-correct reference implementations used as test oracles.

Everything here works on Python ints and avoids the package's own kernels.
"""

from __future__ import annotations

import numpy as np


def schoolbook(f, g, q: int) -> np.ndarray:
    """O(n^2) negacyclic convolution mod (x^n + 1, q)."""
    f = [int(c) for c in f]
    g = [int(c) for c in g]
    n = len(f)
    out = [0] * n
    for i in range(n):
        for j in range(n):
            if i + j < n:
                out[i + j] += f[i] * g[j]
            else:
                out[i + j - n] -= f[i] * g[j]
    return np.array([c % q for c in out], dtype=np.uint64)


def schoolbook_int(f, g) -> np.ndarray:
    """Negacyclic convolution over Z (no reduction)."""
    f = [int(c) for c in f]
    g = [int(c) for c in g]
    n = len(f)
    out = [0] * n
    for i in range(n):
        for j in range(n):
            s = f[i] * g[j]
            if i + j < n:
                out[i + j] += s
            else:
                out[i + j - n] -= s
    return np.array(out, dtype=object)


# --- polynomial arithmetic over Z_p -------------------------------------------


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _divmod(a, b, p):
    a = a[:]
    inv = pow(b[-1], -1, p)
    quo = [0] * max(len(a) - len(b) + 1, 0)
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv % p
        quo[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
    return _trim(quo), _trim(a)


def _sub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def _mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_inverse(f, q: int):
    """Inverse of f in Z_q[x]/(x^n+1) by extended Euclid, or None."""
    n = len(f)
    modulus = [1] + [0] * (n - 1) + [1]
    r0, r1 = modulus, _trim([int(c) % q for c in f])
    s0, s1 = [], [1]
    if not r1:
        return None
    while r1:
        quo, rem = _divmod(r0, r1, q)
        r0, r1 = r1, rem
        s0, s1 = s1, _sub(s0, _mul(quo, s1, q), q)
    if len(r0) != 1:
        return None  # gcd has positive degree
    inv_lead = pow(r0[0], -1, q)
    out = [c * inv_lead % q for c in s0]  # Bezout coefficient has degree < n
    return np.array(out + [0] * (n - len(out)), dtype=np.uint64)


def gadget_recompose(z, q: int) -> np.ndarray:
    """sum_i 2^i z_i mod q for an integer (k, n) array."""
    z = np.asarray(z)
    k, n = z.shape
    return np.array([sum((1 << i) * int(z[i, j]) for i in range(k)) % q for j in range(n)], dtype=np.uint64)


def inner_mod(avec, xvec, q: int) -> np.ndarray:
    """sum_i a_i x_i in Z_q[x]/(x^n+1) via schoolbook products."""
    n = np.shape(avec)[-1]
    acc = np.zeros(n, dtype=object)
    for a, x in zip(avec, xvec):
        acc = acc + schoolbook_int(a, x)
    return np.array([int(c) % q for c in acc], dtype=np.uint64)


def negacyclic_matrix(f) -> np.ndarray:
    """Integer matrix M with M @ g = coefficients of f*g mod x^n+1."""
    n = len(f)
    m = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        for i in range(n):
            idx = i - j
            m[i, j] = f[idx] if idx >= 0 else -f[idx + n]
    return m


def inner_coeff(avec, xvec, q: int, j: int) -> int:
    """Coefficient j of sum_i a_i x_i in Z_q[x]/(x^n+1), exact over Python ints."""
    n = np.shape(avec)[-1]
    idx = (j - np.arange(n)) % n
    sign = np.where(np.arange(n) <= j, 1, -1).astype(object)
    total = 0
    for a, x in zip(avec, xvec):
        total += int(np.dot(np.asarray(a).astype(object), np.asarray(x).astype(object)[idx] * sign))
    return total % q
