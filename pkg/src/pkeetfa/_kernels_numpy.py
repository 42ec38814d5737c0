"""Pure-numpy kernels.

Modular arithmetic works on uint64 arrays holding canonical residues of a
prime q < 2**62; products use Montgomery reduction with R = 2**64 built from
32-bit limbs so nothing ever leaves uint64.
"""

import numpy as np

_M32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_TWO53 = 2.0**-53


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


def montmul(a, b, q, qneg):
    """a * b * 2**-64 mod q for residues a, b < q."""
    lo = a * b
    m = lo * qneg
    t = _mulhi(a, b) + _mulhi(m, q) + (lo != 0).astype(np.uint64)
    return np.where(t >= q, t - q, t)


def mulmod(a, b, q, qneg, r2):
    return montmul(montmul(a, b, q, qneg), r2, q, qneg)


def add_mod(a, b, q):
    s = a + b
    return np.where(s >= q, s - q, s)


def sub_mod(a, b, q):
    return np.where(a >= b, a - b, a + (q - b))


def sum_mod(a, q):
    """Sum over axis -2 of a (..., rows, n) array, mod q."""
    acc = a[..., 0, :].copy()
    for i in range(1, a.shape[-2]):
        acc = add_mod(acc, a[..., i, :], q)
    return acc


def ntt_forward(a, q, qneg, zetas):
    """Negacyclic NTT along the last axis; output in bit-reversed order."""
    n = a.shape[-1]
    lead = a.shape[:-1]
    x = np.array(a, dtype=np.uint64, copy=True)
    groups, length = 1, n // 2
    while length >= 1:
        x = x.reshape(lead + (groups, 2, length))
        zeta = zetas[groups : 2 * groups][:, None]
        t = montmul(x[..., 1, :], zeta, q, qneg)
        u = x[..., 0, :]
        x = np.stack([add_mod(u, t, q), sub_mod(u, t, q)], axis=-2)
        groups, length = groups * 2, length // 2
    return x.reshape(lead + (n,))


def ntt_inverse(a, q, qneg, zetas, ninv_mont):
    n = a.shape[-1]
    lead = a.shape[:-1]
    x = np.array(a, dtype=np.uint64, copy=True)
    groups, length = n // 2, 1
    while groups >= 1:
        x = x.reshape(lead + (groups, 2, length))
        zeta = (q - zetas[groups : 2 * groups][::-1])[:, None]
        u = x[..., 0, :]
        v = x[..., 1, :]
        x = np.stack([add_mod(u, v, q), montmul(sub_mod(u, v, q), zeta, q, qneg)], axis=-2)
        groups, length = groups // 2, length * 2
    return montmul(x.reshape(lead + (n,)), ninv_mont, q, qneg)


def powmod(a, e, q, qneg, r2, one_mont):
    """Elementwise a**e mod q (square-and-multiply in Montgomery form)."""
    base = montmul(a, r2, q, qneg)
    acc = np.full_like(base, one_mont)
    while e:
        if e & 1:
            acc = montmul(acc, base, q, qneg)
        base = montmul(base, base, q, qneg)
        e >>= 1
    return montmul(acc, np.uint64(1), q, qneg)


def cdt_sample(hi, lo, guide, low, words):
    """Inverse-CDF sampling against a 128-bit table, two words per output.

    ``words`` holds (high, low) pairs. ``guide`` (a bucket index over the top
    16 bits) only speeds up the compiled kernel.
    """
    words = np.asarray(words, dtype=np.uint64).reshape(-1, 2)
    w_hi, w_lo = words[:, 0], words[:, 1]
    out = np.searchsorted(hi, w_hi, side="left")
    right = np.searchsorted(hi, w_hi, side="right")
    # entries sharing the high word are ordered by their low word
    for i in np.nonzero(right > out)[0]:
        out[i] += np.searchsorted(lo[out[i]:right[i]], w_lo[i], side="right")
    return out.astype(np.int64) + low


def reduce_signed(a, q):
    """Canonical residues of int64 values."""
    return np.mod(np.asarray(a, dtype=np.int64), q).astype(np.uint64)


def samplerz(centers, sigmas, rcdt, sigma_max, tail, rng):
    """D_{Z, sigma_i, c_i} per entry; ``sigmas`` are standard deviations.

    Proposal: half-Gaussian base of deviation ``sigma_max`` (reverse CDT
    ``rcdt`` ascending) mirrored by a random bit, then Bernoulli rejection.
    Every accepted sample lies within ``tail`` deviations of its center.
    """
    centers = np.asarray(centers, dtype=np.float64)
    sigmas = np.broadcast_to(np.asarray(sigmas, dtype=np.float64), centers.shape)
    out = np.empty(centers.shape, dtype=np.int64)
    flat_c = centers.ravel()
    flat_s = sigmas.ravel()
    flat_out = out.reshape(-1)
    pending = np.arange(flat_c.size)
    floor_c = np.floor(flat_c)
    frac = flat_c - floor_c
    inv_2smax2 = 1.0 / (2.0 * sigma_max * sigma_max)
    while pending.size:
        w = rng.words(2 * pending.size).reshape(2, -1)
        z0 = (rcdt.size - np.searchsorted(rcdt, w[0], side="right")).astype(np.int64)
        b = (w[1] & _ONE).astype(np.int64)
        z = b + (2 * b - 1) * z0
        r = frac[pending]
        s = flat_s[pending]
        d = z - r
        x = d * d / (2.0 * s * s) - z0 * z0 * inv_2smax2
        u = (w[1] >> _S11).astype(np.float64) * _TWO53
        ok = (u < np.exp(-x)) & (np.abs(d) <= tail * s)
        hit = pending[ok]
        flat_out[hit] = z[ok] + floor_c[hit].astype(np.int64)
        pending = pending[~ok]
    return out


def klein_gadget(bits, basis, gs, gs_sqnorm, alpha_std, rcdt, sigma_max, tail, rng):
    """Coset samples of the gadget lattice for each row of ``bits``.

    ``bits`` is (count, k) with each row a binary preimage t of its target;
    returns t - v for v ~ D_{L, alpha, t} drawn by Klein's nearest-plane
    walk over ``basis`` (columns) and its Gram-Schmidt vectors ``gs``.
    """
    k = basis.shape[1]
    c = bits.astype(np.float64)
    v = np.zeros(bits.shape, dtype=np.int64)
    for i in range(k - 1, -1, -1):
        center = c @ gs[:, i] / gs_sqnorm[i]
        zi = samplerz(center, alpha_std / np.sqrt(gs_sqnorm[i]), rcdt, sigma_max, tail, rng)
        step = np.outer(zi, basis[:, i])
        c -= step
        v += step
    return bits - v
