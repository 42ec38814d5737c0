"""Arithmetic in R_q = Z_q[x]/(x^n + 1).

Ring elements are uint64 arrays of shape (..., n) holding canonical
residues in [0, q); a ring vector is simply a (len, n) array. Every
operation broadcasts over leading axes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import DimensionError, NotInvertible

# 62-bit prime = 1 mod 2**17; exact products of small integer polynomials
# (trapdoor times short vector) are computed modulo it and lifted.
AUX_PRIME = 4611686018425815041


def _bitrev(x: int, bits: int) -> int:
    return int(format(x, f"0{bits}b")[::-1], 2) if bits else 0


def _root_of_unity(n: int, q: int) -> int:
    """Smallest-generator primitive 2n-th root of unity mod q."""
    e = (q - 1) // (2 * n)
    for g in range(2, q):
        psi = pow(g, e, q)
        if pow(psi, n, q) == q - 1:
            return psi
    raise ValueError(f"no primitive {2 * n}-th root of unity mod {q}")


@dataclass(frozen=True)
class NttTables:
    n: int
    q: int
    psi: int
    zetas: np.ndarray = field(repr=False)  # psi^brv(i) * 2**64 mod q
    qneg: int = field(repr=False)
    r2: int = field(repr=False)
    one_mont: int = field(repr=False)
    ninv_mont: int = field(repr=False)

    @classmethod
    def build(cls, n: int, q: int) -> "NttTables":
        if n < 2 or n & (n - 1):
            raise ValueError(f"n must be a power of two >= 2, got {n}")
        if q % 2 == 0 or q >= 1 << 62:
            raise ValueError("q must be odd and below 2**62")
        if (q - 1) % (2 * n):
            raise ValueError(f"q = {q} is not 1 mod 2n = {2 * n}")
        psi = _root_of_unity(n, q)
        logn = n.bit_length() - 1
        mont = (1 << 64) % q
        zetas = np.array([pow(psi, _bitrev(i, logn), q) * mont % q for i in range(n)], dtype=np.uint64)
        zetas.flags.writeable = False
        return cls(
            n=n,
            q=q,
            psi=psi,
            zetas=zetas,
            qneg=(-pow(q, -1, 1 << 64)) % (1 << 64),
            r2=(1 << 128) % q,
            one_mont=mont,
            ninv_mont=pow(n, -1, q) * mont % q,
        )


class Ring:
    """The ring R_q for a fixed (n, q), with cached NTT tables."""

    def __init__(self, n: int, q: int):
        self.n = n
        self.q = q
        self.tables = NttTables.build(n, q)
        self._q = np.uint64(q)

    def __repr__(self):
        return f"Ring(n={self.n}, q={self.q})"

    def __eq__(self, other):
        return isinstance(other, Ring) and (self.n, self.q) == (other.n, other.q)

    def __hash__(self):
        return hash((self.n, self.q))

    def __reduce__(self):
        return (get_ring, (self.n, self.q))

    # construction -----------------------------------------------------
    def _check(self, *arrays):
        for a in arrays:
            if a.shape[-1:] != (self.n,):
                raise DimensionError(f"expected trailing dimension {self.n}, got shape {a.shape}")

    def zero(self, *lead) -> np.ndarray:
        return np.zeros(lead + (self.n,), dtype=np.uint64)

    def one(self) -> np.ndarray:
        f = self.zero()
        f[0] = 1
        return f

    def constant(self, c: int) -> np.ndarray:
        f = self.zero()
        f[0] = c % self.q
        return f

    def reduce(self, coeffs) -> np.ndarray:
        """Canonical residues of arbitrary integer coefficients."""
        a = np.asarray(coeffs)
        self._check(a)
        if a.dtype == np.uint64:
            return a % self._q
        if a.dtype.kind in "iub":
            return kernels.reduce_signed(a, self.q)
        return np.array([[int(c) % self.q for c in row] for row in a.reshape(-1, self.n)],
                        dtype=np.uint64).reshape(a.shape)

    def centered(self, f) -> np.ndarray:
        """Representatives in (-q/2, q/2] as int64."""
        f = np.asarray(f, dtype=np.uint64)
        signed = f.astype(np.int64)
        return np.where(f > self._q // np.uint64(2), signed - np.int64(self.q), signed)

    # arithmetic -------------------------------------------------------
    def add(self, f, g) -> np.ndarray:
        self._check(f, g)
        return kernels.add_mod(f, g, self._q)

    def sub(self, f, g) -> np.ndarray:
        self._check(f, g)
        return kernels.sub_mod(f, g, self._q)

    def neg(self, f) -> np.ndarray:
        self._check(f)
        return kernels.sub_mod(np.zeros_like(f), f, self._q)

    def scalar_mul(self, f, c: int) -> np.ndarray:
        self._check(f)
        c = np.uint64(c % self.q)
        return kernels.mulmod(f, c, self._q, self.tables.qneg, self.tables.r2)

    def ntt(self, f) -> np.ndarray:
        self._check(f)
        t = self.tables
        return kernels.ntt_forward(f, self._q, t.qneg, t.zetas)

    def intt(self, fh) -> np.ndarray:
        self._check(fh)
        t = self.tables
        return kernels.ntt_inverse(fh, self._q, t.qneg, t.zetas, t.ninv_mont)

    def pointwise(self, fh, gh) -> np.ndarray:
        return kernels.mulmod(fh, gh, self._q, self.tables.qneg, self.tables.r2)

    def mul(self, f, g) -> np.ndarray:
        self._check(f, g)
        return self.intt(self.pointwise(self.ntt(f), self.ntt(g)))

    def dot(self, f, g) -> np.ndarray:
        """sum_i f_i * g_i for ring vectors of shape (..., len, n)."""
        return self.intt(self.dot_ntt(self.ntt(f), self.ntt(g)))

    def dot_ntt(self, fh, gh) -> np.ndarray:
        if fh.shape[-2] != gh.shape[-2]:
            raise DimensionError(f"vector lengths differ: {fh.shape[-2]} vs {gh.shape[-2]}")
        return kernels.sum_mod(self.pointwise(fh, gh), self._q)

    def is_invertible(self, f) -> bool:
        return bool(np.all(self.ntt(f) != 0))

    def inverse(self, f) -> np.ndarray:
        """f^-1 in R_q; ``NotInvertible`` when an NTT slot is zero."""
        fh = self.ntt(f)
        if np.any(fh == 0):
            raise NotInvertible("element has a zero NTT slot")
        t = self.tables
        return self.intt(kernels.powmod(fh, self.q - 2, self._q, t.qneg, t.r2, t.one_mont))

    def uniform(self, rng, *lead) -> np.ndarray:
        count = int(np.prod(lead, dtype=np.int64)) * self.n
        return rng.uniform_mod(self.q, count).reshape(lead + (self.n,))


@lru_cache(maxsize=None)
def get_ring(n: int, q: int) -> Ring:
    return Ring(n, q)


def _aux_ring(n: int) -> Ring:
    return get_ring(n, AUX_PRIME)


def small_ntt(f) -> np.ndarray:
    """Transform of a small integer polynomial array in the auxiliary ring."""
    f = np.asarray(f, dtype=np.int64)
    ring = _aux_ring(f.shape[-1])
    return ring.ntt(ring.reduce(f))


def small_mul(f, g) -> np.ndarray:
    """Exact product in Z[x]/(x^n + 1) of small integer polynomials.

    Broadcasts like ``Ring.mul``; results must stay below 2**61 in magnitude.
    """
    ring = _aux_ring(np.shape(f)[-1])
    return ring.centered(ring.intt(ring.pointwise(small_ntt(f), small_ntt(g))))


def small_matvec(mat, vec, mat_hat=None) -> np.ndarray:
    """Exact (rows, cols) ring-matrix times (cols,) ring-vector over Z.

    ``mat_hat`` may carry ``small_ntt(mat)`` precomputed.
    """
    ring = _aux_ring(np.shape(vec)[-1])
    if mat_hat is None:
        mat_hat = small_ntt(mat)
    return ring.centered(ring.intt(ring.dot_ntt(mat_hat, small_ntt(vec))))
