"""Gadget vector, g-trapdoor generation and preimage sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import NotInvertible, PreimageCheckFailed, TagNotInvertible
from .gauss import PerturbationSampler, sample_poly_g, sample_ring_vec
from .ring import Ring, small_matvec, small_ntt


def gadget(ring: Ring) -> np.ndarray:
    """g = (1, 2, ..., 2^(k-1)) as constant polynomials, shape (k, n)."""
    k = (ring.q - 1).bit_length()
    g = ring.zero(k)
    g[:, 0] = [pow(2, i, ring.q) for i in range(k)]
    return g


def gadget_decompose(u, q: int) -> np.ndarray:
    """Binary digits of every coefficient: (k, n) int64 with g^T z = u."""
    u = np.asarray(u, dtype=np.uint64)
    k = (q - 1).bit_length()
    shifts = np.arange(k, dtype=np.uint64)[:, None]
    return ((u[None, :] >> shifts) & np.uint64(1)).astype(np.int64)


def gadget_apply(ring: Ring, z) -> np.ndarray:
    """g^T z in R_q for an integer (k, n) vector z."""
    k = z.shape[0]
    weights = np.array([pow(2, i, ring.q) for i in range(k)], dtype=np.uint64)[:, None]
    terms = ring.pointwise(ring.reduce(z), np.broadcast_to(weights, z.shape))
    return kernels.sum_mod(terms, np.uint64(ring.q))


@dataclass(frozen=True, eq=False)
class GTrapdoor:
    """Small matrix T, shape (m - k, k, n) int64, with its tag h."""

    T: np.ndarray
    tag: np.ndarray
    sigma: float
    _samplers: dict = field(default_factory=dict, repr=False, compare=False)

    def __eq__(self, other):
        return (isinstance(other, GTrapdoor) and np.array_equal(self.T, other.T)
                and np.array_equal(self.tag, other.tag) and self.sigma == other.sigma)

    def perturbation(self, zeta: float, alpha: float, r: float, t: float) -> PerturbationSampler:
        key = (zeta, alpha, r, t)
        if key not in self._samplers:
            self._samplers[key] = PerturbationSampler(self.T, zeta, alpha, r, t)
        return self._samplers[key]

    def apply(self, ring: Ring, z) -> np.ndarray:
        """(T; I_k) z over the integers, shape (m, n)."""
        if "T_hat" not in self._samplers:
            self._samplers["T_hat"] = small_ntt(self.T)
        return np.concatenate([small_matvec(self.T, z, self._samplers["T_hat"]), z])


def trap_gen(ring: Ring, m: int, sigma: float, rng, a_prime=None, h=None):
    """Gadget trapdoor generation: a = (a' | h g - a'^T T) with T ~ D_{sigma}.

    Without ``a_prime`` a uniform one is drawn and the tag defaults to 1.
    Returns (a, GTrapdoor).
    """
    k = (ring.q - 1).bit_length()
    if a_prime is None:
        a_prime = ring.uniform(rng, m - k)
        if h is None:
            h = ring.one()
    elif h is None:
        raise ValueError("a tag h is required when a_prime is supplied")
    a_prime = np.asarray(a_prime, dtype=np.uint64)
    h = np.asarray(h, dtype=np.uint64)
    T = sample_ring_vec((m - k) * k, sigma, ring.n, rng).reshape(m - k, k, ring.n)
    # a'^T T: one ring element per gadget column
    a_t = ring.intt(ring.dot_ntt(ring.ntt(a_prime), ring.ntt(ring.reduce(T)).transpose(1, 0, 2)))
    hg = ring.mul(h, gadget(ring))
    a = np.concatenate([a_prime, ring.sub(hg, a_t)])
    return a, GTrapdoor(T=T, tag=h, sigma=sigma)


def tag_shift(ring: Ring, a, h) -> np.ndarray:
    """a_h = a + (0 | h g)."""
    g = gadget(ring)
    k = g.shape[0]
    shifted = np.array(a, dtype=np.uint64, copy=True)
    shifted[-k:] = ring.add(shifted[-k:], ring.mul(np.asarray(h, dtype=np.uint64), g))
    return shifted


def trapdoor_identity(ring: Ring, a, trapdoor: GTrapdoor, h=None) -> bool:
    """a^T (T; I_k) == h g^T exactly (h defaults to the trapdoor's own tag)."""
    h = trapdoor.tag if h is None else h
    g = gadget(ring)
    k = g.shape[0]
    eye = ring.zero(k, k)
    eye[np.arange(k), np.arange(k), 0] = 1
    TI = np.concatenate([ring.reduce(trapdoor.T), eye])
    lhs = ring.intt(ring.dot_ntt(ring.ntt(a), ring.ntt(TI).transpose(1, 0, 2)))
    return bool(np.array_equal(lhs, ring.mul(np.asarray(h, dtype=np.uint64), g)))


def sample_pre(ring: Ring, trapdoor: GTrapdoor, a, h, zeta: float, sigma: float, alpha: float, u,
               rng, t: float = 12.0) -> np.ndarray:
    """Preimage sampling: short integer x, shape (m, n), with a^T x = u in R_q."""
    try:
        h_inv = ring.inverse(h)
    except NotInvertible:
        raise TagNotInvertible("tag h is not invertible in R_q") from None
    a = np.asarray(a, dtype=np.uint64)
    a_hat = ring.ntt(a)
    p = trapdoor.perturbation(zeta, alpha, sigma, t).sample(rng)
    v = ring.mul(h_inv, ring.sub(u, ring.intt(ring.dot_ntt(a_hat, ring.ntt(ring.reduce(p))))))
    z = sample_poly_g(sigma, v, ring.q, rng, t)
    x = p + trapdoor.apply(ring, z)
    if not np.array_equal(ring.intt(ring.dot_ntt(a_hat, ring.ntt(ring.reduce(x)))), u):
        raise PreimageCheckFailed("a^T x != u")
    return x


def preimage_norm_bound(zeta: float, t: float, m: int, n: int) -> float:
    return t * zeta * math.sqrt(m * n)
