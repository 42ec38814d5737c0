"""Discrete Gaussian sampling.

Widths follow the rho_s(x) = exp(-pi |x - c|^2 / s^2) convention, so a
width s has standard deviation s / sqrt(2 pi).

Two integer samplers back everything here:

* ``CenteredCdt``: inverse-CDF table for D_{Z,s} with 128-bit integer
  probabilities, two random words per sample. Used for every centered
  draw (trapdoors, encryption noise, the spherical half of SampleP).
* ``samplerz``: arbitrary center via a half-Gaussian base table mirrored by
  a sign bit plus Bernoulli rejection. Used by Klein's walk on the gadget
  lattice and by the randomized rounding inside SampleP.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import mpmath
import numpy as np

from . import kernels
from .errors import NonPositiveDefinite
from .ring import small_matvec, small_ntt

SQRT_2PI = math.sqrt(2.0 * math.pi)
# rho mass beyond this many widths is below 2**-66
_CUT = math.sqrt(66 * math.log(2) / math.pi)
_DPS = 40
# 128-bit CDT entries summed over up to ~10^5 terms need headroom past 2**-128
_CDT_DPS = 60


@dataclass(frozen=True)
class GaussParams:
    sigma: float  # trapdoor sampling width
    alpha: float  # gadget sampling width, sqrt(5) sigma
    zeta: float  # preimage width
    tau: float  # encryption noise width
    gamma: float  # width of the z-part of CT3/CT4 noise
    mu: float  # only used by the security argument; kept for completeness
    t: float  # tail-cut factor
    t_prime: float = 0.0  # slack in the zeta rule


@mpmath.workdps(_CDT_DPS)
def _cdt_entries(width: float, bound: int) -> list[int]:
    """floor(2^128 P(X <= x)) for x = -bound .. bound-1, X ~ D_{Z,width}."""
    step = mpmath.exp(-mpmath.pi / mpmath.mpf(width) ** 2)
    step2 = step * step
    # rho(x) for x = 0..bound by the recurrence rho(x+1) = rho(x) step^(2x+1)
    rho = [mpmath.mpf(1)]
    factor = step
    for _ in range(bound):
        rho.append(rho[-1] * factor)
        factor *= step2
    total = rho[0] + 2 * mpmath.fsum(rho[1:])
    two128 = mpmath.mpf(2) ** 128
    out = []
    acc = mpmath.mpf(0)
    for x in range(-bound, bound):
        acc += rho[abs(x)]
        out.append(min(int(mpmath.floor(acc / total * two128)), (1 << 128) - 1))
    return out


@mpmath.workdps(_DPS)
def _rcdt_entries(sigma_max: float, bound: int) -> list[int]:
    """floor(2^64 P(z0 > i)) for the half-Gaussian base, ascending, zeros dropped."""
    inv = 1 / (2 * mpmath.mpf(sigma_max) ** 2)
    rho = [mpmath.exp(-(z * z) * inv) for z in range(bound + 1)]
    total = mpmath.fsum(rho)
    two64 = mpmath.mpf(2) ** 64
    tail = []
    acc = total
    for z in range(bound):
        acc -= rho[z]
        tail.append(int(mpmath.floor(acc / total * two64)))
    return sorted(v for v in tail if v > 0)


class CenteredCdt:
    """D_{Z,s,c} for integer center c via a full signed CDT."""

    def __init__(self, width: float):
        self.width = float(width)
        bound = int(math.ceil(_CUT * self.width)) + 1
        cdt = _cdt_entries(self.width, bound)
        self.low = -bound
        mask = (1 << 64) - 1
        self.cdt_hi = np.array([c >> 64 for c in cdt], dtype=np.uint64)
        self.cdt_lo = np.array([c & mask for c in cdt], dtype=np.uint64)
        self.cdt_hi.flags.writeable = False
        self.cdt_lo.flags.writeable = False
        buckets = np.arange(1 << 16, dtype=np.uint64) << np.uint64(48)
        self.guide = np.searchsorted(self.cdt_hi, buckets, side="left").astype(np.int64)

    def __len__(self) -> int:
        return self.cdt_hi.size

    def cumulative(self, i: int) -> int:
        """Entry i as an integer: floor(2^128 P(X <= low + i))."""
        return (int(self.cdt_hi[i]) << 64) | int(self.cdt_lo[i])

    def sample(self, rng, shape, center: int = 0) -> np.ndarray:
        count = int(np.prod(shape, dtype=np.int64))
        words = rng.words(2 * count)
        return kernels.cdt_sample(self.cdt_hi, self.cdt_lo, self.guide, self.low + int(center),
                                  words).reshape(shape)


@lru_cache(maxsize=32)
def centered_cdt(width: float) -> CenteredCdt:
    return CenteredCdt(width)


class ZSampler:
    """D_{Z,s,c} for any real center c and any width s <= ``max_width``."""

    def __init__(self, max_width: float, t: float = 12.0):
        self.max_width = float(max_width)
        self.sigma_max = self.max_width / SQRT_2PI
        self.t = float(t)
        bound = int(math.ceil(_CUT * self.max_width)) + 1
        # rcdt[i] = 2^64 P(z0 > i); stored ascending for searchsorted
        self.rcdt = np.array(_rcdt_entries(self.sigma_max, bound), dtype=np.uint64)
        self.rcdt.flags.writeable = False

    def sample(self, rng, centers, widths) -> np.ndarray:
        widths = np.asarray(widths, dtype=np.float64)
        if np.any(widths > self.max_width * (1 + 1e-12)) or np.any(widths <= 0):
            raise ValueError(f"widths must lie in (0, {self.max_width}]")
        # tail is expressed in standard deviations: t * s = t sqrt(2 pi) * stddev
        return kernels.samplerz(centers, widths / SQRT_2PI, self.rcdt, self.sigma_max,
                                self.t * SQRT_2PI, rng)


@lru_cache(maxsize=32)
def z_sampler(max_width: float, t: float = 12.0) -> ZSampler:
    return ZSampler(max_width, t)


def sample_z(sigma: float, center: float, rng, t: float = 12.0) -> int:
    """One sample of D_{Z,sigma,center}."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if float(center).is_integer():
        return int(centered_cdt(float(sigma)).sample(rng, (1,), int(center))[0])
    return int(z_sampler(float(sigma), t).sample(rng, np.array([center]), sigma)[0])


def sample_ring_vec(length: int, sigma: float, n: int, rng) -> np.ndarray:
    """``length`` ring elements with i.i.d. D_{Z,sigma} coefficients, as int64 (length, n)."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if length == 0:
        return np.zeros((0, n), dtype=np.int64)
    return centered_cdt(float(sigma)).sample(rng, (length, n))


# --- perturbation sampling -------------------------------------------------


def canonical(f) -> np.ndarray:
    """Evaluations of real polynomials at the odd powers of exp(i pi / n)."""
    f = np.asarray(f, dtype=np.float64)
    n = f.shape[-1]
    twist = np.exp(1j * np.pi * np.arange(n) / n)
    return np.fft.ifft(f * twist, axis=-1) * n


def from_canonical(fh) -> np.ndarray:
    n = fh.shape[-1]
    untwist = np.exp(-1j * np.pi * np.arange(n) / n)
    return (np.fft.fft(fh, axis=-1) / n * untwist).real


class PerturbationSampler:
    """SampleP for one trapdoor T (a 2 x k matrix of small polynomials).

    The target covariance zeta^2 I - alpha^2 (T; I)(T; I)^T is split along
    its (T-rows | identity-rows) blocks. The identity block is spherical with
    width sqrt(zeta^2 - alpha^2) and is sampled first; the T-block is then
    drawn conditioned on it: its Schur complement is handled by one 2x2
    Cholesky per evaluation slot, giving a continuous Gaussian which is
    randomized-rounded at width ``r``.
    """

    def __init__(self, T, zeta: float, alpha: float, r: float, t: float = 12.0):
        T = np.asarray(T, dtype=np.int64)
        if T.ndim != 3 or T.shape[0] != 2:
            raise ValueError("SampleP is implemented for trapdoors with m - k = 2 rows")
        self.T = T
        self.T_hat = small_ntt(T)
        self.n = T.shape[-1]
        self.zeta, self.alpha, self.r, self.t = float(zeta), float(alpha), float(r), float(t)
        z2, a2, r2 = self.zeta**2, self.alpha**2, self.r**2
        if z2 <= a2 + r2:
            raise NonPositiveDefinite("zeta^2 must exceed alpha^2 + r^2")
        self.bottom_width = math.sqrt(z2 - a2)
        self.center_scale = -a2 / (z2 - a2)
        shrink = a2 * z2 / (z2 - a2)

        Th = canonical(T)  # (2, k, n)
        a = np.sum(np.abs(Th[0]) ** 2, axis=0)
        d = np.sum(np.abs(Th[1]) ** 2, axis=0)
        b = np.sum(Th[0] * np.conj(Th[1]), axis=0)
        self.s1 = float(np.sqrt(np.max((a + d) / 2 + np.sqrt(((a - d) / 2) ** 2 + np.abs(b) ** 2))))
        # per-slot Cholesky of (zeta^2 - r^2) I - shrink * S_j
        c11 = (z2 - r2) - shrink * a
        c22 = (z2 - r2) - shrink * d
        c21 = -shrink * np.conj(b)
        if np.any(c11 <= 0):
            raise NonPositiveDefinite(f"s1(T) = {self.s1:.1f} too large for zeta = {self.zeta:.1f}")
        self.l11 = np.sqrt(c11)
        self.l21 = c21 / self.l11
        schur = c22 - np.abs(self.l21) ** 2
        if np.any(schur <= 0):
            raise NonPositiveDefinite(f"s1(T) = {self.s1:.1f} too large for zeta = {self.zeta:.1f}")
        self.l22 = np.sqrt(schur)

    @classmethod
    def checked_bound(cls, zeta: float, alpha: float, r: float) -> float:
        """Largest s1(T) for which the covariance stays positive definite."""
        z2, a2 = zeta**2, alpha**2
        return math.sqrt((z2 - r**2) * (z2 - a2) / (a2 * z2))

    def sample(self, rng) -> np.ndarray:
        k = self.T.shape[1]
        n = self.n
        bottom = centered_cdt(self.bottom_width).sample(rng, (k, n))
        center = self.center_scale * small_matvec(self.T, bottom, self.T_hat).astype(np.float64)
        w = canonical(rng.normal(2 * n).reshape(2, n))
        y0 = self.l11 * w[0]
        y1 = self.l21 * w[0] + self.l22 * w[1]
        cont = from_canonical(np.stack([y0, y1])) / SQRT_2PI
        top = z_sampler(self.r, self.t).sample(rng, center + cont, self.r)
        return np.concatenate([top, bottom])


# --- gadget lattice -----------------------------------------------------------


class GadgetSampler:
    """Coset sampling on the gadget lattice {z in Z^k : <g, z> = 0 mod q}.

    Uses the standard basis S_q (columns 2e_i - e_{i+1} and the binary digits
    of q) and Klein's nearest-plane walk with its Gram-Schmidt vectors.
    """

    def __init__(self, q: int, alpha: float, t: float = 12.0):
        self.q = q
        self.k = k = (q - 1).bit_length()
        self.alpha = float(alpha)
        basis = np.zeros((k, k), dtype=np.int64)
        for i in range(k - 1):
            basis[i, i] = 2
            basis[i + 1, i] = -1
        basis[:, k - 1] = [(q >> i) & 1 for i in range(k)]
        self.basis = basis
        gs = np.zeros((k, k))
        for i in range(k):
            v = basis[:, i].astype(np.float64)
            for j in range(i):
                v -= (basis[:, i] @ gs[:, j]) / (gs[:, j] @ gs[:, j]) * gs[:, j]
            gs[:, i] = v
        self.gs = gs
        self.gs_sqnorm = np.einsum("ij,ij->j", gs, gs)
        widths = self.alpha / np.sqrt(self.gs_sqnorm)
        self.zs = z_sampler(float(widths.max()), t)
        self.t = float(t)

    @cached_property
    def gs_norm(self) -> float:
        return float(np.sqrt(self.gs_sqnorm.max()))

    def sample(self, rng, targets) -> np.ndarray:
        """Integer vectors z (count, k) with <g, z> = target mod q."""
        targets = np.asarray(targets, dtype=np.uint64).reshape(-1)
        shifts = np.arange(self.k, dtype=np.uint64)
        bits = ((targets[:, None] >> shifts) & np.uint64(1)).astype(np.int64)
        return kernels.klein_gadget(bits, self.basis, self.gs, self.gs_sqnorm, self.alpha / SQRT_2PI,
                                    self.zs.rcdt, self.zs.sigma_max, self.t * SQRT_2PI, rng)


@lru_cache(maxsize=8)
def gadget_sampler(q: int, alpha: float, t: float = 12.0) -> GadgetSampler:
    return GadgetSampler(q, alpha, t)


def sample_poly_g(sigma: float, v, q: int, rng, t: float = 12.0) -> np.ndarray:
    """z in Z[x]^k, (k, n) int64, with g^T z = v in R_q, at width sqrt(5) sigma."""
    v = np.asarray(v, dtype=np.uint64)
    sampler = gadget_sampler(q, math.sqrt(5.0) * sigma, t)
    return sampler.sample(rng, v).T.copy()


def sample_p(T, zeta: float, alpha: float, sigma: float, rng, t: float = 12.0) -> np.ndarray:
    """Perturbation p (m, n) int64 with covariance zeta^2 I - alpha^2 (T;I)(T;I)^T."""
    return PerturbationSampler(T, zeta, alpha, sigma, t).sample(rng)
