"""Hot kernels, dispatched to numba or numpy per ``PKEET_BACKEND``."""

import numpy as np

from ._backend import BACKEND
from . import _kernels_numpy as _np_impl

if BACKEND == "numba":
    from . import _kernels_numba as _impl
else:
    _impl = _np_impl

montmul = _impl.montmul
mulmod = _impl.mulmod
add_mod = _impl.add_mod
sub_mod = _impl.sub_mod
sum_mod = _impl.sum_mod
ntt_forward = _impl.ntt_forward
ntt_inverse = _impl.ntt_inverse
powmod = _impl.powmod
cdt_sample = _impl.cdt_sample
reduce_signed = _impl.reduce_signed


def _drain(kernel, args, rng, expected_words):
    """Run a word-consuming numba kernel, growing the buffer until it fits."""
    budget = int(expected_words * 1.5) + 256
    while True:
        words = rng.peek(budget)
        out, used = kernel(*args, words)
        if used >= 0:
            rng.advance(used)
            return out
        budget *= 2


def samplerz(centers, sigmas, rcdt, sigma_max, tail, rng):
    if _impl is _np_impl:
        return _np_impl.samplerz(centers, sigmas, rcdt, sigma_max, tail, rng)
    centers = np.asarray(centers, dtype=np.float64)
    shape = centers.shape
    flat_c = np.ascontiguousarray(centers).reshape(-1)
    flat_s = np.ascontiguousarray(np.broadcast_to(np.asarray(sigmas, dtype=np.float64), shape)).reshape(-1)
    expected = 2 * flat_c.size * (1.0 + sigma_max / max(float(flat_s.min(initial=sigma_max)), 1e-3))
    out = _drain(_impl.samplerz_words, (flat_c, flat_s, rcdt, float(sigma_max), float(tail)), rng, expected)
    return out.reshape(shape)


def klein_gadget(bits, basis, gs, gs_sqnorm, alpha_std, rcdt, sigma_max, tail, rng):
    if _impl is _np_impl:
        return _np_impl.klein_gadget(bits, basis, gs, gs_sqnorm, alpha_std, rcdt, sigma_max, tail, rng)
    bits = np.ascontiguousarray(bits, dtype=np.int64)
    expected = 2 * bits.size * (1.0 + sigma_max * np.sqrt(gs_sqnorm.max()) / alpha_std)
    args = (bits, basis, gs, gs_sqnorm, float(alpha_std), rcdt, float(sigma_max), float(tail))
    return _drain(_impl.klein_words, args, rng, expected)
