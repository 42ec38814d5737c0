"""Parameter presets and the validity checker."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParams
from .gauss import GaussParams

C = 1.0 / math.sqrt(2.0 * math.pi)
EPSILON_LOG2 = -90  # statistical error target of one randomized rounding
T_TAIL = 12.0
T_PRIME = 128.0

# largest prime below 2**62 that is 1 mod 2048
Q62 = 4611686018427365377


@dataclass(frozen=True)
class Params:
    n: int
    q: int
    k: int
    m: int
    gauss: GaussParams
    label: str
    insecure: bool = False  # toy sizes: exempt from the decryption bound

    @property
    def fingerprint(self) -> tuple[int, int, int, int]:
        return (self.n, self.q, self.k, self.m)

    def decryption_bound(self) -> tuple[float, int]:
        """(t tau sqrt(n) + 2 t^2 tau zeta n + t^2 gamma zeta k n, floor(q/4))."""
        g, n, k = self.gauss, self.n, self.k
        lhs = (g.t * g.tau * math.sqrt(n) + 2 * g.t**2 * g.tau * g.zeta * n
               + g.t**2 * g.gamma * g.zeta * k * n)
        return lhs, self.q // 4


def sigma_floor(n: int, eps_log2: int = EPSILON_LOG2) -> float:
    """sqrt(ln(2n / eps) / pi)."""
    return math.sqrt((math.log(2 * n) - eps_log2 * math.log(2)) / math.pi)


def zeta_floor(sigma: float, k: int, n: int, t_prime: float) -> float:
    return math.sqrt(5) * C * sigma**2 * (math.sqrt(k * n) + math.sqrt(2 * n) + t_prime)


def derive_gauss(n: int, k: int, t: float = T_TAIL, t_prime: float = T_PRIME,
                 eps_log2: int = EPSILON_LOG2) -> GaussParams:
    sigma = math.ceil(sigma_floor(n, eps_log2) * 100) / 100
    tau = sigma
    return GaussParams(
        sigma=sigma,
        alpha=math.sqrt(5) * sigma,
        zeta=float(math.floor(zeta_floor(sigma, k, n, t_prime)) + 1),
        tau=tau,
        gamma=2 * t * sigma * tau * math.sqrt(n),
        mu=t * sigma * tau * math.sqrt(2 * n),
        t=t,
        t_prime=t_prime,
    )


def make_params(n: int, q: int, label: str, insecure: bool = False, **gauss_overrides) -> Params:
    k = (q - 1).bit_length()
    gauss = derive_gauss(n, k)
    if gauss_overrides:
        gauss = GaussParams(**{**gauss.__dict__, **gauss_overrides})
    return Params(n=n, q=q, k=k, m=k + 2, gauss=gauss, label=label, insecure=insecure)


PRESETS = {
    "paper62": lambda: make_params(1024, Q62, "paper62"),
    "toy17": lambda: make_params(8, 17, "toy17 - INSECURE, TESTS ONLY", insecure=True),
}


def preset(name: str) -> Params:
    try:
        return PRESETS[name]()
    except KeyError:
        raise InvalidParams(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def by_fingerprint(fingerprint) -> Params:
    for build in PRESETS.values():
        p = build()
        if p.fingerprint == tuple(fingerprint):
            return p
    raise InvalidParams(f"no preset matches (n, q, k, m) = {tuple(fingerprint)}")


def _is_prime(q: int) -> bool:
    from sympy import isprime

    return bool(isprime(q))


def validate(p: Params) -> list[str]:
    """All violated constraints; an empty list means the parameters are usable."""
    bad = []
    g = p.gauss
    rel = 1e-9
    if p.n < 2 or p.n & (p.n - 1):
        bad.append(f"n = {p.n} is not a power of two")
    if not _is_prime(p.q):
        bad.append(f"q = {p.q} is not prime")
    if (p.q - 1) % (2 * p.n):
        bad.append(f"q is not 1 mod 2n = {2 * p.n}")
    if p.q >= 1 << 62:
        bad.append("q must be below 2**62")
    if p.k != math.ceil(math.log2(p.q)):
        bad.append(f"k = {p.k} differs from ceil(log2 q) = {math.ceil(math.log2(p.q))}")
    if p.m - p.k != 2:
        bad.append(f"m - k = {p.m - p.k}, expected 2")
    if not g.sigma > sigma_floor(p.n):
        bad.append(f"sigma = {g.sigma} does not exceed sqrt(ln(2n/eps)/pi) = {sigma_floor(p.n):.4f}")
    if not math.isclose(g.alpha, math.sqrt(5) * g.sigma, rel_tol=rel):
        bad.append("alpha != sqrt(5) sigma")
    zf = zeta_floor(g.sigma, p.k, p.n, g.t_prime)
    if not g.zeta > zf:
        bad.append(f"zeta = {g.zeta} does not exceed {zf:.2f}")
    if not math.isclose(g.gamma, 2 * g.t * g.sigma * g.tau * math.sqrt(p.n), rel_tol=rel):
        bad.append("gamma != 2 t sigma tau sqrt(n)")
    if not math.isclose(g.mu, g.t * g.sigma * g.tau * math.sqrt(2 * p.n), rel_tol=rel):
        bad.append("mu != t sigma tau sqrt(2n)")
    if min(g.sigma, g.alpha, g.zeta, g.tau, g.gamma, g.mu, g.t) <= 0 or g.t_prime < 0:
        bad.append("Gaussian parameters must be positive")
    if not p.insecure:
        lhs, quarter = p.decryption_bound()
        if not lhs < quarter:
            bad.append(f"decryption bound violated: {lhs:.4g} >= floor(q/4) = {quarter}")
    return bad
