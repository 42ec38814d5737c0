"""Time the numba and pure-numpy kernel backends side by side.

Each backend runs in its own interpreter because PKEET_BACKEND is read once
at import. The parent collects the per-kernel medians and prints a table
with the numpy/numba ratio.

    python3 benchmarks/compare_backends.py --preset paper62 --repeat 5
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _median_ms(fn, repeat):
    fn()  # compile / warm caches
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return 1e3 * float(np.median(times))


def worker(preset_name, repeat):
    from pkeetfa import BACKEND, scheme
    from pkeetfa.gauss import centered_cdt, sample_poly_g, z_sampler
    from pkeetfa.params import preset
    from pkeetfa.ring import get_ring
    from pkeetfa.rng import Rng

    p = preset(preset_name)
    g = p.gauss
    ring = get_ring(p.n, p.q)
    rng = Rng("compare-backends")
    vec = ring.uniform(rng, p.m)
    f, h = ring.uniform(rng), ring.uniform(rng)
    cdt = centered_cdt(float(g.sigma))
    zs = z_sampler(g.alpha, g.t)
    centers = rng.words(10_000).astype(np.float64) / 2.0**64
    pk, sk = scheme.setup(p, rng)
    msg = rng.words(p.n) & np.uint64(1)
    ct = scheme.encrypt(pk, msg, rng)

    kernels = {
        f"ntt x{p.m}": lambda: ring.ntt(vec),
        "ring mul": lambda: ring.mul(f, h),
        "cdt 1e5": lambda: cdt.sample(rng, (100_000,)),
        "samplerz 1e4": lambda: zs.sample(rng, centers, np.full(centers.size, g.alpha)),
        "sample_poly_g": lambda: sample_poly_g(g.sigma, f, p.q, rng, g.t),
        "setup": lambda: scheme.setup(p, rng),
        "encrypt": lambda: scheme.encrypt(pk, msg, rng),
        "decrypt": lambda: scheme.decrypt(sk, pk, ct, rng),
    }
    out = {name: _median_ms(fn, repeat) for name, fn in kernels.items()}
    json.dump({"backend": BACKEND, "ms": out}, sys.stdout)


def run_backend(backend, preset_name, repeat):
    env = dict(os.environ, PKEET_BACKEND=backend)
    cmd = [sys.executable, __file__, "--worker", "--preset", preset_name, "--repeat", str(repeat)]
    res = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    data = json.loads(res.stdout)
    if data["backend"] != backend:
        raise RuntimeError(f"asked for {backend}, worker ran {data['backend']}")
    return data["ms"]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", default="paper62")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)
    if args.worker:
        worker(args.preset, args.repeat)
        return 0
    fast = run_backend("numba", args.preset, args.repeat)
    slow = run_backend("numpy", args.preset, args.repeat)
    print(f"preset {args.preset}, median of {args.repeat} runs (ms)")
    print(f"{'kernel':<16}{'numba':>12}{'numpy':>12}{'numpy/numba':>14}")
    for name in fast:
        print(f"{name:<16}{fast[name]:>12.3f}{slow[name]:>12.3f}{slow[name] / fast[name]:>14.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
