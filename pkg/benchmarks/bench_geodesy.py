"""Time the numba and numpy batch distance kernels on the same random pairs.

    python benchmarks/bench_geodesy.py [--n 200000] [--repeat 5]

Run with NGDC_DISABLE_NUMBA=1 to time only the numpy path.
"""

import argparse
import time

import numpy as np

from ngdc import _kernels as K
from ngdc.geodesy import MEAN_RADIUS_KM, WGS84

TOL = 1e-12
MAX_ITER = 200


def random_pairs(n, seed):
    rng = np.random.default_rng(seed)
    lat = np.arcsin(rng.uniform(-1.0, 1.0, (2, n)))
    lon = rng.uniform(-np.pi, np.pi, (2, n))
    return lat[0], lon[0], lat[1], lon[1]


def best_of(fn, args, repeat):
    fn(*args)  # warm-up, also triggers compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    pts = random_pairs(args.n, args.seed)
    a, f = WGS84.equatorial_radius_km, WGS84.flattening
    cases = {
        "haversine": ((MEAN_RADIUS_KM,), K.haversine_batch_numpy, K.haversine_batch_numba),
        "lambert": ((a, f), K.lambert_batch_numpy, K.lambert_batch_numba),
        "vincenty": ((a, f, TOL, MAX_ITER), K.vincenty_batch_numpy, K.vincenty_batch_numba),
    }

    print(f"n={args.n} repeat={args.repeat} numba={'on' if K.NUMBA_ENABLED else 'off'}")
    print(f"{'kernel':<10} {'numpy s':>10} {'numba s':>10} {'speedup':>8} {'max |diff| km':>14}")
    for name, (extra, np_fn, nb_fn) in cases.items():
        call = pts + extra
        t_np = best_of(np_fn, call, args.repeat)
        if nb_fn is None:
            print(f"{name:<10} {t_np:>10.4f} {'-':>10} {'-':>8} {'-':>14}")
            continue
        t_nb = best_of(nb_fn, call, args.repeat)
        ref, got = np_fn(*call), nb_fn(*call)
        if isinstance(ref, tuple):
            ref, got = ref[0], got[0]
        diff = np.nanmax(np.abs(ref - got))
        print(f"{name:<10} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x {diff:>14.3e}")


if __name__ == "__main__":
    main()
