"""Distance kernels in radians.

Every kernel exists twice: a scalar ``math`` version that numba can compile,
and a vectorised numpy version over arrays. Setting ``NGDC_DISABLE_NUMBA=1``
(or running without numba installed) routes the public geodesy functions to
the pure-python / pure-numpy path.
"""

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_FLAG = os.environ.get("NGDC_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED_BY_ENV = _FLAG in {"1", "true", "yes", "on"}
NUMBA_AVAILABLE = numba is not None
NUMBA_ENABLED = NUMBA_AVAILABLE and not NUMBA_DISABLED_BY_ENV

njit_kwargs = {
    "nogil": True,
    "fastmath": False,
    "cache": True,
}

TWO_PI = 2.0 * math.pi


def jit(fn):
    """``numba.njit`` when the numba path is enabled, identity otherwise."""
    if NUMBA_ENABLED:
        return numba.njit(**njit_kwargs)(fn)
    return fn


@jit
def _wrap_lon(dlon):
    # into [-pi, pi)
    return (dlon + math.pi) % TWO_PI - math.pi


# ---------------------------------------------------------------------------
# scalar kernels (plain python, numba-compatible)
# ---------------------------------------------------------------------------


@jit
def haversine_rad(lat1, lon1, lat2, lon2, radius):
    s_lat = math.sin(0.5 * (lat2 - lat1))
    s_lon = math.sin(0.5 * (lon2 - lon1))
    h = s_lat * s_lat + math.cos(lat1) * math.cos(lat2) * s_lon * s_lon
    if h > 1.0:
        h = 1.0
    return 2.0 * radius * math.asin(math.sqrt(h))


@jit
def lambert_rad(lat1, lon1, lat2, lon2, a, f):
    beta1 = math.atan((1.0 - f) * math.tan(lat1))
    beta2 = math.atan((1.0 - f) * math.tan(lat2))
    sigma = haversine_rad(beta1, lon1, beta2, lon2, 1.0)
    if sigma == 0.0:
        return 0.0
    p = 0.5 * (beta1 + beta2)
    q = 0.5 * (beta2 - beta1)
    sin_p, cos_p = math.sin(p), math.cos(p)
    sin_q, cos_q = math.sin(q), math.cos(q)
    sin_s = math.sin(sigma)
    c_half = math.cos(0.5 * sigma)
    s_half = math.sin(0.5 * sigma)
    # both numerators vanish where their denominators do (antipodes: P = 0)
    x_den = c_half * c_half
    x = 0.0
    if x_den > 0.0:
        x = (sigma - sin_s) * (sin_p * sin_p) * (cos_q * cos_q) / x_den
    y = (sigma + sin_s) * (cos_p * cos_p) * (sin_q * sin_q) / (s_half * s_half)
    return a * (sigma - 0.5 * f * (x + y))


@jit
def vincenty_rad(lat1, lon1, lat2, lon2, a, f, tol, max_iter):
    """Vincenty inverse distance.

    Returns ``(distance, iterations, converged)``; distance is NaN when the
    iteration fails (nearly antipodal points or lambda leaving [-pi, pi]).
    """
    # canonical argument order makes the result exactly symmetric
    if lat1 > lat2 or (lat1 == lat2 and lon1 > lon2):
        lat1, lon1, lat2, lon2 = lat2, lon2, lat1, lon1

    b = a * (1.0 - f)
    big_l = _wrap_lon(lon2 - lon1)
    u1 = math.atan((1.0 - f) * math.tan(lat1))
    u2 = math.atan((1.0 - f) * math.tan(lat2))
    sin_u1, cos_u1 = math.sin(u1), math.cos(u1)
    sin_u2, cos_u2 = math.sin(u2), math.cos(u2)

    lam = big_l
    sin_sigma = 0.0
    cos_sigma = 1.0
    sigma = 0.0
    cos2_alpha = 1.0
    cos_2sm = 0.0
    for it in range(1, max_iter + 1):
        sin_lam = math.sin(lam)
        cos_lam = math.cos(lam)
        t1 = cos_u2 * sin_lam
        t2 = cos_u1 * sin_u2 - sin_u1 * cos_u2 * cos_lam
        sin_sigma = math.sqrt(t1 * t1 + t2 * t2)
        if sin_sigma == 0.0:
            return 0.0, it, True
        cos_sigma = sin_u1 * sin_u2 + cos_u1 * cos_u2 * cos_lam
        sigma = math.atan2(sin_sigma, cos_sigma)
        sin_alpha = cos_u1 * cos_u2 * sin_lam / sin_sigma
        cos2_alpha = 1.0 - sin_alpha * sin_alpha
        if cos2_alpha != 0.0:
            cos_2sm = cos_sigma - 2.0 * sin_u1 * sin_u2 / cos2_alpha
        else:
            cos_2sm = 0.0  # equatorial line
        c = f / 16.0 * cos2_alpha * (4.0 + f * (4.0 - 3.0 * cos2_alpha))
        lam_prev = lam
        lam = big_l + (1.0 - c) * f * sin_alpha * (
            sigma
            + c * sin_sigma * (cos_2sm + c * cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm))
        )
        if abs(lam) > math.pi:
            return math.nan, it, False
        if abs(lam - lam_prev) <= tol:
            u_sq = cos2_alpha * (a * a - b * b) / (b * b)
            big_a = 1.0 + u_sq / 16384.0 * (4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq)))
            big_b = u_sq / 1024.0 * (256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)))
            d_sigma = big_b * sin_sigma * (
                cos_2sm
                + big_b
                / 4.0
                * (
                    cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm)
                    - big_b
                    / 6.0
                    * cos_2sm
                    * (-3.0 + 4.0 * sin_sigma * sin_sigma)
                    * (-3.0 + 4.0 * cos_2sm * cos_2sm)
                )
            )
            return b * big_a * (sigma - d_sigma), it, True
    return math.nan, max_iter, False


# ---------------------------------------------------------------------------
# numpy batch kernels
# ---------------------------------------------------------------------------


def haversine_batch_numpy(lat1, lon1, lat2, lon2, radius):
    s_lat = np.sin(0.5 * (lat2 - lat1))
    s_lon = np.sin(0.5 * (lon2 - lon1))
    h = s_lat * s_lat + np.cos(lat1) * np.cos(lat2) * s_lon * s_lon
    return 2.0 * radius * np.arcsin(np.sqrt(np.minimum(h, 1.0)))


def lambert_batch_numpy(lat1, lon1, lat2, lon2, a, f):
    beta1 = np.arctan((1.0 - f) * np.tan(lat1))
    beta2 = np.arctan((1.0 - f) * np.tan(lat2))
    sigma = haversine_batch_numpy(beta1, lon1, beta2, lon2, 1.0)
    p = 0.5 * (beta1 + beta2)
    q = 0.5 * (beta2 - beta1)
    sin_s = np.sin(sigma)
    x_den = np.cos(0.5 * sigma) ** 2
    y_den = np.sin(0.5 * sigma) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        x = np.where(x_den > 0.0, (sigma - sin_s) * np.sin(p) ** 2 * np.cos(q) ** 2 / x_den, 0.0)
        y = (sigma + sin_s) * np.cos(p) ** 2 * np.sin(q) ** 2 / y_den
        out = a * (sigma - 0.5 * f * (x + y))
    return np.where(sigma == 0.0, 0.0, out)


def vincenty_batch_numpy(lat1, lon1, lat2, lon2, a, f, tol, max_iter):
    """Vectorised Vincenty; returns ``(distance, iterations, converged)`` arrays."""
    lat1, lon1, lat2, lon2 = np.broadcast_arrays(
        *(np.asarray(v, dtype=np.float64) for v in (lat1, lon1, lat2, lon2))
    )
    swap = (lat1 > lat2) | ((lat1 == lat2) & (lon1 > lon2))
    lat1, lat2 = np.where(swap, lat2, lat1), np.where(swap, lat1, lat2)
    lon1, lon2 = np.where(swap, lon2, lon1), np.where(swap, lon1, lon2)

    b = a * (1.0 - f)
    big_l = (lon2 - lon1 + np.pi) % TWO_PI - np.pi
    u1 = np.arctan((1.0 - f) * np.tan(lat1))
    u2 = np.arctan((1.0 - f) * np.tan(lat2))
    sin_u1, cos_u1 = np.sin(u1), np.cos(u1)
    sin_u2, cos_u2 = np.sin(u2), np.cos(u2)

    shape = lat1.shape
    lam = big_l.copy()
    dist = np.full(shape, np.nan)
    iters = np.zeros(shape, dtype=np.int64)
    converged = np.zeros(shape, dtype=bool)
    active = np.ones(shape, dtype=bool)

    for it in range(1, max_iter + 1):
        if not active.any():
            break
        idx = np.nonzero(active)
        lm = lam[idx]
        su1, cu1, su2, cu2 = sin_u1[idx], cos_u1[idx], sin_u2[idx], cos_u2[idx]
        sin_lam, cos_lam = np.sin(lm), np.cos(lm)
        t1 = cu2 * sin_lam
        t2 = cu1 * su2 - su1 * cu2 * cos_lam
        sin_sigma = np.sqrt(t1 * t1 + t2 * t2)
        iters[idx] = it

        coincident = sin_sigma == 0.0
        safe_sin_sigma = np.where(coincident, 1.0, sin_sigma)
        cos_sigma = su1 * su2 + cu1 * cu2 * cos_lam
        sigma = np.arctan2(sin_sigma, cos_sigma)
        sin_alpha = cu1 * cu2 * sin_lam / safe_sin_sigma
        cos2_alpha = 1.0 - sin_alpha * sin_alpha
        safe_c2a = np.where(cos2_alpha != 0.0, cos2_alpha, 1.0)
        cos_2sm = np.where(cos2_alpha != 0.0, cos_sigma - 2.0 * su1 * su2 / safe_c2a, 0.0)
        c = f / 16.0 * cos2_alpha * (4.0 + f * (4.0 - 3.0 * cos2_alpha))
        new_lam = big_l[idx] + (1.0 - c) * f * sin_alpha * (
            sigma + c * sin_sigma * (cos_2sm + c * cos_sigma * (-1.0 + 2.0 * cos_2sm**2))
        )
        lam[idx] = new_lam

        failed = ~coincident & (np.abs(new_lam) > np.pi)
        done = ~coincident & ~failed & (np.abs(new_lam - lm) <= tol)

        u_sq = cos2_alpha * (a * a - b * b) / (b * b)
        big_a = 1.0 + u_sq / 16384.0 * (4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq)))
        big_b = u_sq / 1024.0 * (256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)))
        d_sigma = big_b * sin_sigma * (
            cos_2sm
            + big_b
            / 4.0
            * (
                cos_sigma * (-1.0 + 2.0 * cos_2sm**2)
                - big_b / 6.0 * cos_2sm * (-3.0 + 4.0 * sin_sigma**2) * (-3.0 + 4.0 * cos_2sm**2)
            )
        )
        s = b * big_a * (sigma - d_sigma)

        rows = tuple(ix[coincident] for ix in idx)
        dist[rows] = 0.0
        converged[rows] = True
        rows = tuple(ix[done] for ix in idx)
        dist[rows] = s[done]
        converged[rows] = True
        finished = coincident | done | failed
        active[tuple(ix[finished] for ix in idx)] = False

    return dist, iters, converged


# ---------------------------------------------------------------------------
# numba batch loops
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:

    @numba.njit(**njit_kwargs)
    def haversine_batch_numba(lat1, lon1, lat2, lon2, radius):
        n = lat1.shape[0]
        out = np.empty(n)
        for i in range(n):
            out[i] = haversine_rad(lat1[i], lon1[i], lat2[i], lon2[i], radius)
        return out

    @numba.njit(**njit_kwargs)
    def lambert_batch_numba(lat1, lon1, lat2, lon2, a, f):
        n = lat1.shape[0]
        out = np.empty(n)
        for i in range(n):
            out[i] = lambert_rad(lat1[i], lon1[i], lat2[i], lon2[i], a, f)
        return out

    @numba.njit(**njit_kwargs)
    def vincenty_batch_numba(lat1, lon1, lat2, lon2, a, f, tol, max_iter):
        n = lat1.shape[0]
        dist = np.empty(n)
        iters = np.empty(n, dtype=np.int64)
        ok = np.empty(n, dtype=np.bool_)
        for i in range(n):
            d, k, conv = vincenty_rad(lat1[i], lon1[i], lat2[i], lon2[i], a, f, tol, max_iter)
            dist[i] = d
            iters[i] = k
            ok[i] = conv
        return dist, iters, ok

    haversine_batch = haversine_batch_numba
    lambert_batch = lambert_batch_numba
    vincenty_batch = vincenty_batch_numba
    BACKEND = "numba"
else:
    haversine_batch_numba = lambert_batch_numba = vincenty_batch_numba = None
    haversine_batch = haversine_batch_numpy
    lambert_batch = lambert_batch_numpy
    vincenty_batch = vincenty_batch_numpy
    BACKEND = "numpy"
