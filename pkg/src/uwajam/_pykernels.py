"""Pure-Python sampling kernels.

This module is the reference implementation of every random-sampling
primitive.  The compiled extension (``uwajam._kernels``) mirrors these
routines statement for statement; both call the same libm functions in the
same order, so the two backends produce bit-identical streams.  Keep any
change here in lockstep with the .pyx file.

Generator: xoshiro256** seeded through SplitMix64.  State is carried as a
tuple of four 64-bit ints so it can cross the Python/C boundary cheaply.
"""

import math

MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

TWO_PI = 6.283185307179586
_INV_2_53 = 2.0 ** -53

# Poisson sampling switches from exact CDF inversion to Hormann's PTRS
# transformed-rejection method at this mean.
_POISSON_PTRS_CUTOFF = 10.0


def _splitmix_next(state):
    state = (state + _GOLDEN) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return state, z ^ (z >> 31)


def mix64(x):
    """SplitMix64 finalizer; a 64-bit bijection used for stream splitting."""
    _, z = _splitmix_next(x & MASK64)
    return z


def child_stream_id(parent_id, index):
    """Derive the stream id of substream ``index``; injective in ``index``."""
    return mix64((parent_id ^ ((index + 1) * _GOLDEN)) & MASK64)


def seed_state(seed, stream_id):
    """Expand (seed, stream_id) into a 4x64-bit xoshiro256** state."""
    sm = seed & MASK64
    sm, _ = _splitmix_next(sm)
    sm ^= stream_id & MASK64
    s = []
    for _ in range(4):
        sm, z = _splitmix_next(sm)
        s.append(z)
    if s[0] | s[1] | s[2] | s[3] == 0:  # xoshiro state must not be all zero
        s[0] = _GOLDEN
    return tuple(s)


def _next_u64(s0, s1, s2, s3):
    x = (s1 * 5) & MASK64
    result = ((((x << 7) | (x >> 57)) & MASK64) * 9) & MASK64
    t = (s1 << 17) & MASK64
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = ((s3 << 45) | (s3 >> 19)) & MASK64
    return s0, s1, s2, s3, result


def uniform(state):
    """One double in [0, 1).  Returns (new_state, value)."""
    s0, s1, s2, s3, x = _next_u64(*state)
    return (s0, s1, s2, s3), (x >> 11) * _INV_2_53


def _open01(state):
    # (0, 1]: safe as a log() argument
    s0, s1, s2, s3, x = _next_u64(*state)
    return (s0, s1, s2, s3), ((x >> 11) + 1) * _INV_2_53


def normal_pair(state):
    """Two independent standard normals via Box-Muller."""
    state, u1 = _open01(state)
    state, u2 = uniform(state)
    r = math.sqrt(-2.0 * math.log(u1))
    theta = TWO_PI * u2
    return state, r * math.cos(theta), r * math.sin(theta)


def poisson(state, lam):
    """One Poisson(lam) draw.  Exact inversion below the PTRS cutoff."""
    if lam <= 0.0:
        return state, 0
    if lam < _POISSON_PTRS_CUTOFF:
        state, u = uniform(state)
        p = math.exp(-lam)
        s = p
        k = 0
        while u > s and k < 1000:
            k += 1
            p *= lam / k
            s += p
        return state, k
    # Hormann's PTRS rejection sampler, valid for lam >= 10.
    slam = math.sqrt(lam)
    loglam = math.log(lam)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    invalpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2.0)
    while True:
        state, u = uniform(state)
        u -= 0.5
        state, v = uniform(state)
        us = 0.5 - math.fabs(u)
        k = math.floor((2.0 * a / us + b) * u + lam + 0.43)
        if us >= 0.07 and v <= vr:
            return state, int(k)
        if k < 0 or (us < 0.013 and v > us):
            continue
        if (math.log(v) + math.log(invalpha) - math.log(a / (us * us) + b)
                <= k * loglam - lam - math.lgamma(k + 1.0)):
            return state, int(k)


def fading_draw(state, sqrt_psi):
    """One |H|^2 draw: (Z1 + sqrt(psi))^2 + Z2^2."""
    state, z1, z2 = normal_pair(state)
    a = z1 + sqrt_psi
    return state, a * a + z2 * z2


# ---------------------------------------------------------------------------
# Scenario trial kernel.
#
# Parameters travel as a flat tuple so the compiled backend can unpack them
# into C locals:
#   (dmax_km, sqrt_psi, sqrt_psi_j, pt, pj, sigma2, lam_area, trunc_km,
#    depth_km, nu10, alpha_db_km)
# nu10 is 10*spreading_factor; alpha_db_km the absorption at the carrier.
# ---------------------------------------------------------------------------

def _pathloss_db(dist_km, nu10, alpha_db_km):
    return nu10 * math.log10(dist_km * 1000.0) + dist_km * alpha_db_km


def _jam_sum(state, n_jam, params):
    (_, _, sqrt_psi_j, _, pj, _, _, trunc_km, depth_km, nu10,
     alpha_db_km) = params
    jam = 0.0
    for _ in range(n_jam):
        state, u = uniform(state)
        r_km = trunc_km * math.sqrt(u)
        state, hj2 = fading_draw(state, sqrt_psi_j)
        dist_km = math.sqrt(r_km * r_km + depth_km * depth_km)
        pl_db = _pathloss_db(dist_km, nu10, alpha_db_km)
        jam += pj * hj2 * math.pow(10.0, -0.1 * pl_db)
    return state, jam


def trial_draw(state, params, with_fading):
    """One deployment: returns (state, sjnr, d_km, jam).

    Draw order is part of the reproducibility contract: distance, legitimate
    fading pair (if requested), jammer count, then per jammer radius followed
    by its fading pair.
    """
    (dmax_km, sqrt_psi, _, pt, _, sigma2, lam_area, _, _, nu10,
     alpha_db_km) = params
    state, u = uniform(state)
    d_km = 0.001 + u * (dmax_km - 0.001)
    if with_fading:
        state, h2 = fading_draw(state, sqrt_psi)
    else:
        h2 = 1.0
    state, n_jam = poisson(state, lam_area)
    state, jam = _jam_sum(state, n_jam, params)
    pl_db = _pathloss_db(d_km, nu10, alpha_db_km)
    zeta = pt * h2 * math.pow(10.0, -0.1 * pl_db)
    return state, zeta / (jam + sigma2), d_km, jam


def simulate_trials(seed, stream_id, start, stop, params, with_fading,
                    out_sjnr, out_d, out_jam):
    """Fill out arrays for trial indices [start, stop).

    Trial i draws from the substream child_stream_id(stream_id, i), so the
    result is independent of how the index range is partitioned across
    workers.
    """
    for i in range(start, stop):
        state = seed_state(seed, child_stream_id(stream_id, i))
        _, sjnr, d_km, jam = trial_draw(state, params, with_fading)
        out_sjnr[i] = sjnr
        out_d[i] = d_km
        out_jam[i] = jam


def fading_batch(state, psi, out):
    """Sequential |H|^2 draws from one live stream; returns the new state."""
    sqrt_psi = math.sqrt(psi)
    for i in range(len(out)):
        state, h2 = fading_draw(state, sqrt_psi)
        out[i] = h2
    return state


def uniform_batch(state, out):
    for i in range(len(out)):
        state, u = uniform(state)
        out[i] = u
    return state


def normal_batch(state, out):
    """Fills an even-length array with Box-Muller pairs."""
    n = len(out)
    if n % 2:
        raise ValueError("normal_batch needs an even-length output array")
    for i in range(0, n, 2):
        state, z1, z2 = normal_pair(state)
        out[i] = z1
        out[i + 1] = z2
    return state


def poisson_batch(state, lam, out):
    for i in range(len(out)):
        state, k = poisson(state, lam)
        out[i] = k
    return state


def interference_batch(state, params, out):
    """Sequential aggregate-interference draws from one live stream."""
    lam_area = params[6]
    for i in range(len(out)):
        state, n_jam = poisson(state, lam_area)
        state, jam = _jam_sum(state, n_jam, params)
        out[i] = jam
    return state
