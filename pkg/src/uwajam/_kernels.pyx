# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernels.

Statement-for-statement mirror of ``uwajam._pykernels`` (see that module for
the algorithm notes).  Both backends call the same libm entry points in the
same order, so streams are bit-identical between them.
"""

from libc.math cimport (cos, exp, fabs, floor, lgamma, log, log10, pow, sin,
                        sqrt)
from libc.stdint cimport int64_t, uint64_t

cdef double TWO_PI = 6.283185307179586
cdef double _INV_2_53 = 2.0 ** -53
cdef double _POISSON_PTRS_CUTOFF = 10.0

cdef uint64_t _GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t _MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t _MIX2 = 0x94D049BB133111EBULL


cdef struct XState:
    uint64_t s0, s1, s2, s3


cdef struct TrialParams:
    double dmax_km, sqrt_psi, sqrt_psi_j, pt, pj, sigma2
    double lam_area, trunc_km, depth_km, nu10, alpha_db_km


cdef inline uint64_t _splitmix_out(uint64_t state) nogil:
    cdef uint64_t z = state
    z = (z ^ (z >> 30)) * _MIX1
    z = (z ^ (z >> 27)) * _MIX2
    return z ^ (z >> 31)


cdef inline uint64_t _rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


cdef XState _seed_state(uint64_t seed, uint64_t stream_id) nogil:
    cdef uint64_t sm = seed
    cdef XState st
    sm += _GOLDEN  # absorb seed
    sm ^= stream_id
    sm += _GOLDEN
    st.s0 = _splitmix_out(sm)
    sm += _GOLDEN
    st.s1 = _splitmix_out(sm)
    sm += _GOLDEN
    st.s2 = _splitmix_out(sm)
    sm += _GOLDEN
    st.s3 = _splitmix_out(sm)
    if (st.s0 | st.s1 | st.s2 | st.s3) == 0:
        st.s0 = _GOLDEN
    return st


cdef inline uint64_t _child_stream_id(uint64_t parent_id, uint64_t index) nogil:
    cdef uint64_t x = parent_id ^ ((index + 1) * _GOLDEN)
    x += _GOLDEN
    return _splitmix_out(x)


cdef inline uint64_t _next_u64(XState *st) nogil:
    cdef uint64_t x = st.s1 * 5
    cdef uint64_t result = _rotl(x, 7) * 9
    cdef uint64_t t = st.s1 << 17
    st.s2 ^= st.s0
    st.s3 ^= st.s1
    st.s1 ^= st.s2
    st.s0 ^= st.s3
    st.s2 ^= t
    st.s3 = _rotl(st.s3, 45)
    return result


cdef inline double _uniform(XState *st) nogil:
    return <double>(_next_u64(st) >> 11) * _INV_2_53


cdef inline double _open01(XState *st) nogil:
    return <double>((_next_u64(st) >> 11) + 1) * _INV_2_53


cdef inline void _normal_pair(XState *st, double *z1, double *z2) nogil:
    cdef double u1 = _open01(st)
    cdef double u2 = _uniform(st)
    cdef double r = sqrt(-2.0 * log(u1))
    cdef double theta = TWO_PI * u2
    z1[0] = r * cos(theta)
    z2[0] = r * sin(theta)


cdef long _poisson(XState *st, double lam) nogil:
    cdef double u, v, p, s, us, k
    cdef double slam, loglam, b, a, invalpha, vr
    cdef long kk
    if lam <= 0.0:
        return 0
    if lam < _POISSON_PTRS_CUTOFF:
        u = _uniform(st)
        p = exp(-lam)
        s = p
        kk = 0
        while u > s and kk < 1000:
            kk += 1
            p *= lam / kk
            s += p
        return kk
    slam = sqrt(lam)
    loglam = log(lam)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    invalpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2.0)
    while True:
        u = _uniform(st) - 0.5
        v = _uniform(st)
        us = 0.5 - fabs(u)
        k = floor((2.0 * a / us + b) * u + lam + 0.43)
        if us >= 0.07 and v <= vr:
            return <long>k
        if k < 0 or (us < 0.013 and v > us):
            continue
        if (log(v) + log(invalpha) - log(a / (us * us) + b)
                <= k * loglam - lam - lgamma(k + 1.0)):
            return <long>k


cdef inline double _fading_draw(XState *st, double sqrt_psi) nogil:
    cdef double z1, z2, a
    _normal_pair(st, &z1, &z2)
    a = z1 + sqrt_psi
    return a * a + z2 * z2


cdef inline double _pathloss_db(double dist_km, double nu10,
                                double alpha_db_km) nogil:
    return nu10 * log10(dist_km * 1000.0) + dist_km * alpha_db_km


cdef double _jam_sum(XState *st, long n_jam, TrialParams *p) nogil:
    cdef double jam = 0.0
    cdef double u, r_km, hj2, dist_km, pl_db
    cdef long j
    for j in range(n_jam):
        u = _uniform(st)
        r_km = p.trunc_km * sqrt(u)
        hj2 = _fading_draw(st, p.sqrt_psi_j)
        dist_km = sqrt(r_km * r_km + p.depth_km * p.depth_km)
        pl_db = _pathloss_db(dist_km, p.nu10, p.alpha_db_km)
        jam += p.pj * hj2 * pow(10.0, -0.1 * pl_db)
    return jam


cdef void _trial(XState *st, TrialParams *p, bint with_fading,
                 double *sjnr, double *d_km, double *jam) nogil:
    cdef double u = _uniform(st)
    cdef double d = 0.001 + u * (p.dmax_km - 0.001)
    cdef double h2, pl_db, zeta, j
    cdef long n_jam
    if with_fading:
        h2 = _fading_draw(st, p.sqrt_psi)
    else:
        h2 = 1.0
    n_jam = _poisson(st, p.lam_area)
    j = _jam_sum(st, n_jam, p)
    pl_db = _pathloss_db(d, p.nu10, p.alpha_db_km)
    zeta = p.pt * h2 * pow(10.0, -0.1 * pl_db)
    sjnr[0] = zeta / (j + p.sigma2)
    d_km[0] = d
    jam[0] = j


cdef TrialParams _unpack_params(params) except *:
    cdef TrialParams p
    (p.dmax_km, p.sqrt_psi, p.sqrt_psi_j, p.pt, p.pj, p.sigma2,
     p.lam_area, p.trunc_km, p.depth_km, p.nu10, p.alpha_db_km) = params
    return p


cdef XState _state_in(state) except *:
    cdef XState st
    st.s0 = state[0]
    st.s1 = state[1]
    st.s2 = state[2]
    st.s3 = state[3]
    return st


cdef tuple _state_out(XState st):
    return (st.s0, st.s1, st.s2, st.s3)


def seed_state(seed, stream_id):
    cdef XState st = _seed_state(<uint64_t>(seed & 0xFFFFFFFFFFFFFFFF),
                                 <uint64_t>(stream_id & 0xFFFFFFFFFFFFFFFF))
    return _state_out(st)


def child_stream_id(parent_id, index):
    return _child_stream_id(<uint64_t>(parent_id & 0xFFFFFFFFFFFFFFFF),
                            <uint64_t>(index & 0xFFFFFFFFFFFFFFFF))


def simulate_trials(seed, stream_id, start, stop, params, with_fading,
                    double[::1] out_sjnr, double[::1] out_d,
                    double[::1] out_jam):
    cdef TrialParams p = _unpack_params(params)
    cdef uint64_t sd = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t root = <uint64_t>(stream_id & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t i0 = start, i1 = stop, i
    cdef bint wf = with_fading
    cdef XState st
    with nogil:
        for i in range(i0, i1):
            st = _seed_state(sd, _child_stream_id(root, <uint64_t>i))
            _trial(&st, &p, wf, &out_sjnr[i], &out_d[i], &out_jam[i])


def fading_batch(state, double psi, double[::1] out):
    cdef XState st = _state_in(state)
    cdef double sqrt_psi = sqrt(psi)
    cdef Py_ssize_t i, n = out.shape[0]
    with nogil:
        for i in range(n):
            out[i] = _fading_draw(&st, sqrt_psi)
    return _state_out(st)


def uniform_batch(state, double[::1] out):
    cdef XState st = _state_in(state)
    cdef Py_ssize_t i, n = out.shape[0]
    with nogil:
        for i in range(n):
            out[i] = _uniform(&st)
    return _state_out(st)


def normal_batch(state, double[::1] out):
    cdef XState st = _state_in(state)
    cdef Py_ssize_t i, n = out.shape[0]
    cdef double z1, z2
    if n % 2:
        raise ValueError("normal_batch needs an even-length output array")
    with nogil:
        for i in range(0, n, 2):
            _normal_pair(&st, &z1, &z2)
            out[i] = z1
            out[i + 1] = z2
    return _state_out(st)


def poisson_batch(state, double lam, int64_t[::1] out):
    cdef XState st = _state_in(state)
    cdef Py_ssize_t i, n = out.shape[0]
    with nogil:
        for i in range(n):
            out[i] = _poisson(&st, lam)
    return _state_out(st)


def interference_batch(state, params, double[::1] out):
    cdef TrialParams p = _unpack_params(params)
    cdef XState st = _state_in(state)
    cdef Py_ssize_t i, n = out.shape[0]
    cdef long n_jam
    with nogil:
        for i in range(n):
            n_jam = _poisson(&st, p.lam_area)
            out[i] = _jam_sum(&st, n_jam, &p)
    return _state_out(st)
