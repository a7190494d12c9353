# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled enumeration kernels.

Same contracts and output ordering as `pyfallback`; see that module for
the reference semantics.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport NAN, acosh, atan2, ceil, fabs, floor, log, sqrt

cnp.import_array()

SIGN_EPS = 1e-9


class DedupAmbiguity(ValueError):
    """Two quantized matrices landed in one tolerance band: increase precision."""


cdef inline void _mul4(double* out, double* m, double* g) nogil:
    out[0] = m[0] * g[0] + m[1] * g[2]
    out[1] = m[0] * g[1] + m[1] * g[3]
    out[2] = m[2] * g[0] + m[3] * g[2]
    out[3] = m[2] * g[1] + m[3] * g[3]


cdef inline void _sign_norm4(double* m) nogil:
    cdef int i
    for i in range(4):
        if fabs(m[i]) > 1e-9:
            if m[i] < 0.0:
                m[0] = -m[0]; m[1] = -m[1]; m[2] = -m[2]; m[3] = -m[3]
            return


cdef inline double _disp(double* m, double x, double y) nogil:
    cdef double denom = m[2] * x + m[3]
    cdef double num_r = m[0] * x + m[1]
    cdef double w_im = m[2] * y
    cdef double d2 = denom * denom + w_im * w_im
    cdef double zx = (num_r * denom + (m[0] * y) * w_im) / d2
    cdef double zy = y / d2
    cdef double q = ((zx - x) * (zx - x) + (zy - y) * (zy - y)) / (2.0 * zy * y)
    return acosh(1.0 + q)


def ball_bfs(letter_mats, int radius, double bucket=1e-7, double verify_tol=1e-7):
    cdef cnp.ndarray[double, ndim=2] gens = np.ascontiguousarray(letter_mats, dtype=np.float64)
    cdef int n_letters = gens.shape[0]

    cdef long long cap = 1024
    cdef cnp.ndarray[double, ndim=2] mats = np.empty((cap, 4))
    cdef cnp.ndarray[signed char, ndim=1] last = np.empty(cap, dtype=np.int8)
    cdef cnp.ndarray[long long, ndim=1] parent = np.empty(cap, dtype=np.int64)
    cdef cnp.ndarray[signed char, ndim=1] depth_arr = np.empty(cap, dtype=np.int8)
    cdef double[:, :] mv = mats
    cdef signed char[:] lv = last
    cdef long long[:] pv = parent
    cdef signed char[:] dv = depth_arr

    cdef dict d1 = {}
    cdef dict d2 = {}
    cdef double inv_b = 1.0 / bucket
    cdef double[4] cand
    cdef int lid, j, depth
    cdef long long total = 1, level_start = 0, level_end = 1, idx, other
    cdef double diff, dmax
    cdef tuple key1, key2

    mv[0, 0] = 1.0; mv[0, 1] = 0.0; mv[0, 2] = 0.0; mv[0, 3] = 1.0
    lv[0] = -1; pv[0] = -1; dv[0] = 0
    key1 = (<long long>floor(1.0 * inv_b + 0.5), <long long>floor(0.5),
            <long long>floor(0.5), <long long>floor(1.0 * inv_b + 0.5))
    key2 = (<long long>floor(1.0 * inv_b), <long long>floor(0.0),
            <long long>floor(0.0), <long long>floor(1.0 * inv_b))
    d1[key1] = 0
    d2[key2] = 0

    for depth in range(1, radius + 1):
        for idx in range(level_start, level_end):
            for lid in range(n_letters):
                if lv[idx] == <signed char>(lid ^ 1):
                    continue
                _mul4(cand, &mv[idx, 0], &gens[lid, 0])
                _sign_norm4(cand)
                key1 = (<long long>floor(cand[0] * inv_b + 0.5),
                        <long long>floor(cand[1] * inv_b + 0.5),
                        <long long>floor(cand[2] * inv_b + 0.5),
                        <long long>floor(cand[3] * inv_b + 0.5))
                other = d1.get(key1, -1)
                if other < 0:
                    key2 = (<long long>floor(cand[0] * inv_b),
                            <long long>floor(cand[1] * inv_b),
                            <long long>floor(cand[2] * inv_b),
                            <long long>floor(cand[3] * inv_b))
                    other = d2.get(key2, -1)
                if other >= 0:
                    dmax = 0.0
                    for j in range(4):
                        diff = fabs(cand[j] - mv[other, j])
                        if diff > dmax:
                            dmax = diff
                    if dmax > verify_tol:
                        raise DedupAmbiguity("increase precision")
                    continue
                key2 = (<long long>floor(cand[0] * inv_b),
                        <long long>floor(cand[1] * inv_b),
                        <long long>floor(cand[2] * inv_b),
                        <long long>floor(cand[3] * inv_b))
                if total == cap:
                    cap *= 2
                    mats = np.concatenate([mats, np.empty((cap - total, 4))])
                    last = np.concatenate([last, np.empty(cap - total, dtype=np.int8)])
                    parent = np.concatenate([parent, np.empty(cap - total, dtype=np.int64)])
                    depth_arr = np.concatenate([depth_arr, np.empty(cap - total, dtype=np.int8)])
                    mv = mats; lv = last; pv = parent; dv = depth_arr
                for j in range(4):
                    mv[total, j] = cand[j]
                lv[total] = <signed char>lid
                pv[total] = idx
                dv[total] = <signed char>depth
                d1[key1] = total
                d2[key2] = total
                total += 1
        if level_end == total:
            break
        level_start = level_end
        level_end = total

    return (np.array(last[:total]), np.array(parent[:total]),
            np.array(depth_arr[:total]), np.array(mats[:total]))


def eval_words(letter_mats, flat_in, offsets_in):
    cdef cnp.ndarray[double, ndim=2] gens = np.ascontiguousarray(letter_mats, dtype=np.float64)
    cdef cnp.ndarray[long long, ndim=1] flat = np.ascontiguousarray(flat_in, dtype=np.int64)
    cdef cnp.ndarray[long long, ndim=1] offsets = np.ascontiguousarray(offsets_in, dtype=np.int64)
    cdef long long n = offsets.shape[0] - 1
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, 4))
    cdef double[4] acc
    cdef double[4] tmp
    cdef long long i, p
    cdef int j
    for i in range(n):
        acc[0] = 1.0; acc[1] = 0.0; acc[2] = 0.0; acc[3] = 1.0
        for p in range(offsets[i], offsets[i + 1]):
            _mul4(tmp, acc, &gens[flat[p], 0])
            for j in range(4):
                acc[j] = tmp[j]
        _sign_norm4(acc)
        for j in range(4):
            out[i, j] = acc[j]
    return out


cdef long long _pack_rot(signed char* w, int n, int start, bint invert, int base) nogil:
    cdef long long out = 0
    cdef int i, pos
    cdef int letter
    for i in range(n):
        pos = start + i
        if pos >= n:
            pos -= n
        if invert:
            letter = w[n - 1 - pos] ^ 1
        else:
            letter = w[pos]
        out = out * base + letter
    return out


def necklaces(int n_letters, int max_len):
    if max_len > 60:
        raise ValueError("word length cap exceeded")
    cdef int base = 2 * n_letters
    cdef list flats = []
    cdef list offs = [0]
    cdef list prims = []
    cdef signed char[64] w
    cdef int[64] next_letter
    cdef int n, depth, letter, start, p
    cdef long long pos = 0
    cdef long long p0, pmin, pr
    cdef bint primitive

    for n in range(1, max_len + 1):
        depth = 0
        next_letter[0] = 0
        while depth >= 0:
            letter = next_letter[depth]
            if letter >= n_letters:
                depth -= 1
                continue
            next_letter[depth] = letter + 1
            if depth > 0 and (w[depth - 1] ^ 1) == letter:
                continue
            w[depth] = <signed char>letter
            if depth + 1 == n:
                if n == 1 or (w[0] ^ 1) != w[n - 1]:
                    p0 = _pack_rot(w, n, 0, False, base)
                    pmin = p0
                    for start in range(n):
                        pr = _pack_rot(w, n, start, False, base)
                        if pr < pmin:
                            pmin = pr
                        pr = _pack_rot(w, n, start, True, base)
                        if pr < pmin:
                            pmin = pr
                    if p0 == pmin:
                        primitive = True
                        for p in range(1, n):
                            if n % p == 0:
                                if _pack_rot(w, n, p, False, base) == p0:
                                    primitive = False
                                    break
                        for start in range(n):
                            flats.append(w[start])
                        pos += n
                        offs.append(pos)
                        prims.append(primitive)
            else:
                depth += 1
                next_letter[depth] = 0
    return (np.array(flats, dtype=np.int8), np.array(offs, dtype=np.int64),
            np.array(prims, dtype=bool))


cdef struct OrbitCtx:
    double* gens
    int n_letters
    int radius
    int r_max
    double cap
    double x
    double y
    long long* bins
    long long visited
    bint truncated


cdef void _orbit_dfs(OrbitCtx* ctx, double* m, int depth, int last) nogil:
    cdef double[4] child
    cdef int lid, b
    cdef double d
    for lid in range(ctx.n_letters):
        if last == (lid ^ 1):
            continue
        _mul4(child, m, ctx.gens + 4 * lid)
        d = _disp(child, ctx.x, ctx.y)
        ctx.visited += 1
        if d <= ctx.r_max:
            b = <int>ceil(d - 1e-12)
            if b < 0:
                b = 0
            if b > ctx.r_max:
                b = ctx.r_max
            ctx.bins[b] += 1
            if depth + 1 == ctx.radius:
                ctx.truncated = True
        if depth + 1 < ctx.radius and d <= ctx.cap:
            _orbit_dfs(ctx, child, depth + 1, lid)


def orbit_histogram(letter_mats, int radius, int r_max,
                    double cap, double base_x, double base_y):
    cdef cnp.ndarray[double, ndim=2] gens = np.ascontiguousarray(letter_mats, dtype=np.float64)
    cdef cnp.ndarray[long long, ndim=1] bins = np.zeros(r_max + 2, dtype=np.int64)
    cdef long long[:] bins_v = bins
    cdef OrbitCtx ctx
    cdef double[4] ident = [1.0, 0.0, 0.0, 1.0]
    ctx.gens = &gens[0, 0]
    ctx.n_letters = gens.shape[0]
    ctx.radius = radius
    ctx.r_max = r_max
    ctx.cap = cap
    ctx.x = base_x
    ctx.y = base_y
    ctx.bins = &bins_v[0]
    ctx.visited = 1
    ctx.truncated = False
    bins[0] += 1
    if radius > 0:
        with nogil:
            _orbit_dfs(&ctx, ident, 0, -1)
    counts = np.cumsum(bins[: r_max + 1])
    return counts, bool(ctx.truncated), int(ctx.visited)


cdef double _att_angle(double* m) nogil:
    """Disk angle of the attracting fixed point; nan when not hyperbolic."""
    cdef double a = m[0], b = m[1], c = m[2], d = m[3]
    cdef double tr = a + d
    cdef double disc, r, x1, x2, att
    if fabs(tr) <= 2.0 + 1e-9:
        return NAN
    if fabs(c) <= 1e-12:
        if fabs(a) > fabs(d):
            return 0.0
        if fabs(d - a) <= 1e-12:
            return NAN
        return 2.0 * atan2(-1.0, b / (d - a))
    disc = (a - d) * (a - d) + 4.0 * b * c
    r = sqrt(fabs(disc))
    x1 = (a - d + r) / (2.0 * c)
    x2 = (a - d - r) / (2.0 * c)
    att = x1 if fabs(c * x1 + d) > fabs(c * x2 + d) else x2
    return 2.0 * atan2(-1.0, att)


def free_ball_angles(letter_mats, int radius):
    cdef cnp.ndarray[double, ndim=2] gens = np.ascontiguousarray(letter_mats, dtype=np.float64)
    cdef int n_letters = gens.shape[0]
    cdef list out_per_level = []
    cdef cnp.ndarray[double, ndim=2] level = np.array([[1.0, 0.0, 0.0, 1.0]])
    cdef cnp.ndarray[signed char, ndim=1] lasts = np.array([-1], dtype=np.int8)
    cdef cnp.ndarray[double, ndim=2] nxt
    cdef cnp.ndarray[signed char, ndim=1] nxt_last
    cdef cnp.ndarray[double, ndim=1] angs
    cdef long long i, count, n_level, j
    cdef int lid, d
    for d in range(radius):
        n_level = level.shape[0]
        count = 0
        for lid in range(n_letters):
            for i in range(n_level):
                if lasts[i] != <signed char>(lid ^ 1):
                    count += 1
        nxt = np.empty((count, 4))
        nxt_last = np.empty(count, dtype=np.int8)
        angs = np.empty(count)
        j = 0
        # fallback concatenates per-letter blocks, so letter id is the
        # major key in this ordering
        for lid in range(n_letters):
            for i in range(n_level):
                if lasts[i] == <signed char>(lid ^ 1):
                    continue
                _mul4(&nxt[j, 0], &level[i, 0], &gens[lid, 0])
                nxt_last[j] = <signed char>lid
                angs[j] = _att_angle(&nxt[j, 0])
                j += 1
        out_per_level.append(angs[~np.isnan(angs)])
        level = nxt
        lasts = nxt_last
    if not out_per_level:
        return np.empty(0)
    return np.concatenate(out_per_level)


def axis_crossings(mats_in, left, right,
                   double p, bint p_inf, double q, bint q_inf,
                   double tau_lo, double tau_hi):
    cdef cnp.ndarray[double, ndim=2] mats = np.ascontiguousarray(mats_in, dtype=np.float64)
    cdef double[4] L
    cdef double[4] R
    cdef int j
    for j in range(4):
        L[j] = left[j]
        R[j] = right[j]
    cdef long long n = mats.shape[0], i
    cdef list us = [], vs = [], taus = []
    cdef double[4] lm
    cdef double[4] m
    cdef double u, v, tau, num, den, scale
    for i in range(n):
        _mul4(lm, L, &mats[i, 0])
        _mul4(m, lm, R)
        if p_inf:
            num = m[0]; den = m[2]
        else:
            num = m[0] * p + m[1]; den = m[2] * p + m[3]
        scale = 1.0 if fabs(num) < 1.0 else fabs(num)
        if fabs(den) <= 1e-13 * scale:
            continue
        u = num / den
        if q_inf:
            num = m[0]; den = m[2]
        else:
            num = m[0] * q + m[1]; den = m[2] * q + m[3]
        scale = 1.0 if fabs(num) < 1.0 else fabs(num)
        if fabs(den) <= 1e-13 * scale:
            continue
        v = num / den
        if u * v >= 0.0:
            continue
        tau = 0.5 * log(-u * v)
        if tau_lo <= tau <= tau_hi:
            us.append(u); vs.append(v); taus.append(tau)
    return np.array(us), np.array(vs), np.array(taus)
