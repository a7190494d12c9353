"""Pure-python (numpy) implementations of the enumeration kernels.

Mirrors the compiled extension `_core`; selected at import time when the
extension is unavailable.  Matrices travel as float64 rows [a, b, c, d]
with determinant 1 and canonical sign (first entry > 1e-9 positive).

All heavy loops are vectorized level-by-level; semantics (element order,
dedup decisions, error conditions) match the compiled kernels exactly.
"""

from __future__ import annotations

import math

import numpy as np

SIGN_EPS = 1e-9


class DedupAmbiguity(ValueError):
    """Two quantized matrices landed in one tolerance band: increase precision."""


def _mul_rows(m: np.ndarray, g) -> np.ndarray:
    a, b, c, d = m[:, 0], m[:, 1], m[:, 2], m[:, 3]
    ga, gb, gc, gd = g
    return np.stack(
        [a * ga + b * gc, a * gb + b * gd, c * ga + d * gc, c * gb + d * gd],
        axis=1,
    )


def _sign_normalize(m: np.ndarray) -> np.ndarray:
    mask = np.abs(m) > SIGN_EPS
    first = np.argmax(mask, axis=1)
    vals = np.take_along_axis(m, first[:, None], axis=1)[:, 0]
    return m * np.where(vals < 0.0, -1.0, 1.0)[:, None]


def _void_view(a: np.ndarray):
    a = np.ascontiguousarray(a)
    return a.view([("", a.dtype)] * a.shape[1]).ravel()


def _quantize(m: np.ndarray, bucket: float, offset: float) -> np.ndarray:
    return np.floor(m / bucket + offset).astype(np.int64)


class _DedupIndex:
    """Retained matrices, searchable under two shifted quantization grids."""

    def __init__(self, bucket: float, verify_tol: float):
        self.bucket = bucket
        self.verify_tol = verify_tol
        self.mats = np.empty((0, 4))
        self._k1 = np.empty((0, 4), dtype=np.int64)
        self._k2 = np.empty((0, 4), dtype=np.int64)
        self._s1 = self._s2 = None

    def _rebuild(self):
        v1, v2 = _void_view(self._k1), _void_view(self._k2)
        self._o1 = np.argsort(v1)
        self._o2 = np.argsort(v2)
        self._s1 = v1[self._o1]
        self._s2 = v2[self._o2]

    def add(self, mats: np.ndarray):
        self.mats = np.concatenate([self.mats, mats])
        self._k1 = np.concatenate([self._k1, _quantize(mats, self.bucket, 0.5)])
        self._k2 = np.concatenate([self._k2, _quantize(mats, self.bucket, 0.0)])
        self._rebuild()

    def _lookup(self, svoid, order, keys):
        kv = _void_view(keys)
        pos = np.searchsorted(svoid, kv)
        pos_c = np.minimum(pos, len(svoid) - 1) if len(svoid) else pos
        hit = np.zeros(len(kv), dtype=bool)
        idx = np.full(len(kv), -1, dtype=np.int64)
        if len(svoid):
            eq = svoid[pos_c] == kv
            hit = eq
            idx[eq] = order[pos_c[eq]]
        return hit, idx

    def match(self, mats: np.ndarray):
        """Return index of the retained duplicate per row, or -1 if new."""
        if len(self.mats) == 0:
            return np.full(len(mats), -1, dtype=np.int64)
        h1, i1 = self._lookup(self._s1, self._o1, _quantize(mats, self.bucket, 0.5))
        h2, i2 = self._lookup(self._s2, self._o2, _quantize(mats, self.bucket, 0.0))
        idx = np.where(h1, i1, i2)
        hit = h1 | h2
        if hit.any():
            diff = np.abs(mats[hit] - self.mats[idx[hit]]).max(axis=1)
            if (diff > self.verify_tol).any():
                raise DedupAmbiguity("increase precision")
        return np.where(hit, idx, -1)


def _unique_keep_first(keys: np.ndarray, mats: np.ndarray, verify_tol: float):
    """First-occurrence dedup of candidate rows by quantized key."""
    order = np.arange(len(keys))
    _, first, inv = np.unique(_void_view(keys), return_index=True, return_inverse=True)
    diff = np.abs(mats - mats[first[inv]]).max(axis=1)
    if (diff > verify_tol).any():
        raise DedupAmbiguity("increase precision")
    keep = np.zeros(len(keys), dtype=bool)
    keep[first] = True
    return order[keep]


def ball_bfs(letter_mats: np.ndarray, radius: int,
             bucket: float = 1e-7, verify_tol: float = 1e-7):
    """Deduplicated group ball of word-length `radius`.

    Returns (last_letter, parent, depth, mats); element 0 is the identity.
    BFS in shortlex order; one matrix per group element, represented by its
    shortlex-least word.  Raises DedupAmbiguity when the quantization bands
    cannot separate candidates.
    """
    letter_mats = np.asarray(letter_mats, dtype=np.float64)
    n_letters = len(letter_mats)
    last = [np.array([-1], dtype=np.int8)]
    parent = [np.array([-1], dtype=np.int64)]
    depth = [np.array([0], dtype=np.int8)]
    index = _DedupIndex(bucket, verify_tol)
    ident = np.array([[1.0, 0.0, 0.0, 1.0]])
    index.add(ident)
    level_mats = ident
    level_offset = 0
    total = 1
    for d in range(1, radius + 1):
        cand_m, cand_last, cand_par = [], [], []
        for lid in range(n_letters):
            ok = last[-1] != (lid ^ 1) if d > 1 else np.ones(1, dtype=bool)
            rows = np.nonzero(ok)[0]
            if len(rows) == 0:
                continue
            m = _sign_normalize(_mul_rows(level_mats[rows], letter_mats[lid]))
            cand_m.append(m)
            cand_last.append(np.full(len(rows), lid, dtype=np.int8))
            cand_par.append(rows + level_offset)
        if not cand_m:
            break
        # Interleave candidates into shortlex order: parent rank major,
        # letter id minor.
        m = np.concatenate(cand_m)
        cl = np.concatenate(cand_last)
        cp = np.concatenate(cand_par)
        order = np.lexsort((cl, cp))
        m, cl, cp = m[order], cl[order], cp[order]
        for off in (0.5, 0.0):
            keep = _unique_keep_first(_quantize(m, bucket, off), m, verify_tol)
            m, cl, cp = m[keep], cl[keep], cp[keep]
        new = index.match(m) < 0
        m, cl, cp = m[new], cl[new], cp[new]
        if len(m) == 0:
            break
        index.add(m)
        last.append(cl)
        parent.append(cp)
        depth.append(np.full(len(m), d, dtype=np.int8))
        level_offset = total
        total += len(m)
        level_mats = m
    return (np.concatenate(last), np.concatenate(parent),
            np.concatenate(depth), index.mats)


def eval_words(letter_mats: np.ndarray, flat: np.ndarray, offsets: np.ndarray):
    """Batched product of letter matrices; offsets delimit words in `flat`."""
    letter_mats = np.asarray(letter_mats, dtype=np.float64)
    flat = np.asarray(flat, dtype=np.int64)
    offsets = np.asarray(offsets, dtype=np.int64)
    n = len(offsets) - 1
    lengths = np.diff(offsets)
    maxlen = int(lengths.max()) if n else 0
    padded = np.full((n, maxlen), -1, dtype=np.int64)
    for i in range(n):
        padded[i, : lengths[i]] = flat[offsets[i]: offsets[i + 1]]
    mats = np.tile(np.array([[1.0, 0.0, 0.0, 1.0]]), (n, 1))
    for p in range(maxlen):
        active = padded[:, p] >= 0
        if not active.any():
            break
        lm = letter_mats[padded[active, p]]
        cur = mats[active]
        a, b, c, d = cur[:, 0], cur[:, 1], cur[:, 2], cur[:, 3]
        ga, gb, gc, gd = lm[:, 0], lm[:, 1], lm[:, 2], lm[:, 3]
        mats[active] = np.stack(
            [a * ga + b * gc, a * gb + b * gd, c * ga + d * gc, c * gb + d * gd],
            axis=1,
        )
    return _sign_normalize(mats)


def _pack(words: np.ndarray, base: int) -> np.ndarray:
    out = np.zeros(len(words), dtype=np.int64)
    for j in range(words.shape[1]):
        out = out * base + words[:, j]
    return out


def necklaces(n_letters: int, max_len: int):
    """Canonical cyclic-class representatives of each length 1..max_len.

    Letters are dense ids; inverse of id x is x^1.  A representative is the
    shortlex-least among all rotations of the cyclic word and of its
    inverse.  Returns (flat ids, offsets, primitive flags).
    """
    base = 2 * n_letters
    flats, prims = [], []
    offsets = [0]
    pos = 0
    for n in range(1, max_len + 1):
        words = np.arange(n_letters, dtype=np.int64)[:, None]
        for _ in range(n - 1):
            nxt = np.arange(n_letters, dtype=np.int64)
            keep = words[:, -1][:, None] != (nxt[None, :] ^ 1)
            rep = np.repeat(words, n_letters, axis=0)
            cols = np.tile(nxt, len(words))[keep.ravel()]
            words = np.concatenate(
                [rep[keep.ravel()], cols[:, None]], axis=1)
        words = words[words[:, 0] != (words[:, -1] ^ 1)]
        if len(words) == 0:
            continue
        inv = (words[:, ::-1] ^ 1)
        packs = np.empty((len(words), 2 * n), dtype=np.int64)
        for r in range(n):
            rot = np.concatenate([words[:, r:], words[:, :r]], axis=1)
            packs[:, r] = _pack(rot, base)
            rot_i = np.concatenate([inv[:, r:], inv[:, :r]], axis=1)
            packs[:, n + r] = _pack(rot_i, base)
        keep = packs[:, 0] == packs.min(axis=1)
        words, packs = words[keep], packs[keep]
        primitive = np.ones(len(words), dtype=bool)
        for p in range(1, n):
            if n % p == 0:
                primitive &= packs[:, p] != packs[:, 0]
        flats.append(words.astype(np.int8).ravel())
        prims.append(primitive)
        for _ in range(len(words)):
            pos += n
            offsets.append(pos)
    if not flats:
        return (np.empty(0, dtype=np.int8), np.array([0], dtype=np.int64),
                np.empty(0, dtype=bool))
    return (np.concatenate(flats), np.array(offsets, dtype=np.int64),
            np.concatenate(prims))


def _displacements(m: np.ndarray, x: float, y: float) -> np.ndarray:
    denom = m[:, 2] * x + m[:, 3]
    num_r = m[:, 0] * x + m[:, 1]
    w_im = m[:, 2] * y
    d2 = denom * denom + w_im * w_im
    zx = (num_r * denom + (m[:, 0] * y) * w_im) / d2
    zy = y / d2
    q = ((zx - x) ** 2 + (zy - y) ** 2) / (2.0 * zy * y)
    return np.arccosh(1.0 + q)


def orbit_histogram(letter_mats: np.ndarray, radius: int, r_max: int,
                    cap: float, base_x: float, base_y: float):
    """Orbit point counts for a free generating set (tree enumeration).

    Returns (counts, truncated, visited) where counts[R] is the number of
    words of length <= radius whose basepoint displacement is <= R.
    Branches are pruned once displacement exceeds `cap`; `truncated` is
    true when a surviving word of full length `radius` still has
    displacement <= r_max.
    """
    letter_mats = np.asarray(letter_mats, dtype=np.float64)
    n_letters = len(letter_mats)
    bins = np.zeros(r_max + 2, dtype=np.int64)
    bins[0] += 1  # identity
    visited = 1
    truncated = False
    level = np.array([[1.0, 0.0, 0.0, 1.0]])
    lasts = np.array([-1], dtype=np.int64)
    for d in range(1, radius + 1):
        mats_next, lasts_next = [], []
        for lid in range(n_letters):
            ok = lasts != (lid ^ 1)
            rows = np.nonzero(ok)[0]
            if len(rows) == 0:
                continue
            mats_next.append(_mul_rows(level[rows], letter_mats[lid]))
            lasts_next.append(np.full(len(rows), lid, dtype=np.int64))
        if not mats_next:
            break
        level = np.concatenate(mats_next)
        lasts = np.concatenate(lasts_next)
        disp = _displacements(level, base_x, base_y)
        visited += len(level)
        inside = disp <= r_max
        b = np.ceil(disp[inside] - 1e-12).astype(np.int64)
        np.add.at(bins, np.clip(b, 0, r_max), 1)
        if d == radius and inside.any():
            truncated = True
        grow = disp <= cap
        level, lasts = level[grow], lasts[grow]
        if len(level) == 0:
            break
    counts = np.cumsum(bins[: r_max + 1])
    return counts, truncated, visited


def _attracting_angles(m: np.ndarray):
    """Disk angles of attracting fixed points; nan for non-hyperbolic rows."""
    a, b, c, d = m[:, 0], m[:, 1], m[:, 2], m[:, 3]
    tr = a + d
    hyper = np.abs(tr) > 2.0 + 1e-9
    out = np.full(len(m), np.nan)
    small_c = np.abs(c) <= 1e-12
    reg = hyper & ~small_c
    disc = np.where(reg, (a - d) ** 2 + 4.0 * b * c, 1.0)
    r = np.sqrt(np.abs(disc))
    x1 = np.where(reg, (a - d + r) / np.where(reg, 2.0 * c, 1.0), 0.0)
    x2 = np.where(reg, (a - d - r) / np.where(reg, 2.0 * c, 1.0), 0.0)
    att = np.where(np.abs(c * x1 + d) > np.abs(c * x2 + d), x1, x2)
    out[reg] = 2.0 * np.arctan2(-1.0, att[reg])
    # c ~ 0: fixed points are infinity and b/(d-a).
    dia = hyper & small_c
    if dia.any():
        inf_att = np.abs(a) > np.abs(d)
        xo = np.where(np.abs(d - a) > 1e-12, b / np.where(dia, d - a, 1.0), 0.0)
        ang = np.where(inf_att, 0.0, 2.0 * np.arctan2(-1.0, xo))
        out[dia] = ang[dia]
    return out


def free_ball_angles(letter_mats: np.ndarray, radius: int):
    """Attracting fixed-point disk angles over the free word ball."""
    letter_mats = np.asarray(letter_mats, dtype=np.float64)
    n_letters = len(letter_mats)
    level = np.array([[1.0, 0.0, 0.0, 1.0]])
    lasts = np.array([-1], dtype=np.int64)
    angles = []
    for _ in range(radius):
        mats_next, lasts_next = [], []
        for lid in range(n_letters):
            ok = lasts != (lid ^ 1)
            rows = np.nonzero(ok)[0]
            if len(rows) == 0:
                continue
            mats_next.append(_mul_rows(level[rows], letter_mats[lid]))
            lasts_next.append(np.full(len(rows), lid, dtype=np.int64))
        if not mats_next:
            break
        level = np.concatenate(mats_next)
        lasts = np.concatenate(lasts_next)
        ang = _attracting_angles(level)
        angles.append(ang[~np.isnan(ang)])
    if not angles:
        return np.empty(0)
    return np.concatenate(angles)


def _mobius_real(m: np.ndarray, x: float, at_inf: bool):
    """Image of a boundary point under each matrix row; (values, inf mask)."""
    a, b, c, d = m[:, 0], m[:, 1], m[:, 2], m[:, 3]
    if at_inf:
        num, den = a, c
    else:
        num, den = a * x + b, c * x + d
    inf = np.abs(den) <= 1e-13 * np.maximum(1.0, np.abs(num))
    vals = np.where(inf, 0.0, num / np.where(inf, 1.0, den))
    return vals, inf


def axis_crossings(mats: np.ndarray, left: np.ndarray, right: np.ndarray,
                   p: float, p_inf: bool, q: float, q_inf: bool,
                   tau_lo: float, tau_hi: float):
    """Crossing data of candidate lines with the standard axis (0, oo).

    Each candidate line is (L @ M @ R) applied to the source pair (p, q).
    A line {u, v} crosses the imaginary axis iff u*v < 0; the crossing
    parameter is tau = 0.5*log(-u*v) (signed distance from i along the
    axis).  Returns (u, v, tau) arrays for crossings with tau in
    [tau_lo, tau_hi].
    """
    mats = np.asarray(mats, dtype=np.float64)
    la, lb, lc, ld = left
    a, b, c, d = mats[:, 0], mats[:, 1], mats[:, 2], mats[:, 3]
    m = np.stack([la * a + lb * c, la * b + lb * d,
                  lc * a + ld * c, lc * b + ld * d], axis=1)
    m = _mul_rows(m, tuple(right))
    u, u_inf = _mobius_real(m, p, p_inf)
    v, v_inf = _mobius_real(m, q, q_inf)
    good = ~u_inf & ~v_inf & (u * v < 0.0)
    u, v = u[good], v[good]
    tau = 0.5 * np.log(-u * v)
    win = (tau >= tau_lo) & (tau <= tau_hi)
    return u[win], v[win], tau[win]
