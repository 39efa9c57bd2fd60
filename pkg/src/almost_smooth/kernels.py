"""Hot loops behind the exact oracles.

Every kernel takes relabelled vertex indices ``0..nv-1``. The branch-and-bound
kernels are written once and run either compiled (numba) or interpreted over
plain lists; the alpha-good counting kernel has a separate vectorised numpy
path because it has a natural array formulation.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

__all__ = [
    "USE_NUMBA",
    "build_csr",
    "alpha_good_counts",
    "max_matching_bb",
    "min_cover_bb",
]


def build_csr(nv, us, vs):
    """Undirected CSR adjacency (``indptr``, ``indices``) for distinct edges."""
    deg = np.bincount(np.concatenate([us, vs]), minlength=nv).astype(np.int64)
    indptr = np.zeros(nv + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    src = np.concatenate([us, vs])
    dst = np.concatenate([vs, us])
    order = np.argsort(src, kind="stable")
    indices = dst[order].astype(np.int64)
    return indptr, indices, deg


# --------------------------------------------------------------------------
# alpha-good edges per prefix


@njit(cache=True)
def _alpha_good_counts_loop(us, vs, alpha):
    # Edge i stays good for every prefix ending before the first later arrival
    # that pushes d_i(u) or d_i(v) past alpha.
    L = us.shape[0]
    diff = np.zeros(L + 1, dtype=np.int64)
    for i in range(L):
        a = us[i]
        b = vs[i]
        du = 0
        dv = 0
        death = L
        for j in range(i + 1, L):
            x = us[j]
            y = vs[j]
            if x == a or y == a:
                du += 1
            if x == b or y == b:
                dv += 1
            if du > alpha or dv > alpha:
                death = j
                break
        diff[i] += 1
        diff[death] -= 1
    out = np.empty(L, dtype=np.int64)
    run = 0
    for t in range(L):
        run += diff[t]
        out[t] = run
    return out


def _alpha_good_counts_numpy(us, vs, alpha):
    L = us.shape[0]
    if L == 0:
        return np.zeros(0, dtype=np.int64)
    ep = np.concatenate([us, vs])
    pos = np.concatenate([np.arange(L), np.arange(L)])
    order = np.lexsort((pos, ep))
    sv = ep[order]
    sp = pos[order]
    # The (alpha+1)-th later occurrence of the same vertex kills the edge.
    ahead = np.arange(sv.shape[0]) + alpha + 1
    death_sorted = np.full(sv.shape[0], L, dtype=np.int64)
    ok = ahead < sv.shape[0]
    same = np.zeros_like(ok)
    same[ok] = sv[ahead[ok]] == sv[ok]
    death_sorted[same] = sp[ahead[same]]
    death = np.empty_like(death_sorted)
    death[order] = death_sorted
    death_edge = np.minimum(death[:L], death[L:])
    diff = np.bincount(np.arange(L), minlength=L + 1) - np.bincount(death_edge, minlength=L + 1)
    return np.cumsum(diff[:L]).astype(np.int64)


def alpha_good_counts(us, vs, alpha):
    """``|E_alpha(S_t)|`` for every prefix length ``t = 1..L``."""
    us = np.ascontiguousarray(us, dtype=np.int64)
    vs = np.ascontiguousarray(vs, dtype=np.int64)
    if USE_NUMBA:
        return _alpha_good_counts_loop(us, vs, np.int64(alpha))
    return _alpha_good_counts_numpy(us, vs, alpha)


# --------------------------------------------------------------------------
# shared helpers for the branch-and-bound searches


@njit(cache=True)
def _kill(v, indptr, indices, alive, deg):
    alive[v] = False
    for p in range(indptr[v], indptr[v + 1]):
        x = indices[p]
        if alive[x]:
            deg[x] -= 1


@njit(cache=True)
def _alive_neighbor(v, indptr, indices, alive):
    for p in range(indptr[v], indptr[v + 1]):
        if alive[indices[p]]:
            return indices[p]
    return -1


@njit(cache=True)
def _greedy_size(indptr, indices, alive, deg):
    free = alive.copy()
    size = 0
    for v in range(len(alive)):
        if not free[v] or deg[v] == 0:
            continue
        for p in range(indptr[v], indptr[v + 1]):
            u = indices[p]
            if free[u]:
                free[u] = False
                free[v] = False
                size += 1
                break
    return size


# --------------------------------------------------------------------------
# maximum matching


@njit(cache=True)
def _mm_branch(indptr, indices, alive, deg, count, best, ceiling, cur, ncur, best_pairs):
    nv = len(alive)
    changed = True
    while changed:
        changed = False
        for v in range(nv):
            if not alive[v]:
                continue
            if deg[v] == 0:
                alive[v] = False
            elif deg[v] == 1:
                # a pendant edge belongs to some maximum matching
                u = _alive_neighbor(v, indptr, indices, alive)
                _kill(v, indptr, indices, alive, deg)
                _kill(u, indptr, indices, alive, deg)
                cur[2 * ncur] = v
                cur[2 * ncur + 1] = u
                ncur += 1
                count += 1
                changed = True

    if count > best:
        best = count
        for q in range(2 * ncur):
            best_pairs[q] = cur[q]

    rem = 0
    pick = -1
    mindeg = nv + 1
    for v in range(nv):
        if alive[v]:
            rem += 1
            if deg[v] < mindeg:
                mindeg = deg[v]
                pick = v
    if rem == 0:
        return best
    bound = rem // 2
    g2 = 2 * _greedy_size(indptr, indices, alive, deg)
    if g2 < bound:
        bound = g2
    if count + bound <= best:
        return best

    # A non-isolated vertex is matched in some maximum matching, so only the
    # "pick is matched to u" branches are needed.
    for p in range(indptr[pick], indptr[pick + 1]):
        u = indices[p]
        if not alive[u]:
            continue
        a2 = alive.copy()
        d2 = deg.copy()
        _kill(pick, indptr, indices, a2, d2)
        _kill(u, indptr, indices, a2, d2)
        cur[2 * ncur] = pick
        cur[2 * ncur + 1] = u
        best = _mm_branch(indptr, indices, a2, d2, count + 1, best, ceiling, cur, ncur + 1, best_pairs)
        if best >= ceiling or best >= count + bound:
            break
    return best


def max_matching_bb(nv, us, vs, lower=0):
    """Exact maximum matching of the simple graph on ``nv`` vertices.

    ``lower`` is a size already known to be achievable; only strictly larger
    matchings are searched for. Returns ``(size, pairs)`` with ``pairs`` an
    ``(size, 2)`` array, or ``(lower, None)`` if nothing larger exists.
    """
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    if us.shape[0] == 0:
        return (lower, None) if lower > 0 else (0, np.zeros((0, 2), dtype=np.int64))
    indptr, indices, deg = build_csr(nv, us, vs)
    alive = deg > 0
    ceiling = int(np.count_nonzero(alive)) // 2
    cur = np.zeros(2 * (nv // 2 + 1), dtype=np.int64)
    best_pairs = np.zeros_like(cur)
    best = lower
    if USE_NUMBA:
        size = _mm_branch(indptr, indices, alive, deg, np.int64(0), np.int64(best),
                          np.int64(ceiling), cur, np.int64(0), best_pairs)
    else:
        bp = best_pairs.tolist()
        size = _mm_branch(indptr.tolist(), indices.tolist(), alive.tolist(), deg.tolist(),
                          0, best, ceiling, cur.tolist(), 0, bp)
        best_pairs = np.asarray(bp, dtype=np.int64)
    size = int(size)
    if size <= best:
        return lower, None
    return size, best_pairs[: 2 * size].reshape(size, 2)


# --------------------------------------------------------------------------
# minimum vertex cover


@njit(cache=True)
def _vc_branch(indptr, indices, alive, deg, count, best, cur, ncur, best_cover):
    nv = len(alive)
    changed = True
    while changed:
        changed = False
        for v in range(nv):
            if not alive[v]:
                continue
            if deg[v] == 0:
                alive[v] = False
            elif deg[v] == 1:
                # taking the neighbour of a leaf is always safe
                u = _alive_neighbor(v, indptr, indices, alive)
                _kill(u, indptr, indices, alive, deg)
                cur[ncur] = u
                ncur += 1
                count += 1
                changed = True
    if count >= best:
        return best

    pick = -1
    maxdeg = 0
    for v in range(nv):
        if alive[v] and deg[v] > maxdeg:
            maxdeg = deg[v]
            pick = v
    if pick < 0:
        for q in range(ncur):
            best_cover[q] = cur[q]
        return count
    if count + _greedy_size(indptr, indices, alive, deg) >= best:
        return best

    a2 = alive.copy()
    d2 = deg.copy()
    _kill(pick, indptr, indices, a2, d2)
    cur[ncur] = pick
    best = _vc_branch(indptr, indices, a2, d2, count + 1, best, cur, ncur + 1, best_cover)

    if count + maxdeg < best:
        a2 = alive.copy()
        d2 = deg.copy()
        k = ncur
        for p in range(indptr[pick], indptr[pick + 1]):
            u = indices[p]
            if a2[u]:
                _kill(u, indptr, indices, a2, d2)
                cur[k] = u
                k += 1
        best = _vc_branch(indptr, indices, a2, d2, count + maxdeg, best, cur, k, best_cover)
    return best


def min_cover_bb(nv, us, vs):
    """Exact minimum vertex cover; returns ``(size, vertex index array)``."""
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    if us.shape[0] == 0:
        return 0, np.zeros(0, dtype=np.int64)
    indptr, indices, deg = build_csr(nv, us, vs)
    alive = deg > 0
    start = int(np.count_nonzero(alive)) + 1
    cur = np.zeros(nv + 1, dtype=np.int64)
    best_cover = np.zeros_like(cur)
    if USE_NUMBA:
        size = _vc_branch(indptr, indices, alive, deg, np.int64(0), np.int64(start),
                          cur, np.int64(0), best_cover)
    else:
        bc = best_cover.tolist()
        size = _vc_branch(indptr.tolist(), indices.tolist(), alive.tolist(), deg.tolist(),
                          0, start, cur.tolist(), 0, bc)
        best_cover = np.asarray(bc, dtype=np.int64)
    size = int(size)
    return size, best_cover[:size].copy()
