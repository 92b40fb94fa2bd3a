"""Numba kernels for the loop-erasing walk.

The PRF here must stay bit-identical to rng.py: the parallel engine
(pure Python) and the walk engine (these kernels) read the same
resampling table, and the order-invariance tests compare their traces.
All arithmetic is kept in uint64 to avoid numba's int/uint promotion
to float64.
"""

import numpy as np
from numba import njit

U0 = np.uint64(0)
U1 = np.uint64(1)

_C_SEED = np.uint64(0x9E3779B97F4A7C15)
_C_TAG = np.uint64(0xD1B54A32D192ED03)
_C_V = np.uint64(0x8CB92BA72F3D8DD7)
_C_J = np.uint64(0xA24BAED4963EE407)
_C_K = np.uint64(0x9E6C63D0876A9F4B)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)

TAG_NEIGHBOR = np.uint64(0x632BE59BD9B4E019)
TAG_COIN = np.uint64(0xE220A8397B1DCDAF)

_TWO_NEG53 = 2.0**-53


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def _prf_word(seed, tag, v, j, k):
    z = _mix64(seed ^ _C_SEED)
    z = _mix64(z ^ (tag * _C_TAG))
    z = _mix64(z ^ (v * _C_V))
    z = _mix64(z ^ (j * _C_J))
    z = _mix64(z ^ (k * _C_K))
    return z


@njit(cache=True, inline="always")
def _neighbor_index(seed, v, j, deg):
    # threshold = 2**64 mod deg, via wrap-around
    threshold = (U0 - deg) % deg
    k = U0
    while True:
        w = _prf_word(seed, TAG_NEIGHBOR, v, j, k)
        if w >= threshold:
            return w % deg
        k += U1


@njit(cache=True, inline="always")
def _coin(seed, v, j):
    w = _prf_word(seed, TAG_COIN, v, j, U0)
    return np.float64(w >> np.uint64(11)) * _TWO_NEG53


@njit(cache=True)
def prf_word(seed, tag, v, j, k):
    """Exposed for the python/numba equivalence test."""
    return _prf_word(
        np.uint64(seed), np.uint64(tag), np.uint64(v), np.uint64(j), np.uint64(k)
    )


@njit(cache=True)
def lerw_run(
    indptr,
    nbrs,
    eids,
    seed,
    nb_frontier,
    coin_frontier,
    deterministic,
    gamma2,
    gamma,
    arrows,
):
    """One loop-erasing walk run.  Fills `arrows`, advances the frontiers
    in place, and returns (resampled, steps).

    deterministic=True erases 2-cycles and wrongly signed cycles;
    otherwise a cycle closing at repeated vertex w consumes a coin from
    w's coin stream and is erased iff coin < 1 - retention weight.
    """
    n = arrows.shape[0]
    fixed = np.zeros(n, np.bool_)
    drawn = np.zeros(n, np.bool_)
    walk = np.empty(n, np.int64)
    walk_eid = np.empty(n, np.int64)
    walk_pos = np.full(n, -1, np.int64)
    for v in range(n):
        arrows[v] = -1
    resampled = 0
    steps = 0
    for start in range(n):
        if fixed[start]:
            continue
        walk[0] = start
        walk_pos[start] = 0
        wl = 1
        cur = start
        while True:
            j = nb_frontier[cur]
            nb_frontier[cur] = j + 1
            if drawn[cur]:
                resampled += 1
            else:
                drawn[cur] = True
            steps += 1
            base = indptr[cur]
            deg = indptr[cur + 1] - base
            idx = _neighbor_index(np.uint64(seed), np.uint64(cur), np.uint64(j), np.uint64(deg))
            off = base + np.int64(idx)
            nxt = nbrs[off]
            arrows[cur] = nxt
            walk_eid[wl - 1] = eids[off]
            if fixed[nxt]:
                for t in range(wl):
                    fixed[walk[t]] = True
                    walk_pos[walk[t]] = -1
                break
            p = walk_pos[nxt]
            if p >= 0:
                ell = wl - p
                if deterministic:
                    if ell == 2:
                        accept = False
                    else:
                        accept = _cycle_sign(walk, walk_eid, arrows, p, wl, ell) == -1
                else:
                    cj = coin_frontier[nxt]
                    coin_frontier[nxt] = cj + 1
                    c = _coin(np.uint64(seed), np.uint64(nxt), np.uint64(cj))
                    thr = (1.0 - gamma2) if ell == 2 else (1.0 - gamma)
                    accept = not (c < thr)
                if accept:
                    for t in range(wl):
                        fixed[walk[t]] = True
                        walk_pos[walk[t]] = -1
                    break
                else:
                    for t in range(p, wl):
                        arrows[walk[t]] = -1
                    for t in range(p + 1, wl):
                        walk_pos[walk[t]] = -1
                    wl = p + 1
                    cur = nxt
            else:
                walk_pos[nxt] = wl
                walk[wl] = nxt
                wl += 1
                cur = nxt
    return resampled, steps


@njit(cache=True, inline="always")
def _cycle_sign(walk, walk_eid, arrows, p, wl, ell):
    """Sign of the directed cycle walk[p..wl-1] closing back at walk[p].

    +1 per step u -> v with u < v, -1 otherwise; even cycles skip the
    step on the least-indexed edge.
    """
    skip = np.int64(-1)
    if ell % 2 == 0:
        skip = walk_eid[p]
        for t in range(p + 1, wl):
            if walk_eid[t] < skip:
                skip = walk_eid[t]
    sign = 1
    for t in range(p, wl):
        if walk_eid[t] == skip:
            continue
        u = walk[t]
        if u > arrows[u]:
            sign = -sign
    return sign


@njit(cache=True)
def lerw_batch(
    indptr,
    nbrs,
    eids,
    seeds,
    deterministic,
    gamma2,
    gamma,
    arrows_out,
    resampled_out,
    steps_out,
):
    """Independent runs with fresh frontiers, one per seed."""
    n = arrows_out.shape[1]
    for i in range(seeds.shape[0]):
        nbf = np.zeros(n, np.int64)
        cof = np.zeros(n, np.int64)
        r, s = lerw_run(
            indptr, nbrs, eids, seeds[i], nbf, cof, deterministic, gamma2, gamma, arrows_out[i]
        )
        resampled_out[i] = r
        steps_out[i] = s


@njit(cache=True)
def cycle_counts(arrows):
    """(#2-cycles, #longer cycles) of one functional graph."""
    n = arrows.shape[0]
    color = np.zeros(n, np.int8)
    pos = np.full(n, -1, np.int64)
    path = np.empty(n, np.int64)
    c2 = 0
    c = 0
    for v in range(n):
        if color[v] != 0:
            continue
        plen = 0
        u = v
        while color[u] == 0:
            color[u] = 1
            pos[u] = plen
            path[plen] = u
            plen += 1
            u = arrows[u]
        if color[u] == 1:
            ell = plen - pos[u]
            if ell == 2:
                c2 += 1
            else:
                c += 1
        for t in range(plen):
            color[path[t]] = 2
            pos[path[t]] = -1
    return c2, c


@njit(cache=True)
def cycle_counts_batch(arrows2d, c2_out, c_out):
    for i in range(arrows2d.shape[0]):
        c2, c = cycle_counts(arrows2d[i])
        c2_out[i] = c2
        c_out[i] = c
