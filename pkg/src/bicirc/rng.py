"""Counter-mode pseudorandom streams and the resampling table.

Every random quantity consumed by a sampler is a pure function of
(seed, stream tag, vertex, draw index), so a run is a deterministic
function of its seed and the parallel and sequential engines can
consume identical randomness.  The mixing function is the SplitMix64
finalizer; the numba kernels in _kernels.py mirror it bit for bit.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

_C_SEED = 0x9E3779B97F4A7C15
_C_TAG = 0xD1B54A32D192ED03
_C_V = 0x8CB92BA72F3D8DD7
_C_J = 0xA24BAED4963EE407
_C_K = 0x9E6C63D0876A9F4B

TAG_NEIGHBOR = 0x632BE59BD9B4E019
TAG_COIN = 0xE220A8397B1DCDAF
TAG_DERIVE = 0xF1357AEA2E62A9C5


def mix64(z: int) -> int:
    """SplitMix64 avalanche."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def prf_word(seed: int, tag: int, v: int, j: int, k: int) -> int:
    """Uniform 64-bit word, a pure function of all five arguments."""
    z = mix64((seed & MASK64) ^ _C_SEED)
    z = mix64(z ^ ((tag * _C_TAG) & MASK64))
    z = mix64(z ^ ((v * _C_V) & MASK64))
    z = mix64(z ^ ((j * _C_J) & MASK64))
    z = mix64(z ^ ((k * _C_K) & MASK64))
    return z


def neighbor_index(seed: int, v: int, j: int, deg: int) -> int:
    """Draw j for vertex v: uniform in 0..deg-1 by rejection, no modulo bias."""
    threshold = (1 << 64) % deg
    k = 0
    while True:
        w = prf_word(seed, TAG_NEIGHBOR, v, j, k)
        if w >= threshold:
            return w % deg
        k += 1


def coin(seed: int, v: int, j: int) -> float:
    """Coin j for vertex v: uniform in [0, 1) with 53 bits of precision."""
    w = prf_word(seed, TAG_COIN, v, j, 0)
    return (w >> 11) * 2.0**-53


def derive_seed(master: int, *parts: int) -> int:
    """Mix a master seed with slot indices to get an independent stream seed."""
    z = mix64((master & MASK64) ^ TAG_DERIVE)
    for p in parts:
        z = mix64(z ^ ((p * _C_J) & MASK64))
    return z


class ResamplingTable:
    """Seeded per-vertex streams of neighbor choices and auxiliary coins.

    Entry (v, j) never changes once defined; the frontier records how
    many entries each vertex has consumed.
    """

    def __init__(self, graph, seed: int):
        self.graph = graph
        self.seed = seed & MASK64
        self.neighbor_frontier = [0] * graph.n
        self.coin_frontier = [0] * graph.n

    def neighbor_entry(self, v: int, j: int) -> int:
        """Peek at entry (v, j) without consuming it.  Returns a vertex id."""
        idx = neighbor_index(self.seed, v, j, self.graph.deg[v])
        return self.graph.adj[v][idx][0]

    def coin_entry(self, v: int, j: int) -> float:
        return coin(self.seed, v, j)

    def next_neighbor(self, v: int) -> int:
        j = self.neighbor_frontier[v]
        self.neighbor_frontier[v] = j + 1
        return self.neighbor_entry(v, j)

    def next_coin(self, v: int) -> float:
        j = self.coin_frontier[v]
        self.coin_frontier[v] = j + 1
        return self.coin_entry(v, j)
