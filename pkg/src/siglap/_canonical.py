"""Brute-force canonical labeling for small graphs.

The canonical key of a graph on ``n <= 10`` vertices is the
lexicographically smallest upper-triangle adjacency bit string over all
vertex relabelings (column-major bit order, the order graph6 uses). The
minimum is taken with numpy over precomputed permutation index tables,
which also yields every optimal relabeling and hence the full automorphism
group of the canonical copy.

Key ints of graphs with the same order compare exactly like the underlying
bit strings, so "canonically largest parent" style rules reduce to integer
comparisons.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError

_MAX_N = 10
_CHUNK = 500_000  # permutation rows per block for n = 10


def _pair_index(i: int, j: int) -> int:
    return j * (j - 1) // 2 + i


@lru_cache(maxsize=None)
def _tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All n! permutations (rows) and the gather table mapping each target
    bit position to its source position under that permutation."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int8)
    return perms, _gather_for(perms, n)


def _gather_for(perms: np.ndarray, n: int) -> np.ndarray:
    t = n * (n - 1) // 2
    gather = np.empty((perms.shape[0], t), dtype=np.int32)
    for j in range(1, n):
        b = perms[:, j].astype(np.int32)
        for i in range(j):
            a = perms[:, i].astype(np.int32)
            lo = np.minimum(a, b)
            hi = np.maximum(a, b)
            gather[:, _pair_index(i, j)] = hi * (hi - 1) // 2 + lo
    return gather


def _bit_vector(adj: tuple[int, ...], n: int) -> np.ndarray:
    t = n * (n - 1) // 2
    bits = np.empty(t, dtype=np.uint8)
    pos = 0
    for j in range(1, n):
        col = adj[j]
        for i in range(j):
            bits[pos] = (col >> i) & 1
            pos += 1
    return bits


def _pack_keys(permuted: np.ndarray) -> np.ndarray:
    """Rows of bits to big-endian integers preserving lexicographic order."""
    packed = np.packbits(permuted, axis=1)
    width = 4 if packed.shape[1] <= 4 else 8
    padded = np.zeros((packed.shape[0], width), dtype=np.uint8)
    padded[:, : packed.shape[1]] = packed
    dtype = ">u4" if width == 4 else ">u8"
    return padded.view(dtype).ravel()


@dataclass(frozen=True)
class CanonData:
    """Canonical key plus every optimal relabeling.

    ``order`` lists original vertices by canonical position; ``orders``
    holds all relabelings attaining the key, so ``len(orders)`` is the
    automorphism group order.
    """

    key: int
    order: tuple[int, ...]
    orders: tuple[tuple[int, ...], ...]

    @property
    def aut_order(self) -> int:
        return len(self.orders)


def canonical_key(adj: tuple[int, ...], n: int) -> int:
    """Just the key, skipping the bookkeeping for optimal relabelings."""
    if n == 1:
        return 0
    if n > _MAX_N:
        raise CapacityError(f"canonical key limited to {_MAX_N} vertices")
    if n == _MAX_N:
        return canonical_data(adj, n).key
    perms, gather = _tables(n)
    del perms
    keys = _pack_keys(_bit_vector(adj, n)[gather])
    return int(keys.min())


def canonical_data(adj: tuple[int, ...], n: int) -> CanonData:
    if n == 1:
        return CanonData(0, (0,), ((0,),))
    if n > _MAX_N:
        raise CapacityError(f"canonical labeling limited to {_MAX_N} vertices")
    bits = _bit_vector(adj, n)
    if n < _MAX_N:
        perms, gather = _tables(n)
        keys = _pack_keys(bits[gather])
        best = keys.min()
        idx = np.flatnonzero(keys == best)
        orders = tuple(tuple(int(v) for v in perms[i]) for i in idx)
        return CanonData(int(best), orders[0], orders)
    return _canonical_data_chunked(bits, n)


def _canonical_data_chunked(bits: np.ndarray, n: int) -> CanonData:
    best: int | None = None
    winners: list[tuple[int, ...]] = []
    stream = itertools.permutations(range(n))
    while True:
        block = list(itertools.islice(stream, _CHUNK))
        if not block:
            break
        perms = np.array(block, dtype=np.int8)
        keys = _pack_keys(bits[_gather_for(perms, n)])
        lo = int(keys.min())
        if best is None or lo < best:
            best = lo
            winners = []
        if lo == best:
            for i in np.flatnonzero(keys == best):
                winners.append(tuple(int(v) for v in perms[i]))
    assert best is not None
    return CanonData(best, winners[0], tuple(winners))


def relabeled_canonical(adj: tuple[int, ...], data: CanonData) -> tuple[int, ...]:
    """Adjacency rows of the canonical copy given its optimal relabeling."""
    n = len(adj)
    order = data.order
    out = [0] * n
    for pos in range(n):
        src = adj[order[pos]]
        row = 0
        for tgt in range(n):
            row |= ((src >> order[tgt]) & 1) << tgt
        out[pos] = row
    return tuple(out)


def automorphisms_of_canonical(data: CanonData) -> tuple[tuple[int, ...], ...]:
    """Automorphisms of the canonical copy, derived from the optimal
    relabelings of the original: for each optimal order ``o`` the map
    ``i -> inv(order)[o[i]]`` fixes the canonical adjacency."""
    order0 = data.order
    n = len(order0)
    inv = [0] * n
    for pos, v in enumerate(order0):
        inv[v] = pos
    return tuple(tuple(inv[o[i]] for i in range(n)) for o in data.orders)


def deleted_key(adj: tuple[int, ...], n: int, drop: int) -> int:
    """Canonical key of the graph with vertex ``drop`` removed and the
    remaining labels compacted order-preservingly."""
    keep = [v for v in range(n) if v != drop]
    sub = []
    for v in keep:
        row = adj[v]
        bits = 0
        for pos, u in enumerate(keep):
            bits |= ((row >> u) & 1) << pos
        sub.append(bits)
    return canonical_key(tuple(sub), n - 1)
