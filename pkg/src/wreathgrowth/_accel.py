"""Hot loops, compiled with numba when available.

Set ``WREATHGROWTH_DISABLE_NUMBA=1`` to force the pure numpy versions.
Both versions are always importable so they can be compared directly.

The kernel here is breadth-first search on a group whose elements are
encoded as bit strings (the swap bits of a truncated portrait), with
generators acting by

    code -> mask XOR permute_bits(code)

where bit ``b`` of the permuted code is bit ``src[b]`` of the input.
"""

from __future__ import annotations

import os

import numpy as np

DISABLED = os.environ.get("WREATHGROWTH_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:  # pragma: no cover - depends on the environment
    if DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def _apply_numpy(codes: np.ndarray, src: np.ndarray, mask: np.uint64) -> np.ndarray:
    out = np.full(codes.shape, mask, dtype=np.uint64)
    one = np.uint64(1)
    for b in range(src.shape[0]):
        out ^= ((codes >> np.uint64(src[b])) & one) << np.uint64(b)
    return out


def bitcode_bfs_numpy(src: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """Sphere sizes of the Cayley graph, starting from code 0.

    Generators must be involutions, so every neighbour of layer L lies in
    layers L-1, L or L+1 and only two previous layers need remembering.
    """
    src = np.asarray(src, dtype=np.int64)
    masks = np.asarray(masks, dtype=np.uint64)
    prev = np.empty(0, dtype=np.uint64)
    cur = np.zeros(1, dtype=np.uint64)
    sizes = [1]
    while True:
        cand = np.concatenate([_apply_numpy(cur, src[i], masks[i]) for i in range(len(masks))])
        cand = np.unique(cand)
        cand = cand[~np.isin(cand, cur, assume_unique=True)]
        cand = cand[~np.isin(cand, prev, assume_unique=True)]
        if cand.size == 0:
            return np.array(sizes, dtype=np.int64)
        sizes.append(int(cand.size))
        prev, cur = cur, cand


@njit(cache=True)
def _bitcode_bfs_kernel(src, masks, nbits):  # pragma: no cover - compiled
    k = masks.shape[0]
    nwords = max(1, (1 << nbits) >> 6)
    seen = np.zeros(nwords, dtype=np.uint64)
    seen[0] = np.uint64(1)
    frontier = np.zeros(1, dtype=np.uint64)
    sizes = np.zeros(1 << 12, dtype=np.int64)
    sizes[0] = 1
    depth = 0
    one = np.uint64(1)
    while frontier.shape[0] > 0:
        nxt = np.empty(frontier.shape[0] * k, dtype=np.uint64)
        cnt = 0
        for i in range(frontier.shape[0]):
            code = frontier[i]
            for g in range(k):
                out = masks[g]
                for b in range(nbits):
                    out ^= ((code >> np.uint64(src[g, b])) & one) << np.uint64(b)
                w = out >> np.uint64(6)
                bit = one << (out & np.uint64(63))
                if seen[w] & bit == 0:
                    seen[w] |= bit
                    nxt[cnt] = out
                    cnt += 1
        if cnt == 0:
            break
        depth += 1
        sizes[depth] = cnt
        frontier = nxt[:cnt].copy()
    return sizes[: depth + 1].copy()


def bitcode_bfs_numba(src: np.ndarray, masks: np.ndarray) -> np.ndarray:
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not available or disabled")
    src = np.ascontiguousarray(src, dtype=np.int64)
    masks = np.ascontiguousarray(masks, dtype=np.uint64)
    return _bitcode_bfs_kernel(src, masks, src.shape[1])


def bitcode_bfs(src: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """Dispatch to the compiled kernel unless it is disabled."""
    if HAVE_NUMBA:
        return bitcode_bfs_numba(src, masks)
    return bitcode_bfs_numpy(src, masks)


def backend_name() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
