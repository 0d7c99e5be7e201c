"""Brute-force reference implementations, independent of the package algorithms."""
import itertools
from functools import lru_cache

import numpy as np


def domino_tilings(N, M):
    """Count domino tilings by filling the first empty cell (bitmask recursion)."""
    if (N * M) % 2:
        return 0
    full = (1 << (N * M)) - 1

    @lru_cache(maxsize=None)
    def go(mask):
        if mask == full:
            return 1
        i = (~mask & (mask + 1)).bit_length() - 1  # lowest empty cell
        r, c = divmod(i, M)
        total = 0
        if c + 1 < M and not mask >> (i + 1) & 1:
            total += go(mask | 1 << i | 1 << (i + 1))
        if r + 1 < N:
            total += go(mask | 1 << i | 1 << (i + M))
        return total

    return go(0)


def _free_shape_variants(cells):
    out = set()
    for flip in (False, True):
        pts = [(r, -c) if flip else (r, c) for r, c in cells]
        for _ in range(4):
            pts = [(c, -r) for r, c in pts]
            r0 = min(p[0] for p in pts)
            c0 = min(p[1] for p in pts)
            out.add(tuple(sorted((r - r0, c - c0) for r, c in pts)))
    return out


def polyomino_shapes(size):
    """All fixed polyominoes of ``size`` cells, grown cell by cell."""
    shapes = {((0, 0),)}
    for _ in range(size - 1):
        grown = set()
        for s in shapes:
            for r, c in s:
                for dr, dc in ((0, 1), (1, 0), (0, -1), (-1, 0)):
                    n = (r + dr, c + dc)
                    if n in s:
                        continue
                    pts = list(s) + [n]
                    r0 = min(p[0] for p in pts)
                    c0 = min(p[1] for p in pts)
                    grown.add(tuple(sorted((a - r0, b - c0) for a, b in pts)))
        shapes = grown
    return shapes


def placements(N, M, shapes):
    out = set()
    for s in shapes:
        h = max(r for r, _ in s) + 1
        w = max(c for _, c in s) + 1
        for r0 in range(N - h + 1):
            for c0 in range(M - w + 1):
                out.add(tuple(sorted((r0 + r) * M + c0 + c for r, c in s)))
    return out


def exact_covers(N, M, shapes):
    """All exact covers as sets of frozensets (first-empty-cell recursion)."""
    rows = placements(N, M, shapes)
    by_min = {}
    for p in rows:
        by_min.setdefault(min(p), []).append(p)
    sols = []

    def go(used, chosen):
        if len(used) == N * M:
            sols.append(frozenset(chosen))
            return
        i = next(k for k in range(N * M) if k not in used)
        for p in by_min.get(i, []):
            if used.isdisjoint(p):
                go(used | set(p), chosen + [p])

    go(set(), [])
    return sols


def thinned_count(N, M, S):
    """Number of S-subsets touching the first/last row and column."""
    n = N * M
    rows = np.arange(n) // M
    cols = np.arange(n) % M
    masks = {
        "r0": sum(1 << i for i in range(n) if rows[i] == 0),
        "r1": sum(1 << i for i in range(n) if rows[i] == N - 1),
        "c0": sum(1 << i for i in range(n) if cols[i] == 0),
        "c1": sum(1 << i for i in range(n) if cols[i] == M - 1),
    }
    count = 0
    for combo in itertools.combinations(range(n), S):
        m = 0
        for i in combo:
            m |= 1 << i
        if all(m & v for v in masks.values()):
            count += 1
    return count
