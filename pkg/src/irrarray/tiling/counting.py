"""Solution-space sizes for domino tilings and thinned arrays."""
from __future__ import annotations

from math import comb

import mpmath

_KASTELEYN_DPS = 60


def count_domino(N: int, M: int) -> int:
    """Number of domino tilings of an ``N x M`` board (Kasteleyn product)."""
    if N < 1 or M < 1 or (N * M) % 2:
        return 0
    with mpmath.workdps(_KASTELEYN_DPS + N * M // 8):
        prod = mpmath.mpf(2) ** (N * M // 2)
        for m in range(1, M + 1):
            cm = mpmath.cos(mpmath.pi * m / (M + 1)) ** 2
            for n in range(1, N + 1):
                prod *= mpmath.root(cm + mpmath.cos(mpmath.pi * n / (N + 1)) ** 2, 4)
        return int(mpmath.nint(prod))


def count_thinned(N: int, M: int, S: int) -> int:
    """Exact number of ``S``-element thinned layouts spanning the full aperture.

    Inclusion-exclusion over the boundary rows and columns left empty; a
    one-row (or one-column) board has a single boundary line on that axis.
    """
    if S < 1 or S > N * M:
        return 0
    n_rows = 1 if N == 1 else 2
    n_cols = 1 if M == 1 else 2
    total = 0
    for a in range(n_rows + 1):
        for b in range(n_cols + 1):
            cells = (N - a) * (M - b)
            total += (-1) ** (a + b) * comb(n_rows, a) * comb(n_cols, b) * comb(cells, S)
    return max(total, 0)


def count_thinned_truncated(N: int, M: int, S: int) -> int:
    """Four-term approximation that keeps only single and corner exclusions.

    Matches the exact count when no two opposite boundary lines can be
    empty together; undercounts otherwise (e.g. 20 vs 22 for 3x3, S=3).
    """
    T = N * M
    val = comb(T, S) - 2 * comb(T - M, S) - 2 * comb(T - N, S) + 4 * comb(max(T - N - M + 1, 0), S)
    return max(val, 0)


def sci_truncated(value: int, digits: int = 2) -> str:
    """Scientific notation truncated (not rounded) to ``digits`` significant figures."""
    if value == 0:
        return "0"
    s = str(abs(int(value)))
    exp = len(s) - 1
    mant = s[0] + ("." + s[1:digits] if digits > 1 else "")
    return f"{'-' if value < 0 else ''}{mant}e{exp}"
