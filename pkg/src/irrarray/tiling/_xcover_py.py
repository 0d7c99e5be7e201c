"""Pure-Python dancing-links exact cover (fallback for the compiled kernel).

Node layout follows Knuth: node 0 is the root, nodes ``1..n_items`` are item
headers, option nodes follow in row order. The search is iterative so deep
boards do not hit the recursion limit.
"""


def solve(n_items, offsets, cells, cap=-1, count_only=False):
    """Enumerate exact covers.

    Parameters
    ----------
    n_items : int
        Number of items (board cells) that must be covered exactly once.
    offsets, cells : sequence of int
        Options in CSR form; option ``r`` covers ``cells[offsets[r]:offsets[r+1]]``.
    cap : int
        Stop after this many covers; negative means no limit.
    count_only : bool
        Skip materialising solutions.

    Returns
    -------
    (count, solutions)
        ``solutions`` is a list of option-index lists in discovery order
        (empty when ``count_only``).
    """
    n_opts = len(offsets) - 1
    n_nodes = 1 + n_items + len(cells)
    L = list(range(n_nodes))
    R = list(range(n_nodes))
    U = list(range(n_nodes))
    D = list(range(n_nodes))
    C = [0] * n_nodes
    ROW = [-1] * n_nodes
    S = [0] * (n_items + 1)

    for i in range(1, n_items + 1):
        L[i] = i - 1
        R[i - 1] = i
        C[i] = i
    L[0] = n_items
    R[n_items] = 0

    node = n_items + 1
    for r in range(n_opts):
        first = node
        for k in range(offsets[r], offsets[r + 1]):
            col = cells[k] + 1
            C[node] = col
            ROW[node] = r
            U[node] = U[col]
            D[node] = col
            D[U[col]] = node
            U[col] = node
            S[col] += 1
            if node == first:
                L[node] = R[node] = node
            else:
                L[node] = node - 1
                R[node] = first
                R[node - 1] = node
                L[first] = node
            node += 1

    def cover(c):
        L[R[c]] = L[c]
        R[L[c]] = R[c]
        i = D[c]
        while i != c:
            j = R[i]
            while j != i:
                U[D[j]] = U[j]
                D[U[j]] = D[j]
                S[C[j]] -= 1
                j = R[j]
            i = D[i]

    def uncover(c):
        i = U[c]
        while i != c:
            j = L[i]
            while j != i:
                S[C[j]] += 1
                U[D[j]] = j
                D[U[j]] = j
                j = L[j]
            i = U[i]
        L[R[c]] = c
        R[L[c]] = c

    count = 0
    solutions = []
    O = [0] * (n_items + 1)
    level = 0
    state = 0  # 0: choose item, 1: try option O[level], 2: backtrack
    while True:
        if state == 0:
            if R[0] == 0:
                count += 1
                if not count_only:
                    solutions.append([ROW[O[k]] for k in range(level)])
                if 0 <= cap <= count:
                    break
                state = 2
                continue
            # fewest remaining options; strict '<' keeps the lowest index on ties
            c = R[0]
            best = S[c]
            j = R[c]
            while j != 0 and best > 0:
                if S[j] < best:
                    c = j
                    best = S[j]
                j = R[j]
            if best == 0:
                state = 2
                continue
            cover(c)
            O[level] = D[c]
            state = 1
        elif state == 1:
            r = O[level]
            c = C[r] if r > n_items else r
            if r == c:
                uncover(c)
                state = 2
                continue
            j = R[r]
            while j != r:
                cover(C[j])
                j = R[j]
            level += 1
            state = 0
        else:
            if level == 0:
                break
            level -= 1
            r = O[level]
            j = L[r]
            while j != r:
                uncover(C[j])
                j = L[j]
            O[level] = D[r]
            state = 1
    return count, solutions
