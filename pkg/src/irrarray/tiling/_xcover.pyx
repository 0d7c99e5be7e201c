# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dancing-links exact cover; mirrors ``_xcover_py.solve`` exactly."""
from libc.stdlib cimport malloc, free


cdef inline void _cover(int c, int* L, int* R, int* U, int* D, int* C, long* S) nogil:
    cdef int i, j
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


cdef inline void _uncover(int c, int* L, int* R, int* U, int* D, int* C, long* S) nogil:
    cdef int i, j
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


def solve(int n_items, offsets, cells, long long cap=-1, bint count_only=False):
    """Enumerate exact covers; see ``_xcover_py.solve`` for the contract."""
    cdef int n_opts = len(offsets) - 1
    cdef int n_cells = len(cells)
    cdef int n_nodes = 1 + n_items + n_cells
    cdef int *L = <int*> malloc(n_nodes * sizeof(int))
    cdef int *R = <int*> malloc(n_nodes * sizeof(int))
    cdef int *U = <int*> malloc(n_nodes * sizeof(int))
    cdef int *D = <int*> malloc(n_nodes * sizeof(int))
    cdef int *C = <int*> malloc(n_nodes * sizeof(int))
    cdef int *ROW = <int*> malloc(n_nodes * sizeof(int))
    cdef long *S = <long*> malloc((n_items + 1) * sizeof(long))
    cdef int *O = <int*> malloc((n_items + 1) * sizeof(int))
    if not (L and R and U and D and C and ROW and S and O):
        free(L); free(R); free(U); free(D); free(C); free(ROW); free(S); free(O)
        raise MemoryError()

    cdef int i, j, k, r, c, col, node, first, level, state
    cdef long best
    cdef long long count = 0
    solutions = []
    try:
        for i in range(n_nodes):
            L[i] = i; R[i] = i; U[i] = i; D[i] = i; C[i] = 0; ROW[i] = -1
        for i in range(n_items + 1):
            S[i] = 0
        for i in range(1, n_items + 1):
            L[i] = i - 1
            R[i - 1] = i
            C[i] = i
        L[0] = n_items
        R[n_items] = 0

        node = n_items + 1
        for r in range(n_opts):
            first = node
            for k in range(<int> offsets[r], <int> offsets[r + 1]):
                col = <int> cells[k] + 1
                C[node] = col
                ROW[node] = r
                U[node] = U[col]
                D[node] = col
                D[U[col]] = node
                U[col] = node
                S[col] += 1
                if node == first:
                    L[node] = node
                    R[node] = node
                else:
                    L[node] = node - 1
                    R[node] = first
                    R[node - 1] = node
                    L[first] = node
                node += 1

        level = 0
        state = 0
        while True:
            if state == 0:
                if R[0] == 0:
                    count += 1
                    if not count_only:
                        solutions.append([ROW[O[k]] for k in range(level)])
                    if cap >= 0 and count >= cap:
                        break
                    state = 2
                    continue
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
                _cover(c, L, R, U, D, C, S)
                O[level] = D[c]
                state = 1
            elif state == 1:
                r = O[level]
                c = C[r] if r > n_items else r
                if r == c:
                    _uncover(c, L, R, U, D, C, S)
                    state = 2
                    continue
                j = R[r]
                while j != r:
                    _cover(C[j], L, R, U, D, C, S)
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
                    _uncover(C[j], L, R, U, D, C, S)
                    j = L[j]
                O[level] = D[r]
                state = 1
    finally:
        free(L); free(R); free(U); free(D); free(C); free(ROW); free(S); free(O)
    return int(count), solutions
