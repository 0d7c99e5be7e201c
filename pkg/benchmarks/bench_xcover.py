"""Compare the compiled and pure-Python exact-cover kernels.

Usage: python benchmarks/bench_xcover.py [--repeat 3]
"""
import argparse
import time

from irrarray.tiling import build_dictionary
from irrarray.tiling._kernel import solve_compiled, solve_python
from irrarray.tiling.exact_cover import _csr, _row_order

CASES = [((4, 6), "domino", None), ((6, 6), "domino", None), ((4, 8), "tetromino", None), ((8, 10), "domino", 2000)]


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if solve_compiled is None:
        print("compiled kernel not built; only the Python kernel is available")
    print(f"{'board':8s} {'shapes':10s} {'cap':>6s} {'count':>8s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for board, shapes, cap in CASES:
        q = build_dictionary(board, shapes)
        offsets, cells = _csr(q, _row_order(q, None))
        c = -1 if cap is None else cap
        tp, (n, _) = _time(lambda: solve_python(q.n_cols, offsets, cells, c, True), args.repeat)
        if solve_compiled is not None:
            tc, (m, _) = _time(lambda: solve_compiled(q.n_cols, offsets, cells, c, True), args.repeat)
            assert m == n, (m, n)
            print(f"{board[0]}x{board[1]:<6d} {shapes:10s} {str(cap):>6s} {n:8d} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}")
        else:
            print(f"{board[0]}x{board[1]:<6d} {shapes:10s} {str(cap):>6s} {n:8d} {tp:10.4f} {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
