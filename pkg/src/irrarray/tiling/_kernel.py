"""Select the exact-cover backend at import time.

The compiled extension is preferred; set ``IRRARRAY_PURE_PYTHON=1`` to force
the pure-Python implementation.
"""
import os

from irrarray.tiling._xcover_py import solve as solve_python

solve_compiled = None
if not os.environ.get("IRRARRAY_PURE_PYTHON"):
    try:
        from irrarray.tiling._xcover import solve as solve_compiled
    except ImportError:
        solve_compiled = None

BACKEND = "cython" if solve_compiled is not None else "python"
solve = solve_compiled if solve_compiled is not None else solve_python
