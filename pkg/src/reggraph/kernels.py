"""Backend selection for the boolean-semiring kernels.

The compiled extension handles matrices with up to 64 nodes; larger inputs
and environments without the extension use the pure-Python version.
"""

from . import _bitops_py, _grid_py

try:
    from . import _bitops_c
except ImportError:  # extension not built
    _bitops_c = None

MAX_COMPILED = 64

_forced = None


def available_backends():
    return ["python"] + (["compiled"] if _bitops_c is not None else [])


def use_backend(name):
    """Force a backend (``"compiled"``, ``"python"``) or restore auto with ``None``."""
    global _forced
    if name not in (None, "python", "compiled"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and _bitops_c is None:
        raise RuntimeError("compiled kernels are not built")
    _forced = name


def backend_for(n):
    if _forced == "python" or _bitops_c is None or n > MAX_COMPILED:
        return _bitops_py
    return _bitops_c


def backend_name(n=0):
    return "compiled" if backend_for(n) is _bitops_c else "python"


def _width(rows):
    return max(rows, default=0).bit_length()


def closure(rows, over):
    return backend_for(max(len(rows), _width(rows))).closure(rows, over)


def matmul(x, y):
    return backend_for(max(len(y), _width(y))).matmul(x, y)


def transpose(rows, ncols):
    return backend_for(max(len(rows), ncols)).transpose(rows, ncols)


def submatrix(rows, ridx, cidx):
    return backend_for(max(len(cidx), _width(rows))).submatrix(rows, ridx, cidx)


def induced_rows(rows, row_idx, amask, bmask):
    return backend_for(max(len(rows), _width(rows))).induced_rows(rows, row_idx, amask, bmask)


try:
    from . import _grid_c
except ImportError:
    _grid_c = None


def binary_grid_scan(grid, order, tol):
    """Per-order binary grid scan; compiled when available."""
    mod = _grid_py if _forced == "python" or _grid_c is None else _grid_c
    return mod.binary_grid_scan(list(grid), tuple(order), tol)
