import pytest
from hypothesis import given
from hypothesis import strategies as st

from reggraph import _bitops_py, kernels

needs_compiled = pytest.mark.skipif("compiled" not in kernels.available_backends(),
                                    reason="compiled kernels not built")

rows_st = st.integers(1, 40).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n),
                        st.integers(0, (1 << n) - 1)))


def _with_diag(rows):
    return [r | (1 << i) for i, r in enumerate(rows)]


@needs_compiled
@given(rows_st)
def test_closure_backends_agree(data):
    from reggraph import _bitops_c
    rows, over = data
    assert _bitops_c.closure(rows, over) == _bitops_py.closure(rows, over)


@needs_compiled
@given(rows_st, rows_st)
def test_matmul_and_transpose_agree(a, b):
    from reggraph import _bitops_c
    x, _ = a
    y, _ = b
    y = (y * 64)[:64]
    assert _bitops_c.matmul(x, y) == _bitops_py.matmul(x, y)
    assert _bitops_c.transpose(x, len(x)) == _bitops_py.transpose(x, len(x))


@needs_compiled
@given(rows_st)
def test_induced_rows_agree(data):
    from reggraph import _bitops_c
    rows, amask = data
    rows = _with_diag(rows)
    n = len(rows)
    full = (1 << n) - 1
    amask &= full
    bmask = full & ~amask
    idx = [i for i in range(n) if amask >> i & 1]
    assert _bitops_c.induced_rows(rows, idx, amask, bmask) == \
        _bitops_py.induced_rows(rows, idx, amask, bmask)


@needs_compiled
def test_compiled_rejects_wide_input():
    from reggraph import _bitops_c
    with pytest.raises(OverflowError):
        _bitops_c.closure([0] * 65, 0)


def test_wide_input_falls_back_to_python():
    rows = [1 << i for i in range(70)]
    rows[0] |= 1 << 69
    rows[69] |= 1 << 5
    out = kernels.closure(rows, 1 << 69)
    assert out[0] >> 5 & 1
    assert kernels.backend_name(70) == "python"


def test_submatrix():
    rows = [0b101, 0b010, 0b111]
    assert kernels.submatrix(rows, [0, 2], [0, 2]) == [0b11, 0b11]


def test_use_backend_validation():
    with pytest.raises(ValueError):
        kernels.use_backend("gpu")
    kernels.use_backend("python")
    assert kernels.backend_name(3) == "python"
    kernels.use_backend(None)
