import pytest
from hypothesis import given, settings, strategies as st

from cellkit.matrices import (IntMatrix, MatrixShapeError, block, hstack,
                              kernel_basis, smith_normal_form, solve, vstack)


def mat(rows):
    return IntMatrix.from_rows(rows)


matrices = st.integers(1, 8).flatmap(
    lambda r: st.integers(1, 8).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-50, 50), min_size=c, max_size=c),
            min_size=r, max_size=r).map(mat)))


class TestIntMatrix:
    def test_shape_validation(self):
        with pytest.raises(MatrixShapeError):
            IntMatrix(2, 2, (1, 2, 3))
        with pytest.raises(MatrixShapeError):
            IntMatrix.from_rows([[1, 2], [3]])

    def test_empty_shapes(self):
        z = IntMatrix.zero(0, 3)
        assert z.rows == 0 and z.cols == 3
        assert (z @ IntMatrix.zero(3, 2)) == IntMatrix.zero(0, 2)

    def test_matmul(self):
        a = mat([[1, 2], [3, 4]])
        b = mat([[0, 1], [1, 0]])
        assert a @ b == mat([[2, 1], [4, 3]])

    def test_take_keeps_shape(self):
        a = mat([[1, 2, 3], [4, 5, 6]])
        sub = a.take(row_idx=[], col_idx=None)
        assert (sub.rows, sub.cols) == (0, 3)
        sub = a.take(None, [2, 0])
        assert sub == mat([[3, 1], [6, 4]])

    def test_det_examples(self):
        assert mat([[2, 4], [6, 8]]).det() == -8
        assert IntMatrix.identity(3).det() == 1
        assert mat([[0, 1], [1, 0]]).det() == -1
        assert IntMatrix.zero(2, 2).det() == 0

    def test_json_round_trip(self):
        a = mat([[1, -2], [0, 7]])
        assert IntMatrix.from_json(a.to_json()) == a

    def test_block_assembly(self):
        a = block([[IntMatrix.identity(2), IntMatrix.zero(2, 1)],
                   [IntMatrix.zero(1, 2), mat([[5]])]])
        assert a == mat([[1, 0, 0], [0, 1, 0], [0, 0, 5]])
        assert hstack([]) == IntMatrix.zero(0, 0)
        assert vstack([IntMatrix.zero(0, 2)]).cols == 2


class TestSmithNormalForm:
    def test_worked_example(self):
        # Row/column reduction of [[2,4],[6,8]] ends at diag(2, 4); the
        # absolute determinant 8 survives the unimodular changes of basis.
        f = smith_normal_form(mat([[2, 4], [6, 8]]))
        assert f.diagonal == (2, 4)
        assert abs(f.s.entry(0, 0) * f.s.entry(1, 1)) == 8

    def test_identity(self):
        f = smith_normal_form(IntMatrix.identity(3))
        assert f.s == IntMatrix.identity(3)
        assert f.u == IntMatrix.identity(3)
        assert f.v == IntMatrix.identity(3)

    def test_zero_matrix(self):
        f = smith_normal_form(IntMatrix.zero(2, 3))
        assert f.s == IntMatrix.zero(2, 3)
        assert f.rank == 0

    def test_empty(self):
        f = smith_normal_form(IntMatrix.zero(0, 4))
        assert f.s.rows == 0 and f.s.cols == 4
        assert f.v == IntMatrix.identity(4)

    @settings(max_examples=150, deadline=None)
    @given(matrices)
    def test_certified_decomposition(self, m):
        f = smith_normal_form(m)
        assert f.u @ m @ f.v == f.s
        assert f.u.det() in (1, -1)
        assert f.v.det() in (1, -1)
        assert f.u @ f.u_inv == IntMatrix.identity(m.rows)
        assert f.v @ f.v_inv == IntMatrix.identity(m.cols)
        diag = f.diagonal
        assert all(d >= 0 for d in diag)
        nonzero = [d for d in diag if d]
        # nonzero entries form a leading prefix with a divisibility chain
        assert diag[:len(nonzero)] == tuple(nonzero)
        assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))

    @settings(max_examples=100, deadline=None)
    @given(matrices)
    def test_kernel_and_solve(self, m):
        k = kernel_basis(m)
        assert (m @ k).is_zero
        # every kernel column really solves m x = 0 and solve() agrees
        zero_rhs = (0,) * m.rows
        x = solve(m, zero_rhs)
        assert x is not None and not any(m.apply(x))
        # solving against a known-image vector succeeds
        probe = m.apply(tuple(1 for _ in range(m.cols)))
        y = solve(m, probe)
        assert y is not None and m.apply(y) == probe

    def test_solve_unsolvable(self):
        assert solve(mat([[2]]), (1,)) is None
        assert solve(mat([[2, 0], [0, 0]]), (2, 1)) is None
        assert solve(IntMatrix.zero(1, 0), (5,)) is None
