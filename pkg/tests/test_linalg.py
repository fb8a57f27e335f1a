import pytest
from hypothesis import given
from hypothesis import strategies as st

from glacalc.errors import DimensionError, SingularMatrixError
from glacalc.linalg import NO_SOLUTION, ExprMatrix, det, inverse, nullspace, rank, solve
from glacalc.sampling import random_poly, random_unipotent
from strategies import XY, XYZ, exprs, rngs

x, y = XY.coordinates()


def M(rows, X=XY, cols=None):
    return ExprMatrix(X, rows, cols=cols)


def minor_rank(A):
    """Oracle: largest k with a nonzero k x k minor, by enumeration."""
    from itertools import combinations
    best = 0
    for k in range(1, min(A.shape) + 1):
        for rows in combinations(range(A.rows), k):
            for cols in combinations(range(A.cols), k):
                sub = ExprMatrix(A.coords, [[A[i, j] for j in cols] for i in rows], cols=k)
                if not det(sub).is_zero():
                    best = k
                    break
            if best == k:
                break
    return best


def test_rank_examples():
    assert rank(ExprMatrix.identity(XY, 3)) == 3
    assert rank(M([[x, x**2], [1, x]])) == 1
    A = M([[1, 0, 0], [0, 1, x]])
    assert rank(A) == 2 == minor_rank(A)


def test_nullspace_examples():
    assert nullspace(ExprMatrix.identity(XY, 3)) == []
    A = M([[0, -x, 1]])
    vs = nullspace(A)
    assert len(vs) == 2
    for v in vs:
        assert all(e.is_zero() for e in A @ v)
        assert all(e.is_polynomial() for e in v)
    assert rank(ExprMatrix.from_columns(XY, vs, 3)) == 2
    assert len(nullspace(ExprMatrix.zeros(XY, 2, 2))) == 2


def test_nullspace_clears_denominators():
    A = M([[x, 1 / y, 0]])
    for v in nullspace(A):
        assert all(e.is_polynomial() for e in v)
        assert all(e.is_zero() for e in A @ v)


def test_solve_examples():
    b = [x + 1, y]
    assert solve(ExprMatrix.identity(XY, 2), b) == b
    assert solve(M([[1], [0]]), [x, 1]) is NO_SOLUTION
    assert not NO_SOLUTION
    assert solve(M([[1, 0], [x, 1]]), [1, x + y]) == [1, y]


def test_solve_shape_error():
    with pytest.raises(DimensionError):
        solve(ExprMatrix.identity(XY, 2), [1, 2, 3])


def test_inverse_examples():
    I2 = ExprMatrix.identity(XY, 2)
    assert inverse(I2) == I2
    assert inverse(M([[1, x], [0, 1]])) == M([[1, -x], [0, 1]])
    with pytest.raises(SingularMatrixError):
        inverse(M([[x, x**2], [1, x]]))


def test_degenerate_shapes():
    assert rank(ExprMatrix.zeros(XY, 0, 3)) == 0
    assert len(nullspace(ExprMatrix(XY, [[], []], cols=0))) == 0
    assert len(nullspace(ExprMatrix.zeros(XY, 0, 2))) == 2


@given(rngs(), st.integers(1, 4))
def test_inverse_of_elementary_products(rng, n):
    A = random_unipotent(rng, XYZ, n)
    # also scale a row by a nonzero constant and swap two rows
    rows = A.tolist()
    rows[0] = [e * 3 for e in rows[0]]
    rows.reverse()
    A = ExprMatrix(XYZ, rows, cols=n)
    Ainv = inverse(A)
    assert Ainv @ A == ExprMatrix.identity(XYZ, n)
    assert A @ Ainv == ExprMatrix.identity(XYZ, n)


@st.composite
def matrices(draw, max_rows=3, max_cols=3):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rng = draw(rngs())
    # low-rank structure shows up often: sometimes repeat a scaled row
    rows = [[random_poly(rng, XY, 1, terms=2) for _ in range(c)] for _ in range(r)]
    if r > 1 and draw(st.booleans()):
        f = random_poly(rng, XY, 1, terms=2)
        rows[-1] = [f * e for e in rows[0]]
    return M(rows, cols=c)


@given(matrices())
def test_nullspace_is_kernel_of_full_dimension(A):
    vs = nullspace(A)
    assert len(vs) == A.cols - rank(A)
    for v in vs:
        assert all(e.is_zero() for e in A @ v)
    if vs:
        assert rank(ExprMatrix.from_columns(XY, vs, A.cols)) == len(vs)


@given(matrices())
def test_rank_matches_minor_oracle(A):
    assert rank(A) == minor_rank(A) <= min(A.shape)


@given(matrices(), rngs())
def test_solve_consistency(A, rng):
    b = [random_poly(rng, XY, 1, terms=2) for _ in range(A.rows)]
    aug = ExprMatrix(XY, [A.row(i) + [b[i]] for i in range(A.rows)], cols=A.cols + 1)
    sol = solve(A, b)
    assert (sol is not NO_SOLUTION) == (rank(aug) == rank(A))
    if sol is not NO_SOLUTION:
        assert A @ sol == b


@given(matrices(), exprs(max_degree=1), st.randoms(use_true_random=False))
def test_rank_invariances(A, f, r):
    rows = A.tolist()
    r.shuffle(rows)
    assert rank(M(rows, cols=A.cols)) == rank(A)
    cols = list(range(A.cols))
    r.shuffle(cols)
    assert rank(M([[row[j] for j in cols] for row in rows], cols=A.cols)) == rank(A)
    if not f.is_zero():
        rows[0] = [f * e for e in rows[0]]
        assert rank(M(rows, cols=A.cols)) == rank(A)
