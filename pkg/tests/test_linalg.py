from fractions import Fraction

import pytest

from optwist.linalg import CochainComplex, FinMatrix, random_sparse


def test_entry_normalization():
    m = FinMatrix(2, 2, {(0, 0): 5, (0, 1): 0, (1, 1): -1}, p=3)
    assert m.entries == {(0, 0): 2, (1, 1): 2}
    q = FinMatrix(1, 1, {(0, 0): 2})
    assert q[(0, 0)] == Fraction(2)


def test_matmul_identity_and_assoc():
    a = random_sparse(4, 5, 0.5, seed=1)
    assert FinMatrix.identity(4) @ a == a
    assert a @ FinMatrix.identity(5) == a
    b = random_sparse(5, 3, 0.5, seed=2)
    c = random_sparse(3, 6, 0.5, seed=3)
    assert (a @ b) @ c == a @ (b @ c)


def test_stacks():
    a = random_sparse(3, 2, 0.7, seed=4)
    b = random_sparse(3, 4, 0.7, seed=5)
    h = a.hstack(b)
    assert (h.nrows, h.ncols) == (3, 6)
    assert h[(1, 3)] == b[(1, 1)]
    v = a.vstack(random_sparse(2, 2, 0.7, seed=6))
    assert (v.nrows, v.ncols) == (5, 2)


@pytest.mark.parametrize("seed", range(20))
def test_rank_backends_agree_rational(seed):
    m = random_sparse(6 + seed % 4, 7 - seed % 3, 0.35, seed=seed)
    assert m.rank(backend="gauss") == m.rank(backend="bareiss")


@pytest.mark.parametrize("seed", range(20))
def test_rank_backends_agree_modp(seed):
    m = random_sparse(6 + seed % 5, 6 + (seed * 3) % 5, 0.4, seed=seed, p=101)
    assert m.rank(backend="gauss") == m.rank(backend="dense")
    assert m.rank(backend="sparse") == m.rank(backend="gauss")


def test_sparse_rank_on_wide_matrix():
    m = random_sparse(90, 300, 0.03, seed=40, p=101)
    assert m.rank(backend="sparse") == m.rank(backend="dense")


def test_sparse_rank_duplicate_structure():
    # repeated rows and empty columns exercise the pivot bookkeeping
    rows = [[1, 0, 2, 0], [1, 0, 2, 0], [0, 0, 0, 0], [3, 0, 6, 0], [0, 0, 1, 0]]
    m = FinMatrix.from_rows(rows, p=101)
    assert m.rank(backend="sparse") == 2


def test_rank_backend_field_guards():
    with pytest.raises(ValueError):
        random_sparse(3, 3, 0.5, seed=0, p=7).rank(backend="bareiss")
    with pytest.raises(ValueError):
        random_sparse(3, 3, 0.5, seed=0).rank(backend="dense")
    with pytest.raises(ValueError):
        random_sparse(3, 3, 0.5, seed=0).rank(backend="sparse")


def test_rank_small_knowns():
    assert FinMatrix.identity(5).rank() == 5
    assert FinMatrix.zeros(4, 7).rank() == 0
    # rank 1: all rows proportional
    m = FinMatrix.from_rows([[1, 2, 3], [2, 4, 6], [-1, -2, -3]])
    assert m.rank(backend="gauss") == 1
    assert m.rank(backend="bareiss") == 1
    # 2 mod 2 is zero
    assert FinMatrix.from_rows([[2]], p=2).rank() == 0


@pytest.mark.parametrize("p", [0, 101])
@pytest.mark.parametrize("seed", range(8))
def test_kernel_is_kernel(p, seed):
    m = random_sparse(5, 8, 0.4, seed=seed, p=p)
    k = m.kernel_basis()
    assert (m @ k).is_zero()
    assert k.ncols == m.ncols - m.rank()
    assert k.rank() == k.ncols


@pytest.mark.parametrize("p", [0, 101])
def test_solve_consistent_and_not(p):
    a = random_sparse(6, 4, 0.6, seed=11, p=p)
    x0 = random_sparse(4, 3, 0.8, seed=12, p=p)
    b = a @ x0
    x = a.solve_matrix(b)
    assert x is not None and a @ x == b
    # a zero map cannot hit a nonzero target
    z = FinMatrix.zeros(3, 2, p=p)
    bad = FinMatrix(3, 1, {(0, 0): 1}, p=p)
    assert z.solve_matrix(bad) is None
    assert z.solve([0, 0, 0]) is not None


def test_dense_path_on_large_modp():
    # straddle the cutoff so the numpy route actually runs
    m = random_sparse(60, 55, 0.15, seed=21, p=101)
    assert m.rank(backend="dense") == m.rank(backend="gauss")
    k = m.kernel_basis()
    assert (m @ k).is_zero()
    assert k.ncols == 55 - m.rank()
    x0 = random_sparse(55, 2, 0.5, seed=22, p=101)
    b = m @ x0
    x = m.solve_matrix(b)
    assert x is not None and m @ x == b


def test_image_pivot_columns():
    m = FinMatrix.from_rows([[1, 2, 0], [2, 4, 1]])
    assert m.image_pivot_columns() == [0, 2]


def test_cochain_complex_exact_example():
    d0 = FinMatrix.from_rows([[1], [1]])
    d1 = FinMatrix.from_rows([[1, -1]])
    cx = CochainComplex([1, 2, 1], [d0, d1])
    assert cx.cohomology_dims() == [0, 0, 0]


def test_cochain_complex_with_homology():
    # 0 -> k^2 -0-> k -> 0 : cohomology is everything
    cx = CochainComplex([2, 1], [FinMatrix.zeros(1, 2)])
    assert cx.cohomology_dims() == [2, 1]


def test_cochain_complex_rejects_nonzero_square():
    d0 = FinMatrix.from_rows([[1], [0]])
    d1 = FinMatrix.from_rows([[1, 0]])
    with pytest.raises(ValueError):
        CochainComplex([1, 2, 1], [d0, d1])
