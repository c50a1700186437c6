from diopkit import symm


def test_sign_basics():
    assert symm.sign(()) == 1
    assert symm.sign((1,)) == 1
    assert symm.sign((2, 1)) == -1
    assert symm.sign((2, 3, 1)) == 1


def test_block_permutation_examples():
    assert symm.block_permutation((1, 2), [3, 1]) == (1, 2, 3, 4)
    assert symm.block_permutation((2, 1), [1, 2]) == (3, 1, 2)
    assert symm.block_permutation((2, 1), [1, 1]) == (2, 1)


def test_partial_compose_examples():
    assert symm.partial_compose((1, 2), 1, (1, 2)) == (1, 2, 3)
    assert symm.partial_compose((2, 1), 1, ()) == (1,)
    assert symm.partial_compose((2, 1), 1, (2, 1)) == (3, 2, 1)


def test_identity_composes_to_identity():
    for n1 in range(1, 5):
        for n2 in range(1, 4):
            for i in range(1, n1 + 1):
                got = symm.partial_compose(symm.identity(n1), i, symm.identity(n2))
                assert got == symm.identity(n1 + n2 - 1)


def test_sign_law_exhaustive():
    # sgn(s1 o_i s2) = sgn(s1) sgn(s2) (-1)^((i - s1(i)) (n2 - 1)), n2 >= 0
    for n1 in range(1, 5):
        for s1 in symm.all_permutations(n1):
            for n2 in range(0, 4):
                for s2 in symm.all_permutations(n2):
                    for i in range(1, n1 + 1):
                        got = symm.partial_compose(s1, i, s2)
                        assert symm.is_permutation(got)
                        assert len(got) == n1 + n2 - 1
                        expect = (symm.sign(s1) * symm.sign(s2)
                                  * (-1) ** ((i - s1[i - 1]) * (n2 - 1)))
                        assert symm.sign(got) == expect


def test_reorder_sign():
    deg = {"a": 1, "b": 1, "c": 2}.__getitem__
    assert symm.reorder_sign(["a", "b"], ["b", "a"], deg) == -1
    assert symm.reorder_sign(["a", "c"], ["c", "a"], deg) == 1
    assert symm.reorder_sign(["a", "b", "c"], ["c", "b", "a"], deg) == -1
