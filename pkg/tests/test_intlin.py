import random
from fractions import Fraction

import pytest

from hmftheta import intlin
from hmftheta.weights import hasse_matrix

from conftest import small_shapes
from oracles import hnf_membership, smith_diagonal


def random_matrix(rng, n, lo=-6, hi=6):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]


@pytest.mark.parametrize("seed", range(25))
def test_smith_matches_sympy_on_random_matrices(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    m = random_matrix(rng, n)
    if seed % 5 == 0 and n > 1:
        m[-1] = [a + b for a, b in zip(m[0], m[1 % n])]
    ours = intlin.smith_invariants(m)
    theirs = smith_diagonal(m)
    assert sorted(ours) == theirs
    for a, b in zip(ours, ours[1:]):
        if a and b:
            assert b % a == 0


@pytest.mark.parametrize("shape", small_shapes(), ids=str)
def test_smith_matches_sympy_on_hasse_matrices(shape):
    rows = hasse_matrix(shape)
    assert sorted(intlin.smith_invariants(rows)) == smith_diagonal(rows)


def test_lattice_index_examples():
    assert intlin.lattice_index([[-1, 5], [1, -1]]) == 4
    assert intlin.lattice_index([[2, 0], [0, 3]]) == 6
    assert intlin.lattice_index([[1, 2], [2, 4]]) == 0


@pytest.mark.parametrize("seed", range(15))
def test_hermite_membership_matches_sympy(seed):
    rng = random.Random(100 + seed)
    n = rng.randint(2, 4)
    rows = random_matrix(rng, n, -4, 4)
    while intlin.lattice_index(rows) == 0:
        rows = random_matrix(rng, n, -4, 4)
    hnf = intlin.hermite_form(rows)
    for _ in range(10):
        vec = [rng.randint(-8, 8) for _ in range(n)]
        assert intlin.in_row_span(hnf, vec) == hnf_membership(rows, vec)
    coeffs = [rng.randint(-3, 3) for _ in rows]
    combo = [sum(c * r[i] for c, r in zip(coeffs, rows)) for i in range(n)]
    assert intlin.in_row_span(hnf, combo)


def test_solve_left_roundtrip():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(1, 5)
        rows = random_matrix(rng, n)
        if intlin.lattice_index(rows) == 0:
            continue
        vec = [rng.randint(-9, 9) for _ in range(n)]
        s = intlin.solve_left(rows, vec)
        back = [sum(s[i] * rows[i][j] for i in range(n)) for j in range(n)]
        assert back == [Fraction(v) for v in vec]
