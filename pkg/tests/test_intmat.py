"""Exact matrix layer: Smith/Hermite normal forms and integer solving."""

import random

from qform.intmat import (
    IntMatrix,
    hermite_row_basis,
    int_nullspace,
    int_solve,
    lattice_contains,
    smith_normal_form,
)


def random_matrix(rng, rows, cols, bound=50):
    return IntMatrix.from_rows(
        [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], cols
    )


def check_snf(a):
    dec = smith_normal_form(a)
    assert dec.u.mul(a).mul(dec.v) == dec.d
    assert abs(dec.u.det()) == 1
    assert abs(dec.v.det()) == 1
    assert dec.u.mul(dec.u_inv) == IntMatrix.identity(a.rows)
    assert dec.v.mul(dec.v_inv) == IntMatrix.identity(a.cols)
    diag = dec.diagonal
    assert all(x >= 0 for x in diag)
    for x, y in zip(diag, diag[1:]):
        if x == 0:
            assert y == 0
        else:
            assert y % x == 0
    # off-diagonal entries vanish
    for i in range(dec.d.rows):
        for j in range(dec.d.cols):
            if i != j:
                assert dec.d.entries[i][j] == 0
    return dec


def test_snf_merges_coprime_invariants():
    dec = check_snf(IntMatrix.diagonal([2, 3]))
    assert dec.diagonal == (1, 6)


def test_snf_random_shapes():
    rng = random.Random(7)
    for _ in range(60):
        rows = rng.randint(0, 8)
        cols = rng.randint(0, 8)
        check_snf(random_matrix(rng, rows, cols))


def test_snf_deterministic():
    rng = random.Random(3)
    a = random_matrix(rng, 5, 4)
    d1 = smith_normal_form(a)
    d2 = smith_normal_form(a)
    assert d1 == d2


def test_det_matches_snf_magnitude():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 6)
        a = random_matrix(rng, n, n, bound=9)
        dec = smith_normal_form(a)
        prod = 1
        for x in dec.diagonal:
            prod *= x
        assert abs(a.det()) == prod


def test_inverse_unimodular():
    a = IntMatrix.from_rows([[1, 2, 0], [0, 1, 5], [0, 0, 1]])
    inv = a.inverse_unimodular()
    assert a.mul(inv) == IntMatrix.identity(3)
    assert inv.mul(a) == IntMatrix.identity(3)


def test_hermite_is_canonical_under_row_shuffle():
    rng = random.Random(23)
    for _ in range(50):
        cols = rng.randint(1, 6)
        rows = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rng.randint(0, 6))]
        h1 = hermite_row_basis(rows, cols)
        shuffled = rows[:]
        rng.shuffle(shuffled)
        # also mix in sums of rows: the lattice is unchanged
        if len(rows) >= 2:
            shuffled.append([a + b for a, b in zip(rows[0], rows[1])])
        h2 = hermite_row_basis(shuffled, cols)
        assert h1 == h2
        # echelon shape with positive pivots, reduced above
        pivots = []
        for r in h1:
            p = next(j for j, x in enumerate(r) if x)
            assert r[p] > 0
            pivots.append(p)
            for up in h1[: len(pivots) - 1]:
                assert 0 <= up[p] < r[p]
        assert pivots == sorted(pivots) and len(set(pivots)) == len(pivots)


def test_lattice_membership():
    basis = hermite_row_basis([[2, 0], [0, 3]], 2)
    assert lattice_contains(basis, (2, 3))
    assert lattice_contains(basis, (-4, 9))
    assert not lattice_contains(basis, (1, 0))
    assert not lattice_contains(basis, (2, 2))


def test_nullspace_and_solve():
    rng = random.Random(5)
    for _ in range(40):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        a = random_matrix(rng, rows, cols, bound=6)
        for col in int_nullspace(a):
            assert a.apply(col) == (0,) * rows
        # solvable instance: pick x, solve for A x
        x = tuple(rng.randint(-5, 5) for _ in range(cols))
        y = a.apply(x)
        sol = int_solve(a, y)
        assert sol is not None
        assert a.apply(sol) == y


def test_solve_detects_unsolvable():
    a = IntMatrix.from_rows([[2, 0], [0, 2]])
    assert int_solve(a, (1, 0)) is None
    assert int_solve(a, (2, -4)) == (1, -2)
