import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistedk.exact_linalg import (
    FGAbelianGroup,
    FieldScalar,
    K_ONE,
    K_ZERO,
    Mat,
    SQRT2,
    Subspace,
    TorusScalar,
    cokernel,
    full_space,
    fmat,
    fvec,
    int_det,
    kernel_basis_field,
    kernel_basis_int,
    preimage,
    QuotientCoords,
    rref,
    smith_normal_form,
    solve_field,
    solve_int,
    torus_kernel,
)


# --- FieldScalar --------------------------------------------------------

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)
scalars = st.builds(FieldScalar, rationals, rationals)


@settings(max_examples=200, deadline=None)
@given(scalars, scalars, scalars)
def test_field_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x * (y * z) == (x * y) * z
    assert x * y == y * x
    assert x + (-x) == FieldScalar(0)
    if x:
        assert x * x.inverse() == FieldScalar(1)
    assert x == x.rational_part() + x.irrational_part()


@settings(max_examples=100, deadline=None)
@given(scalars, scalars)
def test_field_product_coordinates(x, y):
    # rational part of the product is a_x a_y + 2 b_x b_y exactly
    assert (x * y).a == x.a * y.a + 2 * x.b * y.b
    assert (x * y).b == x.a * y.b + x.b * y.a


def test_field_division_and_mod_q():
    x = FieldScalar(Fraction(3, 2), Fraction(-1, 3))
    assert (x / x) == 1
    assert SQRT2 * SQRT2 == 2
    assert FieldScalar(5).mod_rationals() == 0
    assert (FieldScalar(5) + 3 * SQRT2).mod_rationals() == 3


def test_torus_scalar():
    t = TorusScalar(Fraction(7, 5))
    assert t == TorusScalar(Fraction(2, 5))
    assert t.order() == 5
    assert 5 * t == TorusScalar(0)
    assert (t + TorusScalar(Fraction(3, 5))) == TorusScalar(0)
    assert not TorusScalar(1)


# --- Smith normal form --------------------------------------------------

def check_snf(M):
    s = smith_normal_form(M)
    assert s.U * s.D * s.V == M
    assert abs(int_det(s.U)) == 1
    assert abs(int_det(s.V)) == 1
    assert s.U * s.U_inv == Mat.identity(M.m)
    assert s.V * s.V_inv == Mat.identity(M.n)
    diag = s.diagonal()
    for i in range(M.m):
        for j in range(M.n):
            if i != j:
                assert s.D.rows[i][j] == 0
    prev = None
    for d in diag:
        assert d >= 0
        if prev not in (None, 0):
            if d != 0:
                assert d % prev == 0
        if prev == 0:
            assert d == 0
        prev = d
    return s


def test_snf_identity():
    s = check_snf(Mat.identity(3))
    assert s.diagonal() == [1, 1, 1]


def test_snf_2x2_example():
    # d1 = gcd of entries = 2, d1*d2 = |det| = |2*8 - 4*6| = 8 => d2 = 4
    M = Mat.from_rows([[2, 4], [6, 8]])
    s = check_snf(M)
    assert s.diagonal() == [2, 4]


def test_snf_zero_2x3():
    M = Mat(2, 3)
    s = check_snf(M)
    assert s.diagonal() == [0, 0]
    assert s.U == Mat.identity(2)
    assert s.V == Mat.identity(3)


def test_snf_empty():
    check_snf(Mat(0, 3))
    check_snf(Mat(3, 0))
    check_snf(Mat(0, 0))


def test_snf_random_500():
    rng = random.Random(20260810)
    for _ in range(500):
        m = rng.randrange(0, 13)
        n = rng.randrange(0, 13)
        M = Mat(m, n, [[rng.randint(-9, 9) for _ in range(n)]
                       for _ in range(m)])
        check_snf(M)


def random_unimodular(rng, n):
    U = Mat.identity(n)
    rows = [list(r) for r in U.rows]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        q = rng.randint(-3, 3)
        rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
    return Mat(n, n, rows)


def test_cokernel_examples():
    c = cokernel(Mat.from_rows([[1, 0], [0, 6]]))
    assert c.group == FGAbelianGroup(0, (6,))

    h = 3
    c = cokernel(Mat.from_rows([[1, h - 1], [0, -h]]))
    assert c.group == FGAbelianGroup(0, (3,))

    c = cokernel(Mat(0, 2))
    assert c.group == FGAbelianGroup(2)


def test_cokernel_coordinates_roundtrip():
    c = cokernel(Mat.from_rows([[2, 0, 0], [0, 0, 0]]))
    assert c.group == FGAbelianGroup(2, (2,))
    free, tors = c.project([1, 2, 3])
    x = c.lift(free, tors)
    free2, tors2 = c.project(x)
    assert (free, tors) == (free2, tors2)
    # relators project to zero
    assert c.is_zero([2, 0, 0])
    assert not c.is_zero([1, 0, 0])


def test_cokernel_unimodular_invariance():
    rng = random.Random(7)
    for _ in range(25):
        m, n = rng.randrange(1, 6), rng.randrange(1, 6)
        M = Mat(m, n, [[rng.randint(-6, 6) for _ in range(n)]
                       for _ in range(m)])
        A = random_unimodular(rng, m)
        B = random_unimodular(rng, n)
        assert cokernel(M).group == cokernel(A * M * B).group


def test_kernel_and_solve_int():
    M = Mat.from_rows([[2, 4], [1, 2]])
    ker = kernel_basis_int(M)
    assert len(ker) == 1
    assert M.matvec(ker[0]) == [0, 0]
    assert solve_int(M, [2, 1]) is not None
    assert solve_int(M, [1, 0]) is None
    assert solve_int(Mat.from_rows([[2]]), [3]) is None


def test_torus_kernel_examples():
    h = 5
    tk = torus_kernel(Mat.from_rows([[1, h - 1], [0, -h]]))
    assert tk.torus_rank == 0
    assert tk.torsion == FGAbelianGroup(0, (5,))
    g = tk.torsion_generators[0]
    assert all((5 * x) == TorusScalar(0) for x in g)
    # brute force: enumerate denominators up to h and compare orders
    M = Mat.from_rows([[1, h - 1], [0, -h]])
    sols = set()
    for a in range(5 * h):
        for b in range(5 * h):
            x = [TorusScalar(Fraction(a, 5 * h)), TorusScalar(Fraction(b, 5 * h))]
            y0 = x[0] + (h - 1) * x[1]
            y1 = -h * x[1]
            if not y0 and not y1:
                sols.add((x[0].value, x[1].value))
    assert len(sols) == 5

    tk = torus_kernel(Mat.identity(3))
    assert tk.torus_rank == 0 and tk.torsion.is_trivial()

    tk = torus_kernel(Mat(1, 1))
    assert tk.torus_rank == 1 and tk.torsion.is_trivial()


def test_torus_kernel_matches_invariant_factors():
    rng = random.Random(99)
    for _ in range(40):
        m, n = rng.randrange(1, 6), rng.randrange(1, 6)
        M = Mat(m, n, [[rng.randint(-7, 7) for _ in range(n)]
                       for _ in range(m)])
        s = smith_normal_form(M)
        diag = [d for d in s.diagonal() if d not in (0, 1)]
        tk = torus_kernel(M)
        assert list(tk.torsion.invariant_factors) == diag
        assert tk.torus_rank == M.n - s.rank()
        for g in tk.torsion_generators:
            img = [sum((M.rows[i][j] * g[j] for j in range(M.n)),
                       TorusScalar(0)) for i in range(M.m)]
            assert all(not x for x in img)


# --- field linear algebra ----------------------------------------------

def test_solve_field_examples():
    M = fmat([[1, 0], [0, 1]])
    x, ker = solve_field(M, fvec([3, SQRT2]))
    assert x == fvec([3, SQRT2])
    assert ker == []

    M = fmat([[0, 0], [0, 0]])
    x, ker = solve_field(M, fvec([0, 0]))
    assert x == fvec([0, 0])
    assert len(ker) == 2

    M = fmat([[1, SQRT2], [0, 0]])
    sol = solve_field(M, fvec([SQRT2, 0]))
    assert sol is not None
    x, ker = sol
    assert [sum((a * b for a, b in zip(row, x)), K_ZERO)
            for row in M.rows] == fvec([SQRT2, 0])
    assert len(ker) == 1
    # kernel spanned by (-sqrt2, 1)
    k = ker[0]
    t = k[1].inverse()
    assert [k[0] * t, k[1] * t] == [-SQRT2, K_ONE]

    assert solve_field(fmat([[0]]), fvec([1])) is None


def test_subspace_operations():
    U = Subspace(3, [fvec([1, 0, 1]), fvec([0, 1, 0])])
    W = Subspace(3, [fvec([1, 1, 0])])
    assert U.dim == 2 and W.dim == 1
    assert U.contains(fvec([2, 3, 2]))
    assert not U.contains(fvec([0, 0, 1]))
    assert U.sum(W).dim == 3
    assert U.intersect(W).dim == 0
    W2 = Subspace(3, [fvec([1, 1, 1]), fvec([1, 0, 0])])
    i = U.intersect(W2)
    assert i.dim == 1
    assert U.contains(i.basis[0]) and W2.contains(i.basis[0])
    assert full_space(4).dim == 4


def test_preimage_and_quotient():
    A = fmat([[1, 0], [0, 0]])
    W = Subspace(2, [fvec([1, 0])])
    P = preimage(A, W)
    assert P.dim == 2
    W0 = Subspace(2)
    P0 = preimage(A, W0)
    assert P0.dim == 1 and P0.contains(fvec([0, 1]))

    Z = full_space(2)
    B = Subspace(2, [fvec([1, 1])])
    q = QuotientCoords(Z, B)
    assert q.dim == 1
    assert q.coords(fvec([1, 1])) == [K_ZERO]
    assert q.coords(fvec([1, 0])) != [K_ZERO]


def test_quotient_coords_invariance():
    # same subspaces from different spanning sets give identical coords
    Z1 = Subspace(3, [fvec([1, 0, 0]), fvec([0, 1, 1])])
    Z2 = Subspace(3, [fvec([1, 1, 1]), fvec([1, -1, -1])])
    assert Z1 == Z2
    B1 = Subspace(3, [fvec([0, 2, 2])])
    q1 = QuotientCoords(Z1, B1)
    q2 = QuotientCoords(Z2, B1)
    v = fvec([3, 5, 5])
    assert q1.coords(v) == q2.coords(v)
