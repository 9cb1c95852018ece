"""Exact arithmetic and linear algebra: integers, Q(sqrt2), Q/Z.

Everything here is exact; no floats anywhere.  Integer matrices use
arbitrary-precision ints, field matrices use Q(sqrt2) scalars built on
fractions.Fraction.  Empty matrices and rank-0 groups are legitimate
values throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

class FieldScalar:
    """An element a + b*sqrt(2) of the real quadratic field Q(sqrt2).

    The rational coordinate `a` and irrational coordinate `b` are kept
    separate so that reduction mod Q (dropping `a`) is a well-defined
    exact operation.
    """

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def coerce(x) -> "FieldScalar":
        if isinstance(x, FieldScalar):
            return x
        return FieldScalar(x)

    def __add__(self, other):
        other = FieldScalar.coerce(other)
        return FieldScalar(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldScalar(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-FieldScalar.coerce(other))

    def __rsub__(self, other):
        return FieldScalar.coerce(other) + (-self)

    def __mul__(self, other):
        other = FieldScalar.coerce(other)
        return FieldScalar(self.a * other.a + 2 * self.b * other.b,
                           self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def inverse(self) -> "FieldScalar":
        # (a + b s)(a - b s) = a^2 - 2 b^2, nonzero for (a,b) != (0,0)
        # since sqrt2 is irrational.
        n = self.a * self.a - 2 * self.b * self.b
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return FieldScalar(self.a / n, -self.b / n)

    def __truediv__(self, other):
        return self * FieldScalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return FieldScalar.coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, FieldScalar)):
            other = FieldScalar.coerce(other)
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def is_rational(self) -> bool:
        return self.b == 0

    def rational_part(self) -> "FieldScalar":
        return FieldScalar(self.a, 0)

    def irrational_part(self) -> "FieldScalar":
        return FieldScalar(0, self.b)

    def mod_rationals(self) -> Fraction:
        """Image in K/Q, coordinatized by the sqrt2 coefficient."""
        return self.b

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt2"
        return f"{self.a}+{self.b}*sqrt2"


K_ZERO = FieldScalar(0)
K_ONE = FieldScalar(1)
SQRT2 = FieldScalar(0, 1)


class TorusScalar:
    """A rational point of the circle Q/Z, reduced to [0, 1)."""

    __slots__ = ("value",)

    def __init__(self, value=0):
        v = Fraction(value)
        self.value = v - (v // 1)

    def __add__(self, other):
        other = other if isinstance(other, TorusScalar) else TorusScalar(other)
        return TorusScalar(self.value + other.value)

    __radd__ = __add__

    def __neg__(self):
        return TorusScalar(-self.value)

    def __sub__(self, other):
        other = other if isinstance(other, TorusScalar) else TorusScalar(other)
        return TorusScalar(self.value - other.value)

    def __mul__(self, n):
        if not isinstance(n, int):
            raise TypeError("Q/Z admits only integer multiplication")
        return TorusScalar(n * self.value)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, TorusScalar):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == TorusScalar(other).value
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return self.value != 0

    def order(self) -> int:
        return self.value.denominator

    def __repr__(self):
        return f"{self.value} mod 1"


# ---------------------------------------------------------------------------
# matrices (plain lists of rows; integer or FieldScalar entries)
# ---------------------------------------------------------------------------

class Mat:
    """Dense matrix with explicit shape so 0xN and Nx0 behave."""

    __slots__ = ("m", "n", "rows")

    def __init__(self, m, n, rows=None):
        self.m = m
        self.n = n
        if rows is None:
            rows = [[0] * n for _ in range(m)]
        assert len(rows) == m and all(len(r) == n for r in rows)
        self.rows = rows

    @staticmethod
    def from_rows(rows, n=None):
        m = len(rows)
        if n is None:
            if m == 0:
                raise ValueError("column count required for empty matrix")
            n = len(rows[0])
        return Mat(m, n, [list(r) for r in rows])

    @staticmethod
    def identity(n, one=1):
        rows = [[one if i == j else one * 0 for j in range(n)] for i in range(n)]
        return Mat(n, n, rows)

    def copy(self):
        return Mat(self.m, self.n, [list(r) for r in self.rows])

    def transpose(self):
        return Mat(self.n, self.m, [[self.rows[i][j] for i in range(self.m)]
                                    for j in range(self.n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.m == other.m
                and self.n == other.n and self.rows == other.rows)

    def __mul__(self, other):
        if isinstance(other, Mat):
            assert self.n == other.m, "shape mismatch"
            out = []
            for i in range(self.m):
                ri = self.rows[i]
                acc = [0] * other.n
                for k in range(self.n):
                    x = ri[k]
                    if x:
                        rk = other.rows[k]
                        for j in range(other.n):
                            y = rk[j]
                            if y:
                                acc[j] = acc[j] + x * y
                out.append(acc)
            return Mat(self.m, other.n, out)
        return NotImplemented

    def matvec(self, v):
        assert len(v) == self.n
        out = []
        for i in range(self.m):
            s = 0
            for j in range(self.n):
                x = self.rows[i][j]
                if x:
                    s = s + x * v[j]
            out.append(s)
        return out

    def column(self, j):
        return [self.rows[i][j] for i in range(self.m)]

    def __repr__(self):
        return f"Mat({self.m}x{self.n}, {self.rows})"


def int_det(M: Mat) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    assert M.m == M.n
    n = M.m
    if n == 0:
        return 1
    a = [list(r) for r in M.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def _xgcd(a, b):
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


@dataclass
class SNF:
    """M = U * D * V with U, V unimodular; inverses carried along."""
    U: Mat
    D: Mat
    V: Mat
    U_inv: Mat
    V_inv: Mat

    def diagonal(self):
        return [self.D.rows[i][i] for i in range(min(self.D.m, self.D.n))]

    def rank(self):
        return sum(1 for d in self.diagonal() if d != 0)


#: optional persistent cache (set by the CLI); correctness never
#: depends on it -- verify mode recomputes and compares.
SNF_CACHE = None


def smith_normal_form(M: Mat) -> SNF:
    """Diagonalize an integer matrix by unimodular row/column operations.

    Pivoting takes the smallest nonzero |entry| of the remaining block,
    which keeps coefficient growth tame at the sizes we care about.
    Returns D with d1 | d2 | ... and all di >= 0.
    """
    if SNF_CACHE is not None:
        return SNF_CACHE.fetch(M, _smith_normal_form)
    return _smith_normal_form(M)


def _smith_normal_form(M: Mat) -> SNF:
    m, n = M.m, M.n
    D = [list(r) for r in M.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    # Invariant maintained by every operation: M = U * D * V, with
    # Ui = U^{-1} and Vi = V^{-1} carried along for coordinate maps.
    def apply_row_add(i, j, q):
        """D_i += q * D_j ; Ui_i += q * Ui_j ; U col_j -= q * U col_i."""
        Di, Dj = D[i], D[j]
        for k in range(n):
            if Dj[k]:
                Di[k] += q * Dj[k]
        Uii, Uij = Ui[i], Ui[j]
        for k in range(m):
            if Uij[k]:
                Uii[k] += q * Uij[k]
        for r in U:
            if r[i]:
                r[j] -= q * r[i]

    def apply_row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        Ui[i], Ui[j] = Ui[j], Ui[i]
        for r in U:
            r[i], r[j] = r[j], r[i]

    def apply_row_negate(i):
        D[i] = [-x for x in D[i]]
        Ui[i] = [-x for x in Ui[i]]
        for r in U:
            r[i] = -r[i]

    def apply_col_add(i, j, q):
        """D col_i += q * D col_j ; V row_j -= q * V row_i ; Vi col handled."""
        for r in D:
            if r[j]:
                r[i] += q * r[j]
        Vj, Vrow_i = V[j], V[i]
        for k in range(n):
            if Vrow_i[k]:
                Vj[k] -= q * Vrow_i[k]
        for r in Vi:
            if r[j]:
                r[i] += q * r[j]

    def apply_col_swap(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        V[i], V[j] = V[j], V[i]
        for r in Vi:
            r[i], r[j] = r[j], r[i]

    def apply_col_negate(i):
        for r in D:
            r[i] = -r[i]
        V[i] = [-x for x in V[i]]
        for r in Vi:
            r[i] = -r[i]

    def find_pivot(k):
        best = None
        for i in range(k, m):
            Di = D[i]
            for j in range(k, n):
                v = Di[j]
                if v:
                    a = abs(v)
                    if best is None or a < best[0]:
                        best = (a, i, j)
                        if a == 1:
                            return best
        return best

    k = 0
    while True:
        piv = find_pivot(k)
        if piv is None:
            break
        _, pi, pj = piv
        if pi != k:
            apply_row_swap(k, pi)
        if pj != k:
            apply_col_swap(k, pj)
        while True:
            # clear column k with row operations (gcd steps where needed)
            for i in range(k + 1, m):
                if D[i][k]:
                    a, b = D[k][k], D[i][k]
                    if b % a == 0:
                        apply_row_add(i, k, -(b // a))
                    else:
                        g, x, y = _xgcd(a, b)
                        _two_row_transform(D, U, Ui, m, n, k, i, x, y,
                                           -(b // g), a // g)
            # clear row k with column operations; gcd steps may dirty
            # column k again, hence the outer loop
            for j in range(k + 1, n):
                if D[k][j]:
                    a, b = D[k][k], D[k][j]
                    if b % a == 0:
                        apply_col_add(j, k, -(b // a))
                    else:
                        g, x, y = _xgcd(a, b)
                        _two_col_transform(D, V, Vi, m, n, k, j, x, y,
                                           -(b // g), a // g)
            if all(D[k][j] == 0 for j in range(k + 1, n)) and \
               all(D[i][k] == 0 for i in range(k + 1, m)):
                break
        k += 1
        if k >= min(m, n):
            break

    # positivity and divisibility chain
    r = min(m, n)
    for i in range(r):
        if D[i][i] < 0:
            apply_row_negate(i)
    i = 0
    while i < r:
        if D[i][i] != 0:
            j = i + 1
            while j < r:
                if D[j][j] != 0 and D[j][j] % D[i][i] != 0:
                    # gcd/lcm repair of the (i, j) diagonal pair
                    apply_col_add(i, j, 1)
                    a, b = D[i][i], D[j][i]
                    g, x, y = _xgcd(a, b)
                    _two_row_transform(D, U, Ui, m, n, i, j, x, y,
                                       -(b // g), a // g)
                    # D[i][j] = y * old_djj is divisible by g = D[i][i]
                    apply_col_add(j, i, -(D[i][j] // D[i][i]))
                    j = i + 1  # re-scan with the new, smaller D[i][i]
                else:
                    j += 1
        i += 1

    Um = Mat(m, m, U)
    Vm = Mat(n, n, V)
    return SNF(Um, Mat(m, n, D), Vm, Mat(m, m, Ui), Mat(n, n, Vi))


def _two_row_transform(D, U, Ui, m, n, i, j, x, y, z, w):
    """Left-multiply rows (i, j) of D by [[x, y], [z, w]], det +-1.

    U and Ui are updated so that U * D and Ui * (old Ui inverse) stay
    consistent: Ui <- T * Ui and U <- U * T^{-1}.
    """
    det = x * w - y * z
    assert det in (1, -1)
    for k in range(n):
        a, b = D[i][k], D[j][k]
        D[i][k] = x * a + y * b
        D[j][k] = z * a + w * b
    for k in range(m):
        a, b = Ui[i][k], Ui[j][k]
        Ui[i][k] = x * a + y * b
        Ui[j][k] = z * a + w * b
    # T^{-1} = det * [[w, -y], [-z, x]] with det = +-1
    iw, iy, iz, ix = det * w, -det * y, -det * z, det * x
    for r in U:
        a, b = r[i], r[j]
        r[i] = a * iw + b * iz
        r[j] = a * iy + b * ix


def _two_col_transform(D, V, Vi, m, n, i, j, x, y, z, w):
    """Right-multiply cols (i, j) of D by [[x, z], [y, w]]^T pattern.

    Columns transform as col_i <- x col_i + y col_j, col_j <- z col_i + w col_j,
    with V <- T^{-1} V and Vi <- Vi * T.
    """
    det = x * w - y * z
    assert det in (1, -1)
    for r in D:
        a, b = r[i], r[j]
        r[i] = x * a + y * b
        r[j] = z * a + w * b
    for r in Vi:
        a, b = r[i], r[j]
        r[i] = x * a + y * b
        r[j] = z * a + w * b
    iw, iy, iz, ix = det * w, -det * y, -det * z, det * x
    a, b = V[i], V[j]
    V[i] = [aa * iw + bb * iz for aa, bb in zip(a, b)]
    V[j] = [aa * iy + bb * ix for aa, bb in zip(a, b)]


# ---------------------------------------------------------------------------
# derived integer operations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FGAbelianGroup:
    """Z^free_rank + sum of Z/d_i with d_1 | d_2 | ... and each d_i >= 2."""
    free_rank: int
    invariant_factors: tuple = ()

    def __post_init__(self):
        assert self.free_rank >= 0
        prev = 1
        for d in self.invariant_factors:
            assert d >= 2 and d % prev == 0, \
                f"bad invariant factors {self.invariant_factors}"
            prev = d

    @staticmethod
    def from_diagonal(free_rank, diag):
        facs = tuple(d for d in diag if d not in (0, 1))
        return FGAbelianGroup(free_rank, facs)

    def is_trivial(self):
        return self.free_rank == 0 and not self.invariant_factors

    def order(self):
        if self.free_rank:
            return None
        o = 1
        for d in self.invariant_factors:
            o *= d
        return o

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts) if parts else "0"


class Cokernel:
    """Z^n modulo the subgroup spanned by the rows of M, with coordinates.

    project() sends an ambient vector to (free coords, torsion coords);
    lift() sends coordinates back to an ambient representative.
    """

    def __init__(self, M: Mat):
        self.ambient_dim = M.n
        snf = smith_normal_form(M)
        self.snf = snf
        diag = snf.diagonal()
        n = M.n
        self._free_idx = [i for i in range(n)
                          if i >= len(diag) or diag[i] == 0]
        self._tors_idx = [i for i in range(len(diag))
                          if diag[i] not in (0, 1)]
        self._tors_mod = [diag[i] for i in self._tors_idx]
        self.group = FGAbelianGroup(len(self._free_idx),
                                    tuple(self._tors_mod))

    def project(self, x):
        """Ambient row vector -> (free coords, torsion coords)."""
        assert len(x) == self.ambient_dim
        c = self.snf.V_inv.transpose().matvec(x)  # c = x * V^{-1}
        free = [c[i] for i in self._free_idx]
        tors = [c[i] % m for i, m in zip(self._tors_idx, self._tors_mod)]
        return free, tors

    def lift(self, free, tors):
        c = [0] * self.ambient_dim
        for i, v in zip(self._free_idx, free):
            c[i] = v
        for i, v in zip(self._tors_idx, tors):
            c[i] = v
        return self.snf.V.transpose().matvec(c)  # x = c * V

    def is_zero(self, x):
        free, tors = self.project(x)
        return all(v == 0 for v in free) and all(v == 0 for v in tors)


def cokernel(M: Mat) -> Cokernel:
    return Cokernel(M)


def kernel_basis_int(M: Mat):
    """Basis (as columns) of {x in Z^n : M x = 0}; saturated in Z^n."""
    snf = smith_normal_form(M)
    diag = snf.diagonal()
    cols = [j for j in range(M.n) if j >= len(diag) or diag[j] == 0]
    return [snf.V_inv.column(j) for j in cols]


class SNFSolver:
    """Reusable integer solver for many right-hand sides of M x = b."""

    def __init__(self, M: Mat):
        self.M = M
        self.snf = smith_normal_form(M)
        self.diag = self.snf.diagonal()

    def solve(self, b):
        c = self.snf.U_inv.matvec(b)
        y = [0] * self.M.n
        for i in range(self.M.m):
            d = self.diag[i] if i < len(self.diag) else 0
            if d == 0:
                if c[i] != 0:
                    return None
            else:
                if c[i] % d != 0:
                    return None
                y[i] = c[i] // d
        return self.snf.V_inv.matvec(y)


def solve_int(M: Mat, b):
    """One integer solution of M x = b, or None."""
    return SNFSolver(M).solve(b)


@dataclass
class TorusKernel:
    """Kernel of an integer matrix acting on (Q/Z)^n."""
    torus_rank: int
    torsion: FGAbelianGroup
    torsion_generators: list  # vectors of TorusScalar
    divisible_generators: list  # integer vectors spanning the Q/Z^rank part

    def order(self):
        if self.torus_rank:
            return None
        return self.torsion.order()


def torus_kernel(M: Mat) -> TorusKernel:
    """{x in (Q/Z)^n : M x = 0 in (Q/Z)^m}, via the Smith form.

    With M = U D V the equation becomes D (V x) = 0, so in y = V x
    coordinates the solutions are y_i in (1/d_i)Z/Z for d_i != 0 and a
    full circle factor for each zero diagonal (or missing) position.
    """
    snf = smith_normal_form(M)
    diag = snf.diagonal()
    n = M.n
    tors_gens = []
    tors_factors = []
    div_gens = []
    Vi = snf.V_inv
    for j in range(n):
        d = diag[j] if j < len(diag) else 0
        col = Vi.column(j)
        if d == 0:
            div_gens.append(col)
        elif d > 1:
            tors_factors.append(d)
            tors_gens.append([TorusScalar(Fraction(c, d)) for c in col])
    return TorusKernel(len(div_gens),
                       FGAbelianGroup.from_diagonal(0, tors_factors),
                       tors_gens, div_gens)


# ---------------------------------------------------------------------------
# field linear algebra over Q(sqrt2)
# ---------------------------------------------------------------------------

def fmat(rows, n=None) -> Mat:
    """Build a field matrix, coercing entries to FieldScalar."""
    m = len(rows)
    if n is None:
        if m == 0:
            raise ValueError("column count required for empty matrix")
        n = len(rows[0])
    return Mat(m, n, [[FieldScalar.coerce(x) for x in r] for r in rows])


def fvec(v):
    return [FieldScalar.coerce(x) for x in v]


def rref(M: Mat):
    """Reduced row echelon form over the field; returns (R, pivot cols)."""
    R = [[FieldScalar.coerce(x) for x in row] for row in M.rows]
    m, n = M.m, M.n
    pivots = []
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, m):
            if R[i][c]:
                pr = i
                break
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        inv = R[r][c].inverse()
        R[r] = [x * inv for x in R[r]]
        for i in range(m):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return Mat(m, n, R), pivots


def kernel_basis_field(M: Mat):
    """Basis of {x : M x = 0} over Q(sqrt2), as a list of vectors."""
    R, pivots = rref(M)
    n = M.n
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for j in free:
        v = [K_ZERO] * n
        v[j] = K_ONE
        for r, c in enumerate(pivots):
            v[c] = -R.rows[r][j]
        basis.append(v)
    return basis


def solve_field(M: Mat, b):
    """Solve M x = b over Q(sqrt2).

    Returns (particular solution, kernel basis) or None when b is not in
    the column span; unsolvable is a normal outcome.
    """
    m, n = M.m, M.n
    aug = Mat(m, n + 1, [[FieldScalar.coerce(M.rows[i][j]) for j in range(n)]
                         + [FieldScalar.coerce(b[i])] for i in range(m)])
    R, pivots = rref(aug)
    if n in pivots:
        return None
    x = [K_ZERO] * n
    for r, c in enumerate(pivots):
        x[c] = R.rows[r][n]
    return x, kernel_basis_field(M)


class Subspace:
    """Subspace of K^n held in canonical reduced row echelon form."""

    def __init__(self, ambient_dim, vectors=()):
        self.ambient_dim = ambient_dim
        if vectors:
            R, pivots = rref(fmat([list(v) for v in vectors], ambient_dim))
            self.basis = [R.rows[i] for i in range(len(pivots))]
            self.pivots = pivots
        else:
            self.basis = []
            self.pivots = []

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, v):
        v = fvec(v)
        for row, p in zip(self.basis, self.pivots):
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
        return all(not x for x in v)

    def reduce(self, v):
        """Canonical representative of v modulo this subspace."""
        v = fvec(v)
        for row, p in zip(self.basis, self.pivots):
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
        return v

    def coords_in_basis(self, v):
        """Coordinates of v in self.basis; None if v is outside."""
        if not self.basis:
            return [] if all(not FieldScalar.coerce(x) for x in v) else None
        M = fmat([list(col) for col in zip(*self.basis)], len(self.basis))
        sol = solve_field(M, fvec(v))
        return None if sol is None else sol[0]

    def sum(self, other):
        assert self.ambient_dim == other.ambient_dim
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def intersect(self, other):
        """Kernel trick: x in both spans iff stacked coefficients cancel."""
        assert self.ambient_dim == other.ambient_dim
        if not self.basis or not other.basis:
            return Subspace(self.ambient_dim)
        cols = [list(b) for b in self.basis] + [list(b) for b in other.basis]
        M = fmat([list(r) for r in zip(*cols)], len(cols))
        vecs = []
        for k in kernel_basis_field(M):
            v = [K_ZERO] * self.ambient_dim
            for c, b in zip(k[:len(self.basis)], self.basis):
                if c:
                    v = [x + c * y for x, y in zip(v, b)]
            vecs.append(v)
        return Subspace(self.ambient_dim, vecs)

    def image(self, A: Mat):
        """Image of this subspace under the linear map A."""
        return Subspace(A.m, [A.matvec(fvec(b)) for b in self.basis])

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and self.ambient_dim == other.ambient_dim
                and self.pivots == other.pivots
                and self.basis == other.basis)

    def __repr__(self):
        return f"Subspace(dim {self.dim} of K^{self.ambient_dim})"


def full_space(n):
    return Subspace(n, [[K_ONE if i == j else K_ZERO for j in range(n)]
                        for i in range(n)])


def preimage(A: Mat, W: Subspace) -> Subspace:
    """{x : A x in W} via the kernel of (quotient-by-W composed with A)."""
    assert A.m == W.ambient_dim
    if W.dim == W.ambient_dim:
        return full_space(A.n)
    if not W.basis:
        return Subspace(A.n, kernel_basis_field(A))
    # solve A x = W c: kernel of [A | -W_basis^T] projected to x block
    n = A.n
    k = W.dim
    rows = []
    for i in range(A.m):
        rows.append([FieldScalar.coerce(A.rows[i][j]) for j in range(n)]
                    + [-FieldScalar.coerce(W.basis[c][i]) for c in range(k)])
    M = Mat(A.m, n + k, rows)
    vecs = [v[:n] for v in kernel_basis_field(M)]
    return Subspace(n, vecs)


class QuotientCoords:
    """Coordinates on Z/B for subspaces B <= Z of K^n.

    Representatives are Z-basis vectors completing a basis of B; coords()
    computes the class of a vector of Z in those representatives.
    """

    def __init__(self, Z: Subspace, B: Subspace):
        assert Z.ambient_dim == B.ambient_dim
        self.Z = Z
        self.B = B
        reps = []
        cur = Subspace(Z.ambient_dim, B.basis)
        for v in Z.basis:
            if not cur.contains(v):
                reps.append(v)
                cur = Subspace(Z.ambient_dim, cur.basis + [v])
        assert cur.dim == Z.dim, "B is not contained in Z"
        self.reps = reps
        self.dim = len(reps)

    def coords(self, v):
        """Class coordinates of v in Z/B; None if v is not in Z."""
        if not self.Z.contains(v):
            return None
        if self.dim == 0:
            return []
        cols = [list(r) for r in self.reps] + [list(b) for b in self.B.basis]
        M = fmat([list(r) for r in zip(*cols)], len(cols))
        sol = solve_field(M, fvec(v))
        assert sol is not None
        return sol[0][:self.dim]
