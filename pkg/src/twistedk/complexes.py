"""Finite simplicial complexes, coboundaries, and exact cohomology.

Simplices are strictly increasing vertex tuples; every sign in the
engine derives from that ordering.  Cohomology is computed with integer
Smith forms (Z), bitmask Gaussian elimination (Z/2), integral ranks (Q),
and the Bockstein description for the circle-coefficient model.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from .exact_linalg import (
    FGAbelianGroup,
    Mat,
    TorusScalar,
    Cokernel,
    SNFSolver,
    kernel_basis_int,
    smith_normal_form,
)


class ComplexError(ValueError):
    pass


class CatalogError(KeyError):
    pass


class SimplicialComplex:
    """Finite ordered simplicial complex on vertices 0..n-1."""

    def __init__(self, vertices, simplices_by_dim):
        self.vertices = vertices
        self.simplices = [sorted(set(map(tuple, dim_s)))
                          for dim_s in simplices_by_dim]
        while self.simplices and not self.simplices[-1]:
            self.simplices.pop()
        self._validate()
        self.index = [{s: i for i, s in enumerate(dim_s)}
                      for dim_s in self.simplices]

    def _validate(self):
        seen_vertices = set()
        for p, dim_s in enumerate(self.simplices):
            for s in dim_s:
                if len(s) != p + 1:
                    raise ComplexError(f"simplex {s} has wrong dimension")
                if list(s) != sorted(set(s)):
                    raise ComplexError(f"simplex {s} is not strictly increasing")
                if s[-1] >= self.vertices or s[0] < 0:
                    raise ComplexError(f"simplex {s} uses unknown vertex")
                seen_vertices.update(s)
                if p > 0:
                    lower = set(self.simplices[p - 1])
                    for k in range(p + 1):
                        face = s[:k] + s[k + 1:]
                        if face not in lower:
                            raise ComplexError(
                                f"face {face} of {s} missing: "
                                "complex is not closed under faces")

    @staticmethod
    def from_maximal(vertices, maximal):
        by_dim = {}
        for m in maximal:
            m = tuple(sorted(m))
            for k in range(1, len(m) + 1):
                for s in itertools.combinations(m, k):
                    by_dim.setdefault(k - 1, set()).add(s)
        dims = max(by_dim) + 1 if by_dim else 0
        return SimplicialComplex(
            vertices, [by_dim.get(p, set()) for p in range(dims)])

    @property
    def dim(self):
        return len(self.simplices) - 1

    def f_vector(self):
        return tuple(len(s) for s in self.simplices)

    def count(self, p):
        if 0 <= p < len(self.simplices):
            return len(self.simplices[p])
        return 0

    def euler_characteristic(self):
        return sum((-1) ** p * len(s) for p, s in enumerate(self.simplices))

    def maximal_simplices(self):
        out = []
        all_s = set()
        for dim_s in self.simplices:
            all_s.update(dim_s)
        for dim_s in self.simplices:
            for s in dim_s:
                ss = set(s)
                if not any(ss < set(t) for t in all_s if len(t) == len(s) + 1):
                    out.append(s)
        return out

    def coboundary(self, p):
        """delta_p : C^p -> C^{p+1} (alternating-sign simplicial coboundary)."""
        lower = self.simplices[p] if p < len(self.simplices) else []
        upper = self.simplices[p + 1] if p + 1 < len(self.simplices) else []
        rows = [[0] * len(lower) for _ in range(len(upper))]
        if lower and upper:
            lower_index = self.index[p]
            for i, s in enumerate(upper):
                for k in range(p + 2):
                    face = s[:k] + s[k + 1:]
                    rows[i][lower_index[face]] += (-1) ** k
        return Mat(len(upper), len(lower), rows)

    def to_json(self):
        return json.dumps({"vertices": self.vertices,
                           "simplices": [list(s) for s
                                         in self.maximal_simplices()]})

    @staticmethod
    def from_json(text):
        try:
            data = json.loads(text)
            vertices = int(data["vertices"])
            maximal = data["simplices"]
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise ComplexError(f"bad complex JSON: {e}") from None
        return SimplicialComplex.from_maximal(vertices, maximal)

    def __repr__(self):
        return f"SimplicialComplex(f={self.f_vector()})"


class CochainComplexZ:
    """Integer coboundary matrices of a complex; checks delta^2 = 0."""

    def __init__(self, K: SimplicialComplex):
        self.K = K
        self.deltas = [K.coboundary(p) for p in range(K.dim + 1)]
        for p in range(len(self.deltas) - 1):
            prod = self.deltas[p + 1] * self.deltas[p]
            assert all(all(x == 0 for x in r) for r in prod.rows), \
                f"delta^2 != 0 at degree {p}"

    def delta(self, p):
        if 0 <= p < len(self.deltas):
            return self.deltas[p]
        lower = self.K.count(p)
        upper = self.K.count(p + 1)
        return Mat(upper, lower)


def coboundary_matrices(K: SimplicialComplex) -> CochainComplexZ:
    return CochainComplexZ(K)


# ---------------------------------------------------------------------------
# cohomology with coordinates
# ---------------------------------------------------------------------------

class DegreeDataZ:
    """H^p(K; Z) = ker(delta_p)/im(delta_{p-1}) with coordinate maps."""

    def __init__(self, cc: CochainComplexZ, p):
        self.p = p
        self.c_p = cc.K.count(p)
        d_p = cc.delta(p)
        d_prev = cc.delta(p - 1) if p > 0 else Mat(self.c_p, 0)
        ker = kernel_basis_int(d_p)
        self.ker_cols = ker
        self.K_mat = Mat(self.c_p, len(ker),
                         [[ker[j][i] for j in range(len(ker))]
                          for i in range(self.c_p)])
        self._solver = SNFSolver(self.K_mat)
        rel_rows = []
        for j in range(d_prev.n):
            col = d_prev.column(j)
            y = self._solver.solve(col)
            assert y is not None, "im(delta) not inside ker(delta): impossible"
            rel_rows.append(y)
        self.coker = Cokernel(Mat(len(rel_rows), len(ker), rel_rows))
        self.group = self.coker.group

    def is_cocycle(self, x):
        return self._solver.solve(list(x)) is not None

    def class_coords(self, x):
        """(free coords, torsion coords) of a cocycle's class."""
        y = self._solver.solve(list(x))
        if y is None:
            raise ComplexError(f"vector is not a degree-{self.p} cocycle")
        return self.coker.project(y)

    def is_coboundary(self, x):
        free, tors = self.class_coords(x)
        return all(v == 0 for v in free) and all(v == 0 for v in tors)

    def representative(self, free, tors=()):
        tors = list(tors) or [0] * len(self.group.invariant_factors)
        y = self.coker.lift(list(free), tors)
        return self.K_mat.matvec(y)

    def free_generators(self):
        r = self.group.free_rank
        return [self.representative([1 if i == j else 0 for j in range(r)])
                for i in range(r)]

    def torsion_generators(self):
        t = len(self.group.invariant_factors)
        return [self.representative([0] * self.group.free_rank,
                                    [1 if i == j else 0 for j in range(t)])
                for i in range(t)]


class IntegralCohomology:
    def __init__(self, K: SimplicialComplex):
        self.K = K
        self.cc = CochainComplexZ(K)
        self._deg = {}

    def degree(self, p) -> DegreeDataZ:
        if p not in self._deg:
            self._deg[p] = DegreeDataZ(self.cc, p)
        return self._deg[p]

    def group(self, p) -> FGAbelianGroup:
        if p < 0 or p > self.K.dim:
            return FGAbelianGroup(0)
        return self.degree(p).group

    def groups(self):
        return [self.group(p) for p in range(self.K.dim + 1)]


class IntegralHomology:
    """H_p(K; Z) via boundary matrices, with explicit cycle bases."""

    def __init__(self, K: SimplicialComplex):
        self.K = K
        cc = CochainComplexZ(K)
        self._data = {}
        for p in range(K.dim + 1):
            bdry_p = cc.delta(p - 1).transpose() if p > 0 \
                else Mat(0, K.count(0))
            bdry_next = cc.delta(p).transpose()
            ker = kernel_basis_int(bdry_p)
            K_mat = Mat(K.count(p), len(ker),
                        [[ker[j][i] for j in range(len(ker))]
                         for i in range(K.count(p))])
            solver = SNFSolver(K_mat)
            rel_rows = []
            for j in range(bdry_next.n):
                col = bdry_next.column(j)
                y = solver.solve(col)
                assert y is not None
                rel_rows.append(y)
            coker = Cokernel(Mat(len(rel_rows), len(ker), rel_rows))
            self._data[p] = (K_mat, coker)

    def group(self, p) -> FGAbelianGroup:
        if p not in self._data:
            return FGAbelianGroup(0)
        return self._data[p][1].group

    def free_cycles(self, p):
        """Integer cycles spanning the free part of H_p."""
        if p not in self._data:
            return []
        K_mat, coker = self._data[p]
        r = coker.group.free_rank
        out = []
        for i in range(r):
            y = coker.lift([1 if i == j else 0 for j in range(r)],
                           [0] * len(coker.group.invariant_factors))
            out.append(K_mat.matvec(y))
        return out

    def torsion_cycles(self, p):
        """(cycle, order) generators of the torsion of H_p."""
        if p not in self._data:
            return []
        K_mat, coker = self._data[p]
        facs = coker.group.invariant_factors
        out = []
        for i, d in enumerate(facs):
            y = coker.lift([0] * coker.group.free_rank,
                           [1 if i == j else 0 for j in range(len(facs))])
            out.append((K_mat.matvec(y), d))
        return out


# --- mod 2 ---------------------------------------------------------------

def _bits(vec):
    b = 0
    for i, v in enumerate(vec):
        if v % 2:
            b |= 1 << i
    return b


def _rref2(rows):
    """GF(2) row reduction on bitmask rows; returns (rows, pivot bits)."""
    rows = [r for r in rows if r]
    pivots = []
    out = []
    for r in rows:
        for p, q in zip(pivots, out):
            if r >> p & 1:
                r ^= q
        if r:
            p = r.bit_length() - 1
            # normalize: eliminate this pivot from earlier rows
            for i in range(len(out)):
                if out[i] >> p & 1:
                    out[i] ^= r
            out.append(r)
            pivots.append(p)
    return out, pivots


class F2Cohomology:
    """H^p(K; Z/2) with class coordinates, rows as bitmasks."""

    def __init__(self, K: SimplicialComplex):
        self.K = K
        self.cc = CochainComplexZ(K)
        self._deg = {}

    def _solve2(self, basis_bits, target):
        """Express target as sum of basis bitmasks; None if impossible."""
        rows = [(b, 1 << i) for i, b in enumerate(basis_bits)]
        acc = target
        used = 0
        work, tags = [], []
        for b, tag in rows:
            r, t = b, tag
            for w, wt in zip(work, tags):
                if r >> (w.bit_length() - 1) & 1:
                    r ^= w
                    t ^= wt
            if r:
                work.append(r)
                tags.append(t)
        for w, wt in zip(work, tags):
            if acc >> (w.bit_length() - 1) & 1:
                acc ^= w
                used ^= wt
        if acc:
            return None
        return [used >> i & 1 for i in range(len(basis_bits))]

    def degree(self, p):
        if p in self._deg:
            return self._deg[p]
        c_p = self.K.count(p)
        d_p = self.cc.delta(p)
        d_prev = self.cc.delta(p - 1) if p > 0 else Mat(c_p, 0)
        # kernel of d_p mod 2
        rows = [_bits(r) for r in d_p.rows]
        red, pivots = _rref2(rows)
        ker = []
        pivset = set(pivots)
        for j in range(c_p):
            if j in pivset:
                continue
            v = 1 << j
            for r, pv in zip(red, pivots):
                if r >> j & 1:
                    v |= 1 << pv
            ker.append(v)
        im = []
        for j in range(d_prev.n):
            b = _bits(d_prev.column(j))
            if b:
                im.append(b)
        im_red, _ = _rref2(im)
        # representatives: kernel elements independent modulo the image
        reps = []
        span = list(im_red)
        for v in ker:
            w = v
            for s in span:
                if w >> (s.bit_length() - 1) & 1:
                    w ^= s
            if w:
                reps.append(v)
                span, _ = _rref2(span + [v])
        data = {"ker": ker, "im": im_red, "reps": reps, "dim": len(reps)}
        self._deg[p] = data
        return data

    def dim(self, p):
        if p < 0 or p > self.K.dim:
            return 0
        return self.degree(p)["dim"]

    def is_cocycle(self, vec):
        d_p = self.cc.delta(self._degree_of(vec))
        out = d_p.matvec([v % 2 for v in vec])
        return all(v % 2 == 0 for v in out)

    def _degree_of(self, vec):
        for p in range(self.K.dim + 1):
            if len(vec) == self.K.count(p):
                return p
        raise ComplexError("vector length matches no cochain degree")

    def class_coords(self, p, vec):
        """Coordinates of the class of a mod-2 cocycle in the reps basis."""
        data = self.degree(p)
        b = _bits(vec)
        basis = data["reps"] + data["im"]
        sol = self._solve2(basis, b)
        if sol is None:
            raise ComplexError("not a mod-2 cocycle class")
        return sol[:len(data["reps"])]

    def representative(self, p, coords):
        data = self.degree(p)
        b = 0
        for c, r in zip(coords, data["reps"]):
            if c % 2:
                b ^= r
        return [b >> i & 1 for i in range(self.K.count(p))]


# --- assembled answer types ---------------------------------------------

@dataclass(frozen=True)
class RZModelGroup:
    """Model of H^n(M; R/Z): circle factors + finite torsion.

    torus_rank counts R/Z summands (one per Betti number), torsion is
    the finite part, which equals the torsion of H^{n+1}(M; Z).
    """
    torus_rank: int
    torsion: FGAbelianGroup = FGAbelianGroup(0)

    def is_trivial(self):
        return self.torus_rank == 0 and self.torsion.is_trivial()

    def __str__(self):
        parts = []
        if self.torus_rank == 1:
            parts.append("R/Z")
        elif self.torus_rank > 1:
            parts.append(f"(R/Z)^{self.torus_rank}")
        if not self.torsion.is_trivial():
            parts.append(str(self.torsion))
        return " + ".join(parts) if parts else "0"


def cohomology(K: SimplicialComplex, coeff):
    """Graded cohomology of K with the requested coefficients.

    coeff is one of "Z", "Z2", "Q", "RZ".  Integral answers come back as
    FGAbelianGroup, mod-2 and rational as dimensions, and the circle
    model as RZModelGroup built from Betti numbers and integral torsion
    (Bockstein description; nothing is ever computed over R).
    """
    if coeff == "Z":
        return IntegralCohomology(K).groups()
    if coeff == "Z2":
        f2 = F2Cohomology(K)
        return [f2.dim(p) for p in range(K.dim + 1)]
    if coeff == "Q":
        hz = IntegralCohomology(K)
        return [hz.group(p).free_rank for p in range(K.dim + 1)]
    if coeff == "RZ":
        hz = IntegralCohomology(K)
        out = []
        for p in range(K.dim + 1):
            betti = hz.group(p).free_rank
            tors_next = FGAbelianGroup(
                0, hz.group(p + 1).invariant_factors) \
                if p + 1 <= K.dim else FGAbelianGroup(0)
            out.append(RZModelGroup(betti, tors_next))
        return out
    raise ValueError(f"unknown coefficients {coeff!r}")


# ---------------------------------------------------------------------------
# star cover nerve
# ---------------------------------------------------------------------------

def star_cover_nerve(K: SimplicialComplex):
    """Nerve of the open-star cover {st(v)}, with the vertex bijection.

    Stars st(v_0), ..., st(v_p) intersect exactly when some simplex
    contains all the v_i, so the nerve reproduces K; we compute it from
    the stars anyway and assert the isomorphism.
    """
    maximal = K.maximal_simplices()
    stars = {v: {m for m in maximal if v in m}
             for v in range(K.vertices) if any(v in m for m in maximal)}
    nerve_simplices = set()
    for m in maximal:
        for k in range(1, len(m) + 1):
            for s in itertools.combinations(m, k):
                common = set.intersection(*(stars[v] for v in s))
                if common:
                    nerve_simplices.add(s)
    nerve = SimplicialComplex.from_maximal(K.vertices, nerve_simplices)
    assert nerve.simplices == K.simplices, "star nerve differs from complex"
    return nerve, {v: v for v in range(K.vertices)}


# ---------------------------------------------------------------------------
# simplicial maps
# ---------------------------------------------------------------------------

def _perm_sign(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class SimplicialMap:
    """Vertex map inducing a simplicial map source -> target."""

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex,
                 vertex_map):
        self.source = source
        self.target = target
        self.vertex_map = dict(vertex_map) if not isinstance(vertex_map, dict) \
            else vertex_map
        for dim_s in source.simplices:
            for s in dim_s:
                img = tuple(sorted(set(self.vertex_map[v] for v in s)))
                if img not in target.index[len(img) - 1]:
                    raise ComplexError(
                        f"vertex map is not simplicial on {s}")

    def pullback(self, p, values, zero=0):
        """Pull back a degree-p cochain on the target along the map.

        Degenerate images contribute nothing; otherwise the value is
        signed by the permutation sorting the image vertices.
        """
        out = []
        for s in (self.source.simplices[p] if p <= self.source.dim else []):
            img = [self.vertex_map[v] for v in s]
            if len(set(img)) < len(img):
                out.append(zero)
                continue
            sign = _perm_sign(img)
            key = tuple(sorted(img))
            val = values[self.target.index[p][key]]
            out.append(val if sign == 1 else -val)
        return out


def identity_map(K):
    return SimplicialMap(K, K, {v: v for v in range(K.vertices)})


# ---------------------------------------------------------------------------
# constructions: join, product, disjoint union, wedge
# ---------------------------------------------------------------------------

def disjoint_union(K: SimplicialComplex, L: SimplicialComplex):
    shift = K.vertices
    maximal = list(K.maximal_simplices())
    maximal += [tuple(v + shift for v in m) for m in L.maximal_simplices()]
    return SimplicialComplex.from_maximal(K.vertices + L.vertices, maximal)


def join(K: SimplicialComplex, L: SimplicialComplex):
    shift = K.vertices
    maximal = []
    for mk in K.maximal_simplices():
        for ml in L.maximal_simplices():
            maximal.append(tuple(mk) + tuple(v + shift for v in ml))
    return SimplicialComplex.from_maximal(K.vertices + L.vertices, maximal)


def wedge(K: SimplicialComplex, L: SimplicialComplex):
    """One-point union, gluing vertex 0 of each summand."""
    shift = K.vertices - 1

    def relabel(v):
        return 0 if v == 0 else v + shift

    maximal = list(K.maximal_simplices())
    maximal += [tuple(sorted(relabel(v) for v in m))
                for m in L.maximal_simplices()]
    return SimplicialComplex.from_maximal(K.vertices + L.vertices - 1,
                                          maximal)


def product(K: SimplicialComplex, L: SimplicialComplex):
    """Staircase triangulation of |K| x |L|.

    Vertices are pairs (a, b) with label a * |V_L| + b; the simplices are
    the chains in the coordinatewise partial order whose projections are
    simplices of the factors.  Maximal simplices come from monotone
    lattice paths through sigma x tau for maximal sigma, tau.
    """
    nl = L.vertices

    def label(a, b):
        return a * nl + b

    maximal = []
    for mk in K.maximal_simplices():
        for ml in L.maximal_simplices():
            p, q = len(mk) - 1, len(ml) - 1
            for steps in itertools.combinations(range(p + q), p):
                a = b = 0
                chain = [label(mk[0], ml[0])]
                for t in range(p + q):
                    if t in steps:
                        a += 1
                    else:
                        b += 1
                    chain.append(label(mk[a], ml[b]))
                maximal.append(tuple(chain))
    return SimplicialComplex.from_maximal(K.vertices * nl, maximal)


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

# Closed combinatorial 4-manifold on 9 vertices with the cohomology ring
# of the complex projective plane; found by orbit search over the
# Z3 x Z3 translation action on AG(2,3) (see scripts/find_cp2.py) and
# verified: every tetrahedron lies in exactly two facets, every vertex
# link is an 8-vertex homology 3-sphere, H* = (Z, 0, Z, 0, Z), and the
# degree-2 generator has cup square a generator of H^4.
_CP2_FACETS = [
    (1, 2, 3, 4, 5), (1, 2, 3, 4, 6), (1, 2, 3, 5, 6), (1, 2, 4, 5, 7),
    (1, 2, 4, 6, 8), (1, 2, 4, 7, 8), (1, 2, 5, 6, 7), (1, 2, 6, 7, 9),
    (1, 2, 6, 8, 9), (1, 2, 7, 8, 9), (1, 3, 4, 5, 9), (1, 3, 4, 6, 9),
    (1, 3, 5, 6, 7), (1, 3, 5, 7, 8), (1, 3, 5, 8, 9), (1, 3, 6, 7, 9),
    (1, 3, 7, 8, 9), (1, 4, 5, 7, 8), (1, 4, 5, 8, 9), (1, 4, 6, 8, 9),
    (2, 3, 4, 5, 9), (2, 3, 4, 6, 8), (2, 3, 4, 7, 8), (2, 3, 4, 7, 9),
    (2, 3, 5, 6, 8), (2, 3, 5, 8, 9), (2, 3, 7, 8, 9), (2, 4, 5, 7, 9),
    (2, 5, 6, 7, 9), (2, 5, 6, 8, 9), (3, 4, 6, 7, 8), (3, 4, 6, 7, 9),
    (3, 5, 6, 7, 8), (4, 5, 6, 7, 8), (4, 5, 6, 7, 9), (4, 5, 6, 8, 9),
]

# Minimal 6-vertex triangulation of the real projective plane
# (icosahedron quotient); every edge of K6 appears in exactly two faces.
_RP2_FACETS = [
    (1, 2, 5), (1, 2, 6), (1, 3, 4), (1, 3, 6), (1, 4, 5),
    (2, 3, 4), (2, 3, 5), (2, 4, 6), (3, 5, 6), (4, 5, 6),
]


def _sphere(n):
    if n < 0 or n > 8:
        raise CatalogError(f"sphere({n}) not in catalog (0 <= n <= 8)")
    verts = n + 2
    maximal = list(itertools.combinations(range(verts), n + 1))
    return SimplicialComplex.from_maximal(verts, maximal)


def _cycle(k):
    if k < 3:
        raise CatalogError("cycle needs at least 3 vertices")
    edges = [(i, i + 1) for i in range(k - 1)] + [(0, k - 1)]
    return SimplicialComplex.from_maximal(k, edges)


def _torus2_7vertex():
    faces = []
    for i in range(7):
        faces.append(tuple(sorted(((i % 7), (i + 1) % 7, (i + 3) % 7))))
        faces.append(tuple(sorted(((i % 7), (i + 2) % 7, (i + 3) % 7))))
    return SimplicialComplex.from_maximal(7, faces)


def _shift_to_zero_based(facets):
    return [tuple(v - 1 for v in f) for f in facets]


def s3_join(d=1):
    """S^3 as the join of a 3d-gon circle and a triangle circle.

    The winding vertex map i -> i mod 3 on the first factor extends to a
    simplicial self-map of degree d (see catalog_maps)."""
    return join(_cycle(3 * max(d, 1)), _cycle(3))


def s3_winding_map(d):
    """Degree-d simplicial map s3_join(d) -> s3_join(1)."""
    src = s3_join(d)
    tgt = s3_join(1)
    n = 3 * d
    vm = {}
    for v in range(n):
        vm[v] = v % 3
    for j in range(3):
        vm[n + j] = 3 + j
    return SimplicialMap(src, tgt, vm)


_CATALOG_DOC = {
    "point": "a single vertex",
    "sphere(n)": "boundary of the (n+1)-simplex, n <= 8",
    "s1_cycle(k)": "k-gon circle, k >= 3",
    "s3_join(d)": "join of a 3d-gon and a triangle (S^3)",
    "torus2_7vertex": "minimal 7-vertex torus",
    "torus3": "3-torus, staircase product of three triangles",
    "cp2_9vertex": "9-vertex complex projective plane",
    "rp2_6vertex": "minimal 6-vertex real projective plane",
    "wedge(a,b,...)": "one-point union of catalog models",
    "product(a,b)": "staircase product of catalog models",
    "disjoint(a,b)": "disjoint union of catalog models",
}


def _split_args(argstr):
    parts = []
    depth = 0
    cur = ""
    for ch in argstr:
        if ch == "," and depth == 0:
            parts.append(cur.strip())
            cur = ""
        else:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            cur += ch
    if cur.strip():
        parts.append(cur.strip())
    return parts


def builtin_model(name: str) -> SimplicialComplex:
    """Catalog lookup; unknown names raise with the available list."""
    name = name.strip()
    if "(" in name and name.endswith(")"):
        head, argstr = name.split("(", 1)
        args = _split_args(argstr[:-1])
        head = head.strip()
        if head == "sphere":
            return _sphere(int(args[0]))
        if head == "s1_cycle":
            return _cycle(int(args[0]))
        if head == "s3_join":
            return s3_join(int(args[0]))
        if head == "wedge":
            models = [builtin_model(a) for a in args]
            out = models[0]
            for m in models[1:]:
                out = wedge(out, m)
            return out
        if head == "product":
            models = [builtin_model(a) for a in args]
            out = models[0]
            for m in models[1:]:
                out = product(out, m)
            return out
        if head == "disjoint":
            models = [builtin_model(a) for a in args]
            out = models[0]
            for m in models[1:]:
                out = disjoint_union(out, m)
            return out
    else:
        if name == "point":
            return SimplicialComplex.from_maximal(1, [(0,)])
        if name == "torus2_7vertex":
            return _torus2_7vertex()
        if name == "torus3":
            c = _cycle(3)
            return product(product(c, c), c)
        if name == "cp2_9vertex":
            return SimplicialComplex.from_maximal(
                9, _shift_to_zero_based(_CP2_FACETS))
        if name == "rp2_6vertex":
            return SimplicialComplex.from_maximal(
                6, _shift_to_zero_based(_RP2_FACETS))
    raise CatalogError(
        f"unknown model {name!r}; available: "
        + ", ".join(sorted(_CATALOG_DOC)))


def catalog_maps():
    """Named simplicial maps used by the naturality test battery."""
    s3 = builtin_model("sphere(3)")
    pt = builtin_model("point")
    maps = [
        ("identity_sphere3", identity_map(s3)),
        ("point_into_sphere3", SimplicialMap(pt, s3, {0: 0})),
        ("s3_winding_2", s3_winding_map(2)),
        ("s3_winding_3", s3_winding_map(3)),
    ]
    return maps
