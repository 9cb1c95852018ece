"""Cochain-level operations: cup and cup-i products, Bocksteins, the
squaring operations, the flat Deligne-Beilinson pairing, and iterated
Massey products in a CDGA.

Coefficient tags are "Z", "Z2", "Q", "QZ"; values are ints, ints mod 2,
Fractions, and TorusScalars respectively.  All operations work on
explicit representatives; well-definedness up to coboundary is asserted
by the tests, not assumed.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from .exact_linalg import (
    FGAbelianGroup,
    FieldScalar,
    Mat,
    SNFSolver,
    Subspace,
    TorusScalar,
    solve_field,
    solve_int,
)
from .complexes import (
    ComplexError,
    IntegralCohomology,
    IntegralHomology,
    RZModelGroup,
    SimplicialComplex,
)
from .cdga import CDGAElement, CDGAModel


class CochainError(ValueError):
    pass


_ZEROS = {"Z": 0, "Z2": 0, "Q": Fraction(0), "QZ": TorusScalar(0)}


@dataclass
class Cochain:
    complex: SimplicialComplex
    degree: int
    coeff: str
    values: list

    def __post_init__(self):
        if self.coeff not in _ZEROS:
            raise CochainError(f"unknown coefficient tag {self.coeff!r}")
        expected = self.complex.count(self.degree)
        if len(self.values) != expected:
            raise CochainError(
                f"degree-{self.degree} cochain needs {expected} values")
        if self.coeff == "Z2":
            self.values = [v % 2 for v in self.values]

    @staticmethod
    def zero(K, p, coeff):
        return Cochain(K, p, coeff, [_ZEROS[coeff]] * K.count(p))

    def is_zero(self):
        return all(not v for v in self.values)

    def delta(self) -> "Cochain":
        d = self.complex.coboundary(self.degree)
        if self.coeff == "Z2":
            vals = [sum(abs(d.rows[i][j]) * self.values[j]
                        for j in range(d.n)) % 2 for i in range(d.m)]
        else:
            vals = []
            for i in range(d.m):
                acc = _ZEROS[self.coeff]
                for j in range(d.n):
                    c = d.rows[i][j]
                    if c:
                        acc = acc + c * self.values[j]
                vals.append(acc)
        return Cochain(self.complex, self.degree + 1, self.coeff, vals)

    def is_cocycle(self):
        return self.delta().is_zero()

    def __add__(self, other):
        self._compat(other)
        vals = [a + b for a, b in zip(self.values, other.values)]
        return Cochain(self.complex, self.degree, self.coeff, vals)

    def __sub__(self, other):
        self._compat(other)
        vals = [a - b for a, b in zip(self.values, other.values)]
        if self.coeff == "Z2":
            vals = [v % 2 for v in vals]
        return Cochain(self.complex, self.degree, self.coeff, vals)

    def scale(self, n: int):
        return Cochain(self.complex, self.degree, self.coeff,
                       [n * v for v in self.values])

    def _compat(self, other):
        if self.complex is not other.complex:
            raise CochainError("cochains live on different complexes")
        if self.coeff != other.coeff or self.degree != other.degree:
            raise CochainError("cochain degree/coefficient mismatch")

    def to_json(self):
        if self.coeff == "QZ":
            vals = [str(v.value) for v in self.values]
        elif self.coeff == "Q":
            vals = [str(v) for v in self.values]
        else:
            vals = list(self.values)
        return json.dumps({"degree": self.degree, "coeff": self.coeff,
                           "values": vals})

    @staticmethod
    def from_json(K, text):
        try:
            data = json.loads(text)
            p, coeff = int(data["degree"]), data["coeff"]
            raw = data["values"]
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise CochainError(f"bad cochain JSON: {e}") from None
        if coeff == "QZ":
            vals = [TorusScalar(Fraction(v)) for v in raw]
        elif coeff == "Q":
            vals = [Fraction(v) for v in raw]
        else:
            vals = [int(v) for v in raw]
        return Cochain(K, p, coeff, vals)


# ---------------------------------------------------------------------------
# cup products
# ---------------------------------------------------------------------------

_CUP_PAIRING = {
    ("Z", "Z"): "Z", ("Z", "QZ"): "QZ", ("QZ", "Z"): "QZ",
    ("Z2", "Z2"): "Z2", ("Q", "Q"): "Q", ("Z", "Q"): "Q", ("Q", "Z"): "Q",
}


def cup(x: Cochain, y: Cochain) -> Cochain:
    """Front-face/back-face cup product.

    (x cup y)(v_0..v_{p+q}) = x(v_0..v_p) * y(v_p..v_{p+q}).
    """
    if x.complex is not y.complex:
        raise CochainError("cup of cochains on different complexes")
    out_coeff = _CUP_PAIRING.get((x.coeff, y.coeff))
    if out_coeff is None:
        raise CochainError(
            f"no coefficient pairing {x.coeff} (x) {y.coeff}")
    K = x.complex
    p, q = x.degree, y.degree
    n = p + q
    out = Cochain.zero(K, n, out_coeff)
    if n > K.dim:
        return out
    xi = K.index[p]
    yi = K.index[q]
    vals = []
    for s in K.simplices[n]:
        front = s[:p + 1]
        back = s[p:]
        vals.append(x.values[xi[front]] * y.values[yi[back]])
    if out_coeff == "Z2":
        vals = [v % 2 for v in vals]
    return Cochain(K, n, out_coeff, vals)


def cup_i(x: Cochain, y: Cochain, i: int) -> Cochain:
    """Steenrod cup-i product of mod-2 cochains.

    The value on v_0..v_n (n = p+q-i) sums x on the union of the even
    blocks and y on the union of the odd blocks, over all cuts
    0 <= a_0 < ... < a_i <= n of the index interval into i+2 blocks with
    shared endpoints.  For i = 0 this is the cup product.
    """
    if x.coeff != "Z2" or y.coeff != "Z2":
        raise CochainError("cup_i is implemented mod 2")
    if x.complex is not y.complex:
        raise CochainError("cup_i of cochains on different complexes")
    if i < 0:
        raise CochainError("cup_i needs i >= 0")
    K = x.complex
    p, q = x.degree, y.degree
    n = p + q - i
    if n < 0:
        raise CochainError("cup_i undefined: i exceeds total degree")
    out = Cochain.zero(K, n, "Z2")
    if n > K.dim:
        return out
    xi = K.index[p]
    yi = K.index[q]
    vals = []
    for s in K.simplices[n]:
        total = 0
        for cuts in itertools.combinations(range(n + 1), i + 1):
            bounds = (0,) + cuts + (n,)
            even_idx = []
            odd_idx = []
            ok = True
            for blk in range(i + 2):
                lo, hi = bounds[blk], bounds[blk + 1]
                seg = range(lo, hi + 1)
                if blk % 2 == 0:
                    even_idx.extend(seg)
                else:
                    odd_idx.extend(seg)
            even = tuple(sorted(set(s[j] for j in even_idx)))
            odd = tuple(sorted(set(s[j] for j in odd_idx)))
            if len(even) != p + 1 or len(odd) != q + 1:
                continue
            total += x.values[xi[even]] * y.values[yi[odd]]
        vals.append(total % 2)
    return Cochain(K, n, "Z2", vals)


# ---------------------------------------------------------------------------
# coefficient operations
# ---------------------------------------------------------------------------

def reduce_mod2(x: Cochain) -> Cochain:
    if x.coeff != "Z":
        raise CochainError("reduce_mod2 takes integral cochains")
    return Cochain(x.complex, x.degree, "Z2", [v % 2 for v in x.values])


def bockstein_Z2(x: Cochain) -> Cochain:
    """Bockstein of 0 -> Z -> Z -> Z/2 -> 0 on a mod-2 cocycle."""
    if x.coeff != "Z2":
        raise CochainError("bockstein_Z2 takes mod-2 cochains")
    if not x.is_cocycle():
        raise CochainError("bockstein of a non-cocycle")
    lift = Cochain(x.complex, x.degree, "Z", [v % 2 for v in x.values])
    d = lift.delta()
    assert all(v % 2 == 0 for v in d.values)
    return Cochain(x.complex, x.degree + 1, "Z", [v // 2 for v in d.values])


def bockstein_QZ(x: Cochain) -> Cochain:
    """Bockstein of 0 -> Z -> Q -> Q/Z -> 0 on a Q/Z cocycle."""
    if x.coeff != "QZ":
        raise CochainError("bockstein_QZ takes Q/Z cochains")
    if not x.is_cocycle():
        raise CochainError("bockstein of a non-cocycle")
    lift = Cochain(x.complex, x.degree, "Q", [v.value for v in x.values])
    d = lift.delta()
    assert all(v.denominator == 1 for v in d.values)
    return Cochain(x.complex, x.degree + 1, "Z", [int(v) for v in d.values])


def gamma2(x: Cochain) -> Cochain:
    """Inclusion (1/2)Z/Z into Q/Z applied to a mod-2 cocycle."""
    if x.coeff != "Z2":
        raise CochainError("gamma2 takes mod-2 cochains")
    return Cochain(x.complex, x.degree, "QZ",
                   [TorusScalar(Fraction(v % 2, 2)) for v in x.values])


def sq2(x: Cochain) -> Cochain:
    """Steenrod square Sq^2 on a mod-2 cocycle, via x cup_{p-2} x."""
    if x.coeff != "Z2":
        raise CochainError("sq2 takes mod-2 cochains")
    if not x.is_cocycle():
        raise CochainError("sq2 of a non-cocycle")
    p = x.degree
    if p < 2:
        return Cochain.zero(x.complex, p + 2, "Z2")
    return cup_i(x, x, p - 2)


def sq3_Z(x: Cochain) -> Cochain:
    """Integral Sq^3 = bockstein_Z2 . Sq^2 . reduce_mod2; 2-torsion valued."""
    if x.coeff != "Z":
        raise CochainError("sq3_Z takes integral cochains")
    if not x.is_cocycle():
        raise CochainError("sq3_Z of a non-cocycle")
    return bockstein_Z2(sq2(reduce_mod2(x)))


# ---------------------------------------------------------------------------
# flat classes: H^p(K; Q/Z) with exact coordinates
# ---------------------------------------------------------------------------

@dataclass
class FlatClass:
    """A circle-coefficient cohomology class held by a Q/Z cocycle."""
    cochain: Cochain

    def __post_init__(self):
        if self.cochain.coeff != "QZ":
            raise CochainError("flat classes are Q/Z cocycles")
        if not self.cochain.is_cocycle():
            raise CochainError("flat class representative is not a cocycle")

    @property
    def complex(self):
        return self.cochain.complex

    @property
    def degree(self):
        return self.cochain.degree


class FlatStructure:
    """Coordinates on H^p(K; Q/Z) via evaluation against homology cycles.

    The free part pairs against a basis of H_p/torsion (coordinates in
    Q/Z), the finite part against torsion cycles of H_p (coordinates of
    bounded order).  Together these classify a Q/Z cocycle exactly.
    """

    def __init__(self, K: SimplicialComplex, p: int,
                 homology: IntegralHomology = None,
                 cohomology: IntegralCohomology = None):
        self.K = K
        self.p = p
        hom = homology if homology is not None else IntegralHomology(K)
        coh = cohomology if cohomology is not None else IntegralCohomology(K)
        self.free_cycles = hom.free_cycles(p) if 0 <= p <= K.dim else []
        self.torsion_cycles = hom.torsion_cycles(p) if 0 <= p <= K.dim else []
        self.torus_rank = len(self.free_cycles)
        self.orders = tuple(t for _, t in self.torsion_cycles)
        self.group = RZModelGroup(
            self.torus_rank, FGAbelianGroup.from_diagonal(0, self.orders))
        self._build_dual_cocycles(coh)
        self._build_torsion_reps(coh)

    # free part: integral cocycles dual to the free homology basis
    def _build_dual_cocycles(self, coh):
        if self.torus_rank == 0 or self.p > self.K.dim:
            self.dual_cocycles = []
            return
        deg = coh.degree(self.p)
        gens = deg.free_generators()
        r = len(gens)
        assert r == self.torus_rank
        E = Mat(r, r, [[self._eval_int(g, z) for z in self.free_cycles]
                       for g in gens])
        # the free cohomology/homology pairing is unimodular
        solver = SNFSolver(E.transpose())
        duals = []
        for i in range(r):
            c = solver.solve([1 if j == i else 0 for j in range(r)])
            assert c is not None, "free evaluation pairing not unimodular"
            vec = [0] * self.K.count(self.p)
            for cj, g in zip(c, gens):
                vec = [a + cj * b for a, b in zip(vec, g)]
            duals.append(vec)
        self.dual_cocycles = duals

    # finite part: (1/t) lifts of integral torsion, corrected to a clean
    # coordinate basis
    def _build_torsion_reps(self, coh):
        self.torsion_reps = []
        if not self.orders:
            return
        deg_next = coh.degree(self.p + 1) if self.p + 1 <= self.K.dim else None
        assert deg_next is not None, "torsion cycles need H^{p+1} torsion"
        facs = deg_next.group.invariant_factors
        assert tuple(facs) == tuple(self.orders), \
            "H_p torsion must match H^{p+1} torsion"
        raw = []
        delta_p = self.K.coboundary(self.p)
        for i, t in enumerate(facs):
            W = deg_next.torsion_generators()[i]
            a = solve_int(delta_p, [t * w for w in W])
            assert a is not None, "torsion generator lift failed"
            raw.append([TorusScalar(Fraction(v, t)) for v in a])
        # raw generators carry arbitrary evals; recombine integrally so
        # that rep_i evaluates to 1/s_i on torsion cycle i, 0 on the rest
        k = len(self.orders)
        A = [[self._eval_qz(raw[j], w).value for w, _ in self.torsion_cycles]
             for j in range(k)]
        reps = []
        for i, s_i in enumerate(self.orders):
            rows = []
            for c, s_c in enumerate(self.orders):
                row = [int(s_c * A[j][c]) for j in range(k)]
                row += [s_c if l == c else 0 for l in range(k)]
                rows.append(row)
            rhs = [1 if c == i else 0 for c in range(k)]
            sol = solve_int(Mat(k, 2 * k, rows), rhs)
            assert sol is not None, "torsion coordinate change failed"
            vec = [TorusScalar(0)] * self.K.count(self.p)
            for cj, r in zip(sol[:k], raw):
                vec = [a + cj * b for a, b in zip(vec, r)]
            # remove free-part offsets (duals have zero torsion evals)
            offs = [self._eval_qz(vec, z) for z in self.free_cycles]
            for o, dual in zip(offs, self.dual_cocycles):
                vec = [a - d * o for a, d in zip(vec, dual)]
            reps.append(vec)
        self.torsion_reps = reps

    def _eval_int(self, cochain_vec, cycle):
        return sum(a * b for a, b in zip(cochain_vec, cycle))

    def _eval_qz(self, qz_vec, cycle):
        acc = TorusScalar(0)
        for a, b in zip(qz_vec, cycle):
            acc = acc + b * a
        return acc

    def coords(self, x) -> tuple:
        """(free evals, torsion evals), both tuples of TorusScalar."""
        vec = x.cochain.values if isinstance(x, FlatClass) else x.values
        free = tuple(self._eval_qz(vec, z) for z in self.free_cycles)
        tors = tuple(self._eval_qz(vec, w) for w, _ in self.torsion_cycles)
        for t, (_, s) in zip(tors, self.torsion_cycles):
            assert not (s * t), "torsion eval of wrong order: not a cocycle?"
        return free, tors

    def representative(self, free, tors=()) -> FlatClass:
        """Build a flat class with the given coordinates.

        free: TorusScalar per circle factor; tors: integer multiples of
        the 1/s_j basic coordinates."""
        vec = [TorusScalar(0)] * self.K.count(self.p)
        for th, dual in zip(free, self.dual_cocycles):
            th = th if isinstance(th, TorusScalar) else TorusScalar(th)
            vec = [a + TorusScalar(th.value * d) for a, d in zip(vec, dual)]
        tors = list(tors) + [0] * (len(self.orders) - len(tors))
        for kj, rep in zip(tors, self.torsion_reps):
            vec = [a + kj * b for a, b in zip(vec, rep)]
        return FlatClass(Cochain(self.K, self.p, "QZ", vec))

    def is_zero_class(self, x) -> bool:
        free, tors = self.coords(x)
        return all(not v for v in free) and all(not v for v in tors)

    def classes_equal(self, x, y) -> bool:
        return self.coords(x) == self.coords(y)


def sq3_flat(x: FlatClass) -> FlatClass:
    """Flat refinement of Sq^3: gamma2 . Sq^2 . rho2 . bockstein_QZ."""
    b = bockstein_QZ(x.cochain)
    out = gamma2(sq2(reduce_mod2(b)))
    return FlatClass(out)


def db_cup_flat(h: Cochain, x: FlatClass, sign: int = -1) -> FlatClass:
    """Twist action on flat classes: the coefficient-pairing cup with h.

    The sign convention matches the topological twisted differential
    (lambda = -1 by default) so that the Bockstein square
    beta(db_cup_flat(h, x)) = lambda * (beta(x) cup h) commutes exactly.
    """
    if h.coeff != "Z" or h.degree != 3:
        raise CochainError("twist must be an integral 3-cochain")
    if not h.is_cocycle():
        raise CochainError("twist is not a cocycle")
    out = cup(x.cochain, h).scale(sign)
    return FlatClass(out)


# ---------------------------------------------------------------------------
# Massey products in a CDGA
# ---------------------------------------------------------------------------

@dataclass
class MasseyCoset:
    """A cohomology class modulo the twist-multiple indeterminacy."""
    model: CDGAModel
    degree: int
    representative: CDGAElement
    indeterminacy: Subspace  # in cohomology coordinates of `degree`

    def rep_coords(self):
        q = self.model.cohomology(self.degree)
        return q.coords(self.representative.component(self.degree))

    def same_coset(self, other: "MasseyCoset") -> bool:
        assert self.model is other.model and self.degree == other.degree
        a = self.rep_coords()
        b = other.rep_coords()
        diff = [x - y for x, y in zip(a, b)]
        return self.indeterminacy.contains(diff)

    def contains_class(self, coords) -> bool:
        a = self.rep_coords()
        diff = [x - y for x, y in zip(coords, a)]
        return self.indeterminacy.contains(diff)

    def is_zero_coset(self) -> bool:
        return self.indeterminacy.contains(self.rep_coords())


@dataclass
class Undefined:
    """Massey defining system obstructed at the named stage."""
    stage: int
    reason: str


def _indeterminacy(model: CDGAModel, H: CDGAElement, target_deg: int):
    """[H] wedge H^{target-|H|}(model) inside cohomology coordinates."""
    hdeg = _twist_degree(H)
    src = target_deg - hdeg
    q = model.cohomology(target_deg)
    vecs = []
    if 0 <= src <= model.top:
        qsrc = model.cohomology(src)
        for rep in qsrc.reps:
            el = model.element({src: rep})
            prod = H.wedge(el)
            c = q.coords(prod.component(target_deg))
            if c is not None:
                vecs.append(c)
    return Subspace(q.dim, vecs)


def _twist_degree(H: CDGAElement) -> int:
    return 3 if H.is_zero() else H.degree


def _mult_matrix(model: CDGAModel, H: CDGAElement, src_deg: int) -> Mat:
    """Matrix of H wedge (-) from degree src_deg to src_deg + |H|."""
    tgt = src_deg + _twist_degree(H)
    rows = [[FieldScalar(0)] * model.dim(src_deg)
            for _ in range(model.dim(tgt))]
    for i in range(model.dim(src_deg)):
        out = H.wedge(model.basis_element(src_deg, i)).component(tgt)
        for r in range(model.dim(tgt)):
            rows[r][i] = out[r]
    return Mat(model.dim(tgt), model.dim(src_deg), rows)


def solve_defining_system(model: CDGAModel, H: CDGAElement, x: CDGAElement,
                          k: int, rng=None):
    """Stages x_(0)=x, ..., x_(k-1) with d x_(j) = -(H wedge x_(j-1)).

    The stage equations are solved jointly (they are linear in all the
    stages at once), so a system is found whenever one exists; greedy
    stage-by-stage choices could dead-end at a later stage.  Returns the
    list of stages, or Undefined(j) for the first j whose partial system
    has no solution.  rng, when given, perturbs the solution inside the
    joint kernel.
    """
    if not H.is_cocycle():
        raise CochainError("twist element is not closed")
    if not x.is_cocycle():
        raise CochainError("input element is not closed")
    if k < 1:
        raise CochainError("k >= 1 required")
    if k == 1:
        return [x]
    p = x.degree
    hdeg = _twist_degree(H)
    step = hdeg - 1
    udims = [model.dim(p + step * j) for j in range(1, k)]
    edims = [model.dim(p + step * j + 1) for j in range(1, k)]

    def assemble(j_max):
        rows_total = sum(edims[:j_max])
        cols_total = sum(udims[:j_max])
        rows = [[FieldScalar(0)] * cols_total for _ in range(rows_total)]
        rhs = [FieldScalar(0)] * rows_total
        roff = 0
        for j in range(1, j_max + 1):
            src = p + step * j
            dm = model.d_matrix(src)
            coff = sum(udims[:j - 1])
            for a in range(edims[j - 1]):
                for b in range(udims[j - 1]):
                    rows[roff + a][coff + b] = dm.rows[a][b]
            if j == 1:
                hx = H.wedge(x).component(p + hdeg)
                for a in range(edims[0]):
                    rhs[a] = -hx[a]
            else:
                hm = _mult_matrix(model, H, p + step * (j - 1))
                pcoff = sum(udims[:j - 2])
                for a in range(edims[j - 1]):
                    for b in range(udims[j - 2]):
                        rows[roff + a][pcoff + b] = hm.rows[a][b]
            roff += edims[j - 1]
        return Mat(rows_total, cols_total, rows), rhs

    full = None
    for j in range(1, k):
        M, b = assemble(j)
        sol = solve_field(M, b)
        if sol is None:
            return Undefined(j, f"no defining system through stage {j}")
        if j == k - 1:
            full = sol
    y, ker = full
    if rng is not None and ker:
        for kv in ker:
            c = rng.randint(-3, 3)
            if c:
                y = [a + FieldScalar(c) * b for a, b in zip(y, kv)]
    stages = [x]
    off = 0
    for j in range(1, k):
        stages.append(model.element(
            {p + step * j: y[off:off + udims[j - 1]]}))
        off += udims[j - 1]
    return stages


def massey_iterated(model: CDGAModel, H: CDGAElement, x: CDGAElement,
                    k: int, rng=None):
    """Iterated product <H, ..., H, x> with k twist factors.

    Returns the class of H wedge x_(k-1) over the defining system
    d x_(j) = -(H wedge x_(j-1)), with indeterminacy [H] wedge H^*(A);
    Undefined(j) when no system exists.  k = 1 degenerates to the plain
    product [H wedge x], which has no choices and no indeterminacy.
    """
    stages = solve_defining_system(model, H, x, k, rng=rng)
    if isinstance(stages, Undefined):
        return stages
    rep = H.wedge(stages[-1])
    target = x.degree + k * (_twist_degree(H) - 1) + 1
    assert rep.is_zero() or rep.degree == target
    if k == 1:
        ind = Subspace(model.cohomology(target).dim)
    else:
        ind = _indeterminacy(model, H, target)
    return MasseyCoset(model, target, rep, ind)
