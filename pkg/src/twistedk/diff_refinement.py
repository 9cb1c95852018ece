"""The differential-refinement layer: gerbe twist data, the refined
second page (curvature-form entry plus circle-coefficient rows), the
flat differentials, the leading-term curvature differentials, and the
comparison with rationalized data through the period pairing.

Coordinate conventions: free parts of circle-coefficient groups are
coordinatized by evaluation against the canonical integral homology
cycles (FlatStructure); de Rham classes are carried to those
coordinates by the gerbe's period-pairing matrices.  Reduction mod Q
keeps the sqrt2 coordinate of Q(sqrt2) scalars.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exact_linalg import (
    FGAbelianGroup,
    FieldScalar,
    Mat,
    Subspace,
    TorusScalar,
    fvec,
    kernel_basis_field,
    smith_normal_form,
    torus_kernel,
)
from .complexes import (
    IntegralCohomology,
    IntegralHomology,
    RZModelGroup,
    SimplicialComplex,
)
from .cdga import CDGAElement, CDGAModel
from .cohomology_ops import (
    Cochain,
    CochainError,
    FlatClass,
    FlatStructure,
    MasseyCoset,
    Undefined,
    cup,
    db_cup_flat,
    sq3_flat,
)
from .ahss_twisted_k import (
    TwistCocycle,
    UnsupportedError,
    _group_from_subquotient,
    d3_map,
)
from .twisted_derham import (
    PeriodicComplex,
    PeriodicElement,
    TwistForm,
    exp_trivialize,
    massey_differential,
)


class GerbeError(ValueError):
    pass


class OutOfFormula(ValueError):
    """Input outside the proven leading-term rule; never guessed at."""


@dataclass
class Unsupported:
    reason: str


class GerbeData:
    """A twist at desk scale: simplicial 3-cocycle, curvature 3-cocycle,
    and a period pairing certifying that they correspond.

    period_pairing maps a degree p to a matrix P with P[i][j] the pairing
    of the i-th cohomology basis class of the model against the j-th
    free homology cycle of the complex.  When the twist is nonzero the
    degree-3 matrix must carry the curvature class onto the twist
    cocycle's evaluations; this is checked exactly.
    """

    def __init__(self, K: SimplicialComplex, twist, model: CDGAModel,
                 form, period_pairing=None):
        self.K = K
        self.twist = twist if isinstance(twist, TwistCocycle) \
            else TwistCocycle(K, twist)
        self.model = model
        self.form = form if isinstance(form, TwistForm) else TwistForm(form)
        self.period_pairing = {int(p): m
                               for p, m in (period_pairing or {}).items()}
        self._homology = IntegralHomology(K)
        self._cohomology = IntegralCohomology(K)
        self._flat = {}
        self._validate()

    def flat_structure(self, p) -> FlatStructure:
        if p not in self._flat:
            self._flat[p] = FlatStructure(self.K, p, self._homology,
                                          self._cohomology)
        return self._flat[p]

    def curvature_class_coords(self):
        H = self.form.H
        if H.is_zero():
            return [FieldScalar(0)] * self.model.cohomology(3).dim
        c = self.model.cohomology(3).coords(H.component(3))
        assert c is not None
        return c

    def _twist_cycle_evals(self):
        cycles = self._homology.free_cycles(3)
        h = self.twist.h
        return [sum(a * b for a, b in zip(h.values, z)) for z in cycles]

    def _validate(self):
        for p, P in self.period_pairing.items():
            rows = self.model.cohomology(p).dim
            cols = len(self._homology.free_cycles(p))
            if (P.m, P.n) != (rows, cols):
                raise GerbeError(
                    f"pairing at degree {p} must be {rows}x{cols}, "
                    f"got {P.m}x{P.n}")
        h_evals = self._twist_cycle_evals()
        if not self.form.H.is_zero() or any(h_evals):
            if 3 not in self.period_pairing:
                raise GerbeError("nonzero twist needs a degree-3 pairing")
            got = self.transport_class(3, self.curvature_class_coords())
            if got != [FieldScalar(v) for v in h_evals]:
                raise GerbeError(
                    "period pairing does not intertwine the curvature "
                    "class with the twist cocycle")

    def transport_class(self, p, cdga_coords):
        """Carry model cohomology coordinates to dual-cycle coordinates."""
        if p not in self.period_pairing:
            raise GerbeError(f"no period pairing supplied in degree {p}")
        P = self.period_pairing[p]
        out = [FieldScalar(0)] * P.n
        for i, c in enumerate(cdga_coords):
            c = FieldScalar.coerce(c)
            if c:
                for j in range(P.n):
                    out[j] = out[j] + c * FieldScalar.coerce(P.rows[i][j])
        return out

    def transport_element(self, el: CDGAElement):
        p = el.degree
        coords = self.model.cohomology(p).coords(el.component(p))
        if coords is None:
            raise GerbeError("element is not closed")
        return p, self.transport_class(p, coords)


# ---------------------------------------------------------------------------
# classes mod Q (flat rows of the rational refined page)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RQClass:
    """Class in the H^p(-; R/Q) model: sqrt2 coordinate per free cycle."""
    degree: int
    coords: tuple

    @staticmethod
    def from_field_coords(p, field_coords):
        return RQClass(p, tuple(FieldScalar.coerce(v).mod_rationals()
                                for v in field_coords))

    def is_zero(self):
        return all(v == 0 for v in self.coords)

    def negate(self):
        return RQClass(self.degree, tuple(-v for v in self.coords))


@dataclass
class RQCoset:
    representative: RQClass
    indeterminacy: list  # RQClass generators

    def contains(self, other: RQClass) -> bool:
        n = len(self.representative.coords)
        span = Subspace(n, [fvec(list(g.coords)) for g in self.indeterminacy])
        diff = [a - b for a, b in
                zip(other.coords, self.representative.coords)]
        return span.contains(fvec(diff))

    def is_zero_coset(self) -> bool:
        n = len(self.representative.coords)
        return self.contains(RQClass(self.representative.degree,
                                     tuple([Fraction(0)] * n)))


def phi(G: GerbeData, el: CDGAElement) -> RQClass:
    """The mod-Q transport: de Rham class -> H^p(K; R/Q) model class."""
    p, coords = G.transport_element(el)
    return RQClass.from_field_coords(p, coords)


# ---------------------------------------------------------------------------
# the refined page
# ---------------------------------------------------------------------------

@dataclass
class FormEntry:
    parity: int
    dimension: int
    basis: list                  # PeriodicElement representatives
    omega0_killed: bool
    note: str = ("the degree-0 coefficient carries an integrality "
                 "constraint, reported alongside the vector-space model")


@dataclass
class DiffPage:
    r: int
    K: SimplicialComplex
    form_entries: dict           # parity -> FormEntry (the (0,0) slot)
    flat_rows: dict              # p -> RZModelGroup, at (p, q) for q < 0 odd
    gerbe: GerbeData = None

    def entry(self, p, q):
        if p == 0 and q == 0:
            return self.form_entries
        if q < 0 and (-q) % 2 == 1:
            return self.flat_rows.get(p, RZModelGroup(0))
        return None


def e2_hat(K: SimplicialComplex, G: GerbeData) -> DiffPage:
    """Assemble the refined second page for the gerbe twist.

    The (0,0) slot holds the twisted-closed elements of the periodic
    model complex in both parities; when the curvature class is nonzero
    every twisted-closed element has vanishing degree-0 component
    (constants cannot survive a nontrivial twist).  Rows q < 0 odd carry
    the circle-coefficient cohomology of the complex.
    """
    pc = PeriodicComplex(G.model, G.form)
    H_nonzero = any(v for v in G.curvature_class_coords())
    form_entries = {}
    for parity in (0, 1):
        ker = kernel_basis_field(pc.d_block(parity))
        basis = [pc.unflatten(parity, v) for v in ker]
        killed = False
        if H_nonzero and parity == 0:
            for b in basis:
                assert not any(b.component(0)), \
                    "twisted-closed form with constant term under a " \
                    "nontrivial curvature class"
            killed = True
        form_entries[parity] = FormEntry(parity, len(ker), basis, killed)
    hz = G._cohomology
    flat_rows = {}
    for p in range(K.dim + 1):
        betti = hz.group(p).free_rank
        tors = FGAbelianGroup(0, hz.group(p + 1).invariant_factors) \
            if p + 1 <= K.dim else FGAbelianGroup(0)
        flat_rows[p] = RZModelGroup(betti, tors)
    return DiffPage(2, K, form_entries, flat_rows, G)


def d_flat3(G: GerbeData, x: FlatClass, lam: int = -1) -> FlatClass:
    """First flat differential: sq3_flat(x) + the twist-pairing cup."""
    out = sq3_flat(x).cochain + db_cup_flat(G.twist.h, x, lam).cochain
    return FlatClass(out)


@dataclass
class RZHom:
    """Map of circle-model groups in evaluation coordinates.

    The circle block is an integer matrix (divisible parts only reach
    divisible parts); torsion generators may land anywhere, so their
    images are kept as full coordinate pairs.
    """
    source: RZModelGroup
    target: RZModelGroup
    torus_block: Mat
    torsion_images: list


def flat_d3_hom(G: GerbeData, p: int, lam: int = -1) -> RZHom:
    """The flat differential out of degree p, in evaluation coordinates.

    On the divisible part only the twist cup acts (the Bockstein kills
    divisible classes), so the circle block is the integer matrix of
    evaluations of lam * (dual_i cup h) against the target cycles.
    """
    src = G.flat_structure(p)
    tgt = G.flat_structure(p + 3)
    h = G.twist.h
    rows = [[0] * src.torus_rank for _ in range(tgt.torus_rank)]
    for i, dual in enumerate(src.dual_cocycles):
        y = cup(Cochain(G.K, p, "Z", dual), h).scale(lam)
        for r, z in enumerate(tgt.free_cycles):
            rows[r][i] = sum(a * b for a, b in zip(y.values, z))
    torsion_images = []
    for j in range(len(src.orders)):
        rep = src.representative([TorusScalar(0)] * src.torus_rank,
                                 [1 if i == j else 0
                                  for i in range(len(src.orders))])
        torsion_images.append(tgt.coords(d_flat3(G, rep, lam)))
    return RZHom(src.group, tgt.group,
                 Mat(tgt.torus_rank, src.torus_rank, rows), torsion_images)


def flat_d3_kernel(G: GerbeData, p: int, lam: int = -1):
    """(divisible rank, finite part) of ker(d_flat3) on H^p(; circle)."""
    return _rz_kernel(flat_d3_hom(G, p, lam))


def _rz_kernel(hom: RZHom):
    M = hom.torus_block
    tk = torus_kernel(M)
    if not hom.source.torsion.invariant_factors:
        return tk.torus_rank, tk.torsion
    # torsion generators mix into the circle part; enumerate inside a
    # denominator bound derived from the Smith form
    src_orders = hom.source.torsion.invariant_factors
    L = 1
    for d in smith_normal_form(M).diagonal():
        if d > 1:
            L *= d
    for free, _ in hom.torsion_images:
        for v in free:
            L *= v.value.denominator
    for d in src_orders:
        L *= d
    b = M.n
    total = (L ** b) * hom.source.torsion.order()
    if total > 200000:
        raise UnsupportedError("flat kernel enumeration bound exceeded")
    sols = []
    for theta in itertools.product(range(L), repeat=b):
        for cs in itertools.product(*[range(d) for d in src_orders]):
            free_out = [TorusScalar(0)] * M.m
            for i in range(b):
                for r in range(M.m):
                    if M.rows[r][i]:
                        free_out[r] = free_out[r] + TorusScalar(
                            Fraction(theta[i] * M.rows[r][i], L))
            tors_out = [TorusScalar(0)] * len(
                hom.target.torsion.invariant_factors)
            for c, (fo, to) in zip(cs, hom.torsion_images):
                if not c:
                    continue
                for r, v in enumerate(fo):
                    free_out[r] = free_out[r] + c * v
                for r, v in enumerate(to):
                    tors_out[r] = tors_out[r] + c * v
            if all(not v for v in free_out) and all(not v for v in tors_out):
                sols.append(list(theta) + list(cs))
    amb = [L] * b + list(src_orders)
    relators = [[amb[i] if j == i else 0 for j in range(len(amb))]
                for i in range(len(amb))]
    for gen in tk.divisible_generators:
        relators.append([v % L for v in gen] + [0] * len(src_orders))
    group, _ = _group_from_subquotient(sols, relators, len(amb))
    return tk.torus_rank, group


def d_flat_higher(G: GerbeData, x: RQClass, preimage: CDGAElement, k: int,
                  lam: int = -1):
    """Higher flat differential through the rational correspondence.

    Requires the de Rham preimage certificate with phi(preimage) = x;
    the answer is the transported iterated-product coset, carrying the
    same sign convention as the degree-three differential.
    """
    if preimage is None:
        return Unsupported("no rational preimage certificate supplied")
    if k < 2:
        raise ValueError("use d_flat3 for the first differential")
    if phi(G, preimage) != x:
        raise GerbeError("certificate error: phi(preimage) differs from x")
    coset = massey_differential(G.model, G.form.H, preimage, k)
    if isinstance(coset, Undefined):
        return coset
    P = coset.degree
    ncyc = len(G._homology.free_cycles(P)) if P <= G.K.dim else 0
    if P not in G.period_pairing and ncyc:
        return Unsupported(f"no period pairing supplied in degree {P}")
    zero = RQClass(P, tuple([Fraction(0)] * ncyc))
    if coset.representative.is_zero() or ncyc == 0:
        rep = zero
    else:
        rep = phi(G, coset.representative)
        if lam == -1:
            rep = rep.negate()
    ind = []
    for vec in coset.indeterminacy.basis:
        if ncyc:
            coords = G.transport_class(P, vec)
            ind.append(RQClass.from_field_coords(P, coords))
    return RQCoset(rep, ind)


def d_curv(G: GerbeData, omega: PeriodicElement, p: int) -> RQClass:
    """Leading-term curvature differential on filtration level p.

    For even p and a twisted-closed omega with all components below p
    zero, the value is the class of omega_p mod Q.  For p = 2 with a
    global potential supplied, omega_0 may be nonzero and the value is
    [omega_2 - B omega_0] mod Q.  Anything else raises OutOfFormula
    rather than guessing.
    """
    if p % 2 or p < 2:
        raise OutOfFormula("curvature differentials act in even degrees")
    pc = PeriodicComplex(G.model, G.form)
    if not pc.apply_d(omega).is_zero():
        raise CochainError("input is not twisted-closed")
    lead = omega.leading_degree()
    if lead is not None and lead < p:
        if p == 2 and lead == 0 and G.form.B is not None:
            om0 = omega.component(0)
            unit_coeff = om0[0] if om0 else FieldScalar(0)
            el = G.model.element({2: omega.component(2)}) \
                - G.form.B.scale(unit_coeff)
            coords = G.model.cohomology(2).coords(el.component(2))
            if coords is None:
                raise CochainError("omega_2 - B omega_0 is not closed")
            return RQClass.from_field_coords(
                2, G.transport_class(2, coords))
        raise OutOfFormula(
            f"components below degree {p} are nonzero; the leading-term "
            "rule does not apply")
    comp = omega.component(p)
    coords = G.model.cohomology(p).coords(comp)
    if coords is None:
        raise CochainError("leading component is not closed")
    return RQClass.from_field_coords(p, G.transport_class(p, coords))


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

@dataclass
class KhatReport:
    degree: int
    discrete_parts: dict        # p -> (divisible rank, FGAbelianGroup)
    form_entry: FormEntry
    form_note: str
    extension_ambiguous: bool
    curvature_constraints: list


def assemble_khat(K: SimplicialComplex, model: CDGAModel, G: GerbeData,
                  degree: int, lam: int = -1) -> KhatReport:
    """Surviving refined-page entries in one total degree.

    Discrete parts are the flat-row survivors (kernel of the outgoing
    flat differential modulo the incoming image); the form part is the
    twisted-closed space of matching parity, a finite stand-in for the
    corresponding space of global forms, and the report says so.
    """
    if K.dim > 4:
        raise UnsupportedError("complexes of dimension > 4 unsupported")
    if degree not in (0, 1):
        raise ValueError("assemble_khat computes degrees 0 and 1")
    page = e2_hat(K, G)
    discrete = {}
    for p in range(0, K.dim + 1):
        if p % 2 != (degree + 1) % 2:
            continue
        grp = page.flat_rows.get(p, RZModelGroup(0))
        if grp.is_trivial():
            continue
        div_rank, finite = flat_d3_kernel(G, p, lam)
        if p >= 3:
            inc = flat_d3_hom(G, p - 3, lam)
            div_rank, finite = _rz_survivor(inc, div_rank, finite)
        discrete[p] = (div_rank, finite)
    form = page.form_entries[degree % 2]
    constraints = []
    for b in form.basis:
        lead = b.leading_degree()
        if lead is not None and lead >= 2 and lead % 2 == 0 \
                and lead in G.period_pairing:
            val = d_curv(G, b, lead)
            if not val.is_zero():
                constraints.append((lead, val))
    # extension ambiguity is between distinct filtration levels; the
    # form entry and the degree-matching circle row both sit at level 0
    levels = {p for p, v in discrete.items()
              if v[0] or not v[1].is_trivial()}
    if form.dimension:
        levels.add(0)
    return KhatReport(
        degree, discrete, form,
        "form part is the twisted-closed space of the finite model, "
        "standing in for the corresponding space of global forms",
        len(levels) > 1, constraints)


def _rz_survivor(inc: RZHom, div_rank, finite):
    """Kernel data modulo the image of the incoming flat differential.

    The incoming circle block has divisible image, which lowers the
    divisible rank; finite-order incoming images inside the divisible
    part are absorbed by divisibility.  Incoming images with honest
    torsion coordinates would cut the finite part; the catalog never
    produces them, so that case stays explicitly unsupported.
    """
    img_rank = smith_normal_form(inc.torus_block).rank()
    assert div_rank >= img_rank, "incoming image escapes the kernel"
    if any(any(t for t in tors) for _, tors in inc.torsion_images):
        raise UnsupportedError(
            "incoming torsion-to-torsion images are outside the "
            "supported catalog cases")
    return div_rank - img_rank, finite


# ---------------------------------------------------------------------------
# comparison squares
# ---------------------------------------------------------------------------

def chern_compare(K: SimplicialComplex, model: CDGAModel, G: GerbeData,
                  lam: int = -1, massey_checks=()) -> dict:
    """Executable comparison squares through the period pairing.

    (i)  rationalized degree-3 differential = cup with the curvature
         class, as matrices on dual-cycle coordinates;
    (ii) the flat differential on mod-Q classes in the image of phi
         agrees with phi of the de Rham route (iterated products too,
         when certificates are supplied);
    (iii) curvature differentials read off the period pairing of the
         leading component, with the potential-corrected degree-2 case
         checked against the exponential trivialization.
    """
    report = {"square_i": {}, "square_ii": {}, "square_iii": None,
              "massey": []}
    for p in sorted(G.period_pairing):
        tgt_p = p + 3
        if tgt_p not in G.period_pairing:
            continue
        src_fs = G.flat_structure(p)
        tgt_fs = G.flat_structure(tgt_p)
        # topological route on dual-cycle coordinates
        top_cols = []
        for dual in src_fs.dual_cocycles:
            y = cup(Cochain(K, p, "Z", dual), G.twist.h).scale(lam)
            top_cols.append([sum(a * b for a, b in zip(y.values, z))
                             for z in tgt_fs.free_cycles])
        q_src = model.cohomology(p)
        q_tgt = model.cohomology(tgt_p)
        P = G.period_pairing[p]
        agree_i = True
        agree_ii = True
        for i, rep in enumerate(q_src.reps):
            el = model.element({p: rep})
            # de Rham route, transported
            out = G.form.H.wedge(el).scale(FieldScalar(lam))
            c = q_tgt.coords(out.component(tgt_p))
            derham = G.transport_class(tgt_p, c)
            # topological route applied to the transported class
            src_coords = [FieldScalar.coerce(P.rows[i][j])
                          for j in range(P.n)]
            via_top = [FieldScalar(0)] * len(tgt_fs.free_cycles)
            for idx, sc in enumerate(src_coords):
                if sc:
                    for r in range(len(tgt_fs.free_cycles)):
                        via_top[r] = via_top[r] + sc * FieldScalar(
                            top_cols[idx][r])
            if via_top != derham:
                agree_i = False
            # mod-Q version with a sqrt2 witness (torsion operations die)
            w = FieldScalar(0, 1)
            lhs_rq = RQClass.from_field_coords(
                tgt_p, [w * v for v in via_top])
            rhs_rq = RQClass.from_field_coords(
                tgt_p, [w * v for v in derham])
            if lhs_rq != rhs_rq:
                agree_ii = False
        report["square_i"][p] = agree_i
        report["square_ii"][p] = agree_ii
    for (x_el, k) in massey_checks:
        rq = phi(G, x_el)
        out = d_flat_higher(G, rq, x_el, k, lam)
        coset = massey_differential(model, G.form.H, x_el, k)
        ok = isinstance(out, RQCoset) and isinstance(coset, MasseyCoset)
        if ok:
            if coset.representative.is_zero():
                direct = RQClass(out.representative.degree,
                                 tuple([Fraction(0)] *
                                       len(out.representative.coords)))
            else:
                direct = phi(G, coset.representative)
                if lam == -1:
                    direct = direct.negate()
            ok = out.contains(direct)
        report["massey"].append(ok)
    pc = PeriodicComplex(model, G.form)
    checks = []
    for parity in (0, 1):
        for v in kernel_basis_field(pc.d_block(parity)):
            om = pc.unflatten(parity, v)
            lead = om.leading_degree()
            if lead is None or lead % 2 or lead < 2:
                continue
            if lead in G.period_pairing:
                val = d_curv(G, om, lead)
                coords = model.cohomology(lead).coords(om.component(lead))
                direct = RQClass.from_field_coords(
                    lead, G.transport_class(lead, coords))
                checks.append(val == direct)
    if G.form.B is not None and not G.form.B.is_zero() \
            and 2 in G.period_pairing and model.dim(0) == 1:
        one = PeriodicElement(model, 0, {0: [FieldScalar(1)]})
        if pc.apply_d(one).is_zero():
            val = d_curv(G, one, 2)
            fw, _ = exp_trivialize(model, G.form.H, G.form.B)
            comp2 = fw(one).component(2)
            coords = model.cohomology(2).coords(comp2)
            direct = RQClass.from_field_coords(
                2, G.transport_class(2, coords))
            checks.append(val == direct)
    report["square_iii"] = all(checks) if checks else True
    report["square_iii_count"] = len(checks)
    return report


# ---------------------------------------------------------------------------
# catalog gerbes
# ---------------------------------------------------------------------------

def standard_gerbe(name: str, m: int = 0):
    """Catalog (complex, model, gerbe) triples with computed pairings.

    The pairing is built from a degree-wise correspondence of generators
    chosen so that products match products; the constructor re-verifies
    the curvature/twist compatibility either way.
    """
    from .complexes import builtin_model
    from .cdga import builtin_cdga
    if name == "s3":
        K = builtin_model("sphere(3)")
        A = builtin_cdga("s3")
        hz = IntegralCohomology(K)
        dual3 = FlatStructure(K, 3, IntegralHomology(K), hz).dual_cocycles[0]
        tw = TwistCocycle(K, Cochain(K, 3, "Z", [m * v for v in dual3]))
        H = A.gen("x3").scale(FieldScalar(m))
        # [x3] pairs to 1 against the canonical 3-cycle
        q3 = A.cohomology(3)
        c3 = q3.coords(A.gen("x3").component(3))
        p3 = Mat.from_rows([[c.inverse() if c else FieldScalar(0)]
                            for c in c3])
        pairing = {3: p3, 0: Mat.from_rows([[FieldScalar(1)]])}
        return K, A, GerbeData(K, tw, A, TwistForm(H), pairing)
    if name == "torus3":
        K = builtin_model("torus3")
        A = builtin_cdga("torus3")
        return _exterior_gerbe(K, A, ["a1", "b1", "c1"], m)
    if name == "torus2":
        K = builtin_model("torus2_7vertex")
        A = builtin_cdga("torus2")
        return _exterior_gerbe(K, A, ["a1", "b1"], 0)
    if name == "s2_exact":
        K = builtin_model("sphere(2)")
        A = builtin_cdga("s2")
        tw = TwistCocycle(K, Cochain.zero(K, 3, "Z"))
        B = A.gen("x2").scale(FieldScalar(0, 1))  # sqrt2 x2
        pairing = {0: Mat.from_rows([[1]]), 2: Mat.from_rows([[1]])}
        G = GerbeData(K, tw, A, TwistForm(A.zero(), B), pairing)
        return K, A, G
    if name == "rp2":
        K = builtin_model("rp2_6vertex")
        A = CDGAModel([], truncate_above=2, name="rp2_rational")
        tw = TwistCocycle(K, Cochain.zero(K, 3, "Z"))
        G = GerbeData(K, tw, A, TwistForm(A.zero()),
                      {0: Mat.from_rows([[1]])})
        return K, A, G
    if name == "cp2":
        K = builtin_model("cp2_9vertex")
        A = CDGAModel([("x2", 2), ("y5", 5)],
                      differential={"y5": "x2*x2*x2"},
                      truncate_above=6, name="cp2_rational")
        tw = TwistCocycle.from_multiple(K, 0)
        hz = IntegralCohomology(K)
        hom = IntegralHomology(K)
        fs2 = FlatStructure(K, 2, hom, hz)
        fs4 = FlatStructure(K, 4, hom, hz)
        x = fs2.dual_cocycles[0]
        xx = cup(Cochain(K, 2, "Z", x), Cochain(K, 2, "Z", x))
        p4 = [[sum(a * b for a, b in zip(xx.values, z))
               for z in fs4.free_cycles]]
        pairing = {0: Mat.from_rows([[1]]), 2: Mat.identity(1),
                   4: Mat.from_rows(p4)}
        G = GerbeData(K, tw, A, TwistForm(A.zero()), pairing)
        return K, A, G
    if name == "synthetic":
        K = builtin_model("wedge(sphere(2),sphere(3),sphere(7))")
        A = builtin_cdga("synthetic_massey")
        hz = IntegralCohomology(K)
        hom = IntegralHomology(K)
        dual3 = FlatStructure(K, 3, hom, hz).dual_cocycles[0]
        tw = TwistCocycle(K, Cochain(K, 3, "Z", [m * v for v in dual3]))
        H = A.gen("x3").scale(FieldScalar(m))
        # classes: a2 <-> degree-2 dual, x3 <-> degree-3 dual,
        # [x3 b4] <-> degree-7 dual, each pairing to 1
        def dual_pairing(p, el):
            q = A.cohomology(p)
            c = q.coords(el.component(p))
            return Mat.from_rows([[v.inverse() if v else FieldScalar(0)]
                                  for v in c])
        pairing = {0: Mat.from_rows([[1]]),
                   2: dual_pairing(2, A.gen("a2")),
                   3: dual_pairing(3, A.gen("x3")),
                   7: dual_pairing(7, A.gen("x3").wedge(A.gen("b4")))}
        G = GerbeData(K, tw, A, TwistForm(H), pairing)
        return K, A, G
    raise KeyError(f"unknown gerbe preset {name!r}; available: s3, torus2, "
                   "torus3, s2_exact, rp2, cp2, synthetic")


def _exterior_gerbe(K, A, gen_names, m):
    """Pairing for a torus: match degree-1 generators with the dual
    integral cocycles, then let products define the higher pairings, so
    cup corresponds to wedge by construction.

    P at degree p solves (matched-class coordinates) * P = (evaluations
    of the matched cup products against cycles).
    """
    from .exact_linalg import solve_field
    hz = IntegralCohomology(K)
    hom = IntegralHomology(K)
    n = len(gen_names)
    fs = {p: FlatStructure(K, p, hom, hz) for p in range(n + 1)}
    duals = [Cochain(K, 1, "Z", d) for d in fs[1].dual_cocycles]
    gens = [A.gen(g) for g in gen_names]
    pairing = {0: Mat.from_rows([[1]])}
    top_cochain = None
    top_model = None
    for p in range(1, n + 1):
        matched_cochains = []
        matched_model = []
        for subset in itertools.combinations(range(n), p):
            coch = duals[subset[0]]
            el = gens[subset[0]]
            for i in subset[1:]:
                coch = cup(coch, duals[i])
                el = el.wedge(gens[i])
            matched_cochains.append(coch)
            matched_model.append(el)
        q = A.cohomology(p)
        Mrows = Mat(len(matched_model), q.dim,
                    [[FieldScalar.coerce(v)
                      for v in q.coords(el.component(p))]
                     for el in matched_model])
        evals = [[FieldScalar(sum(x * y for x, y in zip(e.values, z)))
                  for z in fs[p].free_cycles] for e in matched_cochains]
        cols = []
        for j in range(len(fs[p].free_cycles)):
            col = [evals[i][j] for i in range(len(matched_cochains))]
            sol = solve_field(Mrows, col)
            assert sol is not None, "matched classes do not span"
            cols.append(sol[0])
        pairing[p] = Mat(q.dim, len(fs[p].free_cycles),
                         [[cols[j][i] for j in range(len(cols))]
                          for i in range(q.dim)])
        if p == n:
            top_cochain = matched_cochains[0]
            top_model = matched_model[0]
    if n >= 3:
        tw = TwistCocycle(K, top_cochain.scale(m))
        H = top_model.scale(FieldScalar(m))
    else:
        tw = TwistCocycle(K, Cochain.zero(K, 3, "Z"))
        H = A.zero()
    G = GerbeData(K, tw, A, TwistForm(H), pairing)
    return K, A, G
