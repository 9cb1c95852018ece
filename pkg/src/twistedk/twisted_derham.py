"""The 2-periodic twisted complex (Omega*[u, u^-1], d_H) over a finite
CDGA model: twisted cohomology, the degree filtration, exponential
trivializations, and the Massey-product form of the odd differentials,
cross-checked against the brute-force page oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact_linalg import (
    FieldScalar,
    K_ONE,
    K_ZERO,
    Mat,
    Subspace,
    kernel_basis_field,
)
from .cdga import CDGAElement, CDGAModel, CDGAError
from .cohomology_ops import MasseyCoset, Undefined, massey_iterated
from .filtered_ss import FilteredComplex, OraclePage, converged, page


class TwistError(ValueError):
    pass


@dataclass
class TwistForm:
    """A degree-3 cocycle twist, with an optional global potential."""
    H: CDGAElement
    B: CDGAElement = None

    def __post_init__(self):
        if not self.H.is_zero():
            if self.H.degree != 3:
                raise TwistError("twist form must have degree 3")
            if not self.H.is_cocycle():
                raise TwistError("twist form is not closed")
        if self.B is not None and not (self.B.d() - self.H).is_zero():
            raise TwistError("potential does not satisfy dB = H")


class PeriodicElement:
    """Element of the 2-periodic complex: components of one parity.

    The u-power is implicit in the grading; the component in degree p
    stands for omega_p u^{p/2 rounded}."""

    def __init__(self, model: CDGAModel, parity: int, components):
        self.model = model
        self.parity = parity % 2
        comp = {}
        for p, vec in components.items():
            if p % 2 != self.parity:
                raise TwistError(f"component degree {p} has wrong parity")
            if any(FieldScalar.coerce(v) for v in vec):
                comp[p] = [FieldScalar.coerce(v) for v in vec]
        self.components = comp

    @staticmethod
    def from_element(el: CDGAElement, parity=None):
        degs = el.degrees()
        if parity is None:
            if not degs:
                raise TwistError("zero element needs an explicit parity")
            parity = degs[0] % 2
        return PeriodicElement(el.model, parity, dict(el.components))

    def component(self, p):
        return self.components.get(p, [K_ZERO] * self.model.dim(p))

    def as_element(self) -> CDGAElement:
        return CDGAElement(self.model, dict(self.components))

    def is_zero(self):
        return not self.components

    def leading_degree(self):
        return min(self.components) if self.components else None

    def __add__(self, other):
        assert self.model is other.model and self.parity == other.parity
        out = {}
        for p in set(self.components) | set(other.components):
            out[p] = [a + b for a, b in zip(self.component(p),
                                            other.component(p))]
        return PeriodicElement(self.model, self.parity, out)

    def scale(self, c):
        c = FieldScalar.coerce(c)
        return PeriodicElement(self.model, self.parity,
                               {p: [c * v for v in vec]
                                for p, vec in self.components.items()})

    def wedge(self, el: CDGAElement) -> "PeriodicElement":
        degs = el.degrees()
        if not degs:
            return PeriodicElement(self.model, self.parity, {})
        parities = {d % 2 for d in degs}
        if len(parities) > 1:
            raise TwistError("wedge factor must have pure parity")
        par = (self.parity + parities.pop()) % 2
        prod = el.wedge(self.as_element())
        return PeriodicElement(self.model, par, dict(prod.components))

    def __eq__(self, other):
        if not isinstance(other, PeriodicElement):
            return NotImplemented
        return (self.model is other.model and self.parity == other.parity
                and self.components == other.components)

    def __repr__(self):
        return f"PeriodicElement(parity {self.parity}, " \
               f"{self.as_element()!r})"


class PeriodicComplex:
    """(Omega*[u, u^-1], d_H) for a CDGA model and twist form."""

    def __init__(self, model: CDGAModel, twist):
        self.model = model
        if isinstance(twist, CDGAElement):
            twist = TwistForm(twist)
        self.twist = twist
        self.H = twist.H
        self._layout = {}
        for parity in (0, 1):
            degs = [p for p in range(parity, model.top + 1, 2)]
            offsets = {}
            off = 0
            for p in degs:
                offsets[p] = off
                off += model.dim(p)
            self._layout[parity] = (degs, offsets, off)

    def dim(self, parity):
        return self._layout[parity % 2][2]

    def degrees(self, parity):
        return self._layout[parity % 2][0]

    def flatten(self, x: PeriodicElement):
        degs, offsets, total = self._layout[x.parity]
        vec = [K_ZERO] * total
        for p, comp in x.components.items():
            off = offsets[p]
            for i, v in enumerate(comp):
                vec[off + i] = v
        return vec

    def unflatten(self, parity, vec) -> PeriodicElement:
        degs, offsets, total = self._layout[parity % 2]
        comps = {}
        for p in degs:
            off = offsets[p]
            comps[p] = [FieldScalar.coerce(v)
                        for v in vec[off:off + self.model.dim(p)]]
        return PeriodicElement(self.model, parity, comps)

    def apply_d(self, x: PeriodicElement) -> PeriodicElement:
        """(d omega)_p+1 = d omega_p, plus H wedge omega_{p-2} in p+1."""
        el = x.as_element()
        out = el.d() + self.H.wedge(el)
        return PeriodicElement.from_element(out, x.parity + 1) \
            if not out.is_zero() \
            else PeriodicElement(self.model, x.parity + 1, {})

    def d_block(self, parity) -> Mat:
        n = self.dim(parity)
        m = self.dim(parity + 1)
        cols = []
        for p in self.degrees(parity):
            for i in range(self.model.dim(p)):
                basis_el = PeriodicElement(
                    self.model, parity,
                    {p: [K_ONE if j == i else K_ZERO
                         for j in range(self.model.dim(p))]})
                cols.append(self.flatten(self.apply_d(basis_el)))
        rows = [[cols[j][i] for j in range(n)] for i in range(m)]
        return Mat(m, n, rows)

    def twisted_cohomology(self):
        """(even dim, odd dim, bases of representatives)."""
        d_even = self.d_block(0)
        d_odd = self.d_block(1)
        out = []
        for parity, d_out, d_in in ((0, d_even, d_odd), (1, d_odd, d_even)):
            ker = Subspace(self.dim(parity), kernel_basis_field(d_out))
            im_cols = [d_in.column(j) for j in range(d_in.n)]
            im = Subspace(self.dim(parity), im_cols)
            from .exact_linalg import QuotientCoords
            q = QuotientCoords(ker, im.intersect(ker))
            out.append((q.dim, [self.unflatten(parity, r) for r in q.reps]))
        (even_dim, even_basis), (odd_dim, odd_basis) = out
        return even_dim, odd_dim, even_basis, odd_basis

    def as_filtration(self) -> FilteredComplex:
        """The degree filtration: F_p keeps components of degree >= p."""
        spaces = {0: self.dim(0), 1: self.dim(1)}
        maps = {0: self.d_block(0), 1: self.d_block(1)}
        filtration = {}
        for p in range(1, self.model.top + 1):
            level = {}
            for parity in (0, 1):
                degs, offsets, total = self._layout[parity]
                vecs = []
                for q in degs:
                    if q >= p:
                        off = offsets[q]
                        for i in range(self.model.dim(q)):
                            v = [K_ZERO] * total
                            v[off + i] = K_ONE
                            vecs.append(v)
                level[parity] = vecs
            filtration[p] = level
        return FilteredComplex(spaces, maps, filtration, periodic=True)


def twisted_differential(model: CDGAModel, H):
    """The operator of the twisted complex; raises if H is unusable."""
    pc = PeriodicComplex(model, H)
    return pc.apply_d


def twisted_cohomology(model: CDGAModel, H):
    pc = PeriodicComplex(model, H)
    even, odd, _, _ = pc.twisted_cohomology()
    return even, odd


def as_filtration(model: CDGAModel, H) -> FilteredComplex:
    return PeriodicComplex(model, H).as_filtration()


def exp_trivialize(model: CDGAModel, H, B):
    """Chain isomorphism (Omega, d) -> (Omega, d_H) by e^{-B} wedge (-).

    Requires dB = H; the exponential is a finite sum since B is
    nilpotent in a truncated model.  The inverse is e^{B} wedge (-).
    """
    tf = TwistForm(H if isinstance(H, CDGAElement) else H.H, B)

    def exp_of(el):
        total = model.one()
        power = model.one()
        j = 1
        while True:
            power = power.wedge(el)
            if power.is_zero():
                break
            total = total + power.scale(FieldScalar(
                Fraction(1, _factorial(j))))
            j += 1
        return total

    e_minus = exp_of(B.scale(FieldScalar(-1)))
    e_plus = exp_of(B)

    def forward(x: PeriodicElement) -> PeriodicElement:
        return x.wedge(e_minus)

    def backward(x: PeriodicElement) -> PeriodicElement:
        return x.wedge(e_plus)

    return forward, backward


def _factorial(j):
    out = 1
    for i in range(2, j + 1):
        out *= i
    return out


# ---------------------------------------------------------------------------
# Massey differentials and the oracle cross-check
# ---------------------------------------------------------------------------

from .cohomology_ops import solve_defining_system as build_defining_system


def massey_differential(model: CDGAModel, H: CDGAElement, x: CDGAElement,
                        k: int):
    """The page-(2k+1) differential on [x] as an iterated-product coset.

    With the twisted differential d + H wedge (-), the subquotient
    differential of the degree filtration equals the iterated product
    built from d x_(j) = -(H wedge x_(j-1)) with representative
    H wedge x_(k-1); see massey_vs_oracle for the executable proof.
    Undefined(j) propagates when the class does not survive.
    """
    return massey_iterated(model, H, x, k)


@dataclass
class OracleAgreement:
    k: int
    source_degree: int
    survived: bool
    coset: object              # MasseyCoset | Undefined
    oracle_value: list | None  # page coordinates of the oracle differential
    massey_value: list | None  # page coordinates of the massey coset rep
    agrees: bool
    indeterminacy_absorbed: bool


def massey_vs_oracle(model: CDGAModel, H: CDGAElement, x: CDGAElement,
                     k: int, pc: PeriodicComplex = None,
                     pg: OraclePage = None) -> OracleAgreement:
    """Compare massey_differential with the subquotient oracle.

    Builds the full defining system, feeds it to the oracle page as a
    d_{2k+1} source, and compares coordinates in the target entry; the
    Massey indeterminacy must be absorbed by the page denominator.
    """
    if pc is None:
        pc = PeriodicComplex(model, H)
    r = 2 * k + 1
    if pg is None:
        pg = page(pc.as_filtration(), r)
    assert pg.r == r
    p = x.degree
    stages = build_defining_system(model, H, x, k)
    if isinstance(stages, Undefined):
        # the class cannot survive: its earlier differential is nonzero
        return OracleAgreement(k, p, False, stages, None, None, True, True)
    omega = PeriodicElement(model, p % 2,
                            {p + 2 * j: stages[j].component(p + 2 * j)
                             for j in range(k)})
    src = pg.entries.get((p, p % 2))
    assert src is not None, "surviving class has no source entry"
    c = src.coords(pc.flatten(omega))
    assert c is not None, "defining system element is not in Z_r"
    dmat = pg.differentials[(p, p % 2)]
    v_oracle = dmat.matvec(c)

    coset = massey_differential(model, H, x, k)
    P = p + 2 * k + 1
    tgt = pg.entries.get((P, (p + 1) % 2))
    if tgt is None or tgt.dim == 0:
        agrees = all(not v for v in v_oracle)
        return OracleAgreement(k, p, True, coset, v_oracle, None, agrees,
                               True)
    rep_per = PeriodicElement(
        model, P % 2, {P: coset.representative.component(P)})
    v_massey = tgt.coords(pc.flatten(rep_per))
    assert v_massey is not None, "massey representative is not in Z_r"
    agrees = v_oracle == v_massey
    absorbed = True
    q = model.cohomology(P)
    for ind in coset.indeterminacy.basis:
        vec = [K_ZERO] * model.dim(P)
        for ci, rep in zip(ind, q.reps):
            vec = [a + ci * b for a, b in zip(vec, rep)]
        per = PeriodicElement(model, P % 2, {P: vec})
        cc = tgt.coords(pc.flatten(per))
        if cc is None or any(v for v in cc):
            absorbed = False
    return OracleAgreement(k, p, True, coset, v_oracle, v_massey, agrees,
                           absorbed)


def survives_to_page(model, H, x, r) -> bool:
    """Does [x] define a nonzero-or-zero class in E_r (i.e. lie in Z_r)?"""
    k = (r - 1) // 2
    return not isinstance(build_defining_system(model, H, x, max(k, 1)),
                          Undefined)
