"""Finite CDGA models over Q(sqrt2): algebra, differential, cohomology.

A model is a free graded-commutative algebra on named generators,
truncated above a top degree.  The axioms (graded commutativity,
associativity, Leibniz, d^2 = 0) are verified exhaustively on basis
elements at construction time rather than trusted.
"""

from __future__ import annotations

import itertools
import json
import re
from fractions import Fraction

from .exact_linalg import (
    FieldScalar,
    K_ONE,
    K_ZERO,
    Mat,
    QuotientCoords,
    Subspace,
    fvec,
    kernel_basis_field,
)


class CDGAError(ValueError):
    pass


class Monomial(tuple):
    """Exponent vector over the generator list; the basis of a free model."""

    def degree(self, gens):
        return sum(e * g[1] for e, g in zip(self, gens))

    def label(self, gens):
        parts = []
        for e, (name, _) in zip(self, gens):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


def _koszul_sign(m1, m2, gens):
    """Sign for reordering m1 * m2 into the canonical sorted monomial."""
    crossings = 0
    for a in range(len(gens)):
        if gens[a][1] % 2 == 0 or m2[a] == 0:
            continue
        for b in range(a + 1, len(gens)):
            if gens[b][1] % 2 and m1[b]:
                crossings += m2[a] * m1[b]
    return -1 if crossings % 2 else 1


class CDGAModel:
    """Free graded-commutative DGA on generators, truncated above a degree."""

    def __init__(self, generators, differential=None, truncate_above=None,
                 name=None, check=True):
        self.name = name
        self.gens = [(str(n), int(d)) for n, d in generators]
        if any(d <= 0 for _, d in self.gens):
            raise CDGAError("generator degrees must be positive")
        if truncate_above is None:
            if any(d % 2 == 0 for _, d in self.gens):
                raise CDGAError(
                    "truncation degree required with even generators")
            truncate_above = sum(d for _, d in self.gens)
        self.top = int(truncate_above)
        self._build_basis()
        self._build_products()
        self._build_differential(differential or {})
        if check:
            self._check_axioms()
        self._cohomology_cache = {}

    # -- construction ------------------------------------------------

    def _build_basis(self):
        gens = self.gens
        ranges = []
        for _, d in gens:
            if d % 2:
                ranges.append(range(2))
            else:
                ranges.append(range(self.top // d + 1))
        self.basis = {p: [] for p in range(self.top + 1)}
        self.basis_index = {}
        for exps in itertools.product(*ranges):
            m = Monomial(exps)
            p = m.degree(gens)
            if p <= self.top:
                self.basis_index[m] = (p, len(self.basis[p]))
                self.basis[p].append(m)
        self.unit = Monomial((0,) * len(gens))

    def dim(self, p):
        return len(self.basis.get(p, []))

    def _mul_monomials(self, m1, m2):
        """(sign, monomial) or None when the product dies."""
        exps = tuple(a + b for a, b in zip(m1, m2))
        for e, (_, d) in zip(exps, self.gens):
            if d % 2 and e > 1:
                return None
        m = Monomial(exps)
        if m.degree(self.gens) > self.top:
            return None
        return _koszul_sign(m1, m2, self.gens), m

    def _build_products(self):
        self._prod = {}
        for m1 in self.basis_index:
            for m2 in self.basis_index:
                r = self._mul_monomials(m1, m2)
                if r is not None:
                    self._prod[(m1, m2)] = r

    def _build_differential(self, diff_spec):
        """diff_spec: generator name -> CDGAElement-like or expression."""
        gen_diff = {}
        for key, value in diff_spec.items():
            if key not in {n for n, _ in self.gens}:
                raise CDGAError(f"differential on unknown generator {key!r}")
            if isinstance(value, CDGAElement):
                # rebind to this instance (bases agree for equal gens/top)
                el = self.element(dict(value.components))
            else:
                el = self.parse_element(value)
            gen_diff[key] = el
        self._d_basis = {}
        for m, (p, _) in self.basis_index.items():
            out = self.zero()
            degs = [e * d for e, (_, d) in zip(m, self.gens)]
            for gi, ((gname, gdeg), e) in enumerate(zip(self.gens, m)):
                if e == 0:
                    continue
                dg = gen_diff.get(gname)
                if dg is None or dg.is_zero():
                    continue
                # jump d over the prefix, then move dg back past the suffix:
                # d(A g^e B) = +- e * (A g^{e-1} B) ^ dg
                prefix = sum(degs[:gi])
                suffix = sum(degs[gi + 1:])
                sign = e
                if prefix % 2:
                    sign = -sign
                if ((gdeg + 1) * suffix) % 2:
                    sign = -sign
                rest = list(m)
                rest[gi] = e - 1
                rest_el = self.monomial_element(Monomial(tuple(rest)))
                out = out + rest_el.wedge(dg).scale(FieldScalar(sign))
            self._d_basis[m] = out

    def _check_axioms(self):
        items = list(self.basis_index)
        for m1 in items:
            p1 = m1.degree(self.gens)
            for m2 in items:
                p2 = m2.degree(self.gens)
                a = self.monomial_element(m1)
                b = self.monomial_element(m2)
                ab = a * b
                ba = b * a
                sign = -1 if (p1 * p2) % 2 else 1
                assert ab == ba.scale(FieldScalar(sign)), \
                    f"graded commutativity fails on {m1}, {m2}"
                # Leibniz
                lhs = ab.d()
                rhs = a.d() * b + a.scale(
                    FieldScalar(-1 if p1 % 2 else 1)).wedge(b.d())
                assert lhs == rhs, f"Leibniz fails on {m1}, {m2}"
        for m in items:
            el = self.monomial_element(m)
            assert el.d().d().is_zero(), f"d^2 != 0 on {m}"
        # associativity on basis triples
        for m1, m2, m3 in itertools.product(items, repeat=3):
            r12 = self._prod.get((m1, m2))
            r23 = self._prod.get((m2, m3))
            lhs_sign = lhs_mon = None
            if r12 is not None:
                s, m = r12
                r = self._prod.get((m, m3))
                if r is not None:
                    lhs_sign, lhs_mon = s * r[0], r[1]
            rhs_sign = rhs_mon = None
            if r23 is not None:
                s, m = r23
                r = self._prod.get((m1, m))
                if r is not None:
                    rhs_sign, rhs_mon = s * r[0], r[1]
            assert (lhs_sign, lhs_mon) == (rhs_sign, rhs_mon), \
                f"associativity fails on {m1}, {m2}, {m3}"

    # -- element factories ---------------------------------------------

    def zero(self):
        return CDGAElement(self, {})

    def one(self):
        return self.monomial_element(self.unit)

    def monomial_element(self, m):
        p, i = self.basis_index[m]
        vec = [K_ZERO] * self.dim(p)
        vec[i] = K_ONE
        return CDGAElement(self, {p: vec})

    def gen(self, name):
        for gi, (n, d) in enumerate(self.gens):
            if n == name:
                exps = [0] * len(self.gens)
                exps[gi] = 1
                return self.monomial_element(Monomial(tuple(exps)))
        raise CDGAError(f"no generator named {name!r}")

    def element(self, components):
        """components: degree -> coefficient vector."""
        comp = {}
        for p, vec in components.items():
            vec = fvec(vec)
            assert len(vec) == self.dim(p)
            if any(v for v in vec):
                comp[p] = vec
        return CDGAElement(self, comp)

    def basis_element(self, p, i):
        return self.monomial_element(self.basis[p][i])

    def parse_element(self, expr):
        """Parse '2*x3*a2 - b4' style expressions into an element."""
        s = expr.replace("-", "+-").replace(" ", "")
        out = self.zero()
        for term in s.split("+"):
            if not term:
                continue
            coeff = FieldScalar(1)
            el = self.one()
            if term == "-":
                raise CDGAError(f"dangling sign in {expr!r}")
            if term.startswith("-"):
                coeff = FieldScalar(-1)
                term = term[1:]
            for factor in term.split("*"):
                if factor == "sqrt2":
                    coeff = coeff * FieldScalar(0, 1)
                elif re.fullmatch(r"\d+(/\d+)?", factor):
                    coeff = coeff * FieldScalar(Fraction(factor))
                else:
                    if "^" in factor:
                        base, e = factor.split("^")
                        for _ in range(int(e)):
                            el = el * self.gen(base)
                    else:
                        el = el * self.gen(factor)
            out = out + el.scale(coeff)
        return out

    # -- differential and cohomology -------------------------------------

    def d_matrix(self, p):
        """Matrix of d: degree p -> degree p+1 in the monomial bases."""
        rows = [[K_ZERO] * self.dim(p) for _ in range(self.dim(p + 1))]
        for i, m in enumerate(self.basis.get(p, [])):
            dm = self._d_basis[m]
            vec = dm.component(p + 1)
            for r in range(self.dim(p + 1)):
                rows[r][i] = vec[r]
        return Mat(self.dim(p + 1), self.dim(p), rows)

    def cocycles(self, p) -> Subspace:
        return Subspace(self.dim(p), kernel_basis_field(self.d_matrix(p)))

    def coboundaries(self, p) -> Subspace:
        if p == 0:
            return Subspace(self.dim(0))
        dm = self.d_matrix(p - 1)
        return Subspace(self.dim(p),
                        [dm.column(j) for j in range(dm.n)])

    def cohomology(self, p) -> QuotientCoords:
        if p not in self._cohomology_cache:
            self._cohomology_cache[p] = QuotientCoords(
                self.cocycles(p), self.coboundaries(p))
        return self._cohomology_cache[p]

    def betti(self, p):
        if p < 0 or p > self.top:
            return 0
        return self.cohomology(p).dim

    def __repr__(self):
        gens = ", ".join(f"{n}[{d}]" for n, d in self.gens)
        return f"CDGAModel({gens}; top {self.top})"


class CDGAElement:
    """Finitely supported element, stored per degree."""

    def __init__(self, model, components):
        self.model = model
        self.components = {p: vec for p, vec in components.items()
                           if any(v for v in vec)}

    def component(self, p):
        return self.components.get(p, [K_ZERO] * self.model.dim(p))

    def degrees(self):
        return sorted(self.components)

    def is_zero(self):
        return not self.components

    def is_homogeneous(self):
        return len(self.components) <= 1

    @property
    def degree(self):
        ds = self.degrees()
        if len(ds) != 1:
            raise CDGAError("element is not homogeneous")
        return ds[0]

    def __add__(self, other):
        assert self.model is other.model
        comp = {}
        for p in set(self.components) | set(other.components):
            vec = [a + b for a, b in zip(self.component(p), other.component(p))]
            comp[p] = vec
        return CDGAElement(self.model, comp)

    def __sub__(self, other):
        return self + other.scale(FieldScalar(-1))

    def scale(self, c):
        c = FieldScalar.coerce(c)
        return CDGAElement(self.model,
                           {p: [c * v for v in vec]
                            for p, vec in self.components.items()})

    def wedge(self, other):
        assert self.model is other.model
        model = self.model
        out = {}
        for p1, v1 in self.components.items():
            for p2, v2 in other.components.items():
                for i1, c1 in enumerate(v1):
                    if not c1:
                        continue
                    m1 = model.basis[p1][i1]
                    for i2, c2 in enumerate(v2):
                        if not c2:
                            continue
                        m2 = model.basis[p2][i2]
                        r = model._prod.get((m1, m2))
                        if r is None:
                            continue
                        sign, m = r
                        q, j = model.basis_index[m]
                        vec = out.setdefault(q, [K_ZERO] * model.dim(q))
                        vec[j] = vec[j] + c1 * c2 * FieldScalar(sign)
        return CDGAElement(model, out)

    __mul__ = wedge

    def d(self):
        model = self.model
        out = model.zero()
        for p, vec in self.components.items():
            for i, c in enumerate(vec):
                if not c:
                    continue
                m = model.basis[p][i]
                out = out + model._d_basis[m].scale(c)
        return out

    def is_cocycle(self):
        return self.d().is_zero()

    def __eq__(self, other):
        if not isinstance(other, CDGAElement):
            return NotImplemented
        return self.model is other.model and (self - other).is_zero()

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for p in self.degrees():
            for i, c in enumerate(self.components[p]):
                if c:
                    lbl = self.model.basis[p][i].label(self.model.gens)
                    parts.append(f"({c})*{lbl}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# catalog and JSON
# ---------------------------------------------------------------------------

def from_json(text) -> CDGAModel:
    """CDGA JSON loader.

    Format: {"generators": [{"name": "x3", "degree": 3}],
             "relations": "free-graded-commutative",
             "truncate_above": 8,
             "differential": [{"on": "b4", "value": "x3*a2"}]}
    """
    try:
        data = json.loads(text)
        gens = [(g["name"], int(g["degree"])) for g in data["generators"]]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise CDGAError(f"bad CDGA JSON: {e}") from None
    rel = data.get("relations", "free-graded-commutative")
    if rel != "free-graded-commutative":
        raise CDGAError(f"unsupported relations {rel!r}")
    top = data.get("truncate_above")
    model = CDGAModel(gens, truncate_above=top, name=data.get("name"))
    diff = {}
    for entry in data.get("differential", []):
        diff[entry["on"]] = entry["value"]
    if diff:
        model = CDGAModel(gens, differential=diff, truncate_above=model.top,
                          name=data.get("name"))
    return model


_CDGA_CATALOG = {
    "s3": lambda: CDGAModel([("x3", 3)], name="s3"),
    "s5": lambda: CDGAModel([("x5", 5)], name="s5"),
    "s2": lambda: CDGAModel([("x2", 2), ("y3", 3)],
                            differential={"y3": "x2*x2"},
                            truncate_above=6, name="s2"),
    "torus2": lambda: CDGAModel([("a1", 1), ("b1", 1)], name="torus2"),
    "torus3": lambda: CDGAModel([("a1", 1), ("b1", 1), ("c1", 1)],
                                name="torus3"),
    "synthetic_massey": lambda: CDGAModel(
        [("x3", 3), ("a2", 2), ("b4", 4)],
        differential={"b4": "x3*a2"},
        truncate_above=8, name="synthetic_massey"),
}


def builtin_cdga(name) -> CDGAModel:
    if name not in _CDGA_CATALOG:
        raise CDGAError(f"unknown CDGA model {name!r}; available: "
                        + ", ".join(sorted(_CDGA_CATALOG)))
    return _CDGA_CATALOG[name]()
