"""Brute-force spectral sequence of a finite filtered cochain complex.

Pages are computed from the subquotient formulas
    Z_r^{p,q} = F_p C^{p+q}  intersect  d^{-1}(F_{p+r} C^{p+q+1})
    E_r^{p,q} = Z_r^{p,q} / (Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2})
by exact kernel/intersection linear algebra over Q(sqrt2), with no
appeal to any differential formula.  This is the ground truth the
formula-based differentials are checked against.

Both bounded Z-graded complexes and 2-periodic (parity-graded)
complexes are supported; entries are keyed by (p, total degree), with
the total degree taken mod 2 in the periodic case.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact_linalg import (
    Mat,
    QuotientCoords,
    Subspace,
    fvec,
    full_space,
    kernel_basis_field,
    preimage,
)


class FiltrationError(ValueError):
    pass


class FilteredComplex:
    """Graded spaces with differential and a bounded decreasing filtration.

    spaces: {degree: dimension}; maps: {degree: Mat} with map n landing
    in degree n+1 (mod 2 when periodic).  filtration: {p: {degree:
    spanning vectors}} for 1 <= p <= top; F_p is everything for p <= 0
    and zero for p > top.
    """

    def __init__(self, spaces, maps, filtration, periodic=False):
        self.periodic = periodic
        self.spaces = dict(spaces)
        self.maps = {n: m for n, m in maps.items()}
        self.top = max(filtration) if filtration else 0
        self._F = {}
        for p, per_degree in filtration.items():
            for n, vectors in per_degree.items():
                self._F[(p, n)] = Subspace(self.dim(n),
                                           [fvec(v) for v in vectors])
        self._validate()
        self._Z_cache = {}

    # -- grading helpers ---------------------------------------------

    def degrees(self):
        return sorted(self.spaces)

    def next_deg(self, n):
        return (n + 1) % 2 if self.periodic else n + 1

    def prev_deg(self, n):
        return (n + 1) % 2 if self.periodic else n - 1

    def dim(self, n):
        return self.spaces.get(n, 0)

    def dmat(self, n) -> Mat:
        if n in self.maps:
            return self.maps[n]
        return Mat(self.dim(self.next_deg(n)), self.dim(n))

    def F(self, p, n) -> Subspace:
        if p <= 0:
            return full_space(self.dim(n))
        if p > self.top:
            return Subspace(self.dim(n))
        return self._F.get((p, n), Subspace(self.dim(n)))

    # -- validation ----------------------------------------------------

    def _validate(self):
        for n in self.degrees():
            d1 = self.dmat(n)
            if d1.n != self.dim(n) or d1.m != self.dim(self.next_deg(n)):
                raise FiltrationError(f"differential at degree {n} has "
                                      "inconsistent shape")
            d2 = self.dmat(self.next_deg(n))
            comp = d2 * d1
            if any(any(x for x in row) for row in comp.rows):
                raise FiltrationError(f"d^2 != 0 out of degree {n}")
        for p in range(1, self.top + 1):
            for n in self.degrees():
                Fp = self.F(p, n)
                if not all(self.F(p - 1, n).contains(b) for b in Fp.basis):
                    raise FiltrationError(
                        f"filtration not decreasing at (p={p}, n={n})")
                img = Fp.image(self.dmat(n))
                tgt = self.F(p, self.next_deg(n))
                if not all(tgt.contains(b) for b in img.basis):
                    raise FiltrationError(
                        f"d does not preserve F_{p} at degree {n}")

    # -- subquotient spaces ---------------------------------------------

    def Z(self, r, p, n) -> Subspace:
        """F_p C^n intersect d^{-1}(F_{p+r} C^{n+1})."""
        key = (r, p, n)
        if key not in self._Z_cache:
            Fp = self.F(p, n)
            target = self.F(p + r, self.next_deg(n))
            self._Z_cache[key] = Fp.intersect(preimage(self.dmat(n), target))
        return self._Z_cache[key]


@dataclass
class PageEntry:
    p: int
    n: int
    numerator: Subspace
    quotient: QuotientCoords

    @property
    def dim(self):
        return self.quotient.dim

    def coords(self, vector):
        """Class coordinates of a total-complex vector; None if not in Z_r."""
        return self.quotient.coords(vector)

    def representative(self, coords):
        out = fvec([0] * self.numerator.ambient_dim)
        for c, rep in zip(coords, self.quotient.reps):
            out = [a + c * b for a, b in zip(out, rep)]
        return out


class OraclePage:
    """One page of the spectral sequence: entries plus differentials."""

    def __init__(self, F: FilteredComplex, r: int):
        if r < 1:
            raise FiltrationError("pages are defined for r >= 1")
        self.F = F
        self.r = r
        self.entries = {}
        self.differentials = {}
        for p in range(0, F.top + 1):
            for n in F.degrees():
                e = self._entry(p, n)
                if e.dim or e.numerator.dim:
                    self.entries[(p, n)] = e
        for (p, n), e in self.entries.items():
            self.differentials[(p, n)] = self._differential(e)

    def _entry(self, p, n) -> PageEntry:
        F, r = self.F, self.r
        Z = F.Z(r, p, n)
        B1 = F.Z(r - 1, p + 1, n)
        prev = F.prev_deg(n)
        Zsrc = F.Z(r - 1, p - r + 1, prev)
        B2 = Zsrc.image(F.dmat(prev))
        B = B1.sum(B2).intersect(Z)
        return PageEntry(p, n, Z, QuotientCoords(Z, B))

    def entry(self, p, q):
        """Access by (p, q); q enters only through the total degree."""
        n = p + q
        if self.F.periodic:
            n %= 2
        return self.entries.get((p, n))

    def entry_dim(self, p, q):
        e = self.entry(p, q)
        return e.dim if e else 0

    def _differential(self, e: PageEntry) -> Mat:
        F, r = self.F, self.r
        tp, tn = e.p + r, F.next_deg(e.n)
        target = self.entries.get((tp, tn))
        tdim = target.dim if target else 0
        cols = []
        d = F.dmat(e.n)
        for rep in e.quotient.reps:
            w = d.matvec(fvec(rep))
            if target is None:
                cols.append([0] * 0)
                continue
            c = target.coords(w)
            assert c is not None, "differential leaves Z_r: broken page"
            cols.append(c)
        rows = [[cols[j][i] for j in range(len(cols))] for i in range(tdim)]
        return Mat(tdim, e.dim, rows)

    def differential(self, p, q):
        n = p + q
        if self.F.periodic:
            n %= 2
        return self.differentials.get((p, n))


def page(F: FilteredComplex, r: int) -> OraclePage:
    return OraclePage(F, r)


@dataclass
class ConvergenceReport:
    einf: OraclePage
    stable_r: int
    total_cohomology: dict  # degree -> dimension
    graded_dims: dict       # (p, n) -> dimension


def converged(F: FilteredComplex) -> ConvergenceReport:
    """Run pages until stable; compare E_infinity with H(C) directly.

    Stability is forced at r = top + 2 since the filtration is bounded;
    the induced filtration on cohomology is computed independently and
    its graded pieces are required to match the stable page.
    """
    stable_r = F.top + 2
    einf = OraclePage(F, stable_r)
    total = {}
    graded = {}
    for n in F.degrees():
        dn = F.dmat(n)
        prev = F.prev_deg(n)
        ker = Subspace(F.dim(n), kernel_basis_field(dn))
        im = full_space(F.dim(prev)).image(F.dmat(prev))
        total[n] = ker.dim - im.dim
        for p in range(0, F.top + 1):
            num = F.F(p, n).intersect(ker).sum(im)
            den = F.F(p + 1, n).intersect(ker).sum(im)
            graded[(p, n)] = num.dim - den.dim
    for n in F.degrees():
        assert total[n] == sum(graded[(p, n)] for p in range(F.top + 1)), \
            "graded pieces do not fill the total cohomology"
        assert total[n] == sum(einf.entry_dim(p, n - p)
                               for p in range(F.top + 1)), \
            "E_infinity total dimension disagrees with H(C)"
    for (p, n), d in graded.items():
        assert einf.entry_dim(p, n - p) == d, \
            f"E_infinity entry ({p},{n}) disagrees with the filtration on H"
    return ConvergenceReport(einf, stable_r, total, graded)
