"""Randomized CDGA corpus and cached fixtures shared by the test files."""

import functools
import random

from twistedk.exact_linalg import FieldScalar
from twistedk.cdga import CDGAModel
from twistedk.filtered_ss import page
from twistedk.twisted_derham import (
    PeriodicComplex,
    massey_vs_oracle,
)


@functools.lru_cache(maxsize=None)
def gerbe(name, m=0):
    """Cached standard gerbe triples; treat the results as read-only."""
    from twistedk.diff_refinement import standard_gerbe
    return standard_gerbe(name, m)


def random_cdga_with_twist(rng, max_basis=40):
    """A random free graded-commutative model with d^2 = 0 and a twist.

    Generators get differentials supported on monomials in closed
    generators only, which makes d^2 = 0 automatic; the full axiom check
    still runs in the constructor.  The twist is a random closed
    degree-3 element.
    """
    while True:
        ngens = rng.randint(1, 4)
        degs = sorted(rng.randint(1, 5) for _ in range(ngens))
        gens = [(f"g{i}d{d}", d) for i, d in enumerate(degs)]
        top = rng.randint(6, 9)
        base = CDGAModel(gens, truncate_above=top, check=False)
        if sum(base.dim(p) for p in range(top + 1)) > max_basis:
            continue
        closed = set()
        diff = {}
        for gi, (name, d) in enumerate(gens):
            if rng.random() < 0.55:
                closed.add(gi)
                continue
            cands = [m for m in base.basis.get(d + 1, [])
                     if all(e == 0 or j in closed for j, e in enumerate(m))]
            value = base.zero()
            for m in cands:
                c = rng.randint(-2, 2)
                if c:
                    value = value + base.monomial_element(m).scale(
                        FieldScalar(c))
            if value.is_zero():
                closed.add(gi)
            else:
                diff[name] = value
        model = CDGAModel(gens, differential=diff, truncate_above=top)
        c3 = model.cocycles(3)
        H = model.zero()
        for b in c3.basis:
            c = rng.randint(-2, 2)
            if c:
                H = H + model.element({3: b}).scale(FieldScalar(c))
        if H.is_zero() and c3.dim and rng.random() < 0.8:
            H = model.element({3: c3.basis[rng.randrange(c3.dim)]})
        return model, H


def random_filtered_complex(rng, periodic=False):
    """Random complex with d^2 = 0 via a projection splitting.

    Each degree splits as X + Y; d kills X and maps Y into the next X,
    which forces d^2 = 0.  The filtration takes spans of random vectors
    closed up under d, nested by construction.
    """
    from twistedk.exact_linalg import K_ZERO, Mat, fvec
    from twistedk.filtered_ss import FilteredComplex
    if periodic:
        degs = [0, 1]
    else:
        degs = list(range(rng.randint(2, 4)))
    dims = {n: rng.randint(1, 5) for n in degs}
    xdim = {n: rng.randint(0, dims[n]) for n in degs}

    def nxt(n):
        return (n + 1) % 2 if periodic else n + 1

    maps = {}
    for n in degs:
        tgt = nxt(n)
        tdim = dims.get(tgt, 0)
        rows = []
        for i in range(tdim):
            row = []
            for j in range(dims[n]):
                if j >= xdim[n] and i < xdim.get(tgt, 0):
                    row.append(FieldScalar(rng.randint(-2, 2)))
                else:
                    row.append(K_ZERO)
            rows.append(row)
        maps[n] = Mat(tdim, dims[n], rows)

    top = rng.randint(1, 3)
    filtration = {}
    prev_sets = {n: None for n in degs}
    for p in range(top, 0, -1):
        level = {}
        for n in degs:
            count = rng.randint(0, dims[n])
            vecs = [fvec([rng.randint(-2, 2) for _ in range(dims[n])])
                    for _ in range(count)]
            if prev_sets[n]:
                vecs += prev_sets[n]
            level[n] = vecs
            prev_sets[n] = list(vecs)
        for n in degs:
            img = [maps[n].matvec(v) for v in level.get(n, [])]
            tgt = nxt(n)
            if tgt in level:
                level[tgt] = level[tgt] + img
                prev_sets[tgt] = list(level[tgt])
        filtration[p] = level
    return FilteredComplex(dims, maps, filtration, periodic=periodic)


def field_rank(M):
    if M is None or M.n == 0 or M.m == 0:
        return 0
    from twistedk.exact_linalg import rref
    _, piv = rref(M)
    return len(piv)


def surviving_class_walk(model, H, max_k=3):
    """Yield oracle agreements for every surviving page class.

    For each odd page r = 2k+1 the oracle entries are enumerated; each
    basis class gives a leading-representative cocycle that is fed back
    through the Massey machinery and compared in page coordinates.
    """
    pc = PeriodicComplex(model, H)
    F = pc.as_filtration()
    out = []
    for k in range(1, max_k + 1):
        r = 2 * k + 1
        pg = page(F, r)
        for (p, n), entry in sorted(pg.entries.items()):
            if entry.dim == 0:
                continue
            for i in range(entry.dim):
                coords = [FieldScalar(1 if j == i else 0)
                          for j in range(entry.dim)]
                per = pc.unflatten(n, entry.representative(coords))
                lead = per.component(p)
                if not any(lead):
                    continue
                x = model.element({p: lead})
                res = massey_vs_oracle(model, H, x, k, pc=pc, pg=pg)
                out.append(res)
    return out
