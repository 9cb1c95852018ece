"""Acceptance gate: every headline identity at exact tolerance.

Each criterion prints one PASS/FAIL line (run with -s to see them all);
all arithmetic is exact, so the tolerances are literal equality.
"""

import io
import json
import random
import time
from contextlib import redirect_stdout
from fractions import Fraction

from corpus import (
    field_rank,
    gerbe,
    random_cdga_with_twist,
    random_filtered_complex,
    surviving_class_walk,
)
from twistedk.cli import main as cli_main
from twistedk.exact_linalg import (
    FGAbelianGroup,
    FieldScalar,
    Mat,
    SQRT2,
    TorusScalar,
    int_det,
    smith_normal_form,
    torus_kernel,
)
from twistedk.complexes import (
    CochainComplexZ,
    IntegralCohomology,
    builtin_model,
    catalog_maps,
)
from twistedk.cdga import builtin_cdga
from twistedk.cohomology_ops import (
    Cochain,
    MasseyCoset,
    bockstein_QZ,
    cup,
    sq3_Z,
)
from twistedk.ahss_twisted_k import (
    TwistCocycle,
    d3_map,
    e4_and_einfinity,
    mv_s3,
    naturality_check,
)
from twistedk.twisted_derham import PeriodicComplex, twisted_cohomology
from twistedk.filtered_ss import converged, page
from twistedk.diff_refinement import (
    PeriodicElement,
    chern_compare,
    d_curv,
    d_flat3,
    flat_d3_kernel,
    phi,
)


def _announce(num, text, t0):
    dt = time.monotonic() - t0
    print(f"PASS  criterion {num} ({dt:.1f}s): {text}")


def _run_cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(argv)
    return code, buf.getvalue()


def test_criterion_1_twisted_k_of_s3():
    t0 = time.monotonic()
    for m in range(1, 13):
        t_one = time.monotonic()
        code, out = _run_cli(["ahss", "--model", "sphere(3)",
                              "--twist-int", str(m), "--pages", "4",
                              "--format", "json"])
        assert code == 0
        data = json.loads(out)
        k0 = [g for _, g in data["result"]["K0_graded"]]
        k1 = [g for _, g in data["result"]["K1_graded"]]
        assert all(g == "0" for g in k0), (m, k0)
        want = "0" if m == 1 else f"Z/{m}"
        assert [g for g in k1 if g != "0"] == ([want] if m > 1 else []), \
            (m, k1)
        assert time.monotonic() - t_one < 1.0, f"twist {m} exceeded 1 s"
    _announce(1, "graded K^0 = 0 and K^1 = Z/m on the twisted 3-sphere, "
                 "m = 1..12, each under 1 s", t0)


def test_criterion_2_mayer_vietoris_matrices():
    t0 = time.monotonic()
    for m in range(1, 13):
        rep = mv_s3(m)
        want = FGAbelianGroup(0, (m,)) if m > 1 else FGAbelianGroup(0)
        assert rep["cokernel_over_Z"] == want
        assert rep["torus_kernel_torsion"] == want
        assert rep["torus_kernel_rank"] == 0
    _announce(2, "gluing block ((1, m-1), (0, -m)): cokernel over Z and "
                 "kernel over Q/Z both Z/m, m = 1..12", t0)


def test_criterion_3_flat_d3_kernel_order():
    t0 = time.monotonic()
    for m in range(1, 13):
        K, A, G = gerbe("s3", m)
        div, fin = flat_d3_kernel(G, 0)
        assert div == 0
        assert fin.order() == m, (m, str(fin))
    _announce(3, "kernel of the flat degree-3 differential on the "
                 "3-sphere circle entry has order exactly m, m = 1..12", t0)


def test_criterion_4_twisted_derham_vanishing():
    t0 = time.monotonic()
    A = builtin_cdga("s3")
    x3 = A.gen("x3")
    for m in range(1, 7):
        H = x3.scale(FieldScalar(m))
        assert twisted_cohomology(A, H) == (0, 0)
        rep = converged(PeriodicComplex(A, H).as_filtration())
        assert rep.total_cohomology == {0: 0, 1: 0}
    assert twisted_cohomology(A, A.zero()) == (1, 1)
    rep = converged(PeriodicComplex(A, A.zero()).as_filtration())
    assert rep.total_cohomology == {0: 1, 1: 1}
    dt = time.monotonic() - t0
    assert dt < 1.0, "twisted de Rham vanishing exceeded 1 s"
    _announce(4, "twisted de Rham cohomology of the 3-sphere model "
                 "vanishes for m != 0 and is (1,1) untwisted; oracle "
                 "E_infinity agrees", t0)


def test_criterion_5_massey_equals_oracle():
    t0 = time.monotonic()
    # synthetic model first
    A = builtin_cdga("synthetic_massey")
    checks = surviving_class_walk(A, A.gen("x3"))
    assert checks, "no surviving classes found on the synthetic model"
    assert all(r.agrees and r.indeterminacy_absorbed for r in checks)
    assert any(isinstance(r.coset, MasseyCoset)
               and not r.coset.is_zero_coset() for r in checks)
    # randomized corpus
    rng = random.Random(20260810)
    models = 0
    total = 0
    nonzero = 0
    while models < 20:
        model, H = random_cdga_with_twist(rng)
        results = surviving_class_walk(model, H)
        assert all(r.agrees and r.indeterminacy_absorbed for r in results)
        total += len(results)
        nonzero += sum(1 for r in results
                       if isinstance(r.coset, MasseyCoset)
                       and not r.coset.is_zero_coset())
        models += 1
    dt = time.monotonic() - t0
    assert dt < 60.0, f"corpus took {dt:.1f} s"
    _announce(5, f"iterated products equal the subquotient oracle as "
                 f"cosets on every surviving class: synthetic model plus "
                 f"{models} random models, {total} classes "
                 f"({nonzero} nonzero differentials)", t0)


def test_criterion_6_differential_property_suite():
    t0 = time.monotonic()
    rng = random.Random(404)
    # additivity / Z-linearity
    K = builtin_model("sphere(3)")
    hz = IntegralCohomology(K)
    tw = TwistCocycle.from_multiple(K, 4, hz)
    d3 = d3_map(K, tw, -1, hz)
    hom = d3[0]
    for _ in range(20):
        a = rng.randint(-9, 9)
        b = rng.randint(-9, 9)
        fa, _t = hom.apply([a], [])
        fb, _t = hom.apply([b], [])
        fs, _t = hom.apply([a + b], [])
        assert fs == [x + y for x, y in zip(fa, fb)]
        assert hom.apply([a], [])[0] == [a * v for v in hom.apply([1], [])[0]]
    # normalization: zero twist reduces to the squaring operation alone
    for name in ["sphere(3)", "torus2_7vertex", "cp2_9vertex", "torus3"]:
        Kn = builtin_model(name)
        hzn = IntegralCohomology(Kn)
        d3n = d3_map(Kn, TwistCocycle.from_multiple(Kn, 0, hzn), -1, hzn)
        for p, homn in d3n.items():
            srcn = hzn.degree(p)
            for j, gen in enumerate(srcn.free_generators()
                                    + srcn.torsion_generators()):
                want = sq3_Z(Cochain(Kn, p, "Z", gen))
                if p + 3 <= Kn.dim:
                    wf, wt = hzn.degree(p + 3).class_coords(want.values)
                    assert homn.columns[j] == (wf, wt)
    # naturality for every catalog simplicial map
    for name, f in catalog_maps():
        hzt = IntegralCohomology(f.target)
        if f.target.dim >= 3 and hzt.group(3).free_rank:
            gen = hzt.degree(3).free_generators()[0]
            h = Cochain(f.target, 3, "Z", [3 * v for v in gen])
        else:
            h = Cochain.zero(f.target, 3, "Z")
        assert naturality_check(f, h)["commutes"], name
    # cohomology invariance under h -> h + delta(a), 50 random a
    base = {p: hom.matrix().rows for p, hom in d3.items()}
    for _ in range(50):
        a = Cochain(K, 2, "Z",
                    [rng.randint(-5, 5) for _ in range(K.count(2))])
        moved = d3_map(K, tw.h + a.delta(), -1, hz)
        assert {p: h.matrix().rows for p, h in moved.items()} == base
    _announce(6, "degree-3 differential: Z-linear, reduces to the "
                 "squaring operation at zero twist, natural for all "
                 "catalog maps, and depends only on the twist class "
                 "(50 random coboundary shifts)", t0)


def test_criterion_7_bockstein_compatibility():
    t0 = time.monotonic()
    rng = random.Random(505)
    battery = [("s3", 0), ("s3", 1), ("s3", 3), ("s3", 5), ("torus2", 0),
               ("torus3", 0), ("torus3", 2), ("s2_exact", 0), ("rp2", 0),
               ("cp2", 0), ("synthetic", 1)]
    pairs = 0
    classes = 0
    for name, m in battery:
        K, A, G = gerbe(name, m)
        hz = G._cohomology
        for p in range(K.dim + 1):
            fs = G.flat_structure(p)
            samples = []
            for i in range(fs.torus_rank):
                theta = TorusScalar(Fraction(rng.randint(1, 9), 10))
                samples.append(fs.representative(
                    [theta if j == i else TorusScalar(0)
                     for j in range(fs.torus_rank)]))
            for j in range(len(fs.orders)):
                samples.append(fs.representative(
                    [TorusScalar(0)] * fs.torus_rank,
                    [1 if i == j else 0 for i in range(len(fs.orders))]))
            for x in samples:
                classes += 1
                lhs = bockstein_QZ(d_flat3(G, x).cochain)
                if p + 4 > K.dim:
                    assert not any(lhs.values)
                    continue
                bx = bockstein_QZ(x.cochain)
                rhs = sq3_Z(bx) + cup(bx, G.twist.h).scale(-1)
                deg = hz.degree(p + 4)
                assert deg.class_coords(lhs.values) == \
                    deg.class_coords(rhs.values), (name, m, p)
        pairs += 1
    _announce(7, f"Bockstein intertwines the flat and integral degree-3 "
                 f"differentials on {classes} flat classes across "
                 f"{pairs} catalog twist pairs", t0)


def test_criterion_8_chern_character_comparison():
    t0 = time.monotonic()
    for name, m in [("s3", 1), ("s3", 5), ("s3", 12), ("torus3", 1),
                    ("torus3", 3)]:
        K, A, G = gerbe(name, m)
        rep = chern_compare(K, A, G)
        assert all(rep["square_i"].values()), (name, m)
        assert all(rep["square_ii"].values()), (name, m)
        assert rep["square_iii"], (name, m)
    # exact-twist model with a sqrt2 witness: d2 = [omega_2 - B omega_0]
    K, A, G = gerbe("s2_exact", 0)
    one = PeriodicElement(A, 0, {0: [FieldScalar(1)]})
    val = d_curv(G, one, 2)
    assert val.coords == (Fraction(-1),), "[-sqrt2 x2] mod Q"
    rep = chern_compare(K, A, G)
    assert rep["square_iii"] and rep["square_iii_count"] >= 2
    # the sqrt2-scaled leading term survives mod Q; rational inputs die
    x2 = A.gen("x2")
    assert d_curv(G, PeriodicElement(A, 0, {2: x2.component(2)}),
                  2).is_zero()
    assert not d_curv(G, PeriodicElement(
        A, 0, {2: x2.scale(SQRT2).component(2)}), 2).is_zero()
    _announce(8, "rationalized degree-3 differential = curvature product "
                 "through the period pairing (3-sphere, 3-torus); "
                 "potential-corrected degree-2 value reproduced with a "
                 "sqrt2 witness", t0)


def test_criterion_9_infrastructure_properties():
    t0 = time.monotonic()
    rng = random.Random(909)
    # 500 random Smith decompositions
    for _ in range(500):
        m = rng.randrange(0, 13)
        n = rng.randrange(0, 13)
        M = Mat(m, n, [[rng.randint(-9, 9) for _ in range(n)]
                       for _ in range(m)])
        s = smith_normal_form(M)
        assert s.U * s.D * s.V == M
        assert abs(int_det(s.U)) == 1 and abs(int_det(s.V)) == 1
        diag = s.diagonal()
        for a, b in zip(diag, diag[1:]):
            if a not in (0,) and b != 0:
                assert b % a == 0
            if a == 0:
                assert b == 0
    # 100 random filtered complexes: E_{r+1} = H(E_r, d_r)
    built = 0
    while built < 100:
        try:
            F = random_filtered_complex(rng, periodic=bool(rng.randrange(2)))
        except Exception:
            continue
        built += 1
        r = rng.randint(1, F.top + 1)
        pr = page(F, r)
        pnext = page(F, r + 1)
        for (p, n) in set(pr.entries) | set(pnext.entries):
            d_out = pr.differential(p, n - p)
            d_in = pr.differential(p - r, n - 1 - (p - r))
            dim_here = pr.entry_dim(p, n - p)
            ker = dim_here - field_rank(d_out)
            im = field_rank(d_in)
            assert pnext.entry_dim(p, n - p) == ker - im
    # structural exactness on every constructed object
    for name in ["sphere(4)", "torus2_7vertex", "cp2_9vertex", "torus3",
                 "rp2_6vertex", "s3_join(2)"]:
        CochainComplexZ(builtin_model(name))   # asserts delta^2 = 0
    for name in ["s3", "s2", "torus2", "torus3", "synthetic_massey"]:
        A = builtin_cdga(name)                 # asserts the CDGA axioms
        c3 = A.cocycles(3)
        H = A.element({3: c3.basis[0]}) if c3.dim else A.zero()
        pc = PeriodicComplex(A, H)
        for parity in (0, 1):
            db = pc.d_block(parity)
            db2 = pc.d_block((parity + 1) % 2)
            prod = db2 * db
            assert all(all(not x for x in row) for row in prod.rows), \
                "d_H^2 != 0"
    dt = time.monotonic() - t0
    assert dt < 300.0, f"criterion 9 took {dt:.1f} s"
    _announce(9, "500 Smith factorizations verified, 100 random filtered "
                 "complexes satisfy the page recursion, and all "
                 "constructed complexes/models pass their exactness "
                 "checks", t0)
