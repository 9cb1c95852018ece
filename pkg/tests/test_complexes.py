import random

import pytest

from twistedk.exact_linalg import FGAbelianGroup, smith_normal_form
from twistedk.complexes import (
    CatalogError,
    ComplexError,
    CochainComplexZ,
    F2Cohomology,
    IntegralCohomology,
    IntegralHomology,
    SimplicialComplex,
    SimplicialMap,
    builtin_model,
    catalog_maps,
    cohomology,
    disjoint_union,
    identity_map,
    product,
    star_cover_nerve,
    wedge,
)


def H(name):
    return cohomology(builtin_model(name), "Z")


def test_face_closure_error_names_simplex():
    with pytest.raises(ComplexError, match=r"\(0, 1, 2\)"):
        SimplicialComplex(3, [[(0,), (1,)], [(0, 1)], [(0, 1, 2)]])


def test_point():
    K = builtin_model("point")
    cc = CochainComplexZ(K)
    assert cc.delta(0).m == 0
    assert H("point") == [FGAbelianGroup(1)]


def test_triangle_circle():
    K = builtin_model("sphere(1)")
    d0 = CochainComplexZ(K).delta(0)
    assert (d0.m, d0.n) == (3, 3)
    assert smith_normal_form(d0).rank() == 2
    assert H("sphere(1)") == [FGAbelianGroup(1), FGAbelianGroup(1)]


def test_sphere3():
    K = builtin_model("sphere(3)")
    assert K.f_vector() == (5, 10, 10, 5)
    cc = CochainComplexZ(K)
    # the edge-to-triangle coboundary is 10x10 of rank 6
    d1 = cc.delta(1)
    assert (d1.m, d1.n) == (10, 10)
    assert smith_normal_form(d1).rank() == 6
    assert H("sphere(3)") == [FGAbelianGroup(1), FGAbelianGroup(0),
                              FGAbelianGroup(0), FGAbelianGroup(1)]


def test_spheres_general():
    for n in range(5):
        hs = H(f"sphere({n})")
        want = [FGAbelianGroup(0)] * (n + 1)
        want[0] = FGAbelianGroup(1)
        if n == 0:
            want[0] = FGAbelianGroup(2)
        else:
            want[n] = FGAbelianGroup(1)
        assert hs == want


def test_torus_7vertex():
    K = builtin_model("torus2_7vertex")
    assert K.f_vector() == (7, 21, 14)
    assert K.euler_characteristic() == 0
    assert H("torus2_7vertex") == [FGAbelianGroup(1), FGAbelianGroup(2),
                                   FGAbelianGroup(1)]


def test_product_of_circles_matches_torus():
    assert H("product(sphere(1),sphere(1))") == H("torus2_7vertex")


def test_torus3():
    assert H("torus3") == [FGAbelianGroup(1), FGAbelianGroup(3),
                           FGAbelianGroup(3), FGAbelianGroup(1)]


def test_rp2():
    assert H("rp2_6vertex") == [FGAbelianGroup(1), FGAbelianGroup(0),
                                FGAbelianGroup(0, (2,))]
    assert cohomology(builtin_model("rp2_6vertex"), "Z2") == [1, 1, 1]


def test_cp2():
    K = builtin_model("cp2_9vertex")
    assert K.f_vector() == (9, 36, 84, 90, 36)
    assert H("cp2_9vertex") == [FGAbelianGroup(1), FGAbelianGroup(0),
                                FGAbelianGroup(1), FGAbelianGroup(0),
                                FGAbelianGroup(1)]


def test_rz_model():
    rz = cohomology(builtin_model("sphere(3)"), "RZ")
    assert rz[2].is_trivial()
    assert rz[3].torus_rank == 1 and rz[3].torsion.is_trivial()
    rz = cohomology(builtin_model("rp2_6vertex"), "RZ")
    # degree-1 circle model sees the torsion of H^2(RP^2; Z)
    assert rz[1].torus_rank == 0
    assert rz[1].torsion == FGAbelianGroup(0, (2,))


def test_rz_torsion_shift_on_catalog():
    for name in ["sphere(2)", "torus2_7vertex", "rp2_6vertex",
                 "cp2_9vertex"]:
        K = builtin_model(name)
        hz = cohomology(K, "Z")
        rz = cohomology(K, "RZ")
        for p in range(K.dim + 1):
            nxt = hz[p + 1].invariant_factors if p + 1 <= K.dim else ()
            assert rz[p].torsion.invariant_factors == nxt
            assert rz[p].torus_rank == hz[p].free_rank


def test_euler_equals_alternating_betti():
    for name in ["sphere(2)", "sphere(3)", "torus2_7vertex", "rp2_6vertex",
                 "cp2_9vertex", "torus3", "s3_join(2)"]:
        K = builtin_model(name)
        betti = cohomology(K, "Q")
        assert K.euler_characteristic() == sum(
            (-1) ** p * b for p, b in enumerate(betti))


def test_disjoint_union_additivity():
    A = builtin_model("sphere(1)")
    B = builtin_model("torus2_7vertex")
    D = disjoint_union(A, B)
    hA, hB, hD = (cohomology(x, "Z") for x in (A, B, D))
    for p in range(len(hD)):
        a = hA[p] if p < len(hA) else FGAbelianGroup(0)
        b = hB[p] if p < len(hB) else FGAbelianGroup(0)
        merged = FGAbelianGroup(
            a.free_rank + b.free_rank,
            tuple(sorted(a.invariant_factors + b.invariant_factors)))
        assert hD[p] == merged


def test_wedge_homology():
    W = builtin_model("wedge(sphere(2),sphere(3))")
    assert cohomology(W, "Z") == [FGAbelianGroup(1), FGAbelianGroup(0),
                                  FGAbelianGroup(1), FGAbelianGroup(1)]


def test_star_cover_nerve():
    for name in ["sphere(3)", "torus2_7vertex",
                 "disjoint(sphere(1),sphere(1))"]:
        K = builtin_model(name)
        nerve, vm = star_cover_nerve(K)
        assert nerve.simplices == K.simplices
        assert vm == {v: v for v in range(K.vertices)}


def test_delta_squared_zero_everywhere():
    for name in ["sphere(4)", "torus2_7vertex", "cp2_9vertex", "torus3"]:
        CochainComplexZ(builtin_model(name))  # asserts internally


def test_class_coords_roundtrip():
    K = builtin_model("torus2_7vertex")
    hz = IntegralCohomology(K)
    d1 = hz.degree(1)
    assert d1.group == FGAbelianGroup(2)
    gens = d1.free_generators()
    assert len(gens) == 2
    for i, g in enumerate(gens):
        free, tors = d1.class_coords(g)
        assert free == [1 if j == i else 0 for j in range(2)]
    # coboundaries project to zero
    d0mat = hz.cc.delta(0)
    cob = d0mat.matvec([3, -1, 4, 1, -5, 9, 2])
    assert d1.is_coboundary(cob)


def test_homology_cycles():
    K = builtin_model("sphere(3)")
    h = IntegralHomology(K)
    assert h.group(3) == FGAbelianGroup(1)
    z = h.free_cycles(3)[0]
    bdry = CochainComplexZ(K).delta(2).transpose()
    assert bdry.matvec(z) == [0] * bdry.m

    h = IntegralHomology(builtin_model("rp2_6vertex"))
    assert h.group(1) == FGAbelianGroup(0, (2,))
    (cycle, order), = h.torsion_cycles(1)
    assert order == 2


def test_json_roundtrip():
    K = builtin_model("torus2_7vertex")
    K2 = SimplicialComplex.from_json(K.to_json())
    assert K2.simplices == K.simplices
    with pytest.raises(ComplexError):
        SimplicialComplex.from_json("{not json")
    with pytest.raises(ComplexError):
        SimplicialComplex.from_json("{\"vertices\": 2}")


def test_catalog_error_lists_models():
    with pytest.raises(CatalogError, match="sphere"):
        builtin_model("klein_bottle")


def test_simplicial_maps():
    for name, f in catalog_maps():
        assert f.source is not None
    s3 = builtin_model("sphere(3)")
    with pytest.raises(ComplexError):
        # collapsing two adjacent vertices of the triangle is fine, but a
        # map sending an edge across non-adjacent target vertices is not
        SimplicialMap(builtin_model("sphere(1)"),
                      builtin_model("s1_cycle(4)"), {0: 0, 1: 2, 2: 0})


def test_winding_map_degree():
    from twistedk.complexes import s3_winding_map
    f = s3_winding_map(2)
    src_h = IntegralHomology(f.source)
    tgt = IntegralCohomology(f.target)
    d3 = tgt.degree(3)
    gen = d3.free_generators()[0]
    pulled = f.pullback(3, gen)
    src = IntegralCohomology(f.source).degree(3)
    free, tors = src.class_coords(pulled)
    assert [abs(v) for v in free] == [2]
