"""One-off search for the 9-vertex CP^2 triangulation.

Searches unions of 4 orbits of the Z3 x Z3 translation action on
5-subsets of the 9 points of the affine plane AG(2,3) for a closed
combinatorial 4-manifold with CP^2 homology.  The winning facet list is
frozen into the catalog; this script is kept for reproducibility.
"""

import itertools
import sys

sys.path.insert(0, "src")

from twistedk.exact_linalg import Mat, smith_normal_form, FGAbelianGroup


def point(i, j):
    return 1 + (i % 3) + 3 * (j % 3)


POINTS = [point(i, j) for j in range(3) for i in range(3)]
COORD = {point(i, j): (i, j) for i in range(3) for j in range(3)}


def translate(s, a, b):
    return frozenset(point(COORD[v][0] + a, COORD[v][1] + b) for v in s)


def orbits_on_5sets():
    seen = set()
    orbits = []
    for s in itertools.combinations(range(1, 10), 5):
        fs = frozenset(s)
        if fs in seen:
            continue
        orb = {translate(fs, a, b) for a in range(3) for b in range(3)}
        seen |= orb
        orbits.append(sorted(tuple(sorted(f)) for f in orb))
    return orbits


def is_closed_pseudomanifold(facets):
    from collections import Counter
    cnt = Counter()
    for f in facets:
        for t in itertools.combinations(f, 4):
            cnt[t] += 1
    return all(v == 2 for v in cnt.values()), cnt


def f_vector(facets):
    simplices = [set() for _ in range(5)]
    for f in facets:
        for k in range(1, 6):
            for s in itertools.combinations(f, k):
                simplices[k - 1].add(s)
    return [len(s) for s in simplices], simplices


def homology_check(simplices):
    """Reduced integral cohomology of the complex via coboundaries."""
    index = [
        {s: i for i, s in enumerate(sorted(dim_s))} for dim_s in simplices
    ]
    groups = []
    cobs = []
    for p in range(4):
        lower = sorted(simplices[p])
        upper = sorted(simplices[p + 1])
        rows = [[0] * len(lower) for _ in range(len(upper))]
        for s, i in index[p + 1].items():
            for k in range(len(s)):
                face = s[:k] + s[k + 1:]
                rows[i][index[p][face]] += (-1) ** k
        cobs.append(Mat(len(upper), len(lower), rows))
    # H^p = ker d_p / im d_{p-1}
    from twistedk.exact_linalg import kernel_basis_int, solve_int, cokernel
    hs = []
    for p in range(5):
        if p < 4:
            ker = kernel_basis_int(cobs[p])
        else:
            ker = [[1 if i == j else 0 for i in range(len(simplices[4]))]
                   for j in range(len(simplices[4]))]
        if p == 0:
            im_cols = []
        else:
            im_cols = [cobs[p - 1].column(j) for j in range(cobs[p - 1].n)]
        if not ker:
            hs.append(FGAbelianGroup(0))
            continue
        K = Mat(len(ker[0]), len(ker), [[ker[j][i] for j in range(len(ker))]
                                        for i in range(len(ker[0]))])
        rows = []
        for c in im_cols:
            y = solve_int(K, c)
            assert y is not None
            rows.append(y)
        hs.append(cokernel(Mat(len(rows), len(ker),
                               rows if rows else [])).group)
    return hs


def main():
    orbits = orbits_on_5sets()
    print(f"{len(orbits)} orbits of Z3xZ3 on 5-subsets")
    hits = []
    for combo in itertools.combinations(range(len(orbits)), 4):
        facets = []
        for c in combo:
            facets.extend(orbits[c])
        ok, cnt = is_closed_pseudomanifold(facets)
        if not ok:
            continue
        fv, simp = f_vector(facets)
        if fv != [9, 36, 84, 90, 36]:
            continue
        chi = sum((-1) ** k * v for k, v in enumerate(fv))
        if chi != 3:
            continue
        hs = homology_check(simp)
        want = [FGAbelianGroup(1), FGAbelianGroup(0), FGAbelianGroup(1),
                FGAbelianGroup(0), FGAbelianGroup(1)]
        if hs != want:
            continue
        hits.append((combo, facets))
        print("HIT", combo)
    print(f"{len(hits)} candidate complexes")
    if hits:
        combo, facets = hits[0]
        print("facets =", sorted(facets))


if __name__ == "__main__":
    main()
