import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropfan import exactlin as el
from tropfan import polyfan as pf

LINE = [(1, 0), (0, 1), (-1, -1)]


def tropical_line():
    return pf.build_fan(LINE, [[0], [1], [2]], 2)


def tropical_plane():
    rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]
    return pf.build_fan(rays, itertools.combinations(range(4), 2), 3)


def brute_force_facets(gens):
    """Facet normals of a full-dimensional cone in Z^3 from pairs of generators."""
    out = set()
    for a, b in itertools.combinations(gens, 2):
        nrm = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
        if not any(nrm):
            continue
        vals = [el.dot(nrm, g) for g in gens]
        if all(v >= 0 for v in vals):
            out.add(el.primitive(nrm))
        elif all(v <= 0 for v in vals):
            out.add(el.primitive(tuple(-x for x in nrm)))
    return out


def test_tropical_line_is_valid():
    f = tropical_line()
    assert f.dim == 1 and len(f.cones) == 4 and f.is_pure


def test_overlapping_cones_rejected():
    with pytest.raises(pf.OverlappingCones):
        pf.build_fan([(1, 0), (0, 1), (1, 1)], [[0, 1], [2]], 2)
    with pytest.raises(pf.OverlappingCones):
        pf.build_fan([(1, 0), (0, 1), (1, 2)], [[0, 1], [0, 2]], 2)


def test_missing_face_without_closure():
    with pytest.raises(pf.MissingFace):
        pf.build_fan([(1, 0), (0, 1)], [[0, 1]], 2, close=False)


def test_non_primitive_ray_rejected():
    with pytest.raises(pf.NonPrimitiveRay):
        pf.build_fan([(2, 0)], [[0]], 2)


def test_cone_over_square():
    gens = ((1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1))
    h = pf.hrep(gens, 3)
    assert h.dim == 3 and len(h.facets) == 4
    assert set(h.facets) == brute_force_facets(gens)
    f = pf.build_fan(gens, [[0, 1, 2, 3]], 3)
    assert not f.simplicial and len(f.rays) == 4


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(*[st.integers(-3, 3)] * 3), min_size=3, max_size=6))
def test_hrep_matches_brute_force(vectors):
    gens = tuple(sorted({el.primitive(v) for v in vectors if any(v)}))
    if len(gens) < 3 or el.rank(gens) < 3 or not pf.is_pointed(gens, 3):
        return
    assert set(pf.hrep(gens, 3).facets) == brute_force_facets(gens)


def test_product_faces_are_pairs_of_faces():
    a, b = tropical_line(), pf.complete_line()
    p = pf.product(a, b)
    assert len(p.cones) == len(a.cones) * len(b.cones)
    cmap = pf.product_cone_map(a, b)
    assert set(cmap.values()) == set(p.cones)


def test_star_of_tropical_plane_at_a_ray():
    plane = tropical_plane()
    star = pf.star_fan(plane, frozenset([2]))
    assert star.ambient_rank == 2 and len(star.rays) == 3 and star.dim == 1
    assert pf.find_isomorphism(star, tropical_line()) is not None


def test_product_of_lines_is_the_quadrant_fan():
    p = pf.product(pf.complete_line(), pf.complete_line())
    assert len(p.cones_of_dim(2)) == 4 and pf.is_complete(p)
    assert pf.find_isomorphism(p, pf.orthant_fan(2)) is not None


def test_common_refinement_of_two_quadrant_fans():
    diag = pf.build_fan([(1, 1), (-1, 1), (-1, -1), (1, -1)], [[0, 1], [1, 2], [2, 3], [3, 0]], 2)
    common = pf.common_refinement(pf.orthant_fan(2), diag)
    assert len(common.cones_of_dim(2)) == 8 and len(common.rays) == 8
    assert pf.refines(common, diag) and pf.refines(common, pf.orthant_fan(2))


def test_completeness():
    assert pf.is_complete(pf.orthant_fan(3))
    assert not pf.is_complete(tropical_line())
    half = pf.build_fan([(1, 0), (0, 1), (-1, 0)], [[0, 1], [1, 2]], 2)
    assert not pf.is_complete(half)


def test_classification():
    c = pf.classify(tropical_plane())
    assert c["simplicial"] and c["unimodular"] and c["pure"]
    assert len(c["minimal_lattice"]) == 3
    ray = pf.build_fan([(2, 3)], [[0]], 2)
    c = pf.classify(ray)
    assert c["unimodular"] and c["minimal_lattice"] == [(2, 3)]


def test_isomorphisms():
    line_32 = pf.build_fan([(2, 3), (-2, -3)], [[0], [1]], 2)
    assert pf.find_isomorphism(line_32, pf.complete_line()) is not None
    classical = pf.build_fan([(1, 1), (-1, -1)], [[0], [1]], 2)
    assert pf.find_isomorphism(tropical_line(), classical) is None


def test_isomorphism_budget():
    with pytest.raises(pf.BudgetExceeded):
        pf.find_isomorphism(tropical_plane(), tropical_plane(), budget=0)


def test_local_support_on_a_ray():
    loc = pf.local_support(tropical_line(), (0, 3))
    assert loc.dim == 1 and pf.is_complete(pf.restrict_to_lattice(loc))


def test_stellar_and_unimodular_refinements_keep_support():
    fan = pf.build_fan([(1, 0), (1, 2), (-1, -1)], [[0, 1], [1, 2], [0, 2]], 2)
    assert not pf.classify(fan)["unimodular"]
    fine = pf.unimodular_refinement(fan)
    assert pf.classify(fine)["unimodular"] and pf.same_support(fan, fine)
    st_fan = pf.stellar_subdivision(fan, (2, 2))
    assert (1, 1) in st_fan.rays and pf.same_support(fan, st_fan)


def test_point_outside_support():
    with pytest.raises(pf.PointOutsideSupport):
        pf.stellar_subdivision(tropical_line(), (1, 1))


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 4), st.data())
def test_separation_shortcut_is_sound(n, data):
    vec = st.tuples(*[st.integers(-2, 2)] * n)
    rays = sorted({el.primitive(v) for v in data.draw(st.lists(vec, min_size=3, max_size=7)) if any(v)})
    if len(rays) < 2:
        return
    idx = st.lists(st.integers(0, len(rays) - 1), min_size=1, max_size=n, unique=True)
    cones = [data.draw(idx), data.draw(idx)]
    try:
        fan = pf.build_fan(rays, cones, n, check=False)
    except pf.FanError:
        return
    if not all(pf.is_pointed(fan.gens(c), n) for c in fan.maximal_cones):
        return
    for a, b in itertools.combinations(fan.maximal_cones, 2):
        common = a & b
        if common not in fan.cone_set or not pf._separated(fan, a, b, common):
            continue
        hc = fan.cone_hrep(common)
        assert all(hc.contains(r) for r in pf.intersect_cones(fan.gens(a), fan.gens(b), n))
