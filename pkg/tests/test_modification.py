import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tropfan import corpus
from tropfan import modification as md
from tropfan import plfun as pl
from tropfan import polyfan as pf
from tropfan import quasilinear as ql
from tropfan import tropcycle as tc

SIMPLICIAL_BASES = ["r1", "r2", "r2-p2", "r3-p3", "tropical-line-r2", "tropical-line-r3",
                    "classical-line-r2", "tropical-plane-r3", "line-x-line"]


def test_plane_from_min_x_y_0():
    ex = corpus.get("r2-p2")
    out = md.modify(ex.weighted(), ex.functions()["minxy0"])
    assert set(out.fan.rays) == {(1, 0, 0), (0, 1, 0), (-1, -1, -1), (0, 0, 1)}
    top = out.fan.cones_of_dim(2)
    assert len(top) == 6 and set(out.weights.values()) == {1}
    assert {frozenset(out.fan.rays[i] for i in c) for c in top} == {
        frozenset(p) for p in itertools.combinations(out.fan.rays, 2)}


def test_min_x_0_modification():
    ex = corpus.get("r2")
    out = md.modify(ex.weighted(), ex.functions()["minx0"])
    assert set(out.fan.rays) == {(1, 0, 0), (0, 1, 0), (0, -1, 0), (-1, 0, -1), (0, 0, 1)}
    assert set(out.weights.values()) == {1} and len(out.fan.cones_of_dim(2)) == 6
    line_x_r1 = tc.product_weighted(corpus.get("tropical-line-r2").weighted(),
                                    corpus.get("r1").weighted())
    assert pf.find_isomorphism(out.fan, line_x_r1.fan, out.weights, line_x_r1.weights) is not None


def test_negative_divisor_rejected():
    f = pf.complete_line()
    with pytest.raises(md.NegativeDivisorWeight):
        md.modify(tc.uniform(f), pl.make_pl(f, ray_values=[0, 2]))


def test_trivial_divisor_gives_a_graph():
    wf = corpus.get("r2-p2").weighted()
    out = md.modify(wf, pl.linear_function(wf.fan, (1, 2)))
    assert len(out.fan.rays) == 3 and pf.find_isomorphism(out.fan, wf.fan) is not None


def test_recognize_plane_along_vertical_ray():
    plane = corpus.get("tropical-plane-r3").weighted()
    w = md.recognize_along(plane, plane.fan.rays.index((0, 0, 1)))
    assert w is not None and w.direction == (0, 0, 1)
    assert pf.is_complete(w.base.fan)
    base_fn = corpus.get("r2-p2").functions()["minxy0"]
    diff = [w.phi(x) - base_fn(x) for x in [(1, 0), (0, 1), (3, -7), (-5, -2), (-2, 9)]]
    u = (diff[0], diff[1])
    assert diff == [u[0] * x + u[1] * y for x, y in [(1, 0), (0, 1), (3, -7), (-5, -2), (-2, 9)]]
    assert tc.same_cycle(w.divisor, corpus.get("tropical-line-r2").weighted())


def test_recognize_line_along_ray():
    line = corpus.get("tropical-line-r2").weighted()
    w = md.recognize_along(line, 1)
    assert w.base.fan.rays == ((1,), (-1,))
    assert w.divisor.weights == {frozenset(): 1}


def test_cross_is_no_modification():
    cross = corpus.get("cross").weighted()
    assert all(md.recognize_along(cross, i) is None for i in range(4))


def test_star_report():
    plane = corpus.get("tropical-plane-r3").weighted()
    report = md.modification_star_report(md.recognize_along(plane, 3))
    assert report["ok"] and all(report["graph"].values()) and all(report["vertical"].values())


def test_direction_matrix_is_unimodular():
    from tropfan import exactlin as el
    for r in [(0, 0, 1), (1, 0, 0), (0, -1, 0), (2, 3), (1, 1, 1), (-3, 5, 2)]:
        m = md.direction_matrix(r)
        assert abs(el.det(m)) == 1
        assert el.mat_vec(m, r) == (0,) * (len(r) - 1) + (1,)


def _random_function(data, name, bound=3):
    wf = corpus.get(name).weighted()
    values = data.draw(st.lists(st.integers(-bound, bound), min_size=len(wf.fan.rays),
                                max_size=len(wf.fan.rays)))
    try:
        phi = pl.make_pl(wf.fan, ray_values=values)
    except pl.NonIntegralInterpolation:
        assume(False)
    ords = pl.divisor(wf, phi)["ord"]
    assume(all(v >= 0 for v in ords.values()))
    return wf, phi


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SIMPLICIAL_BASES), st.data())
def test_modifications_are_balanced(name, data):
    wf, phi = _random_function(data, name)
    out = md.modify(wf, phi)
    assert tc.is_balanced(out)
    back = tc.pushforward(md.direction_matrix((0,) * wf.fan.ambient_rank + (1,))[:-1],
                          out.fan, out.weights, out.dim, wf.fan)
    assert back.values == wf.weights


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["r1", "r2-p2", "tropical-line-r2", "r2", "classical-line-r2"]), st.data())
def test_recognize_after_modify(name, data):
    wf, phi = _random_function(data, name)
    out = md.modify(wf, phi)
    v = ql.recognize(out)
    # the star at the upward ray is the divisor, so both verdicts agree
    div = pl.divisor(wf, phi)
    expected = div["trivial"] or ql.recognize(div["weil"]).accepted
    assert v.accepted == expected
    if v.accepted:
        assert ql.verify_certificate(out, v.certificate)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["r2-p2", "tropical-line-r2", "r3-p3"]), st.data())
def test_recognize_after_reduced_modify(name, data):
    wf, phi = _random_function(data, name, bound=1)
    ords = pl.divisor(wf, phi)["ord"]
    assume(set(ords.values()) <= {0, 1})
    out = md.modify(wf, phi)
    v = ql.recognize(out)
    div = pl.divisor(wf, phi)
    if div["trivial"] or tc.minkowski_rank(div["weil"].fan, div["weil"].dim) == 1:
        # reduced irreducible divisors on these bases are tropical lines, points or planes
        assert v.accepted and ql.verify_certificate(out, v.certificate)
