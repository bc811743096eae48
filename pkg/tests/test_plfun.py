from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropfan import corpus
from tropfan import plfun as pl
from tropfan import polyfan as pf
from tropfan import tropcycle as tc

WITH_FUNCTIONS = [(n, f) for n, e in corpus.EXAMPLES.items() for f in e.functions()]


def test_min_2x_0():
    phi = corpus.get("r1").functions()["min2x0"]
    assert phi((3,)) == 0 and phi((-3,)) == -6
    d = pl.divisor(corpus.get("r1").weighted(), phi)
    assert d["ord"] == {frozenset(): 2}
    assert d["weil"].weights == {frozenset(): 2}


def test_min_x_y_0():
    wf = corpus.get("r2-p2").weighted()
    phi = corpus.get("r2-p2").functions()["minxy0"]
    for x in [(3, 1), (1, 3), (-2, -5), (-5, -2), (0, 0), (4, 4)]:
        assert phi(x) == min(x[0], x[1], 0)
    d = pl.divisor(wf, phi)
    weil = d["weil"]
    assert sorted(weil.fan.rays) == [(-1, -1), (0, 1), (1, 0)]
    assert set(weil.weights.values()) == {1}


def test_min_x_0_on_quadrants():
    phi = corpus.get("r2").functions()["minx0"]
    for x in [(3, 1), (-3, 1), (-2, -5), (5, -2)]:
        assert phi(x) == min(x[0], 0)
    assert not pl.linearity_class(phi)["is_globally_linear"]


def test_linearity_class():
    f = corpus.get("r2-p2").weighted().fan
    lin = pl.linear_function(f, (2, -3))
    r = pl.linearity_class(lin)
    assert r["is_globally_linear"] and r["witness"] == (2, -3)
    assert not pl.linearity_class(corpus.get("r2-p2").functions()["minxy0"])["is_globally_linear"]
    ql = pl.make_pl(f, ray_values=[0, 0, 0])
    assert pl.divisor(tc.uniform(f), ql)["trivial"]


def test_errors():
    square = pf.build_fan([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)], [[0, 1, 2, 3]], 3)
    with pytest.raises(pl.RayValuesOnNonSimplicial):
        pl.make_pl(square, ray_values=[0, 0, 0, 0])
    f = pf.build_fan([(1, 0), (1, 2)], [[0, 1]], 2)
    with pytest.raises(pl.NonIntegralInterpolation):
        pl.make_pl(f, ray_values=[0, 1])
    assert pl.make_pl(f, ray_values=[0, 1], rational=True).charts[frozenset([0, 1])] \
        == (0, Fraction(1, 2))
    quad = pf.orthant_fan(2)
    cov = {c: (0, 0) for c in quad.maximal_cones}
    cov[quad.maximal_cones[0]] = (1, 0)
    with pytest.raises(pl.FaceMismatch):
        pl.make_pl(quad, covectors=cov)
    with pytest.raises(pl.PLError):
        pl.make_pl(quad)


def test_covectors_on_non_simplicial_fan():
    square = pf.build_fan([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)], [[0, 1, 2, 3]], 3)
    phi = pl.make_pl(square, covectors={square.maximal_cones[0]: (0, 0, 1)})
    assert phi((1, 0, 1)) == 1 and phi((0, 0, 5)) == 5


def test_arithmetic():
    phi = corpus.get("r1").functions()["min2x0"]
    assert (phi - phi) == pl.zero_function(phi.fan)
    assert (phi + phi)((-1,)) == -4
    assert (-phi)((-1,)) == 2


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(WITH_FUNCTIONS), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_divisor_invariant_under_linear_shift(item, u):
    name, fname = item
    ex = corpus.get(name)
    wf, phi = ex.weighted(), ex.functions()[fname]
    shift = pl.linear_function(wf.fan, u[:wf.fan.ambient_rank])
    assert pl.divisor(wf, phi + shift)["ord"] == pl.divisor(wf, phi)["ord"]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(WITH_FUNCTIONS), st.integers(0, 10_000))
def test_divisor_independent_of_normal_choice(item, seed):
    name, fname = item
    ex = corpus.get(name)
    wf, phi = ex.weighted(), ex.functions()[fname]
    a = pl.divisor(wf, phi)["ord"]
    b = pl.divisor(wf, phi, tc.random_selector(seed))["ord"]
    assert a == b


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=4, max_size=4))
def test_divisors_are_balanced(values):
    wf = corpus.get("r3-p3").weighted()
    phi = pl.make_pl(wf.fan, ray_values=values)
    d = pl.divisor(wf, phi)
    if not d["trivial"]:
        assert tc.is_balanced(tc.WeightedFan(d["weil"].fan, d["weil"].weights, signed=True))


def test_pullback_along_projection():
    plane = corpus.get("tropical-plane-r3").weighted()
    base = corpus.get("r2-p2")
    phi = base.functions()["minxy0"]
    proj = [[1, 0, 0], [0, 1, 0]]
    cone_map = {c: tc.image_cone(proj, plane.fan, c, phi.fan) for c in plane.fan.cones}
    up = pl.pullback(phi, plane.fan, proj, cone_map)
    for x in [(1, 2, 0), (-1, -1, -1), (0, 0, 1)]:
        assert up(x) == phi(x[:2])
