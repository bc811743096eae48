import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropfan import corpus
from tropfan import polyfan as pf
from tropfan import tropcycle as tc
from tropfan.tropcycle import WeightedFan

BALANCED_NAMES = [n for n, e in corpus.EXAMPLES.items() if n != "cross"]


def line():
    return corpus.get("tropical-line-r2").weighted()


def fan_121(weights=(1, 2, 1)):
    f = pf.build_fan([(1, 0), (0, 1), (-1, -2)], [[0], [1], [2]], 2)
    return WeightedFan(f, {frozenset([i]): w for i, w in enumerate(weights)})


def test_balancing_examples():
    assert tc.is_balanced(line())
    assert tc.is_balanced(fan_121())
    report = tc.check_balancing(fan_121((1, 1, 1)))
    assert not report["balanced"]
    assert report["violations"] == [((), (0, -1))]


def test_minkowski_ranks():
    cross = corpus.get("cross").weighted()
    assert tc.minkowski_rank(cross.fan, 1) == 2
    basis = tc.minkowski_basis(line().fan, 1)
    assert len(basis) == 1
    assert sorted(abs(v) for v in basis[0].values.values()) == [1, 1, 1]


def test_irreducibility():
    r = tc.irreducibility(line())
    assert r["irreducible"] and r["is_fundamental"]
    assert not tc.irreducibility(corpus.get("cross").weighted())["irreducible"]
    r = tc.irreducibility(fan_121())
    assert r["irreducible"] and r["is_fundamental"]
    assert not tc.is_reduced(fan_121())
    with pytest.raises(tc.UnbalancedError):
        tc.irreducibility(fan_121((1, 1, 1)))


def test_local_profiles():
    plane = corpus.get("tropical-plane-r3").weighted()
    p = tc.local_profile(plane)
    assert p["reduced"] and p["locally_irreducible"]
    p = tc.local_profile(corpus.get("cross").weighted())
    assert p["reduced"] and not p["locally_irreducible"]


def test_pushforward_of_line_onto_r1():
    src = corpus.get("line-3x-2y").weighted()
    target = pf.complete_line()
    pushed = tc.pushforward([[1, 0]], src.fan, src.weights, 1, target)
    assert sorted(pushed.values.values()) == [2, 2]


def test_pushforward_of_modification_to_base():
    plane = corpus.get("tropical-plane-r3").weighted()
    base = corpus.get("r2-p2").weighted()
    pushed = tc.pushforward([[1, 0, 0], [0, 1, 0]], plane.fan, plane.weights, 2, base.fan)
    assert pushed.values == base.weights


def test_image_not_a_cone():
    src = pf.build_fan([(1, 0)], [[0]], 2)
    with pytest.raises(tc.ConeImageNotACone):
        tc.image_cone([[0, 1], [1, 0]], src, frozenset([0]), pf.build_fan([(1, 0)], [[0]], 2))


def test_products():
    p = tc.product_weighted(line(), line())
    assert tc.is_balanced(p) and set(p.weights.values()) == {1}
    q = tc.product_weighted(fan_121(), corpus.get("r1").weighted())
    assert sorted(q.weights.values()) == [1, 1, 1, 1, 2, 2]


@pytest.mark.parametrize("name", BALANCED_NAMES)
def test_corpus_fans_are_balanced(name):
    assert tc.is_balanced(corpus.get(name).weighted())


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(BALANCED_NAMES), st.integers(0, 10_000))
def test_balancing_independent_of_normal_choice(name, seed):
    wf = corpus.get(name).weighted()
    sel = tc.random_selector(seed)
    assert tc.check_balancing(wf, sel)["balanced"]
    assert tc.balancing_defects(wf.fan, wf.weights, wf.dim, sel) == []


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_unbalanced_defects_independent_of_normal_choice(seed):
    wf = fan_121((1, 1, 1))
    a = tc.balancing_defects(wf.fan, wf.weights, 1)
    b = tc.balancing_defects(wf.fan, wf.weights, 1, tc.random_selector(seed))
    assert a == b


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["tropical-line-r2", "tropical-plane-r3", "r2-p2", "minx0-modification",
                        "classical-plane-r3", "bergman-u24"]), st.data())
def test_refinement_keeps_balancing_and_cycle(name, data):
    wf = corpus.get(name).weighted()
    top = wf.fan.cones_of_dim(wf.dim)
    cone = data.draw(st.sampled_from(top))
    coeffs = data.draw(st.lists(st.integers(1, 3), min_size=len(cone), max_size=len(cone)))
    point = tuple(sum(c * g[i] for c, g in zip(coeffs, wf.fan.gens(cone)))
                  for i in range(wf.fan.ambient_rank))
    fine = pf.stellar_subdivision(wf.fan, point)
    ref = tc.refine_weights(wf, fine)
    assert tc.is_balanced(ref)
    assert tc.same_cycle(ref, wf) and tc.same_cycle(wf, ref)


def test_same_cycle_detects_weight_change():
    wf = line()
    doubled = tc.uniform(wf.fan, 2)
    assert not tc.same_cycle(wf, doubled)
    fine = pf.stellar_subdivision(wf.fan, (2, 0))
    assert not tc.same_cycle(tc.refine_weights(doubled, fine, check_support=False), wf)


def test_same_cycle_detects_support_change():
    a = corpus.get("tropical-line-r2").weighted()
    b = corpus.get("classical-line-r2").weighted()
    assert not tc.same_cycle(a, b)


def test_weighted_fan_validation():
    f = pf.build_fan([(1, 0)], [[0]], 2)
    with pytest.raises(pf.FanError):
        WeightedFan(f, {})
    with pytest.raises(pf.FanError):
        WeightedFan(f, {frozenset([0]): 0})
    assert WeightedFan(f, {frozenset([0]): -1}, signed=True).dim == 1


def test_same_cycle_rejects_a_strict_subfan():
    # the two-ray subfan refines the line trivially but misses a ray
    wf = line()
    part = tc.uniform(pf.build_fan([(1, 0), (0, 1)], [[0], [1]], 2))
    assert not tc.same_cycle(part, wf) and not tc.same_cycle(wf, part)
    plane = corpus.get("tropical-plane-r3").weighted()
    sub = tc.uniform(pf.build_fan(plane.fan.rays, [[0, 1], [1, 2]], 3))
    assert not tc.same_cycle(sub, plane) and not tc.same_cycle(plane, sub)
