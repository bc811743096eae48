"""Weighted fans, balancing, Minkowski weights and pushforward."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

from . import exactlin as el
from . import polyfan as pf
from .exactlin import Vector
from .polyfan import Cone, Fan


class UnbalancedError(ValueError):
    pass


class ConeImageNotACone(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class WeightedFan:
    """A pure fan with integer weights on its maximal cones.

    ``signed`` allows zero or negative weights (Weil divisors); tropical fans
    proper have positive weights.
    """

    fan: Fan
    weights: dict = field(default_factory=dict)
    signed: bool = False

    def __post_init__(self):
        if not self.fan.is_pure:
            raise pf.FanError("weighted fans must be pure")
        top = set(self.fan.cones_of_dim(self.fan.dim))
        if set(self.weights) != top:
            raise pf.FanError("every maximal cone needs exactly one weight")
        if not self.signed and any(w <= 0 for w in self.weights.values()):
            raise pf.FanError("tropical fans need positive weights")

    @property
    def dim(self) -> int:
        return self.fan.dim

    def __repr__(self):
        return f"WeightedFan({self.fan!r}, weights={sorted(self.weights.values())})"


def uniform(fan: Fan, w: int = 1) -> WeightedFan:
    return WeightedFan(fan, {c: w for c in fan.cones_of_dim(fan.dim)})


@dataclass(frozen=True)
class MinkowskiWeight:
    fan: Fan
    k: int
    values: dict

    def as_vector(self) -> tuple:
        return tuple(self.values.get(c, 0) for c in self.fan.cones_of_dim(self.k))


# ---------------------------------------------------------------------------
# normal vectors


@lru_cache(maxsize=None)
def _quotient(gens: tuple[Vector, ...], n: int) -> tuple[tuple[int, ...], ...]:
    basis = el.saturate(gens, n)
    return tuple(tuple(r) for r in el.quotient_map(basis, n))


@lru_cache(maxsize=None)
def canonical_normal(sigma_gens: tuple[Vector, ...], tau_gens: tuple[Vector, ...], n: int) -> Vector:
    """Lattice point in relint(sigma) generating ``N_sigma / N_tau``."""
    q = _quotient(tau_gens, n)
    sigma_basis = el.saturate(sigma_gens, n)
    # image of N_sigma in N/N_tau is a saturated rank-one lattice; pull back
    # its positive generator through a basis vector of N_sigma
    images = [el.mat_vec(q, b) for b in sigma_basis]
    outside = next(g for g in sigma_gens if any(el.mat_vec(q, g)))
    direction = el.primitive(el.mat_vec(q, outside))
    coeffs = []
    for img in images:
        # img = c * direction
        j = next((i for i, x in enumerate(direction) if x), None)
        coeffs.append(img[j] // direction[j])
    g, combo = _gcd_combination(coeffs)
    assert g == 1
    e = tuple(sum(c * b[i] for c, b in zip(combo, sigma_basis)) for i in range(n))
    s = tuple(sum(t[i] for t in tau_gens) for i in range(n)) if tau_gens else (0,) * n
    h = pf.hrep(sigma_gens, n)
    k = 0
    for f in h.facets:
        fe, fs = el.dot(f, e), el.dot(f, s)
        if fe > 0:
            continue
        if fs <= 0:
            raise AssertionError("facet vanishing on tau must be positive on e")
        k = max(k, (1 - fe + fs - 1) // fs)
    return tuple(a + k * b for a, b in zip(e, s))


def _gcd_combination(vals: Sequence[int]) -> tuple[int, list[int]]:
    g, combo = 0, [0] * len(vals)
    for i, v in enumerate(vals):
        if v == 0:
            continue
        g2, x, y = el._ext_gcd(g, v)
        combo = [c * x for c in combo]
        combo[i] += y
        g = g2
    return g, combo


NormalSelector = Callable[[Fan, Cone, Cone], Vector]


def canonical_selector(fan: Fan, sigma: Cone, tau: Cone) -> Vector:
    return canonical_normal(fan.gens(sigma), fan.gens(tau), fan.ambient_rank)


def random_selector(seed: int = 0) -> NormalSelector:
    """Alternate selector: canonical point shifted by a random positive element of tau."""
    rng = random.Random(seed)

    def select(fan: Fan, sigma: Cone, tau: Cone) -> Vector:
        base = canonical_selector(fan, sigma, tau)
        out = list(base)
        for g in fan.gens(tau):
            c = rng.randint(0, 7)
            out = [a + c * b for a, b in zip(out, g)]
        return tuple(out)

    return select


def quotient_class(fan: Fan, tau: Cone, x: Sequence[int]) -> tuple:
    return el.mat_vec(_quotient(fan.gens(tau), fan.ambient_rank), x)


# ---------------------------------------------------------------------------
# balancing


def balancing_defects(fan: Fan, values: dict, k: int,
                      selector: NormalSelector = canonical_selector) -> list[tuple[Cone, tuple]]:
    out = []
    for tau in fan.cones_of_dim(k - 1):
        total = [0] * fan.ambient_rank
        for s in fan.cofaces(tau, 1):
            w = values.get(s, 0)
            if w:
                nv = selector(fan, s, tau)
                total = [a + w * b for a, b in zip(total, nv)]
        cls = quotient_class(fan, tau, total)
        if any(cls):
            out.append((tau, cls))
    return out


def check_balancing(wf: WeightedFan, selector: NormalSelector = canonical_selector) -> dict:
    viol = balancing_defects(wf.fan, wf.weights, wf.dim, selector)
    return {"balanced": not viol,
            "violations": [(tuple(sorted(t)), d) for t, d in viol]}


def is_balanced(wf: WeightedFan) -> bool:
    return not balancing_defects(wf.fan, wf.weights, wf.dim)


# ---------------------------------------------------------------------------
# Minkowski weights


def balancing_matrix(fan: Fan, k: int, selector: NormalSelector = canonical_selector) -> el.Matrix:
    cols = fan.cones_of_dim(k)
    index = {c: i for i, c in enumerate(cols)}
    rows: el.Matrix = []
    if k == 0:
        return rows
    for tau in fan.cones_of_dim(k - 1):
        q = _quotient(fan.gens(tau), fan.ambient_rank)
        block = [[0] * len(cols) for _ in q]
        for s in fan.cofaces(tau, 1):
            img = el.mat_vec(q, selector(fan, s, tau))
            for r, x in enumerate(img):
                block[r][index[s]] = x
        rows.extend(r for r in block if any(r))
    return rows


def minkowski_basis(fan: Fan, k: int) -> list[MinkowskiWeight]:
    """Saturated lattice basis of ``M_k`` (integer solutions of all balancing conditions)."""
    cols = fan.cones_of_dim(k)
    if not cols:
        return []
    a = balancing_matrix(fan, k)
    kern = el.integer_kernel(a, ncols=len(cols)) if a else el.identity(len(cols))
    return [MinkowskiWeight(fan, k, {c: v for c, v in zip(cols, row) if v}) for row in kern]


def minkowski_rank(fan: Fan, k: int) -> int:
    cols = fan.cones_of_dim(k)
    if not cols:
        return 0
    a = balancing_matrix(fan, k)
    return len(cols) - (el.rank(a) if a else 0)


def irreducibility(wf: WeightedFan) -> dict:
    if not is_balanced(wf):
        raise UnbalancedError("weighted fan is not balanced")
    basis = minkowski_basis(wf.fan, wf.dim)
    if len(basis) != 1:
        return {"irreducible": False, "rank": len(basis), "fundamental_weight": None,
                "is_fundamental": False}
    gen = basis[0]
    vals = dict(gen.values)
    if any(v < 0 for v in vals.values()):
        vals = {c: -v for c, v in vals.items()}
    fundamental = MinkowskiWeight(wf.fan, wf.dim, vals)
    return {"irreducible": True, "rank": 1, "fundamental_weight": fundamental,
            "is_fundamental": vals == {c: w for c, w in wf.weights.items() if w}}


def star_weighted(wf: WeightedFan, sigma: Cone) -> WeightedFan:
    star, cone_map, _ = pf.star_fan_with_map(wf.fan, sigma)
    weights = {cone_map[c]: w for c, w in wf.weights.items() if sigma <= c}
    return WeightedFan(star, weights, signed=wf.signed)


def is_reduced(wf: WeightedFan) -> bool:
    return all(w == 1 for w in wf.weights.values())


def local_profile(wf: WeightedFan) -> dict:
    stars = {}
    for c in wf.fan.cones:
        s = star_weighted(wf, c)
        stars[tuple(sorted(c))] = minkowski_rank(s.fan, s.dim) == 1
    return {"reduced": is_reduced(wf), "locally_irreducible": all(stars.values()),
            "stars": stars}


# ---------------------------------------------------------------------------
# morphisms


def image_cone(matrix: Sequence[Sequence[int]], source: Fan, cone: Cone, target: Fan) -> Cone:
    """Cone of ``target`` equal to the image of ``cone``; raises if there is none."""
    n = target.ambient_rank
    imgs = [el.mat_vec(matrix, g) for g in source.gens(cone)]
    imgs = [g for g in imgs if any(g)]
    # the image cone's rays are the extreme rays of cone(imgs)
    if not imgs:
        return frozenset()
    h = pf.hrep(tuple(imgs), n)
    if not pf.is_pointed(tuple(imgs), n):
        raise ConeImageNotACone(f"image of {sorted(cone)} is not pointed")
    fs = pf.face_sets(tuple(imgs), n)
    extremal = {el.primitive(imgs[i]) for i in range(len(imgs)) if frozenset([i]) in fs}
    ids = set()
    for r in extremal:
        j = target.ray_index(r)
        if j is None:
            raise ConeImageNotACone(f"image ray {r} is not a ray of the target")
        ids.add(j)
    c = frozenset(ids)
    if c not in target.cone_set or target.cone_dim(c) != h.dim:
        raise ConeImageNotACone(f"image of {sorted(cone)} is not a cone of the target")
    return c


def pushforward(matrix: Sequence[Sequence[int]], source: Fan, values: dict, k: int,
                target: Fan, verify: bool = True) -> MinkowskiWeight:
    """Push a k-dimensional Minkowski weight along a linear map.

    Cones whose image drops dimension contribute nothing; the others
    contribute with the lattice index ``[N_image : f(N_cone)]``.
    """
    n = target.ambient_rank
    out: dict = {}
    for c in source.cones_of_dim(k):
        img = image_cone(matrix, source, c, target)
        w = values.get(c, 0)
        if target.cone_dim(img) != k or not w:
            continue
        src_lat = [el.mat_vec(matrix, b) for b in el.saturate(source.gens(c), source.ambient_rank)]
        idx = el.lattice_index(src_lat, el.saturate(target.gens(img), n))
        out[img] = out.get(img, 0) + w * idx
    out = {c: v for c, v in out.items() if v}
    if verify and balancing_defects(target, out, k):
        raise UnbalancedError("pushforward is not balanced")
    return MinkowskiWeight(target, k, out)


def product_weighted(a: WeightedFan, b: WeightedFan) -> WeightedFan:
    fan = pf.product(a.fan, b.fan)
    cmap = pf.product_cone_map(a.fan, b.fan)
    weights = {cmap[(x, y)]: wa * wb for x, wa in a.weights.items() for y, wb in b.weights.items()}
    return WeightedFan(fan, weights, signed=a.signed or b.signed)


def refine_weights(wf: WeightedFan, refinement: Fan, check_support: bool = True) -> WeightedFan:
    """Weights inherited by a refinement from the cone of ``wf`` containing each piece."""
    if check_support and not pf.same_support(wf.fan, refinement):
        raise pf.SupportMismatch("refinement has a different support")
    d = wf.dim
    weights = {}
    for c in refinement.cones_of_dim(d):
        p = pf._interior_point(refinement, c)
        carrier = wf.fan.carrier(p)
        if carrier is None or wf.fan.cone_dim(carrier) != d:
            raise pf.SupportMismatch("refinement piece is not inside a maximal cone")
        weights[c] = wf.weights[carrier]
    return WeightedFan(refinement, weights, signed=wf.signed)


def apply_weighted(wf: WeightedFan, matrix, target_rank: int) -> WeightedFan:
    fan = pf.apply_linear(wf.fan, matrix, target_rank)
    return WeightedFan(fan, dict(wf.weights), signed=wf.signed)


def restrict_weighted(wf: WeightedFan, basis=None) -> WeightedFan:
    fan = pf.restrict_to_lattice(wf.fan, basis)
    return WeightedFan(fan, dict(wf.weights), signed=wf.signed)


def canonical_form(wf: WeightedFan) -> tuple:
    """Ray-order independent description, for exact structural equality."""
    rays = wf.fan.rays
    cones = frozenset(frozenset(rays[i] for i in c) for c in wf.fan.cones)
    weights = frozenset((frozenset(rays[i] for i in c), w) for c, w in wf.weights.items() if w)
    return wf.fan.ambient_rank, cones, weights


def _nonzero(weights: dict) -> dict:
    return {c: w for c, w in weights.items() if w}


def same_cycle(a: WeightedFan, b: WeightedFan) -> bool:
    """Equal as tropical fan cycles: same support and weights on a common refinement."""
    if a.fan.ambient_rank != b.fan.ambient_rank or a.dim != b.dim:
        return False
    if canonical_form(a) == canonical_form(b):
        return True
    for fine, coarse in ((a, b), (b, a)):
        if pf.refines(fine.fan, coarse.fan):
            if not pf.tiles_by_refinement(coarse.fan, fine.fan):
                return False
            pulled = refine_weights(coarse, fine.fan, check_support=False)
            return _nonzero(pulled.weights) == _nonzero(fine.weights)
    if not pf.same_support(a.fan, b.fan):
        return False
    common = pf.common_refinement(a.fan, b.fan, check_support=False)
    ra = refine_weights(a, common, check_support=False)
    rb = refine_weights(b, common, check_support=False)
    return ra.weights == rb.weights


def subfan_weighted(fan: Fan, values: dict, k: int, signed: bool = True) -> WeightedFan:
    """Weighted subfan of cones with nonzero value plus their faces."""
    support = [c for c in fan.cones_of_dim(k) if values.get(c, 0)]
    cones = {f for c in support for f in fan.faces_of(c)} | {frozenset()}
    used = sorted({i for c in cones for i in c})
    relabel = {old: new for new, old in enumerate(used)}
    sub = Fan(fan.ambient_rank, tuple(fan.rays[i] for i in used),
              tuple(sorted((frozenset(relabel[i] for i in c) for c in cones), key=pf._cone_key)))
    weights = {frozenset(relabel[i] for i in c): values[c] for c in support}
    if not support:
        # trivial divisor: an empty cycle of dimension k is represented by nothing
        raise ValueError("trivial weight has no support")
    return WeightedFan(sub, weights, signed=signed)
