"""Tropical modifications: forward construction and recognition along a ray."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import exactlin as el
from . import plfun as pl
from . import polyfan as pf
from . import tropcycle as tc
from .plfun import PLFunction
from .polyfan import Cone, Fan
from .tropcycle import WeightedFan


class NegativeDivisorWeight(ValueError):
    pass


@dataclass(frozen=True)
class Modification:
    """Output of :func:`modify_with_maps`: the fan plus how its cones arise.

    ``graph_map`` sends each base cone to its graph cone; ``vertical_map``
    sends each cone of the divisor support (faces included) to its upward
    cone. ``vertical_ray`` is None for a degenerate modification.
    """

    weighted: WeightedFan
    graph_map: dict
    vertical_map: dict
    vertical_ray: Optional[int]
    divisor: Optional[WeightedFan]
    ords: dict


def modify_with_maps(wf: WeightedFan, phi: PLFunction) -> Modification:
    base = wf.fan
    n = base.ambient_rank
    div = pl.divisor(wf, phi)
    ords = div["ord"]
    bad = {t: v for t, v in ords.items() if not isinstance(v, int)}
    if bad:
        raise pl.NonIntegralInterpolation("the divisor has non-integral weights")
    neg = [t for t, v in ords.items() if v < 0]
    if neg:
        raise NegativeDivisorWeight(
            f"order of vanishing {ords[neg[0]]} along {sorted(neg[0])} is negative")
    heights = phi.ray_values()
    if any(not isinstance(h, int) for h in heights):
        raise pl.NonIntegralInterpolation("the function is not integral on the rays")
    rays = [tuple(r) + (h,) for r, h in zip(base.rays, heights)]
    graph_map = {c: c for c in base.cones}
    cones = set(base.cones)
    weights = {c: w for c, w in wf.weights.items()}
    vertical_map: dict = {}
    vray = None
    if not div["trivial"]:
        vray = len(rays)
        rays.append((0,) * n + (1,))
        support = [t for t, v in ords.items() if v]
        faces = {f for t in support for f in base.faces_of(t)}
        for f in faces:
            up = f | {vray}
            vertical_map[f] = up
            cones.add(up)
        for t in support:
            weights[vertical_map[t]] = ords[t]
    fan = Fan(n + 1, tuple(rays), tuple(sorted(cones, key=pf._cone_key)))
    return Modification(WeightedFan(fan, weights), graph_map, vertical_map, vray,
                        div["weil"], ords)


def modify(wf: WeightedFan, phi: PLFunction) -> WeightedFan:
    """Graph of ``phi`` over ``wf`` completed by upward cones over ``div(phi)``."""
    return modify_with_maps(wf, phi).weighted


# ---------------------------------------------------------------------------
# recognition


@dataclass(frozen=True, eq=False)
class ModificationWitness:
    """``matrix`` (unimodular) sends the fan to ``modify(base, phi)`` up to cycle equality.

    ``direction`` is the ray sent to the last unit vector.
    """

    direction: tuple
    matrix: tuple
    base: WeightedFan
    phi: PLFunction
    divisor: Optional[WeightedFan]
    graph_cone_map: dict = field(default_factory=dict)
    vertical_cone_map: dict = field(default_factory=dict)

    @property
    def modified(self) -> WeightedFan:
        return modify(self.base, self.phi)

    @property
    def projection(self) -> tuple:
        """Projection ``N x Z -> N`` after the coordinate change."""
        n = len(self.matrix)
        return tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n - 1))


def direction_matrix(r: Sequence[int]) -> el.Matrix:
    """Unimodular matrix sending the primitive vector ``r`` to the last unit vector.

    Signed coordinate vectors get a signed permutation so the remaining
    coordinates keep their order.
    """
    n = len(r)
    nz = [i for i, x in enumerate(r) if x]
    if len(nz) == 1 and abs(r[nz[0]]) == 1:
        i = nz[0]
        order = [j for j in range(n) if j != i] + [i]
        p = [[0] * n for _ in range(n)]
        for row, j in enumerate(order):
            p[row][j] = r[i] if j == i else 1
        return p
    c = el.complete_basis([list(r)], n)
    # the completion may start with -r; the matrix must send r itself upward
    c[0] = list(r)
    cinv_t = el.transpose(el.inverse_unimodular(c))
    return [list(x) for x in cinv_t[1:]] + [list(cinv_t[0])]


def _project(v: Sequence[int]) -> tuple:
    return tuple(v[:-1])


def recognize_along(wf: WeightedFan, ray_index: int) -> Optional[ModificationWitness]:
    """Try to read ``wf`` as a modification whose upward direction is the given ray."""
    fan = wf.fan
    n = fan.ambient_rank
    if n == 0 or not 0 <= ray_index < len(fan.rays):
        return None
    direction = fan.rays[ray_index]
    p = direction_matrix(direction)
    t_rays = tuple(el.mat_vec(p, r) for r in fan.rays)
    tfan = Fan(n, t_rays, fan.cones)
    twf = WeightedFan(tfan, dict(wf.weights), signed=wf.signed)
    e_last = (0,) * (n - 1) + (1,)
    d = wf.dim

    def vertical(c: Cone) -> bool:
        return el.rank(list(tfan.gens(c)) + [e_last]) == tfan.cone_dim(c)

    top = tfan.cones_of_dim(d)
    graph_top = [c for c in top if not vertical(c)]
    if not graph_top or len(graph_top) == len(top):
        return None
    graph_cones = {f for c in graph_top for f in tfan.faces_of(c)}
    if any(vertical(c) for c in graph_cones if c):
        return None
    # base rays are the projections of rays used by graph cones
    used = sorted({i for c in graph_cones for i in c})
    b_rays: list = []
    relabel = {}
    heights = {}
    for i in used:
        v = _project(t_rays[i])
        if not any(v) or el.vec_gcd(v) != 1:
            return None
        if v in b_rays:
            return None
        relabel[i] = len(b_rays)
        b_rays.append(v)
        heights[relabel[i]] = t_rays[i][-1]
    try:
        bfan = pf.build_fan(b_rays, [[relabel[i] for i in c] for c in graph_top], n - 1,
                            close=True, check=True)
    except pf.FanError:
        return None
    b_weights = {}
    cone_map = {}
    for c in graph_cones:
        bc = frozenset(relabel[i] for i in c)
        if bc not in bfan.cone_set or bfan.cone_dim(bc) != tfan.cone_dim(c):
            return None
        cone_map[c] = bc
    for c in graph_top:
        b_weights[cone_map[c]] = wf.weights[c]
    if any(w <= 0 for w in b_weights.values()):
        return None
    base = WeightedFan(bfan, b_weights)
    if not tc.is_balanced(base):
        return None

    pieces: dict = {}

    def height(sigma: Cone, x: Sequence[int]):
        if not sigma:
            return 0
        if sigma not in pieces:
            gens = bfan.gens(sigma)
            idx = sorted(sigma)
            # non-simplicial cones: read heights off a spanning subset of rays
            sub = _independent_subset(gens)
            pieces[sigma] = el.rational_covector([gens[k] for k in sub],
                                                 [heights[idx[k]] for k in sub])
        return sum((c * xi for c, xi in zip(pieces[sigma], x)), Fraction(0))

    try:
        phi = pl.from_evaluator(bfan, height)
    except pl.FaceMismatch:
        return None
    if not phi.is_integral:
        return None
    # on non-simplicial cones every ray must sit on the same linear piece
    for c in graph_top:
        sigma = cone_map[c]
        if any(height(sigma, b_rays[relabel[i]]) != heights[relabel[i]] for i in c):
            return None
    try:
        mod = modify_with_maps(base, phi)
    except (NegativeDivisorWeight, pl.NonIntegralInterpolation):
        return None
    if not tc.same_cycle(mod.weighted, twf):
        return None
    vmap = {}
    if mod.vertical_ray is not None:
        vmap = dict(mod.vertical_map)
    return ModificationWitness(tuple(direction), tuple(tuple(r) for r in p), base, phi,
                               mod.divisor, cone_map, vmap)


def _independent_subset(gens: Sequence) -> list[int]:
    out: list[int] = []
    for k, g in enumerate(gens):
        if el.rank([gens[j] for j in out] + [g]) > len(out):
            out.append(k)
    return out


def transformed(wf: WeightedFan, matrix: Sequence[Sequence[int]]) -> WeightedFan:
    fan = wf.fan
    rays = tuple(el.mat_vec(matrix, r) for r in fan.rays)
    return WeightedFan(Fan(len(matrix), rays, fan.cones), dict(wf.weights), signed=wf.signed)


# ---------------------------------------------------------------------------
# star fans of a modification


def induced_function(base: WeightedFan, phi: PLFunction, sigma: Cone) -> tuple[WeightedFan, PLFunction]:
    """Star of the base at ``sigma`` with ``phi`` minus an integral extension of ``phi_sigma``."""
    fan = base.fan
    star, cone_map, q = pf.star_fan_with_map(fan, sigma)
    wstar = tc.WeightedFan(star, {cone_map[c]: w for c, w in base.weights.items() if sigma <= c})
    basis = pl.cone_basis(fan, sigma)
    u = el.solve_system_integer([list(b) for b in basis], list(phi.charts[sigma]), fan.ambient_rank)
    if u is None:
        raise pl.NonIntegralInterpolation("phi is not integral on the cone")
    shifted = phi - pl.linear_function(fan, u)
    inverse = {v: c for c, v in cone_map.items()}

    def value(cone: Cone, x: Sequence[int]):
        c = inverse[cone]
        cb = pl.cone_basis(fan, c)
        images = [el.mat_vec(q, b) for b in cb]
        # lift x to N_c: coefficients over a spanning subset of the images
        sub = _independent_subset(images)
        coeffs = el.solve_rational([images[k] for k in sub], x)
        lift = [sum(co * cb[k][i] for co, k in zip(coeffs, sub)) for i in range(fan.ambient_rank)]
        return shifted.value(c, lift)

    return wstar, pl.from_evaluator(star, value)


def modification_star_report(witness: ModificationWitness) -> dict:
    """Compare stars of the modification with modifications of stars and stars of the divisor."""
    base = witness.base
    mod = modify_with_maps(base, witness.phi)
    mwf = mod.weighted
    graph = {}
    for sigma in base.fan.cones:
        target = mod.graph_map[sigma]
        star_mod = tc.star_weighted(mwf, target)
        sb, sphi = induced_function(base, witness.phi, sigma)
        expected = modify(sb, sphi)
        iso = pf.find_isomorphism(star_mod.fan, expected.fan, star_mod.weights, expected.weights)
        graph[tuple(sorted(sigma))] = iso is not None
    vertical = {}
    if witness.divisor is not None:
        dfan = witness.divisor
        for tau, up in mod.vertical_map.items():
            star_mod = tc.star_weighted(mwf, up)
            # locate tau inside the divisor subfan via its rays
            rays = frozenset(base.fan.rays[i] for i in tau)
            dcone = frozenset(j for j, r in enumerate(dfan.fan.rays) if r in rays)
            star_div = tc.star_weighted(dfan, dcone)
            iso = pf.find_isomorphism(star_mod.fan, star_div.fan, star_mod.weights, star_div.weights)
            vertical[tuple(sorted(tau))] = iso is not None
    return {"graph": graph, "vertical": vertical,
            "ok": all(graph.values()) and all(vertical.values())}
