"""Chow rings of simplicial fans, cap products and Poincaré duality checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import exactlin as el
from . import plfun as pl
from . import polyfan as pf
from . import tropcycle as tc
from .polyfan import Cone, Fan
from .tropcycle import WeightedFan


class NonSimplicialFan(ValueError):
    pass


class NonUnimodular(ValueError):
    pass


Monomial = tuple  # sorted tuple of ray indices with repetition


@dataclass
class GradedPiece:
    degree: int
    monomials: list
    relations: list
    rank: int
    torsion: list


@dataclass
class ChowPresentation:
    fan: Fan
    coeff: str
    minimal_nonfaces: list
    linear_forms: list
    _pieces: dict = field(default_factory=dict, repr=False)

    def monomials(self, k: int) -> list:
        return cone_monomials(self.fan, k)

    def piece(self, k: int) -> GradedPiece:
        if k not in self._pieces:
            mons = self.monomials(k)
            rel = relation_matrix(self, k)
            r = el.rank(rel) if rel else 0
            torsion: list = []
            if self.coeff == "z" and rel:
                torsion = [d for d in el.invariant_factors(rel) if d > 1]
            self._pieces[k] = GradedPiece(k, mons, rel, len(mons) - r, torsion)
        return self._pieces[k]


def cone_monomials(fan: Fan, k: int) -> list:
    """Degree-k monomials whose support is a cone, in lexicographic order."""
    if k == 0:
        return [()]
    cones = fan.cone_set
    return [m for m in itertools.combinations_with_replacement(range(len(fan.rays)), k)
            if frozenset(m) in cones]


def minimal_nonfaces(fan: Fan) -> list:
    cones = fan.cone_set
    out = []
    for size in range(2, fan.dim + 2):
        for s in itertools.combinations(range(len(fan.rays)), size):
            fs = frozenset(s)
            if fs in cones:
                continue
            if all(fs - {i} in cones for i in s):
                out.append(s)
    return out


def chow_presentation(fan: Fan, coeff: Optional[str] = None) -> ChowPresentation:
    """Stanley-Reisner presentation; integers for unimodular fans, rationals otherwise."""
    if not fan.simplicial:
        raise NonSimplicialFan("Chow presentations are only built for simplicial fans")
    unimodular = pf.classify(fan)["unimodular"]
    if coeff is None:
        coeff = "z" if unimodular else "q"
    if coeff == "z" and not unimodular:
        raise NonUnimodular("integer coefficients need a unimodular fan")
    n = fan.ambient_rank
    forms = []
    for i in range(n):
        form = tuple(r[i] for r in fan.rays)
        if any(form):
            forms.append(form)
    return ChowPresentation(fan, coeff, minimal_nonfaces(fan), forms)


def relation_matrix(cp: ChowPresentation, k: int) -> list:
    """Linear forms times degree-(k-1) monomials, with non-cone terms dropped."""
    if k == 0:
        return []
    mons = cp.monomials(k)
    index = {m: i for i, m in enumerate(mons)}
    rows = []
    for lower in cp.monomials(k - 1):
        for form in cp.linear_forms:
            row = [0] * len(mons)
            for rho, c in enumerate(form):
                if c:
                    m = tuple(sorted(lower + (rho,)))
                    j = index.get(m)
                    if j is not None:
                        row[j] += c
            if any(row):
                rows.append(row)
    return rows


def chow_ranks(cp: ChowPresentation, top: Optional[int] = None) -> list:
    """``(degree, rank, torsion)`` for degrees 0..top (default: fan dimension)."""
    top = cp.fan.dim if top is None else top
    return [(k, cp.piece(k).rank, cp.piece(k).torsion) for k in range(top + 1)]


# ---------------------------------------------------------------------------
# cap products


class CapEvaluator:
    """Iterated divisors of Courant functions applied to a weight, memoized by prefix."""

    def __init__(self, wf: WeightedFan):
        self.wf = wf
        self.fan = wf.fan
        self._courant: dict = {}
        self._memo: dict = {(): {c: w for c, w in wf.weights.items() if w}}

    def courant(self, rho: int) -> pl.PLFunction:
        if rho not in self._courant:
            self._courant[rho] = pl.courant(self.fan, rho)
        return self._courant[rho]

    def divisor_values(self, mono: Monomial) -> dict:
        """``div(phi_last) ... div(phi_first)`` applied to the weight (no sign)."""
        if mono in self._memo:
            return self._memo[mono]
        prev = self.divisor_values(mono[:-1])
        k = self.wf.dim - len(mono) + 1
        vals = pl.ord_values(self.courant(mono[-1]), prev, k) if k > 0 else {}
        vals = {c: v for c, v in vals.items() if v}
        self._memo[mono] = vals
        return vals

    def cap(self, mono: Monomial) -> dict:
        sign = -1 if len(mono) % 2 else 1
        return {c: sign * v for c, v in self.divisor_values(mono).items()}


def _coordinates(basis: list, fan: Fan, k: int, values: dict) -> list:
    """Coordinates of a weight on k-cones in a Minkowski basis (exact, possibly rational)."""
    cols = fan.cones_of_dim(k)
    vecs = [[b.values.get(c, 0) for c in cols] for b in basis]
    target = [values.get(c, 0) for c in cols]
    if not vecs:
        if any(target):
            raise ValueError("weight is not balanced")
        return []
    coeffs = el.solve_rational(vecs, target)
    if coeffs is None:
        raise ValueError("weight is not in the span of the Minkowski basis")
    return [pl._norm(c) for c in coeffs]


def cap_matrix(wf: WeightedFan, k: int, evaluator: Optional[CapEvaluator] = None) -> dict:
    """Matrix of degree-k monomials capped with the weight, in Minkowski-basis coordinates."""
    ev = evaluator or CapEvaluator(wf)
    fan = wf.fan
    basis = tc.minkowski_basis(fan, wf.dim - k) if wf.dim - k >= 0 else []
    mons = cone_monomials(fan, k)
    rows = [_coordinates(basis, fan, wf.dim - k, ev.cap(m)) if wf.dim - k >= 0 else []
            for m in mons]
    return {"monomials": mons, "basis": basis, "matrix": rows}


def fulton_sturmfels_cap(wf: WeightedFan, rho: int) -> dict:
    """Degree-one cap computed cone by cone from a local linear relation.

    At a codim-1 cone tau pick ``m`` with ``<m, v_rho> = 1`` and ``m`` zero on
    the other rays of tau (``m = 0`` when rho is not in tau); then
    ``x_rho ∩ w (tau) = sum_sigma w(sigma) ([rho_sigma = rho] - <m, v_rho_sigma>) / index``.
    """
    fan = wf.fan
    n = fan.ambient_rank
    out = {}
    for tau in fan.cones_of_dim(wf.dim - 1):
        m = [Fraction(0)] * n
        if rho in tau:
            idx = sorted(tau)
            rows = [list(fan.rays[i]) for i in idx]
            rhs = [1 if i == rho else 0 for i in idx]
            # least-structured solution: solve in the span of the rows
            coeffs = el.solve_rational(_gram(rows), rhs)
            m = [sum(c * r[j] for c, r in zip(coeffs, rows)) for j in range(n)]
        total = Fraction(0)
        for sigma in fan.cofaces(tau, 1):
            w = wf.weights.get(sigma, 0)
            if not w:
                continue
            (other,) = tuple(sigma - tau)
            v = fan.rays[other]
            # [N_sigma : N_tau + Z v]
            index = el.lattice_index(el.saturate(fan.gens(tau), n) + [list(v)],
                                     el.saturate(fan.gens(sigma), n))
            total += Fraction(w * ((1 if other == rho else 0) - sum(a * b for a, b in zip(m, v))), index)
        if total:
            out[tau] = pl._norm(total)
    return out


def _gram(rows: list) -> list:
    # columns of the Gram matrix, so that solve_rational finds coefficients c with G c = rhs
    return [[sum(a * b for a, b in zip(r, s)) for r in rows] for s in rows]


# ---------------------------------------------------------------------------
# Poincaré duality


def _degree_verdict(cp: ChowPresentation, wf: WeightedFan, k: int, ev: CapEvaluator) -> dict:
    piece = cp.piece(k)
    capm = cap_matrix(wf, k, ev)
    m_rank = len(capm["basis"])
    t = capm["matrix"]
    well_defined = all(
        not any(sum(r[i] * t[i][j] for i in range(len(r))) for j in range(m_rank))
        for r in piece.relations) if m_rank else True
    t_rank = el.rank(t) if t and m_rank else 0
    ok = well_defined and piece.rank == m_rank == t_rank
    unimodular_pairing = None
    if cp.coeff == "z":
        integral = all(isinstance(x, int) for row in t for x in row)
        if m_rank:
            unimodular_pairing = integral and el.invariant_factors(t) == [1] * m_rank
        else:
            unimodular_pairing = True
        ok = ok and not piece.torsion and bool(unimodular_pairing)
    return {"degree": k, "chow_rank": piece.rank, "torsion": piece.torsion,
            "minkowski_rank": m_rank, "cap_rank": t_rank, "well_defined": well_defined,
            "unimodular_pairing": unimodular_pairing, "ok": ok}


def poincare_verdict(wf: WeightedFan, star: bool = False, coeff: Optional[str] = None) -> dict:
    """Whether capping with the weight is an isomorphism ``A^k -> M_{d-k}`` for every k."""
    if not wf.fan.simplicial:
        return {"status": "non_simplicial", "poincare": None}
    cp = chow_presentation(wf.fan, coeff)
    ev = CapEvaluator(wf)
    degrees = [_degree_verdict(cp, wf, k, ev) for k in range(wf.dim + 1)]
    failures = [d["degree"] for d in degrees if not d["ok"]]
    report = {"status": "ok", "coeff": cp.coeff, "poincare": not failures,
              "degrees": degrees, "failed_degrees": failures}
    if star:
        stars = {}
        for c in wf.fan.cones:
            if not c:
                continue
            sw = tc.star_weighted(wf, c)
            sub = poincare_verdict(sw, star=False, coeff=cp.coeff)
            stars[tuple(sorted(c))] = sub["poincare"]
        report["stars"] = stars
        report["star_poincare"] = report["poincare"] and all(stars.values())
    return report


def _convolve(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def kunneth_check(a: WeightedFan, b: WeightedFan) -> dict:
    """Chow and Minkowski ranks of a product against the convolution of the factors."""
    prod = tc.product_weighted(a, b)
    ra = [r for _, r, _ in chow_ranks(chow_presentation(a.fan, "q"))]
    rb = [r for _, r, _ in chow_ranks(chow_presentation(b.fan, "q"))]
    rp = [r for _, r, _ in chow_ranks(chow_presentation(prod.fan, "q"))]
    ma = [tc.minkowski_rank(a.fan, k) for k in range(a.dim + 1)]
    mb = [tc.minkowski_rank(b.fan, k) for k in range(b.dim + 1)]
    mp = [tc.minkowski_rank(prod.fan, k) for k in range(prod.dim + 1)]
    chow_ok = rp == _convolve(ra, rb)
    mink_ok = mp == _convolve(ma, mb)
    return {"chow_ranks": rp, "expected_chow": _convolve(ra, rb), "chow_ok": chow_ok,
            "minkowski_ranks": mp, "expected_minkowski": _convolve(ma, mb),
            "minkowski_ok": mink_ok, "ok": chow_ok and mink_ok}


# ---------------------------------------------------------------------------
# pullback along a modification


def _in_row_lattice(rows: list, v: list) -> bool:
    if not rows:
        return not any(v)
    return el.solve_system_integer(el.transpose(rows), v, len(rows)) is not None


def modification_pullback(base: WeightedFan, phi: pl.PLFunction) -> dict:
    """Check the ring map ``x_rho -> x_rho~`` from the base to its modification."""
    from .modification import modify_with_maps

    if not pf.classify(base.fan)["unimodular"]:
        raise NonUnimodular("pullback checks need a unimodular base")
    mod = modify_with_maps(base, phi)
    mwf = mod.weighted
    cb = chow_presentation(base.fan, "z")
    cm = chow_presentation(mwf.fan, "z")
    d = base.dim
    base_poincare = poincare_verdict(base)["poincare"]
    degrees = []
    for k in range(d + 1):
        pb, pm = cb.piece(k), cm.piece(k)
        index = {m: i for i, m in enumerate(pm.monomials)}
        images = []
        for m in pb.monomials:
            row = [0] * len(pm.monomials)
            # graph rays keep the base ray indices
            row[index[m]] = 1
            images.append(row)
        stacked = images + pm.relations
        surjective = (not pm.monomials) or (
            el.rank(stacked) == len(pm.monomials)
            and el.invariant_factors(stacked) == [1] * len(pm.monomials))
        bijective = None
        if base_poincare:
            bijective = surjective and pb.rank == pm.rank and not pb.torsion and not pm.torsion
        degrees.append({"degree": k, "surjective": surjective, "bijective": bijective,
                        "base_rank": pb.rank, "modified_rank": pm.rank})
    # x0 relation: x0 = -sum phi(v_rho) x_rho~ in A^1
    x0_relation = True
    if mod.vertical_ray is not None and d >= 1:
        p1 = cm.piece(1)
        index = {m: i for i, m in enumerate(p1.monomials)}
        vec = [0] * len(p1.monomials)
        vec[index[(mod.vertical_ray,)]] = 1
        for rho, h in enumerate(phi.ray_values()):
            vec[index[(rho,)]] += h
        x0_relation = _in_row_lattice(p1.relations, vec)
    # pushforward along the projection is injective on Minkowski weights
    n = base.fan.ambient_rank
    proj = [[1 if j == i else 0 for j in range(n + 1)] for i in range(n)]
    injective = {}
    for k in range(d + 1):
        basis = tc.minkowski_basis(mwf.fan, k)
        cols = base.fan.cones_of_dim(k)
        pushed = [[tc.pushforward(proj, mwf.fan, b.values, k, base.fan).values.get(c, 0) for c in cols]
                  for b in basis]
        injective[k] = (el.rank(pushed) if pushed else 0) == len(basis)
    # projection formula on monomial generators
    ev_b, ev_m = CapEvaluator(base), CapEvaluator(mwf)
    formula = True
    for k in range(d + 1):
        for m in cone_monomials(base.fan, k):
            lhs_vals = ev_m.cap(m)
            lhs = tc.pushforward(proj, mwf.fan, lhs_vals, d - k, base.fan, verify=False).values
            rhs = ev_b.cap(m)
            if {c: v for c, v in lhs.items() if v} != {c: v for c, v in rhs.items() if v}:
                formula = False
    ok = (all(x["surjective"] for x in degrees)
          and all(x["bijective"] is not False for x in degrees)
          and x0_relation and all(injective.values()) and formula)
    return {"degrees": degrees, "base_poincare": base_poincare, "x0_relation": x0_relation,
            "pushforward_injective": injective, "projection_formula": formula, "ok": ok}
