"""Piecewise linear functions on fans and their divisors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Mapping, Optional, Sequence

from . import exactlin as el
from . import polyfan as pf
from . import tropcycle as tc
from .polyfan import Cone, Fan
from .tropcycle import WeightedFan


class PLError(ValueError):
    pass


class FaceMismatch(PLError):
    pass


class NonIntegralInterpolation(PLError):
    pass


class RayValuesOnNonSimplicial(PLError):
    pass


@lru_cache(maxsize=None)
def _basis(gens: tuple, n: int) -> tuple:
    return tuple(tuple(b) for b in el.saturate(gens, n))


def cone_basis(fan: Fan, cone: Cone) -> tuple:
    """Canonical (HNF) basis of ``N_cone``; charts are written in it."""
    return _basis(fan.gens(cone), fan.ambient_rank)


@lru_cache(maxsize=None)
def _dual_basis(basis: tuple) -> tuple[int, tuple]:
    """``(d, rows)`` with integer rows ``l_j`` such that ``l_j . b_i = d [i == j]``."""
    k = len(basis)
    rows = [el.rational_covector(list(basis), [int(i == j) for i in range(k)]) for j in range(k)]
    d = 1
    for row in rows:
        for x in row:
            d = d * x.denominator // gcd(d, x.denominator)
    return d, tuple(tuple(int(x * d) for x in row) for row in rows)


def _coords(basis: tuple, x: Sequence[int]) -> Optional[list]:
    """Coordinates of ``x`` in ``basis``; None if ``x`` is outside its span."""
    if not basis:
        return [] if not any(x) else None
    d, rows = _dual_basis(basis)
    scaled = [sum(a * b for a, b in zip(l, x)) for l in rows]
    if any(sum(c * b[i] for c, b in zip(scaled, basis)) != d * x[i] for i in range(len(x))):
        return None
    return [Fraction(c, d) for c in scaled]


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


@dataclass(frozen=True, eq=False)
class PLFunction:
    """Continuous function linear on each cone.

    ``charts[c]`` lists the values of the linear piece on the canonical basis
    of ``N_c``. Entries are integers unless the function was built with
    ``rational=True`` (Courant functions on non-unimodular fans).
    """

    fan: Fan
    charts: dict

    def value(self, cone: Cone, x: Sequence[int]):
        """Value at a point ``x`` of the span of ``cone``."""
        coords = _coords(cone_basis(self.fan, cone), x)
        if coords is None:
            raise pf.PointOutsideSupport(f"{tuple(x)} is not in the span of the cone")
        return _norm(sum((a * b for a, b in zip(self.charts[cone], coords)), Fraction(0)))

    def __call__(self, x: Sequence[int]):
        c = self.fan.carrier(x)
        if c is None:
            raise pf.PointOutsideSupport(f"{tuple(x)} is outside the support")
        return self.value(c, x)

    def ray_values(self) -> tuple:
        return tuple(self.value(frozenset([i]), r) for i, r in enumerate(self.fan.rays))

    @property
    def is_integral(self) -> bool:
        return all(isinstance(_norm(v), int) for ch in self.charts.values() for v in ch)

    def __add__(self, other: "PLFunction") -> "PLFunction":
        if other.fan != self.fan:
            raise PLError("functions live on different fans")
        return PLFunction(self.fan, {c: tuple(_norm(a + b) for a, b in zip(self.charts[c], other.charts[c]))
                                     for c in self.fan.cones})

    def __neg__(self) -> "PLFunction":
        return PLFunction(self.fan, {c: tuple(-a for a in ch) for c, ch in self.charts.items()})

    def __sub__(self, other: "PLFunction") -> "PLFunction":
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, PLFunction) and self.fan == other.fan and all(
            tuple(map(_norm, self.charts[c])) == tuple(map(_norm, other.charts[c])) for c in self.fan.cones)

    __hash__ = None


def from_evaluator(fan: Fan, top_value: Callable[[Cone, Sequence[int]], object]) -> PLFunction:
    """Build charts from a per-maximal-cone evaluator, checking face agreement."""
    charts: dict = {}
    n = fan.ambient_rank
    for tau in fan.cones:
        basis = cone_basis(fan, tau)
        chart = None
        for sigma in fan.maximal_cones:
            if not tau <= sigma:
                continue
            vals = tuple(_norm(Fraction(top_value(sigma, b))) for b in basis)
            if chart is None:
                chart = vals
            elif chart != vals:
                raise FaceMismatch(f"pieces disagree on the cone {sorted(tau)}")
        charts[tau] = chart if chart is not None else ()
    return PLFunction(fan, charts)


def make_pl(fan: Fan, *, ray_values: Optional[Sequence] = None,
            covectors: Optional[Mapping[Cone, Sequence[int]]] = None,
            local_covectors: Optional[Mapping[Cone, Sequence[int]]] = None,
            rational: bool = False) -> PLFunction:
    """Validated PL function from exactly one kind of data.

    ``ray_values`` needs a simplicial fan; ``covectors`` gives an ambient
    covector per maximal cone; ``local_covectors`` gives values on the
    canonical basis of each maximal cone.
    """
    given = [x is not None for x in (ray_values, covectors, local_covectors)]
    if sum(given) != 1:
        raise PLError("give exactly one of ray_values, covectors, local_covectors")
    if ray_values is not None:
        if not fan.simplicial:
            raise RayValuesOnNonSimplicial("ray values determine a function only on simplicial fans")
        if len(ray_values) != len(fan.rays):
            raise PLError("need one value per ray")
        top = {}
        for sigma in fan.maximal_cones:
            idx = sorted(sigma)
            basis = cone_basis(fan, sigma)
            # rays of sigma in basis coordinates; solve chart . coords(v) = value
            coords = [_coords(basis, fan.rays[i]) for i in idx]
            chart = []
            if idx:
                inv = el.inverse_rational(coords)
                chart = [sum(inv[j][k] * Fraction(ray_values[idx[k]]) for k in range(len(idx)))
                         for j in range(len(basis))]
            top[sigma] = tuple(_norm(x) for x in chart)
        phi = from_evaluator(fan, lambda s, x: _eval_chart(fan, s, top[s], x))
    elif covectors is not None:
        cov = {frozenset(k): tuple(v) for k, v in covectors.items()}
        missing = [s for s in fan.maximal_cones if s not in cov]
        if missing:
            raise PLError(f"no covector for the cone {sorted(missing[0])}")
        phi = from_evaluator(fan, lambda s, x: el.dot(cov[s], x))
    else:
        loc = {frozenset(k): tuple(v) for k, v in local_covectors.items()}
        missing = [s for s in fan.maximal_cones if s not in loc]
        if missing:
            raise PLError(f"no covector for the cone {sorted(missing[0])}")
        phi = from_evaluator(fan, lambda s, x: _eval_chart(fan, s, loc[s], x))
    if not rational and not phi.is_integral:
        raise NonIntegralInterpolation("the function is not integral on some cone")
    return phi


def _eval_chart(fan: Fan, cone: Cone, chart: Sequence, x: Sequence[int]):
    coords = _coords(cone_basis(fan, cone), x)
    return sum((Fraction(a) * b for a, b in zip(chart, coords)), Fraction(0))


def zero_function(fan: Fan) -> PLFunction:
    return PLFunction(fan, {c: (0,) * fan.cone_dim(c) for c in fan.cones})


def linear_function(fan: Fan, u: Sequence[int]) -> PLFunction:
    return PLFunction(fan, {c: tuple(el.dot(u, b) for b in cone_basis(fan, c)) for c in fan.cones})


def courant(fan: Fan, ray: int) -> PLFunction:
    """Value 1 on the generator of ``ray`` and 0 on the other rays (simplicial fans)."""
    vals = [0] * len(fan.rays)
    vals[ray] = 1
    return make_pl(fan, ray_values=vals, rational=True)


def pullback(phi: PLFunction, source: Fan, matrix: Sequence[Sequence[int]],
             cone_map: Mapping[Cone, Cone]) -> PLFunction:
    """``phi`` composed with a linear map sending each source cone into ``cone_map[cone]``."""
    charts = {}
    for c in source.cones:
        target = cone_map[c]
        charts[c] = tuple(phi.value(target, el.mat_vec(matrix, b)) for b in cone_basis(source, c))
    return PLFunction(source, charts)


# ---------------------------------------------------------------------------
# order of vanishing


def ord_values(phi: PLFunction, values: Mapping[Cone, int], k: int,
               selector: tc.NormalSelector = tc.canonical_selector) -> dict:
    """Orders of vanishing of ``phi`` along a k-dimensional weight, on (k-1)-cones.

    Min convention: ``ord_tau = phi_tau(sum w n) - sum w phi_sigma(n)``.
    """
    fan = phi.fan
    out = {}
    for tau in fan.cones_of_dim(k - 1):
        total = [0] * fan.ambient_rank
        acc = Fraction(0)
        for sigma in fan.cofaces(tau, 1):
            w = values.get(sigma, 0)
            if not w:
                continue
            nv = selector(fan, sigma, tau)
            total = [a + w * b for a, b in zip(total, nv)]
            acc += w * Fraction(phi.value(sigma, nv))
        out[tau] = _norm(Fraction(phi.value(tau, total)) - acc)
    return out


def divisor(wf: WeightedFan, phi: PLFunction,
            selector: tc.NormalSelector = tc.canonical_selector) -> dict:
    """Principal Weil divisor: ``ord`` per codim-1 cone and the weighted subfan."""
    if phi.fan != wf.fan:
        raise PLError("function and weighted fan use different fans")
    ords = ord_values(phi, wf.weights, wf.dim, selector)
    trivial = not any(ords.values())
    weil = None
    if not trivial:
        if any(not isinstance(v, int) for v in ords.values()):
            raise NonIntegralInterpolation("divisor of a rational function has rational weights")
        weil = tc.subfan_weighted(wf.fan, ords, wf.dim - 1, signed=True)
    return {"ord": ords, "weil": weil, "trivial": trivial}


def linearity_class(phi: PLFunction) -> dict:
    """Whether ``phi`` is one integral covector on the whole support, with a witness."""
    fan = phi.fan
    rows, rhs = [], []
    for c in fan.maximal_cones:
        for b, v in zip(cone_basis(fan, c), phi.charts[c]):
            rows.append(list(b))
            rhs.append(v)
    if any(not isinstance(_norm(v), int) for v in rhs):
        return {"is_globally_linear": False, "witness": None}
    u = el.solve_system_integer(rows, [int(v) for v in rhs], fan.ambient_rank)
    if u is None:
        return {"is_globally_linear": False, "witness": None}
    return {"is_globally_linear": True, "witness": tuple(u)}
