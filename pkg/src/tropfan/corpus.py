"""Named example fans used by the tests and the command line."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from . import matroid as mt
from . import modification as md
from . import plfun as pl
from . import polyfan as pf
from . import tropcycle as tc
from .tropcycle import WeightedFan


@dataclass(frozen=True)
class Example:
    name: str
    description: str
    build: Callable[[], tuple]
    quasilinear: bool
    tags: tuple = field(default_factory=tuple)

    def weighted(self) -> WeightedFan:
        return self.build()[0]

    def functions(self) -> dict:
        return self.build()[1]


def _uniform(rays, cones, n):
    return tc.uniform(pf.build_fan(rays, cones, n))


def _zero():
    return tc.uniform(pf.zero_fan(0)), {}


def _r1():
    f = pf.complete_line()
    return tc.uniform(f), {"min2x0": pl.make_pl(f, ray_values=[0, -2])}


def _r2():
    f = pf.orthant_fan(2)
    # rays: e1, -e1, e2, -e2
    return tc.uniform(f), {"minx0": pl.make_pl(f, ray_values=[0, -1, 0, 0])}


def _p2():
    f = pf.build_fan([(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]], 2)
    return tc.uniform(f), {"minxy0": pl.make_pl(f, ray_values=[0, 0, -1])}


def _r3():
    return tc.uniform(pf.orthant_fan(3)), {}


def _p3():
    rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]
    cones = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
    f = pf.build_fan(rays, cones, 3)
    return tc.uniform(f), {"minxyz0": pl.make_pl(f, ray_values=[0, 0, 0, -1])}


def _classical_line_r2():
    return _uniform([(1, 1), (-1, -1)], [[0], [1]], 2), {}


def _tropical_line_r2():
    return _uniform([(1, 0), (0, 1), (-1, -1)], [[0], [1], [2]], 2), {}


def _line_3x_2y():
    return _uniform([(2, 3), (-2, -3)], [[0], [1]], 2), {}


def _classical_line_r3():
    return _uniform([(1, 0, 0), (-1, 0, 0)], [[0], [1]], 3), {}


def _mixed_line_r3():
    return _uniform([(1, 1, 0), (-1, -1, -1), (0, 0, 1)], [[0], [1], [2]], 3), {}


def _tropical_line_r3():
    return _uniform([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)], [[0], [1], [2], [3]], 3), {}


def _classical_plane_r3():
    rays = [(1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)]
    return _uniform(rays, [[0, 1], [1, 2], [2, 3], [3, 0]], 3), {}


def _minx0_modification():
    wf, fns = _r2()
    return md.modify(wf, fns["minx0"]), {}


def _tropical_plane_r3():
    wf, fns = _p2()
    return md.modify(wf, fns["minxy0"]), {}


def _cross():
    f = pf.build_fan([(1, 0), (0, 1), (-1, 0), (0, -1)], [[0], [1], [2], [3]], 2)
    # x - y on the half-plane x + y >= 0 and 0 elsewhere
    return tc.uniform(f), {"degenerate": pl.make_pl(f, ray_values=[1, -1, 0, 0])}


def _fan_121():
    f = pf.build_fan([(1, 0), (0, 1), (-1, -2)], [[0], [1], [2]], 2)
    return WeightedFan(f, {frozenset([0]): 1, frozenset([1]): 2, frozenset([2]): 1}), {}


def _line_product():
    a = _tropical_line_r2()[0]
    return tc.product_weighted(a, a), {}


def _bergman(m):
    return lambda: (mt.bergman_fan(m), {})


def _parallel_pair():
    # rank 2 on {0,1,2} with 0 and 1 parallel
    return mt.matroid_from_bases(3, [[0, 2], [1, 2]])


def _three_collinear():
    # rank 3 on five elements; 0, 1, 2 lie on a line
    bases = [b for b in itertools.combinations(range(5), 3) if set(b) != {0, 1, 2}]
    return mt.matroid_from_bases(5, bases)


def _coloop_line():
    # U_{2,3} plus a coloop
    return mt.matroid_from_bases(4, [[0, 1, 3], [0, 2, 3], [1, 2, 3]])


EXAMPLES: dict[str, Example] = {e.name: e for e in [
    Example("zero", "the 0-fan in rank 0", _zero, True, ("complete",)),
    Example("r1", "complete fan of R^1", _r1, True, ("complete",)),
    Example("r2", "four-quadrant fan of R^2", _r2, True, ("complete",)),
    Example("r2-p2", "complete fan of R^2 with rays e1, e2, -e1-e2", _p2, True, ("complete",)),
    Example("r3", "orthant fan of R^3", _r3, True, ("complete",)),
    Example("r3-p3", "complete fan of R^3 with rays e1, e2, e3, -e1-e2-e3", _p3, True, ("complete",)),
    Example("classical-line-r2", "line x = y in R^2", _classical_line_r2, True, ("line",)),
    Example("tropical-line-r2", "standard tropical line in R^2", _tropical_line_r2, True, ("line",)),
    Example("line-3x-2y", "line 3x = 2y in R^2", _line_3x_2y, True, ("line",)),
    Example("classical-line-r3", "a coordinate line in R^3", _classical_line_r3, True, ("line", "r3")),
    Example("mixed-line-r3", "degenerate modification of the tropical line", _mixed_line_r3, True,
            ("line", "r3")),
    Example("tropical-line-r3", "standard tropical line in R^3", _tropical_line_r3, True, ("line", "r3")),
    Example("classical-plane-r3", "plane z = 0 in R^3", _classical_plane_r3, True, ("plane", "r3")),
    Example("minx0-modification", "modification of R^2 along min{x,0}", _minx0_modification, True,
            ("plane", "r3")),
    Example("tropical-plane-r3", "standard tropical plane in R^3", _tropical_plane_r3, True,
            ("plane", "r3")),
    Example("cross", "rays +-e1, +-e2 (reducible)", _cross, False, ("line",)),
    Example("fan-121", "rays (1,0),(0,1),(-1,-2) with weights 1,2,1", _fan_121, False, ("line",)),
    Example("line-x-line", "product of two tropical lines", _line_product, True, ("plane",)),
    Example("bergman-u23", "Bergman fan of U(2,3)", _bergman(mt.uniform(2, 3)), True, ("matroid",)),
    Example("bergman-u24", "Bergman fan of U(2,4)", _bergman(mt.uniform(2, 4)), True, ("matroid",)),
    Example("bergman-u34", "Bergman fan of U(3,4)", _bergman(mt.uniform(3, 4)), True, ("matroid",)),
    Example("bergman-u25", "Bergman fan of U(2,5)", _bergman(mt.uniform(2, 5)), True, ("matroid",)),
    Example("bergman-parallel", "rank 2 matroid with a parallel pair", _bergman(_parallel_pair()), True,
            ("matroid",)),
    Example("bergman-coloop", "U(2,3) plus a coloop", _bergman(_coloop_line()), True, ("matroid",)),
    Example("bergman-collinear", "rank 3 on five elements with three collinear",
            _bergman(_three_collinear()), True, ("matroid",)),
]}

MATROIDS = {
    "u23": lambda: mt.uniform(2, 3),
    "u24": lambda: mt.uniform(2, 4),
    "u34": lambda: mt.uniform(3, 4),
    "u25": lambda: mt.uniform(2, 5),
    "u35": lambda: mt.uniform(3, 5),
    "parallel": _parallel_pair,
    "coloop": _coloop_line,
    "collinear": _three_collinear,
}


def get(name: str) -> Example:
    try:
        return EXAMPLES[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(EXAMPLES)}") from None
