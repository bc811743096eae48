"""Rational polyhedral fans over a lattice ``Z^n``.

A fan stores its primitive ray generators once and every cone as the set of
indices of its rays. Because two cones of a fan meet in a common face, the
face relation is plain inclusion of ray-index sets, which keeps the rest of the
package combinatorial. Geometry (facets, intersections, point location) goes
through exact H-representations computed by brute force over generator subsets;
that is plenty at the desk scale this package targets (ambient rank <= 8).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

from . import exactlin as el
from .exactlin import Vector

Cone = frozenset  # frozenset[int] of ray indices


class FanError(ValueError):
    pass


class NonPrimitiveRay(FanError):
    pass


class OverlappingCones(FanError):
    pass


class MissingFace(FanError):
    pass


class SupportMismatch(FanError):
    pass


class ConeNotInFan(FanError):
    pass


class PointOutsideSupport(FanError):
    pass


class BudgetExceeded(RuntimeError):
    """A bounded search ran out of budget; distinct from a negative answer."""


# ---------------------------------------------------------------------------
# cone geometry on explicit generators


@dataclass(frozen=True)
class HRep:
    """``{x : eq . x = 0 for eq in equalities, f . x >= 0 for f in facets}``.

    ``facet_sets`` records which generators lie on each facet.
    """

    dim: int
    equalities: tuple[Vector, ...]
    facets: tuple[Vector, ...]
    facet_sets: tuple[frozenset, ...]

    def contains(self, x: Sequence) -> bool:
        return all(el.dot(e, x) == 0 for e in self.equalities) and all(
            el.dot(f, x) >= 0 for f in self.facets)

    def in_relint(self, x: Sequence) -> bool:
        return all(el.dot(e, x) == 0 for e in self.equalities) and all(
            el.dot(f, x) > 0 for f in self.facets)


@lru_cache(maxsize=None)
def hrep(gens: tuple[Vector, ...], n: int) -> HRep:
    """Facet description of the cone generated by ``gens`` in ``Z^n``."""
    gens = tuple(g for g in gens if any(g))
    if not gens:
        return HRep(0, tuple(tuple(r) for r in el.identity(n)), (), ())
    basis = el.saturate(gens, n)
    d = len(basis)
    equalities = tuple(tuple(r) for r in el.integer_kernel(list(gens)))
    coords = [el.solve_integer(basis, g) for g in gens]
    completion = el.complete_basis(basis, n)
    comp_inv = el.inverse_unimodular(completion)
    facets: list[Vector] = []
    facet_sets: list[frozenset] = []
    seen = set()
    for combo in itertools.combinations(range(len(gens)), d - 1):
        rows = [coords[i] for i in combo]
        if rows and el.rank(rows) < d - 1:
            continue
        ker = el.integer_kernel(rows, ncols=d)
        if len(ker) != 1:
            continue
        w = ker[0]
        vals = [el.dot(w, c) for c in coords]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            w = [-x for x in w]
            vals = [-v for v in vals]
        else:
            continue
        zero = frozenset(i for i, v in enumerate(vals) if v == 0)
        if zero in seen or len(zero) == len(gens):
            continue
        seen.add(zero)
        # lift the local functional to an ambient covector that kills the complement
        wfull = list(w) + [0] * (n - d)
        amb = tuple(sum(comp_inv[i][j] * wfull[j] for j in range(n)) for i in range(n))
        facets.append(el.primitive(amb))
        facet_sets.append(zero)
    return HRep(d, equalities, tuple(facets), tuple(facet_sets))


@lru_cache(maxsize=None)
def _span_dim(gens: tuple[Vector, ...]) -> int:
    return el.rank(gens) if gens else 0


@lru_cache(maxsize=None)
def is_pointed(gens: tuple[Vector, ...], n: int) -> bool:
    h = hrep(gens, n)
    if h.dim == 0:
        return True
    if not h.facets:
        return False
    # pointed iff the facet normals together with the equalities span the dual
    return el.rank(list(h.facets) + list(h.equalities)) == n


@lru_cache(maxsize=None)
def face_sets(gens: tuple[Vector, ...], n: int) -> frozenset:
    """All faces of a pointed cone, as sets of generator positions."""
    h = hrep(gens, n)
    top = frozenset(range(len(gens)))
    faces = {top}
    frontier = [top]
    while frontier:
        new = []
        for f in frontier:
            for fs in h.facet_sets:
                g = f & fs
                if g not in faces:
                    faces.add(g)
                    new.append(g)
        frontier = new
    # keep only genuine faces: intersections of facet sets are faces, but a
    # subset could coincide in span with a smaller one; filter by rank closure
    return frozenset(faces)


def extreme_rays(equalities: Sequence[Sequence[int]], inequalities: Sequence[Sequence[int]],
                 n: int) -> list[Vector]:
    """Primitive extreme rays of a pointed cone given by equalities and inequalities."""
    eqs = [list(e) for e in equalities if any(e)]
    ineqs = [list(f) for f in inequalities if any(f)]
    e = el.rank(eqs) if eqs else 0
    need = n - 1 - e
    if need < 0:
        return []
    out: list[Vector] = []
    seen = set()
    for combo in itertools.combinations(range(len(ineqs)), need):
        rows = eqs + [ineqs[i] for i in combo]
        if not rows:
            ker = el.identity(n)
        else:
            if el.rank(rows) != n - 1:
                continue
            ker = el.integer_kernel(rows)
        if len(ker) != 1:
            continue
        r = ker[0]
        vals = [el.dot(f, r) for f in ineqs]
        if all(v >= 0 for v in vals):
            cand = tuple(r)
        elif all(v <= 0 for v in vals):
            cand = tuple(-x for x in r)
        else:
            continue
        cand = el.primitive(cand)
        if cand not in seen:
            seen.add(cand)
            out.append(cand)
    return sorted(out)


def intersect_cones(g1: Sequence[Vector], g2: Sequence[Vector], n: int) -> list[Vector]:
    """Extreme rays of ``cone(g1) ∩ cone(g2)``."""
    h1 = hrep(tuple(map(tuple, g1)), n)
    h2 = hrep(tuple(map(tuple, g2)), n)
    return extreme_rays(h1.equalities + h2.equalities, h1.facets + h2.facets, n)


# ---------------------------------------------------------------------------
# fans


def _cone_key(cone: Cone):
    return (len(cone), tuple(sorted(cone)))


@dataclass(frozen=True, eq=False)
class Fan:
    """A fan in ``Z^ambient_rank`` given by primitive rays and ray-index cones.

    ``cones`` contains every cone including the origin ``frozenset()``.
    Build instances with :func:`build_fan`.
    """

    ambient_rank: int
    rays: tuple[Vector, ...]
    cones: tuple[Cone, ...]

    def __eq__(self, other):
        return (isinstance(other, Fan) and self.ambient_rank == other.ambient_rank
                and self.rays == other.rays and set(self.cones) == set(other.cones))

    def __hash__(self):
        return hash((self.ambient_rank, self.rays, frozenset(self.cones)))

    def __repr__(self):
        return (f"Fan(rank={self.ambient_rank}, rays={len(self.rays)}, "
                f"cones={len(self.cones)}, dim={self.dim})")

    @cached_property
    def cone_set(self) -> frozenset:
        return frozenset(self.cones)

    def gens(self, cone: Iterable[int]) -> tuple[Vector, ...]:
        return tuple(self.rays[i] for i in sorted(cone))

    @cached_property
    def _dims(self) -> dict:
        return {c: _span_dim(self.gens(c)) for c in self.cones}

    def cone_dim(self, cone: Cone) -> int:
        return self._dims[cone]

    def cone_hrep(self, cone: Cone) -> HRep:
        return hrep(self.gens(cone), self.ambient_rank)

    @cached_property
    def dim(self) -> int:
        return max(self._dims.values(), default=0)

    def cones_of_dim(self, k: int) -> list[Cone]:
        return sorted((c for c in self.cones if self._dims[c] == k), key=_cone_key)

    @cached_property
    def maximal_cones(self) -> list[Cone]:
        return sorted((c for c in self.cones if not any(c < d for d in self.cones)),
                      key=_cone_key)

    @cached_property
    def is_pure(self) -> bool:
        return all(self._dims[c] == self.dim for c in self.maximal_cones)

    def faces_of(self, cone: Cone) -> list[Cone]:
        return [c for c in self.cones if c <= cone]

    def cofaces(self, cone: Cone, codim: Optional[int] = None) -> list[Cone]:
        d = self._dims[cone]
        return sorted((c for c in self.cones if cone <= c
                       and (codim is None or self._dims[c] == d + codim)), key=_cone_key)

    @cached_property
    def simplicial(self) -> bool:
        return all(len(c) == self._dims[c] for c in self.cones)

    def ray_index(self, v: Sequence[int]) -> Optional[int]:
        v = tuple(v)
        try:
            return self.rays.index(v)
        except ValueError:
            return None

    def carrier(self, x: Sequence) -> Optional[Cone]:
        """The cone whose relative interior contains ``x`` (None if outside)."""
        best = None
        for c in self.cones:
            h = self.cone_hrep(c)
            if h.contains(x) and (best is None or self._dims[c] < self._dims[best]):
                best = c
        return best


def build_fan(rays: Sequence[Sequence[int]], cones: Iterable[Iterable[int]], ambient_rank: int,
              *, close: bool = True, check: bool = True) -> Fan:
    """Validate raw data and return a :class:`Fan`.

    ``cones`` lists ray-index sets; with ``close`` the faces of every listed
    cone are added, otherwise a missing face raises :class:`MissingFace`.
    ``check`` runs the pairwise intersection test, which dominates the cost.
    """
    rays = [tuple(int(x) for x in r) for r in rays]
    for r in rays:
        if len(r) != ambient_rank:
            raise FanError(f"ray {r} does not live in Z^{ambient_rank}")
        if not any(r):
            raise NonPrimitiveRay("zero ray")
        if el.vec_gcd(r) != 1:
            raise NonPrimitiveRay(f"ray {r} is not primitive")
    if len(set(rays)) != len(rays):
        raise FanError("ray generators must be pairwise distinct")
    given = {frozenset(int(i) for i in c) for c in cones}
    given.add(frozenset())
    for c in given:
        if any(i < 0 or i >= len(rays) for i in c):
            raise FanError(f"cone {sorted(c)} refers to an unknown ray")
    all_cones = set(given)
    n = ambient_rank
    for c in given:
        idx = sorted(c)
        gens = tuple(rays[i] for i in idx)
        if not is_pointed(gens, n):
            raise OverlappingCones(f"cone {idx} is not strongly convex")
        fs = face_sets(gens, n)
        for i in range(len(idx)):
            if frozenset([i]) not in fs:
                raise FanError(f"ray {rays[idx[i]]} is not extremal in cone {idx}")
        for f in fs:
            face = frozenset(idx[i] for i in f)
            if face not in given:
                if not close:
                    raise MissingFace(f"face {sorted(face)} of cone {idx} is missing")
                all_cones.add(face)
        # every ray subset listed must itself be a face, so sets that are not
        # faces of their own span are rejected above via extremality
    fan = Fan(n, tuple(rays), tuple(sorted(all_cones, key=_cone_key)))
    if check:
        _check_intersections(fan)
    return fan


def _check_intersections(fan: Fan) -> None:
    maxc = fan.maximal_cones
    n = fan.ambient_rank
    for a, b in itertools.combinations(maxc, 2):
        common = a & b
        if common not in fan.cone_set:
            raise OverlappingCones(f"cones {sorted(a)} and {sorted(b)} share rays "
                                   f"that do not span a common face")
        if _separated(fan, a, b, common):
            continue
        ga, gb = fan.gens(a), fan.gens(b)
        inter = intersect_cones(ga, gb, n)
        hc = fan.cone_hrep(common)
        for r in inter:
            if not hc.contains(r):
                raise OverlappingCones(
                    f"cones {sorted(a)} and {sorted(b)} meet outside a common face")


def _separated(fan: Fan, a: Cone, b: Cone, common: Cone) -> bool:
    """Cheap sufficient test that ``a ∩ b`` lies in the cone spanned by ``common``."""
    ga, gb = fan.gens(a), fan.gens(b)
    ha, hb = fan.cone_hrep(a), fan.cone_hrep(b)
    cg = fan.gens(common)
    sum_a = _facet_sum(ha, cg, fan.ambient_rank)
    sum_b = _facet_sum(hb, cg, fan.ambient_rank)
    # common must cut out a face of each cone; leave anything else to the exact test
    for cone, gens, fsum in ((a, ga, sum_a), (b, gb, sum_b)):
        if {i for i, g in zip(sorted(cone), gens) if el.dot(fsum, g) == 0} != set(common):
            return False
    # transverse spans meet only in span(common), which cuts a face from each cone
    if _span_dim(tuple(sorted(set(ga) | set(gb)))) == (
            fan.cone_dim(a) + fan.cone_dim(b) - fan.cone_dim(common)):
        return True
    candidates = [(f, 1) for f in ha.facets] + [(f, -1) for f in hb.facets]
    candidates += [(sum_a, 1), (sum_b, -1), (tuple(x - y for x, y in zip(sum_a, sum_b)), 1)]
    # f >= 0 on a and f <= 0 on b confine a ∩ b to the faces cut out by f = 0
    for f, sign in candidates:
        f = tuple(sign * x for x in f)
        va = [el.dot(f, g) for g in ga]
        vb = [el.dot(f, g) for g in gb]
        if any(v < 0 for v in va) or any(v > 0 for v in vb):
            continue
        on_a = {i for i, v in zip(sorted(a), va) if v == 0}
        on_b = {i for i, v in zip(sorted(b), vb) if v == 0}
        if on_a <= common and on_b <= common:
            return True
    return False


def _facet_sum(h: HRep, face_gens: Sequence[Vector], n: int) -> Vector:
    """Sum of the facet normals vanishing on ``face_gens``; zero exactly on that face."""
    out = [0] * n
    for f in h.facets:
        if all(el.dot(f, g) == 0 for g in face_gens):
            out = [x + y for x, y in zip(out, f)]
    return tuple(out)


def zero_fan(ambient_rank: int = 0) -> Fan:
    return Fan(ambient_rank, (), (frozenset(),))


def complete_line() -> Fan:
    return build_fan([(1,), (-1,)], [[0], [1]], 1)


def orthant_fan(k: int) -> Fan:
    """Complete fan of ``Z^k`` by coordinate orthants."""
    if k == 0:
        return zero_fan(0)
    rays = []
    for i in range(k):
        for s in (1, -1):
            v = [0] * k
            v[i] = s
            rays.append(tuple(v))
    cones = [[2 * i + (s == -1) for i, s in enumerate(signs)]
             for signs in itertools.product((1, -1), repeat=k)]
    return build_fan(rays, cones, k, check=False)


# ---------------------------------------------------------------------------
# operations


def face_lattice(fan: Fan) -> dict[Cone, list[Cone]]:
    """Map each cone to its faces (including itself and the origin)."""
    return {c: fan.faces_of(c) for c in fan.cones}


def apply_linear(fan: Fan, matrix: Sequence[Sequence[int]], target_rank: int) -> Fan:
    """Image of ``fan`` under a linear map injective on its span (rays re-primitivized)."""
    rays = [el.primitive(el.mat_vec(matrix, r)) for r in fan.rays]
    return Fan(target_rank, tuple(rays), fan.cones)


def minimal_lattice(fan: Fan) -> el.Matrix:
    """Canonical saturated basis of ``N_Σ``."""
    return el.saturate(fan.rays, fan.ambient_rank)


def restrict_to_lattice(fan: Fan, basis: Optional[Sequence[Sequence[int]]] = None) -> Fan:
    """Rewrite ``fan`` in coordinates of a saturated basis containing its rays."""
    basis = minimal_lattice(fan) if basis is None else [list(b) for b in basis]
    rays = []
    for r in fan.rays:
        c = el.solve_integer(basis, r)
        if c is None:
            raise FanError(f"ray {r} is outside the given lattice")
        rays.append(tuple(c))
    return Fan(len(basis), tuple(rays), fan.cones)


def star_fan_with_map(fan: Fan, sigma: Cone) -> tuple[Fan, dict[Cone, Cone], el.Matrix]:
    """Star fan at ``sigma`` plus the cone correspondence and the quotient map."""
    sigma = frozenset(sigma)
    if sigma not in fan.cone_set:
        raise ConeNotInFan(f"{sorted(sigma)} is not a cone of the fan")
    n = fan.ambient_rank
    basis = el.saturate(fan.gens(sigma), n)
    q = el.quotient_map(basis, n)
    above = fan.cofaces(sigma)
    new_rays: list[Vector] = []
    ray_map: dict[int, int] = {}
    for c in above:
        for i in sorted(c - sigma):
            if i in ray_map:
                continue
            img = el.primitive(el.mat_vec(q, fan.rays[i]))
            if img not in new_rays:
                new_rays.append(img)
            ray_map[i] = new_rays.index(img)
    cone_map = {c: frozenset(ray_map[i] for i in c - sigma) for c in above}
    star = Fan(n - len(basis), tuple(new_rays),
               tuple(sorted(set(cone_map.values()), key=_cone_key)))
    return star, cone_map, q


def star_fan(fan: Fan, sigma: Iterable[int]) -> Fan:
    return star_fan_with_map(fan, frozenset(sigma))[0]


def product(f: Fan, g: Fan) -> Fan:
    """Product fan in ``Z^(n+m)``; rays of ``f`` come first."""
    n, m = f.ambient_rank, g.ambient_rank
    rays = [tuple(r) + (0,) * m for r in f.rays] + [(0,) * n + tuple(r) for r in g.rays]
    off = len(f.rays)
    cones = {a | frozenset(off + j for j in b) for a in f.cones for b in g.cones}
    return Fan(n + m, tuple(rays), tuple(sorted(cones, key=_cone_key)))


def product_cone_map(f: Fan, g: Fan) -> dict[tuple[Cone, Cone], Cone]:
    off = len(f.rays)
    return {(a, b): a | frozenset(off + j for j in b) for a in f.cones for b in g.cones}


def is_complete(fan: Fan) -> bool:
    """``|fan| = R^n`` via the wall-count criterion."""
    n = fan.ambient_rank
    if n == 0:
        return True
    if not fan.is_pure or fan.dim != n:
        return False
    maxc = fan.cones_of_dim(n)
    for tau in fan.cones_of_dim(n - 1):
        if sum(1 for s in maxc if tau < s) != 2:
            return False
    return True


def classify(fan: Fan) -> dict:
    simplicial = fan.simplicial
    unimodular = simplicial and all(el.is_unimodular_set(fan.gens(c)) for c in fan.cones)
    return {
        "simplicial": simplicial,
        "unimodular": unimodular,
        "pure": fan.is_pure,
        "minimal_lattice": [tuple(b) for b in minimal_lattice(fan)],
    }


def _interior_point(fan: Fan, cone: Cone) -> Vector:
    gens = fan.gens(cone)
    return tuple(sum(col) for col in zip(*gens)) if gens else (0,) * fan.ambient_rank


# ---------------------------------------------------------------------------
# supports, refinements


def _tiles(hs: HRep, pieces: list, n: int) -> bool:
    """Do the full-dimensional ``pieces`` of a cone with facets ``hs`` cover it?

    Interior walls must be shared by exactly two pieces.
    """
    if not pieces:
        return False
    walls: dict[frozenset, int] = {}
    for p in pieces:
        hp = hrep(p, n)
        for fs in hp.facet_sets:
            wall = frozenset(p[i] for i in fs)
            # walls lying on the boundary of the cone need no partner
            on_boundary = any(all(el.dot(fn, w) == 0 for w in wall) for fn in hs.facets)
            if not on_boundary:
                walls[wall] = walls.get(wall, 0) + 1
    return all(cnt == 2 for cnt in walls.values())


def _covers(f: Fan, g: Fan) -> bool:
    """``|f| ⊆ |g|``: every maximal cone of f is tiled by its intersections with g."""
    n = f.ambient_rank
    gmax = g.maximal_cones
    for s in f.maximal_cones:
        d = f.cone_dim(s)
        if d == 0:
            continue
        sg = f.gens(s)
        pieces = []
        for t in gmax:
            ht = g.cone_hrep(t)
            # a piece of full dimension forces span(s) inside span(t)
            if ht.dim < d or any(el.dot(e, v) != 0 for e in ht.equalities for v in sg):
                continue
            rays = intersect_cones(sg, g.gens(t), n)
            if rays and hrep(tuple(rays), n).dim == d:
                pieces.append(tuple(rays))
        if not _tiles(f.cone_hrep(s), pieces, n):
            return False
    return True


def tiles_by_refinement(coarse: Fan, fine: Fan) -> bool:
    """``|coarse| ⊆ |fine|`` given that ``fine`` refines ``coarse``.

    Each maximal cone of ``coarse`` must be tiled by the cones of ``fine``
    inside it, which needs no cone intersections.
    """
    n = coarse.ambient_rank
    fmax = [(c, fine.cone_dim(c), tuple(fine.gens(c))) for c in fine.maximal_cones]
    for s in coarse.maximal_cones:
        d = coarse.cone_dim(s)
        if d == 0:
            continue
        hs = coarse.cone_hrep(s)
        pieces = [g for _, dc, g in fmax if dc == d and all(hs.contains(v) for v in g)]
        if not _tiles(hs, pieces, n):
            return False
    return True


def same_support(f: Fan, g: Fan) -> bool:
    if f.ambient_rank != g.ambient_rank:
        return False
    if f == g:
        return True
    return _covers(f, g) and _covers(g, f)


def common_refinement(f: Fan, g: Fan, *, check_support: bool = True) -> Fan:
    """Fan of all intersections of cones of ``f`` and ``g``."""
    if f.ambient_rank != g.ambient_rank:
        raise SupportMismatch("fans live in different lattices")
    if check_support and not same_support(f, g):
        raise SupportMismatch("fans do not have the same support")
    if f == g:
        return f
    n = f.ambient_rank
    rays: list[Vector] = []
    index: dict[Vector, int] = {}
    cones = []
    for a in f.maximal_cones:
        for b in g.maximal_cones:
            inter = intersect_cones(f.gens(a), g.gens(b), n)
            ids = []
            for r in inter:
                if r not in index:
                    index[r] = len(rays)
                    rays.append(r)
                ids.append(index[r])
            cones.append(ids)
    order = sorted(range(len(rays)), key=lambda i: rays[i])
    relabel = {old: new for new, old in enumerate(order)}
    rays_sorted = [rays[i] for i in order]
    cones = [[relabel[i] for i in c] for c in cones]
    refined = build_fan(rays_sorted, cones, n, check=False)
    # drop lower-dimensional pieces that are faces of bigger ones (already faces)
    return refined


def refines(fine: Fan, coarse: Fan) -> bool:
    """Every cone of ``fine`` lies in some cone of ``coarse``."""
    for c in fine.maximal_cones:
        p = _interior_point(fine, c)
        carrier = coarse.carrier(p)
        if carrier is None:
            return False
        h = coarse.cone_hrep(carrier)
        if not all(h.contains(v) for v in fine.gens(c)):
            return False
    return True


def stellar_subdivision(fan: Fan, point: Sequence[int]) -> Fan:
    """Star subdivision of ``fan`` at a lattice point of its support."""
    carrier = fan.carrier(point)
    if carrier is None:
        raise PointOutsideSupport(f"{tuple(point)} is not in the support")
    v = el.primitive(point)
    if v in fan.rays:
        return fan
    new = len(fan.rays)
    cones = set()
    for c in fan.cones:
        if carrier <= c:
            for face in fan.faces_of(c):
                if not carrier <= face:
                    cones.add(face)
                    cones.add(face | {new})
        else:
            cones.add(c)
    rays = fan.rays + (v,)
    return Fan(fan.ambient_rank, rays, tuple(sorted(cones, key=_cone_key)))


def _parallelepiped_point(fan: Fan, cone: Cone) -> Vector:
    gens = fan.gens(cone)
    n = fan.ambient_rank
    basis = el.saturate(gens, n)
    coords = [el.solve_integer(basis, g) for g in gens]
    for j in range(len(basis)):
        lam = el.solve_rational(coords, [int(i == j) for i in range(len(basis))])
        frac = [x - (x.numerator // x.denominator) for x in lam]
        if any(frac):
            p = [sum(frac[i] * gens[i][k] for i in range(len(gens))) for k in range(n)]
            return tuple(int(x) for x in p)
    raise AssertionError("cone is unimodular")


def unimodular_refinement(fan: Fan) -> Fan:
    """Refine by stellar subdivisions until every cone is unimodular."""
    while True:
        bad = [c for c in fan.cones if len(c) != fan.cone_dim(c)]
        if bad:
            c = min(bad, key=_cone_key)
            fan = stellar_subdivision(fan, _interior_point(fan, c))
            continue
        bad = [c for c in fan.cones if not el.is_unimodular_set(fan.gens(c))]
        if not bad:
            return fan
        c = min(bad, key=_cone_key)
        fan = stellar_subdivision(fan, _parallelepiped_point(fan, c))


# ---------------------------------------------------------------------------
# isomorphisms


@dataclass(frozen=True)
class FanIsomorphism:
    """Lattice isomorphism between minimal lattices carrying cones to cones.

    ``matrix`` acts on coordinates with respect to ``source_basis`` and
    produces coordinates with respect to ``target_basis``.
    """

    matrix: tuple[tuple[int, ...], ...]
    source_basis: tuple[Vector, ...]
    target_basis: tuple[Vector, ...]
    ray_bijection: tuple[int, ...]
    cone_bijection: dict = field(compare=False)


def _ray_signature(fan: Fan, i: int) -> tuple:
    counts = [0] * (fan.dim + 1)
    for c in fan.cones:
        if i in c:
            counts[fan.cone_dim(c)] += 1
    return tuple(counts)


def find_isomorphism(f: Fan, g: Fan, f_weights: Optional[dict] = None,
                     g_weights: Optional[dict] = None, budget: int = 200_000
                     ) -> Optional[FanIsomorphism]:
    """Search for a lattice isomorphism ``N_f -> N_g`` carrying cones to cones.

    Candidates come from sending a spanning set of rays of ``f`` to rays of
    ``g`` in lexicographic order. Raises :class:`BudgetExceeded` if more than
    ``budget`` candidates are examined without a verdict.
    """
    fb, gb = minimal_lattice(f), minimal_lattice(g)
    if len(fb) != len(gb) or len(f.rays) != len(g.rays) or len(f.cones) != len(g.cones):
        return None
    fr, gr = restrict_to_lattice(f, fb), restrict_to_lattice(g, gb)
    if sorted(f.cone_dim(c) for c in f.cones) != sorted(g.cone_dim(c) for c in g.cones):
        return None
    k = len(fb)
    sig_f = [_ray_signature(f, i) for i in range(len(f.rays))]
    sig_g = [_ray_signature(g, i) for i in range(len(g.rays))]
    if sorted(sig_f) != sorted(sig_g):
        return None
    # greedy spanning subset of rays of f
    span: list[int] = []
    for i, r in enumerate(fr.rays):
        if el.rank([fr.rays[j] for j in span] + [r]) > len(span):
            span.append(i)
        if len(span) == k:
            break
    g_cones = g.cone_set
    g_ray_index = {r: i for i, r in enumerate(gr.rays)}
    tried = 0

    def check(assign: list[int]):
        if k == 0:
            mat: list[list] = []
        else:
            src = [fr.rays[i] for i in span]
            dst = [gr.rays[j] for j in assign]
            # matrix A with A @ src_i = dst_i, i.e. A = D S^{-1} (columns)
            s_inv = el.inverse_rational(el.transpose(src))
            mat = el.matmul(el.transpose(dst), s_inv)
            if any(Fraction(x).denominator != 1 for row in mat for x in row):
                return None
            mat = [[int(x) for x in row] for row in mat]
            if abs(el.det(mat)) != 1:
                return None
        bij = []
        for r in fr.rays:
            img = el.mat_vec(mat, r) if k else ()
            j = g_ray_index.get(tuple(img))
            if j is None:
                return None
            bij.append(j)
        if len(set(bij)) != len(bij):
            return None
        cone_bij = {}
        for c in f.cones:
            image = frozenset(bij[i] for i in c)
            if image not in g_cones:
                return None
            cone_bij[c] = image
        if f_weights is not None and g_weights is not None:
            for c, w in f_weights.items():
                if g_weights.get(cone_bij[c]) != w:
                    return None
        return FanIsomorphism(tuple(tuple(r) for r in mat), tuple(map(tuple, fb)),
                              tuple(map(tuple, gb)), tuple(bij), cone_bij)

    def search(pos: int, assign: list[int]):
        nonlocal tried
        if pos == len(span):
            tried += 1
            if tried > budget:
                raise BudgetExceeded(f"isomorphism search exceeded {budget} candidates")
            return check(assign)
        want = sig_f[span[pos]]
        for j in range(len(g.rays)):
            if j in assign or sig_g[j] != want:
                continue
            res = search(pos + 1, assign + [j])
            if res is not None:
                return res
        return None

    return search(0, [])


def local_support(fan: Fan, v: Sequence) -> Fan:
    """Fan structure on the local cone of the support at ``v``.

    Realized as ``star(fan, carrier) x (complete fan of rank dim carrier)`` in
    quotient coordinates followed by coordinates on ``N_carrier``.
    """
    carrier = fan.carrier(v)
    if carrier is None:
        raise PointOutsideSupport(f"{tuple(v)} is not in the support")
    star = star_fan(fan, carrier)
    return product(star, orthant_fan(fan.cone_dim(carrier)))
