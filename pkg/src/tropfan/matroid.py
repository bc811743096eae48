"""Matroids given by bases, their flats, and fine Bergman fans.

Ground set elements are ``0 .. n-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from . import polyfan as pf
from . import tropcycle as tc
from .tropcycle import WeightedFan

MAX_GROUND = 8


class MatroidError(ValueError):
    pass


class ExchangeAxiomViolation(MatroidError):
    pass


class LoopPresent(MatroidError):
    pass


@dataclass(frozen=True)
class Matroid:
    ground_size: int
    bases: frozenset

    @cached_property
    def rank(self) -> int:
        return len(next(iter(self.bases)))

    def rank_of(self, s: Iterable[int]) -> int:
        s = frozenset(s)
        return max(len(s & b) for b in self.bases)

    def closure(self, s: Iterable[int]) -> frozenset:
        s = frozenset(s)
        r = self.rank_of(s)
        return frozenset(e for e in range(self.ground_size) if self.rank_of(s | {e}) == r)

    @cached_property
    def loops(self) -> frozenset:
        return frozenset(range(self.ground_size)) - frozenset().union(*self.bases)

    @cached_property
    def coloops(self) -> frozenset:
        return frozenset.intersection(*self.bases)

    def delete(self, i: int) -> "Matroid":
        """Deletion of ``i``; elements above ``i`` shift down by one."""
        if i in self.coloops:
            bases = {b - {i} for b in self.bases}
        else:
            bases = {b for b in self.bases if i not in b}
        return Matroid(self.ground_size - 1, frozenset(_shift(b, i) for b in bases))

    def contract(self, i: int) -> "Matroid":
        """Contraction of ``i``; elements above ``i`` shift down by one."""
        if i in self.loops:
            return self.delete(i)
        bases = {b - {i} for b in self.bases if i in b}
        return Matroid(self.ground_size - 1, frozenset(_shift(b, i) for b in bases))

    def flats(self) -> dict:
        """Every flat mapped to its rank."""
        out = {}
        for k in range(self.ground_size + 1):
            for s in itertools.combinations(range(self.ground_size), k):
                f = self.closure(s)
                if f not in out:
                    out[f] = self.rank_of(f)
        return out

    def flat_covers(self) -> list:
        fl = self.flats()
        return [(a, b) for a in fl for b in fl if a < b and fl[b] == fl[a] + 1]


def _shift(b: frozenset, i: int) -> frozenset:
    return frozenset(e if e < i else e - 1 for e in b)


def matroid_from_bases(ground_size: int, bases: Iterable[Iterable[int]]) -> Matroid:
    """Validated matroid; checks the basis exchange axiom exhaustively."""
    if ground_size > MAX_GROUND:
        raise MatroidError(f"ground sets above {MAX_GROUND} elements are out of scope")
    bs = frozenset(frozenset(int(e) for e in b) for b in bases)
    if not bs:
        raise MatroidError("a matroid needs at least one basis")
    if len({len(b) for b in bs}) != 1:
        raise MatroidError("bases must have equal size")
    if any(e < 0 or e >= ground_size for b in bs for e in b):
        raise MatroidError("basis element outside the ground set")
    for a in bs:
        for b in bs:
            for x in a - b:
                if not any((a - {x}) | {y} in bs for y in b - a):
                    raise ExchangeAxiomViolation(
                        f"no exchange for {x} between {sorted(a)} and {sorted(b)}")
    return Matroid(ground_size, bs)


def uniform(r: int, n: int) -> Matroid:
    if not 0 <= r <= n:
        raise MatroidError("need 0 <= r <= n")
    return matroid_from_bases(n, itertools.combinations(range(n), r))


def _quotient_vector(flat: frozenset, n: int) -> tuple:
    # Z^n / Z(1,...,1) with the last coordinate dropped
    last = 1 if n - 1 in flat else 0
    return tuple((1 if i in flat else 0) - last for i in range(n - 1))


def bergman_fan(m: Matroid, check: bool = False) -> WeightedFan:
    """Fine Bergman fan: rays at proper nonempty flats, cones at chains, weights 1."""
    if m.loops:
        raise LoopPresent(f"element {min(m.loops)} is a loop")
    n = m.ground_size
    fl = m.flats()
    ground = frozenset(range(n))
    proper = sorted((f for f in fl if f and f != ground), key=lambda f: (fl[f], sorted(f)))
    rays = [_quotient_vector(f, n) for f in proper]
    index = {f: i for i, f in enumerate(proper)}
    chains: list = []

    def extend(chain: list):
        last = chain[-1] if chain else frozenset()
        nxt = [f for f in proper if last < f and fl[f] == fl[last] + 1]
        if not nxt:
            chains.append([index[f] for f in chain])
            return
        for f in nxt:
            extend(chain + [f])

    extend([])
    fan = pf.build_fan(rays, chains, n - 1 if n else 0, check=check)
    return tc.uniform(fan)
