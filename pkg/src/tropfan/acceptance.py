"""Acceptance checks shared by the test suite and ``examples --verify-all``."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable

from . import chow as ch
from . import corpus
from . import matroid as mt
from . import modification as md
from . import plfun as pl
from . import polyfan as pf
from . import quasilinear as ql
from . import tropcycle as tc


@dataclass
class Outcome:
    number: int
    title: str
    passed: bool
    seconds: float
    limit: float
    detail: str

    @property
    def ok(self) -> bool:
        return self.passed and self.seconds < self.limit

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return (f"[{verdict}] criterion {self.number}: {self.title} "
                f"({self.seconds:.2f}s < {self.limit:.0f}s) {self.detail}")


def _ex(name: str):
    return corpus.get(name).weighted()


def _certified_names(max_rank: int = 99) -> list:
    return [n for n, e in corpus.EXAMPLES.items()
            if e.quasilinear and e.weighted().fan.ambient_rank <= max_rank]


# ---------------------------------------------------------------------------


def example_zoo() -> tuple[bool, str]:
    line = _ex("tropical-line-r2")
    ok_line = tc.is_balanced(line) and sorted(line.weights.values()) == [1, 1, 1]
    cross = _ex("cross")
    irr = tc.irreducibility(cross)
    ok_cross = irr["rank"] == 2 and not ql.recognize(cross).accepted
    f121 = _ex("fan-121")
    ok_121 = (tc.is_balanced(f121) and tc.irreducibility(f121)["irreducible"]
              and not tc.is_reduced(f121) and not ql.recognize(f121).accepted)
    r1 = corpus.get("r1")
    d = pl.divisor(r1.weighted(), r1.functions()["min2x0"])
    ok_div = d["ord"] == {frozenset(): 2}
    parts = {"line": ok_line, "cross": ok_cross, "121": ok_121, "div": ok_div}
    return all(parts.values()), str(parts)


def modification_figures() -> tuple[bool, str]:
    p2 = corpus.get("r2-p2")
    plane = md.modify(p2.weighted(), p2.functions()["minxy0"])
    want_rays = {(1, 0, 0), (0, 1, 0), (-1, -1, -1), (0, 0, 1)}
    rays = plane.fan.rays
    two_cones = {frozenset(rays[i] for i in c) for c in plane.fan.cones_of_dim(2)}
    want_cones = {frozenset(p) for p in itertools.combinations(want_rays, 2)}
    ok_plane = (set(rays) == want_rays and two_cones == want_cones
                and set(plane.weights.values()) == {1})
    r2 = corpus.get("r2")
    mx = md.modify(r2.weighted(), r2.functions()["minx0"])
    rays = mx.fan.rays
    e1, e2, e3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    f = (-1, 0, -1)
    m2 = (0, -1, 0)
    want = {frozenset(c) for c in [(e1, e2), (e1, m2), (f, e2), (f, m2), (e2, e3), (m2, e3)]}
    got = {frozenset(rays[i] for i in c) for c in mx.fan.cones_of_dim(2)}
    ok_mx = set(rays) == {e1, e2, e3, f, m2} and got == want and set(mx.weights.values()) == {1}
    prod = tc.product_weighted(_ex("tropical-line-r2"), _ex("r1"))
    iso = pf.find_isomorphism(mx.fan, prod.fan, mx.weights, prod.weights)
    parts = {"plane": ok_plane, "minx0": ok_mx, "iso_line_x_r1": iso is not None}
    return all(parts.values()), str(parts)


def random_modifications(count: int = 20, seed: int = 7) -> list:
    """``count`` pairs (base, phi) with a reduced, quasilinear divisor."""
    rng = random.Random(seed)
    bases = ["r1", "r2", "r2-p2", "tropical-line-r2", "classical-line-r2", "r3-p3",
             "tropical-plane-r3"]
    out = []
    attempts = 0
    while len(out) < count and attempts < 5000:
        attempts += 1
        name = bases[attempts % len(bases)]
        wf = _ex(name)
        fan = wf.fan
        vals = [rng.randint(-2, 2) for _ in fan.rays]
        try:
            phi = pl.make_pl(fan, ray_values=vals)
        except pl.PLError:
            continue
        d = pl.divisor(wf, phi)
        if any(v not in (0, 1) for v in d["ord"].values()):
            continue
        if not d["trivial"] and not ql.recognize(tc.WeightedFan(d["weil"].fan, d["weil"].weights)).accepted:
            continue
        if d["trivial"]:
            continue
        out.append((name, wf, phi))
    return out


def recognizer_round_trips() -> tuple[bool, str]:
    bad = []
    names = _certified_names(3)
    for n in names:
        wf = _ex(n)
        v = ql.recognize(wf)
        if not (v.accepted and ql.verify_certificate(wf, v.certificate)):
            bad.append(n)
    pairs = random_modifications()
    failures = 0
    for name, wf, phi in pairs:
        m = md.modify(wf, phi)
        v = ql.recognize(m)
        if not (v.accepted and ql.verify_certificate(m, v.certificate)):
            failures += 1
    ok = not bad and failures == 0 and len(pairs) == 20
    return ok, f"corpus={len(names)} failed={bad} random={len(pairs)} random_failed={failures}"


def product_law() -> tuple[bool, str]:
    names = list(corpus.EXAMPLES)
    fans = {n: _ex(n) for n in names}
    verdict = {n: ql.recognize(fans[n]).accepted for n in names}
    checked = 0
    bad = []
    for a in names:
        for b in names:
            if fans[a].fan.ambient_rank + fans[b].fan.ambient_rank > 5:
                continue
            prod = tc.product_weighted(fans[a], fans[b])
            acc = ql.recognize(prod).accepted
            checked += 1
            if acc != (verdict[a] and verdict[b]):
                bad.append((a, b))
    return not bad, f"pairs={checked} mismatches={bad}"


def star_law() -> tuple[bool, str]:
    bad = []
    stars = 0
    for n in _certified_names():
        wf = _ex(n)
        for c in wf.fan.cones:
            sw = tc.star_weighted(wf, c)
            stars += 1
            if not ql.recognize(sw).accepted:
                bad.append((n, tuple(sorted(c))))
    return not bad, f"stars={stars} failed={bad}"


def poincare_suite() -> tuple[bool, str]:
    bad = []
    for n in _certified_names():
        wf = _ex(n)
        ref = tc.refine_weights(wf, pf.unimodular_refinement(wf.fan), check_support=False)
        v = ch.poincare_verdict(ref, star=True, coeff="z")
        if not v["star_poincare"]:
            bad.append(n)
    cross = ch.poincare_verdict(_ex("cross"), star=True, coeff="z")
    d0 = cross["degrees"][0]
    cross_ok = (not cross["poincare"] and 0 in cross["failed_degrees"]
                and d0["chow_rank"] == 1 and d0["minkowski_rank"] == 2)
    return not bad and cross_ok, f"failed={bad} cross_k0=(A0 {d0['chow_rank']}, M1 {d0['minkowski_rank']})"


def cap_identity() -> tuple[bool, str]:
    checked = 0
    bad = []
    names = [n for n in corpus.EXAMPLES if _ex(n).fan.simplicial]
    extra = {"non-unimodular": tc.uniform(pf.build_fan([(1, 0), (1, 2), (-1, -1)],
                                                       [[0, 1], [1, 2], [0, 2]], 2))}
    fans = {n: _ex(n) for n in names}
    fans.update(extra)
    for n, wf in fans.items():
        if wf.dim == 0:
            continue
        ev = ch.CapEvaluator(wf)
        for rho in range(len(wf.fan.rays)):
            capped = ev.cap((rho,))
            div = pl.ord_values(pl.courant(wf.fan, rho), wf.weights, wf.dim)
            minus_div = {c: -v for c, v in div.items() if v}
            independent = ch.fulton_sturmfels_cap(wf, rho)
            checked += 1
            if not (capped == minus_div == independent):
                bad.append((n, rho))
    r1 = _ex("r1")
    anchor = [ch.CapEvaluator(r1).cap((rho,)) for rho in range(2)]
    anchor_ok = all(a == {frozenset(): 1} for a in anchor)
    return not bad and anchor_ok, f"rays={checked} failed={bad} p1_anchor={anchor_ok}"


def _witnesses() -> list:
    """(label, base, phi) from corpus functions and from certificate modification nodes."""
    out = []
    for n, fn in [("r1", "min2x0"), ("r2", "minx0"), ("r2-p2", "minxy0"), ("r3-p3", "minxyz0")]:
        e = corpus.get(n)
        out.append((f"{n}/{fn}", e.weighted(), e.functions()[fn]))

    def walk(label, cert):
        if isinstance(cert, ql.ModificationNode):
            out.append((label, cert.base, cert.phi))
            walk(label + "/base", cert.base_cert)
            if cert.divisor_cert is not None:
                walk(label + "/divisor", cert.divisor_cert)
        elif isinstance(cert, (ql.Restrict, ql.Isomorphic)):
            walk(label, cert.inner)

    for n in _certified_names(3):
        v = ql.recognize(_ex(n))
        walk(n, v.certificate)
    return out


def modification_transfer() -> tuple[bool, str]:
    bad = []
    checked = 0
    for label, base, phi in _witnesses():
        if not base.fan.simplicial or not pf.classify(base.fan)["unimodular"]:
            continue
        checked += 1
        rep = ch.modification_pullback(base, phi)
        if not rep["ok"]:
            bad.append(label)
    return not bad and checked > 0, f"witnesses={checked} failed={bad}"


def bergman_check() -> tuple[bool, str]:
    bad = []
    for key, make in corpus.MATROIDS.items():
        m = make()
        if m.ground_size > 5 or m.loops:
            continue
        b = mt.bergman_fan(m, check=True)
        v = ql.recognize(b)
        if not (tc.is_balanced(b) and set(b.weights.values()) == {1}
                and v.accepted and ql.verify_certificate(b, v.certificate)):
            bad.append(key)
    u24 = mt.bergman_fan(mt.uniform(2, 4))
    cert = ql.recognize(u24).certificate
    base_ok = div_ok = False
    if isinstance(cert, ql.ModificationNode):
        base_ok = pf.same_support(cert.base.fan, mt.bergman_fan(mt.uniform(2, 3)).fan)
        d = pl.divisor(cert.base, cert.phi)["weil"]
        div_ok = d is not None and pf.same_support(d.fan, mt.bergman_fan(mt.uniform(1, 3)).fan)
    ok = not bad and base_ok and div_ok
    return ok, f"failed={bad} u24_base={base_ok} u24_divisor={div_ok}"


def _verdicts(wf: tc.WeightedFan) -> dict:
    bal = tc.is_balanced(wf)
    irr = tc.minkowski_rank(wf.fan, wf.dim) == 1
    ref = tc.refine_weights(wf, pf.unimodular_refinement(wf.fan), check_support=False)
    poinc = ch.poincare_verdict(ref, coeff="z")["poincare"]
    ql_ok = ql.recognize(wf).accepted
    return {"balanced": bal, "irreducible": irr, "poincare": poinc, "quasilinear": ql_ok}


def random_stellar(wf: tc.WeightedFan, rng: random.Random) -> tc.WeightedFan:
    fan = wf.fan
    cands = [c for c in fan.cones if fan.cone_dim(c) >= 2] or [c for c in fan.cones if c]
    cone = rng.choice(sorted(cands, key=pf._cone_key))
    point = [0] * fan.ambient_rank
    for g in fan.gens(cone):
        k = rng.randint(1, 2)
        point = [a + k * b for a, b in zip(point, g)]
    refined = pf.stellar_subdivision(fan, point)
    return tc.refine_weights(wf, refined, check_support=False)


def intrinsic_to_support(seed: int = 3) -> tuple[bool, str]:
    rng = random.Random(seed)
    names = ["r2", "r2-p2", "tropical-line-r2", "tropical-plane-r3", "minx0-modification",
             "cross", "fan-121", "classical-plane-r3", "bergman-u24", "line-x-line"]
    bad = []
    for n in names:
        wf = _ex(n)
        ref = random_stellar(wf, rng)
        if _verdicts(wf) != _verdicts(ref):
            bad.append(n)
    return not bad, f"fans={len(names)} mismatched={bad}"


def kunneth() -> tuple[bool, str]:
    pairs = [("tropical-line-r2", "tropical-line-r2"), ("tropical-line-r2", "r1"), ("r1", "r1"),
             ("r2-p2", "r1"), ("cross", "r1"), ("tropical-plane-r3", "r1"), ("zero", "r2"),
             ("fan-121", "tropical-line-r2"), ("bergman-u24", "r1"), ("r2", "tropical-line-r2")]
    bad = [p for p in pairs if not ch.kunneth_check(_ex(p[0]), _ex(p[1]))["ok"]]
    return not bad, f"pairs={len(pairs)} failed={bad}"


CRITERIA: list[tuple[int, str, float, Callable]] = [
    (1, "example zoo", 1, example_zoo),
    (2, "modification figures", 1, modification_figures),
    (3, "recognizer round trips", 10, recognizer_round_trips),
    (4, "product law", 60, product_law),
    (5, "star law", 30, star_law),
    (6, "Poincare suite", 30, poincare_suite),
    (7, "cap product identity", 5, cap_identity),
    (8, "modification transfer", 30, modification_transfer),
    (9, "Bergman fans", 60, bergman_check),
    (10, "intrinsic to support", 60, intrinsic_to_support),
    (11, "Kunneth ranks", 30, kunneth),
]


def run(number: int) -> Outcome:
    for num, title, limit, fn in CRITERIA:
        if num == number:
            t = time.perf_counter()
            passed, detail = fn()
            return Outcome(num, title, passed, time.perf_counter() - t, limit, detail)
    raise KeyError(number)


def run_all() -> list[Outcome]:
    return [run(num) for num, *_ in CRITERIA]
