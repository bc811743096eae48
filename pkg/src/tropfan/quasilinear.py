"""Recursive quasilinearity search with certificates and an independent replay checker.

The search only tries rays of the fan as upward directions. In a
nondegenerate modification the upward ray is a ray of every fan structure
on the support, and degenerate steps are absorbed by restricting to the
lattice spanned by the fan. Completeness of this search is an assumption;
a corpus fan on which it answers ``not quasilinear`` although it is
quasilinear would be a bug in this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from . import exactlin as el
from . import modification as md
from . import plfun as pl
from . import polyfan as pf
from . import tfan
from . import tropcycle as tc
from .tropcycle import WeightedFan


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class Complete:
    rank: int


@dataclass(frozen=True)
class Restrict:
    basis: tuple
    inner: "Certificate"


@dataclass(frozen=True)
class Isomorphic:
    matrix: tuple
    inner: "Certificate"


@dataclass(frozen=True, eq=False)
class ModificationNode:
    """``matrix`` sends the fan onto ``modify(base, phi)``; the divisor is ``div(phi)``."""

    direction: tuple
    matrix: tuple
    base: WeightedFan
    phi: pl.PLFunction
    base_cert: "Certificate"
    divisor_cert: Optional["Certificate"]


Certificate = Union[Complete, Restrict, Isomorphic, ModificationNode]


@dataclass
class Verdict:
    status: str  # "quasilinear", "not_quasilinear" or "inconclusive"
    certificate: Optional[Certificate] = None
    reason: str = ""
    trace: list = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return self.status == "quasilinear"


class _Inconclusive(Exception):
    pass


def depth(cert: Certificate) -> int:
    """Number of nested modification steps."""
    if isinstance(cert, Complete):
        return 0
    if isinstance(cert, (Restrict, Isomorphic)):
        return depth(cert.inner)
    sub = [depth(cert.base_cert)]
    if cert.divisor_cert is not None:
        sub.append(depth(cert.divisor_cert))
    return 1 + max(sub)


def necessary_conditions(wf: WeightedFan) -> Optional[str]:
    """Reason for rejection from balancing, reducedness and (local) irreducibility."""
    if not tc.is_balanced(wf):
        return "not balanced"
    if not tc.is_reduced(wf):
        return "not reduced"
    r = tc.minkowski_rank(wf.fan, wf.dim)
    if r != 1:
        return f"rank M_{wf.dim} = {r}, not irreducible"
    for c in wf.fan.cones:
        if not c:
            continue
        s = tc.star_weighted(wf, c)
        if tc.minkowski_rank(s.fan, s.dim) != 1:
            return f"star at cone {sorted(c)} is not irreducible"
    return None


def recognize(wf: WeightedFan, budget: int = 5000) -> Verdict:
    """Search for a quasilinearity certificate; depth-first in ray order."""
    nodes = [0]
    memo: dict = {}
    trace: list = []

    def rec(w: WeightedFan, level: int) -> Union[Certificate, str]:
        key = tc.canonical_form(w)
        if key in memo:
            return memo[key]
        nodes[0] += 1
        if nodes[0] > budget:
            raise _Inconclusive()
        reason = necessary_conditions(w)
        if reason is not None:
            memo[key] = reason
            return reason
        fan = w.fan
        basis = pf.minimal_lattice(fan)
        if len(basis) < fan.ambient_rank:
            inner = rec(tc.restrict_weighted(w, basis), level)
            out = Restrict(tuple(map(tuple, basis)), inner) if not isinstance(inner, str) else inner
            memo[key] = out
            return out
        if pf.is_complete(fan):
            memo[key] = Complete(fan.ambient_rank)
            return memo[key]
        for i in range(len(fan.rays)):
            witness = md.recognize_along(w, i)
            if witness is None:
                continue
            base_cert = rec(witness.base, level + 1)
            if isinstance(base_cert, str):
                trace.append(f"level {level} ray {i}: base rejected ({base_cert})")
                continue
            div_cert = None
            if witness.divisor is not None:
                dv = WeightedFan(witness.divisor.fan, dict(witness.divisor.weights))
                div_cert = rec(dv, level + 1)
                if isinstance(div_cert, str):
                    trace.append(f"level {level} ray {i}: divisor rejected ({div_cert})")
                    continue
            out = ModificationNode(witness.direction, witness.matrix, witness.base, witness.phi,
                                   base_cert, div_cert)
            memo[key] = out
            return out
        memo[key] = "no ray is the upward direction of a modification of quasilinear fans"
        return memo[key]

    try:
        result = rec(wf, 0)
    except _Inconclusive:
        return Verdict("inconclusive", reason=f"budget of {budget} nodes exhausted", trace=trace)
    if isinstance(result, str):
        return Verdict("not_quasilinear", reason=result, trace=trace)
    return Verdict("quasilinear", certificate=result, trace=trace)


# ---------------------------------------------------------------------------
# replay


def verify_certificate(wf: WeightedFan, cert: Certificate, log: Optional[list] = None) -> bool:
    """Rebuild the fan from the certificate leaves upward and compare as cycles."""
    log = [] if log is None else log
    try:
        return _verify(wf, cert, log, "")
    except (pf.FanError, pl.PLError, md.NegativeDivisorWeight, el.LatticeError, ValueError) as exc:
        log.append(f"error: {exc}")
        return False


def _verify(wf: WeightedFan, cert: Certificate, log: list, indent: str) -> bool:
    fan = wf.fan
    if isinstance(cert, Complete):
        ok = (fan.ambient_rank == cert.rank and pf.is_complete(fan)
              and all(w == 1 for w in wf.weights.values()))
        log.append(f"{indent}complete rank {cert.rank}: {ok}")
        return ok
    if isinstance(cert, Restrict):
        basis = [list(b) for b in cert.basis]
        # all invariant factors 1: independent rows spanning a saturated sublattice
        if any(len(b) != fan.ambient_rank for b in basis) \
                or el.invariant_factors(basis) != [1] * len(basis):
            log.append(f"{indent}restrict: basis is not a saturated lattice basis")
            return False
        try:
            inner = tc.restrict_weighted(wf, basis)
        except pf.FanError as exc:
            log.append(f"{indent}restrict: {exc}")
            return False
        log.append(f"{indent}restrict to rank {len(basis)}")
        return _verify(inner, cert.inner, log, indent + "  ")
    if isinstance(cert, Isomorphic):
        m = [list(r) for r in cert.matrix]
        if len(m) != fan.ambient_rank or abs(el.det(m)) != 1:
            log.append(f"{indent}isomorphic: matrix is not unimodular")
            return False
        log.append(f"{indent}isomorphic")
        return _verify(md.transformed(wf, m), cert.inner, log, indent + "  ")
    if isinstance(cert, ModificationNode):
        m = [list(r) for r in cert.matrix]
        if len(m) != fan.ambient_rank or abs(el.det(m)) != 1:
            log.append(f"{indent}modification: matrix is not unimodular")
            return False
        target = md.transformed(wf, m)
        if cert.phi.fan != cert.base.fan:
            log.append(f"{indent}modification: function lives on another fan")
            return False
        rebuilt = md.modify(cert.base, cert.phi)
        same = tc.same_cycle(rebuilt, target)
        log.append(f"{indent}modification along {cert.direction}: replay matches {same}")
        if not same:
            return False
        if not _verify(cert.base, cert.base_cert, log, indent + "  "):
            return False
        div = pl.divisor(cert.base, cert.phi)
        if div["trivial"]:
            if cert.divisor_cert is not None:
                log.append(f"{indent}divisor is trivial but has a certificate")
                return False
            return True
        if cert.divisor_cert is None:
            log.append(f"{indent}divisor is nontrivial but uncertified")
            return False
        weil = div["weil"]
        dv = WeightedFan(weil.fan, dict(weil.weights))
        return _verify(dv, cert.divisor_cert, log, indent + "  ")
    raise CertificateError(f"unknown certificate node {cert!r}")


# ---------------------------------------------------------------------------
# serialization


def cert_to_doc(cert: Certificate) -> dict:
    s = tfan._s
    if isinstance(cert, Complete):
        return {"type": "complete", "rank": s(cert.rank)}
    if isinstance(cert, Restrict):
        return {"type": "restrict", "basis": [[s(x) for x in b] for b in cert.basis],
                "inner": cert_to_doc(cert.inner)}
    if isinstance(cert, Isomorphic):
        return {"type": "isomorphic", "matrix": [[s(x) for x in r] for r in cert.matrix],
                "inner": cert_to_doc(cert.inner)}
    base_doc = tfan.fan_to_doc(cert.base, {"phi": cert.phi})
    return {"type": "modification",
            "direction": [s(x) for x in cert.direction],
            "matrix": [[s(x) for x in r] for r in cert.matrix],
            "base": base_doc,
            "base_cert": cert_to_doc(cert.base_cert),
            "divisor_cert": None if cert.divisor_cert is None else cert_to_doc(cert.divisor_cert)}


def doc_to_cert(doc: dict) -> Certificate:
    if not isinstance(doc, dict) or "type" not in doc:
        raise CertificateError("certificate node needs a type")
    kind = doc["type"]
    try:
        if kind == "complete":
            return Complete(tfan._int(doc["rank"], "rank"))
        if kind == "restrict":
            basis = tuple(tuple(tfan._ints(b, "basis")) for b in doc["basis"])
            return Restrict(basis, doc_to_cert(doc["inner"]))
        if kind == "isomorphic":
            mat = tuple(tuple(tfan._ints(r, "matrix")) for r in doc["matrix"])
            return Isomorphic(mat, doc_to_cert(doc["inner"]))
        if kind == "modification":
            base, pls, _ = tfan.doc_to_fan(doc["base"])
            if "phi" not in pls:
                raise CertificateError("modification node needs the function phi")
            div = doc.get("divisor_cert")
            return ModificationNode(tuple(tfan._ints(doc["direction"], "direction")),
                                    tuple(tuple(tfan._ints(r, "matrix")) for r in doc["matrix"]),
                                    base, pls["phi"], doc_to_cert(doc["base_cert"]),
                                    None if div is None else doc_to_cert(div))
    except KeyError as exc:
        raise CertificateError(f"certificate node of type {kind!r} lacks {exc}") from None
    raise CertificateError(f"unknown certificate type {kind!r}")
