"""Command line front end: reads TFAN documents, prints reports or TFAN output.

Fan arguments are file paths or ``-`` for standard input; when no fan is
given the fan is read from standard input. Commands that produce fans print
TFAN so that they compose through pipes. Reports print a one-line summary,
or the full structured report with ``--json``.

Exit status: 0 when a verdict was computed (also a negative one), 1 for
input errors, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import acceptance
from . import chow as ch
from . import corpus
from . import matroid as mt
from . import modification as md
from . import plfun as pl
from . import polyfan as pf
from . import quasilinear as ql
from . import tfan
from . import tropcycle as tc
from .tropcycle import WeightedFan

CERT_FORMAT = "tfan-cert"


class InputError(Exception):
    pass


class Result:
    """A structured report plus its human summary, or raw TFAN text."""

    def __init__(self, report: Optional[dict] = None, summary: str = "", text: Optional[str] = None):
        self.report = report or {}
        self.summary = summary
        self.text = text

    def render(self, as_json: bool) -> str:
        if self.text is not None and not as_json:
            return self.text
        if as_json:
            return tfan.dumps(self.report)
        return self.summary + "\n"


def _sub(k: int) -> str:
    return str(k).translate(str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉"))


def _cone(c) -> list:
    return sorted(c)


def _fraction(x):
    return x if isinstance(x, int) else str(x)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: Optional[str]) -> tuple[WeightedFan, dict, dict]:
    return tfan.read_fan(_read_text(path or "-"))


def _fan_arg(args) -> tuple[WeightedFan, dict, dict]:
    if getattr(args, "fan_path", None) and getattr(args, "fan", None):
        raise InputError("give the fan either as --fan or positionally, not both")
    return _load(getattr(args, "fan_path", None) or getattr(args, "fan", None))


def _pick_pl(pls: dict, name: Optional[str]) -> tuple[str, pl.PLFunction]:
    if name is None:
        if len(pls) != 1:
            raise InputError(f"choose a function with --pl; available: {', '.join(sorted(pls)) or 'none'}")
        name = next(iter(pls))
    if name not in pls:
        raise InputError(f"no function {name!r}; available: {', '.join(sorted(pls)) or 'none'}")
    return name, pls[name]


def _int_list(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"{what}: expected comma-separated integers, got {text!r}") from None


def _weight_doc(values: dict) -> list:
    return [{"cone": _cone(c), "weight": _fraction(w)} for c, w in
            sorted(values.items(), key=lambda kv: pf._cone_key(kv[0])) if w]


# ---------------------------------------------------------------------------
# check


def check_balance(wf: WeightedFan) -> Result:
    r = tc.check_balancing(wf)
    report = {"command": "check balance", "balanced": r["balanced"],
              "violations": [{"cone": list(t), "defect": list(d)} for t, d in r["violations"]]}
    if r["balanced"]:
        return Result(report, "balanced")
    first = r["violations"][0]
    return Result(report, f"not balanced: {len(r['violations'])} violation(s), "
                          f"first at cone {list(first[0])}")


def check_reduced(wf: WeightedFan) -> Result:
    red = tc.is_reduced(wf)
    weights = sorted(set(wf.weights.values()))
    report = {"command": "check reduced", "reduced": red, "weights": weights}
    return Result(report, "reduced" if red else f"not reduced: weights {weights}")


def check_irreducible(wf: WeightedFan) -> Result:
    k = wf.dim
    if not tc.is_balanced(wf):
        return Result({"command": "check irreducible", "balanced": False, "irreducible": None},
                      "not balanced, irreducibility undefined")
    r = tc.irreducibility(wf)
    report = {"command": "check irreducible", "balanced": True, "dimension": k,
              "rank": r["rank"], "irreducible": r["irreducible"],
              "is_fundamental": r["is_fundamental"]}
    if r["fundamental_weight"] is not None:
        report["fundamental_weight"] = _weight_doc(r["fundamental_weight"])
    verdict = "irreducible" if r["irreducible"] else "not irreducible"
    return Result(report, f"rank M{_sub(k)} = {r['rank']}, {verdict}")


def check_local(wf: WeightedFan) -> Result:
    p = tc.local_profile(wf)
    bad = [list(c) for c, ok in sorted(p["stars"].items()) if not ok]
    report = {"command": "check local", "reduced": p["reduced"],
              "locally_irreducible": p["locally_irreducible"], "reducible_stars": bad}
    parts = ["reduced" if p["reduced"] else "not reduced",
             "locally irreducible" if p["locally_irreducible"] else
             f"not locally irreducible ({len(bad)} star(s))"]
    return Result(report, ", ".join(parts))


def check_poincare(wf: WeightedFan, coeff: Optional[str]) -> Result:
    v = ch.poincare_verdict(wf, star=True, coeff=coeff)
    if v["status"] != "ok":
        return Result({"command": "check poincare", "status": v["status"], "poincare": None},
                      "fan is not simplicial; refine it first (compute refine --unimodular)")
    report = {"command": "check poincare", "status": "ok", "coeff": v["coeff"],
              "poincare": v["poincare"], "star_poincare": v["star_poincare"],
              "failed_degrees": v["failed_degrees"],
              "degrees": v["degrees"],
              "failed_stars": [list(c) for c, ok in sorted(v["stars"].items()) if not ok]}
    if v["star_poincare"]:
        return Result(report, f"star-Poincare over {v['coeff'].upper()}")
    if v["poincare"]:
        return Result(report, f"Poincare over {v['coeff'].upper()}, "
                              f"but {len(report['failed_stars'])} star(s) fail")
    d = v["degrees"][v["failed_degrees"][0]]
    return Result(report, f"not Poincare: degree {d['degree']} has A rank {d['chow_rank']} "
                          f"and M rank {d['minkowski_rank']}")


# ---------------------------------------------------------------------------
# compute


def compute_minkowski(wf: WeightedFan, k: Optional[int]) -> Result:
    k = wf.dim if k is None else k
    basis = tc.minkowski_basis(wf.fan, k)
    report = {"command": "compute minkowski", "k": k, "rank": len(basis),
              "basis": [_weight_doc(b.values) for b in basis]}
    return Result(report, f"rank M{_sub(k)} = {len(basis)}")


def compute_chow(wf: WeightedFan, coeff: Optional[str]) -> Result:
    cp = ch.chow_presentation(wf.fan, coeff)
    ranks = ch.chow_ranks(cp)
    report = {"command": "compute chow", "coeff": cp.coeff,
              "degrees": [{"degree": k, "rank": r, "torsion": t} for k, r, t in ranks]}
    text = ", ".join(f"A{k}: {r}" + (f" (torsion {t})" if t else "") for k, r, t in ranks)
    return Result(report, f"over {cp.coeff.upper()}: {text}")


def compute_divisor(wf: WeightedFan, pls: dict, name: Optional[str]) -> Result:
    name, phi = _pick_pl(pls, name)
    d = pl.divisor(wf, phi)
    report = {"command": "compute divisor", "pl": name, "trivial": d["trivial"],
              "ord": _weight_doc(d["ord"])}
    if d["trivial"]:
        return Result(report, f"div({name}) = 0")
    report["weil"] = tfan.fan_to_doc(d["weil"], metadata={"signed": True})
    parts = [f"{w} on {c['cone']}" for c in report["ord"] for w in [c["weight"]]]
    return Result(report, f"div({name}) = " + ", ".join(parts))


def _fan_result(command: str, wf: WeightedFan, pls: Optional[dict] = None,
                summary: Optional[str] = None) -> Result:
    doc = tfan.fan_to_doc(wf, pls, {"signed": True} if wf.signed else None)
    return Result({"command": command, "fan": doc}, summary or repr(wf), tfan.dumps(doc))


def compute_star(wf: WeightedFan, cone_text: str) -> Result:
    cone = frozenset(_int_list(cone_text, "--cone"))
    if cone not in wf.fan.cone_set:
        raise pf.ConeNotInFan(f"{sorted(cone)} is not a cone of the fan")
    return _fan_result("compute star", tc.star_weighted(wf, cone))


def compute_product(a: WeightedFan, b: WeightedFan) -> Result:
    return _fan_result("compute product", tc.product_weighted(a, b))


def compute_refine(wf: WeightedFan, point: Optional[str], unimodular: bool) -> Result:
    if (point is None) == (not unimodular):
        raise InputError("give exactly one of --point and --unimodular")
    fine = (pf.unimodular_refinement(wf.fan) if unimodular
            else pf.stellar_subdivision(wf.fan, _int_list(point, "--point")))
    return _fan_result("compute refine", tc.refine_weights(wf, fine, check_support=False))


# ---------------------------------------------------------------------------
# modifications, quasilinearity


def run_modify(wf: WeightedFan, pls: dict, name: Optional[str]) -> Result:
    name, phi = _pick_pl(pls, name)
    return _fan_result("modify", md.modify(wf, phi))


def run_recognize_modification(wf: WeightedFan, direction: Optional[int]) -> Result:
    rays = range(len(wf.fan.rays)) if direction is None else [direction]
    if direction is not None and not 0 <= direction < len(wf.fan.rays):
        raise InputError(f"--direction {direction}: the fan has {len(wf.fan.rays)} rays")
    for i in rays:
        w = md.recognize_along(wf, i)
        if w is None:
            continue
        report = {"command": "recognize-modification", "modification": True, "ray": i,
                  "direction": list(w.direction), "matrix": [list(r) for r in w.matrix],
                  "base": tfan.fan_to_doc(w.base, {"phi": w.phi}),
                  "divisor": None if w.divisor is None else tfan.fan_to_doc(w.divisor)}
        div = "trivial divisor" if w.divisor is None else "nontrivial divisor"
        return Result(report, f"modification along ray {i} {list(w.direction)}, {div}")
    report = {"command": "recognize-modification", "modification": False,
              "rays_tried": list(rays)}
    return Result(report, "not a modification along " +
                  ("any ray" if direction is None else f"ray {direction}"))


def cert_document(cert: ql.Certificate) -> dict:
    return {"format": CERT_FORMAT, "version": tfan.VERSION, "certificate": ql.cert_to_doc(cert)}


def run_quasilinear(wf: WeightedFan, budget: int, cert_out: Optional[str]) -> Result:
    v = ql.recognize(wf, budget=budget)
    report = {"command": "quasilinear", "status": v.status, "reason": v.reason}
    if v.certificate is not None:
        report["depth"] = ql.depth(v.certificate)
        report["certificate"] = cert_document(v.certificate)
        if cert_out:
            with open(cert_out, "w", encoding="utf-8") as fh:
                fh.write(tfan.dumps(report["certificate"]))
        return Result(report, f"quasilinear, certificate of depth {report['depth']}")
    if v.status == "inconclusive":
        return Result(report, f"inconclusive: {v.reason}")
    return Result(report, f"not quasilinear: {v.reason}")


def _load_cert(path: str) -> ql.Certificate:
    doc = tfan.loads_json(_read_text(path))
    if doc.get("command") == "quasilinear":
        doc = doc.get("certificate") or {}
    if doc.get("format") != CERT_FORMAT or "certificate" not in doc:
        raise ql.CertificateError("not a certificate document")
    return ql.doc_to_cert(doc["certificate"])


def run_verify_cert(wf: WeightedFan, cert_path: str) -> Result:
    cert = _load_cert(cert_path)
    log: list = []
    ok = ql.verify_certificate(wf, cert, log)
    report = {"command": "verify-cert", "valid": ok, "depth": ql.depth(cert), "log": log}
    return Result(report, "certificate valid" if ok else f"certificate rejected: {log[-1] if log else ''}")


def run_isomorphic(a: WeightedFan, b: WeightedFan, budget: int) -> Result:
    try:
        iso = pf.find_isomorphism(a.fan, b.fan, a.weights, b.weights, budget=budget)
    except pf.BudgetExceeded as exc:
        return Result({"command": "isomorphic", "isomorphic": None, "reason": str(exc)},
                      f"inconclusive: {exc}")
    if iso is None:
        return Result({"command": "isomorphic", "isomorphic": False}, "not isomorphic")
    report = {"command": "isomorphic", "isomorphic": True,
              "matrix": [list(r) for r in iso.matrix],
              "source_basis": [list(r) for r in iso.source_basis],
              "target_basis": [list(r) for r in iso.target_basis],
              "ray_bijection": list(iso.ray_bijection)}
    return Result(report, "isomorphic")


def run_bergman(args) -> Result:
    chosen = [x is not None for x in (args.uniform, args.name, args.matroid)]
    if sum(chosen) != 1:
        raise InputError("give exactly one of --uniform, --name, --matroid")
    if args.uniform is not None:
        m = mt.uniform(*args.uniform)
    elif args.name is not None:
        if args.name not in corpus.MATROIDS:
            raise InputError(f"unknown matroid {args.name!r}; known: {', '.join(corpus.MATROIDS)}")
        m = corpus.MATROIDS[args.name]()
    else:
        m = tfan.read_matroid(_read_text(args.matroid))
    return _fan_result("bergman", mt.bergman_fan(m, check=args.check))


def run_examples(args) -> Result:
    if args.list:
        rows = [{"name": e.name, "description": e.description, "quasilinear": e.quasilinear}
                for e in corpus.EXAMPLES.values()]
        text = "\n".join(f"{r['name']:<22} {r['description']}" for r in rows)
        return Result({"command": "examples", "examples": rows}, text)
    if args.name:
        try:
            ex = corpus.get(args.name)
        except KeyError as exc:
            raise InputError(exc.args[0]) from None
        wf = ex.weighted()
        return _fan_result("examples", wf, ex.functions(), ex.description)
    if args.verify_all:
        outcomes = acceptance.run_all()
        rows = [{"criterion": o.number, "title": o.title, "passed": o.ok,
                 "seconds": round(o.seconds, 2), "limit": o.limit, "detail": o.detail}
                for o in outcomes]
        passed = sum(o.ok for o in outcomes)
        lines = [o.line() for o in outcomes] + [f"{passed}/{len(outcomes)} criteria passed"]
        return Result({"command": "examples --verify-all", "criteria": rows,
                       "passed": passed, "total": len(outcomes)}, "\n".join(lines))
    raise InputError("give one of --list, --name, --verify-all")


# ---------------------------------------------------------------------------
# argument parsing


def _add_fan(p: argparse.ArgumentParser) -> None:
    p.add_argument("fan", nargs="?", help="TFAN file, or - for standard input (the default)")
    p.add_argument("--fan", dest="fan_path", metavar="PATH", help="TFAN file")


def _add_json(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="print the full structured report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tropfan", description="Exact computations with tropical fans.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="balancing, reducedness, irreducibility, Poincare duality")
    p.add_argument("what", choices=["balance", "reduced", "irreducible", "local", "poincare"])
    _add_fan(p)
    p.add_argument("--coeff", choices=["z", "q"])
    _add_json(p)

    p = sub.add_parser("compute", help="Minkowski weights, Chow ranks, divisors, stars, products")
    p.add_argument("what", choices=["minkowski", "chow", "divisor", "star", "product", "refine"])
    _add_fan(p)
    p.add_argument("other", nargs="?", help="second factor for product")
    p.add_argument("--k", type=int)
    p.add_argument("--coeff", choices=["z", "q"])
    p.add_argument("--pl", metavar="NAME")
    p.add_argument("--cone", metavar="I,J,...", help="ray indices of a cone (star)")
    p.add_argument("--point", metavar="X,Y,...", help="lattice point to subdivide at (refine)")
    p.add_argument("--unimodular", action="store_true", help="unimodular refinement (refine)")
    _add_json(p)

    p = sub.add_parser("modify", help="tropical modification along a named PL function")
    _add_fan(p)
    p.add_argument("--pl", metavar="NAME")
    _add_json(p)

    p = sub.add_parser("recognize-modification", help="find a modification structure")
    _add_fan(p)
    p.add_argument("--direction", type=int, metavar="RAYINDEX")
    _add_json(p)

    p = sub.add_parser("bergman", help="fine Bergman fan of a matroid")
    p.add_argument("--uniform", type=int, nargs=2, metavar=("R", "N"))
    p.add_argument("--name", help="bundled matroid")
    p.add_argument("--matroid", metavar="PATH", help=".matroid document")
    p.add_argument("--check", action="store_true", help="validate cone intersections")
    _add_json(p)

    p = sub.add_parser("quasilinear", help="search for a quasilinearity certificate")
    _add_fan(p)
    p.add_argument("--budget", type=int, default=5000)
    p.add_argument("--cert-out", metavar="PATH", help="write the certificate (.cert)")
    _add_json(p)

    p = sub.add_parser("verify-cert", help="replay a certificate against a fan")
    _add_fan(p)
    p.add_argument("--cert", required=True, metavar="PATH")
    _add_json(p)

    p = sub.add_parser("isomorphic", help="search for a lattice isomorphism of weighted fans")
    p.add_argument("fan")
    p.add_argument("other")
    p.add_argument("--budget", type=int, default=200_000)
    _add_json(p)

    p = sub.add_parser("examples", help="bundled example fans and the acceptance suite")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--list", action="store_true")
    g.add_argument("--name")
    g.add_argument("--verify-all", action="store_true")
    _add_json(p)
    return parser


def dispatch(args) -> Result:
    cmd = args.command
    if cmd == "check":
        wf, _, _ = _fan_arg(args)
        if args.what == "balance":
            return check_balance(wf)
        if args.what == "reduced":
            return check_reduced(wf)
        if args.what == "irreducible":
            return check_irreducible(wf)
        if args.what == "local":
            return check_local(wf)
        return check_poincare(wf, args.coeff)
    if cmd == "compute":
        if args.what == "product":
            if args.fan_path:
                first, second = args.fan_path, args.fan
            else:
                first, second = args.fan, args.other
            if not first or not second:
                raise InputError("product needs two fans")
            return compute_product(_load(first)[0], _load(second)[0])
        wf, pls, _ = _fan_arg(args)
        if args.what == "minkowski":
            return compute_minkowski(wf, args.k)
        if args.what == "chow":
            return compute_chow(wf, args.coeff)
        if args.what == "divisor":
            return compute_divisor(wf, pls, args.pl)
        if args.what == "star":
            if not args.cone and args.cone != "":
                raise InputError("star needs --cone")
            return compute_star(wf, args.cone)
        return compute_refine(wf, args.point, args.unimodular)
    if cmd == "modify":
        wf, pls, _ = _fan_arg(args)
        return run_modify(wf, pls, args.pl)
    if cmd == "recognize-modification":
        wf, _, _ = _fan_arg(args)
        return run_recognize_modification(wf, args.direction)
    if cmd == "bergman":
        return run_bergman(args)
    if cmd == "quasilinear":
        wf, _, _ = _fan_arg(args)
        return run_quasilinear(wf, args.budget, args.cert_out)
    if cmd == "verify-cert":
        wf, _, _ = _fan_arg(args)
        return run_verify_cert(wf, args.cert)
    if cmd == "isomorphic":
        return run_isomorphic(_load(args.fan)[0], _load(args.other)[0], args.budget)
    return run_examples(args)


INPUT_ERRORS = (InputError, tfan.TfanError, pf.FanError, pl.PLError, md.NegativeDivisorWeight,
                ql.CertificateError, mt.MatroidError, ch.NonSimplicialFan, ch.NonUnimodular,
                tc.UnbalancedError, tc.ConeImageNotACone)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = dispatch(args)
    except INPUT_ERRORS as exc:
        print(f"tropfan: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(result.render(getattr(args, "json", False)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
