"""Command line interface and report emission.

Every subcommand reads a JSON document, runs one library operation and
emits a ReportDocument (JSON by default, or a plain-text table).  Exit
codes: 0 = pass, 1 = the mathematics says "fail" (with witnesses),
2 = malformed input or usage error.  Reports are deterministic; the
integer timing field is the only part that varies between runs and can
be dropped with --no-timing.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import documents as docs
from .documents import AlgebraDocument, DocumentError, dumps_canonical
from .exactlin import StructuralError, format_vector, is_zero
from .filtered import check_filtration, polynomial_truncation, truncate
from .gauge import (
    NotDGLieError,
    bch,
    gauge_act,
    gauge_from_homotopy,
    homotopy_from_gauge,
    moduli_set,
)
from .hochschild import FiniteAlgebraData, build_convolution, deformation_pipeline, structure_as_mc
from .linf import verify_structure
from .mc import (
    NotMaurerCartanError,
    lift_deformation,
    mc_element,
    mc_polynomial_system,
    mc_residual,
    twist,
)
from .morphisms import goldman_millson_check, stagewise_quasi_iso, verify_morphism
from .simplicial import mc_simplex_verify, split_tensor_id
from .tangent import tangent_report


class Report:
    def __init__(self, command, options):
        self.doc = {
            "format": docs.FORMAT,
            "kind": "report",
            "command": command,
            "options": options,
            "verdict": "pass",
            "checks": [],
            "witnesses": [],
            "dimensions": {},
        }

    def check(self, name, ok, **extra):
        entry = {"name": name, "ok": bool(ok)}
        entry.update(extra)
        self.doc["checks"].append(entry)
        if not ok:
            self.doc["verdict"] = "fail"

    def witness(self, label, space, vec):
        self.doc["witnesses"].append({
            "label": label,
            "value": format_vector(space, vec),
            "coordinates": docs.render_vec_ordered(space, vec),
        })

    def dimension(self, name, value):
        self.doc["dimensions"][name] = value

    def extra(self, key, value):
        self.doc[key] = value

    @property
    def failed(self):
        return self.doc["verdict"] == "fail"


def _render_text(doc):
    lines = []
    lines.append("command : %s" % " ".join(doc["command"]))
    lines.append("verdict : %s" % doc["verdict"])
    for chk in doc["checks"]:
        extras = {k: v for k, v in chk.items() if k not in ("name", "ok")}
        suffix = ("  " + ", ".join("%s=%s" % kv for kv in extras.items())) if extras else ""
        lines.append("  [%s] %s%s" % ("ok" if chk["ok"] else "XX", chk["name"], suffix))
    if doc["dimensions"]:
        lines.append("dimensions:")
        for k, v in doc["dimensions"].items():
            lines.append("  %s = %s" % (k, v))
    for w in doc["witnesses"]:
        lines.append("witness %s: %s" % (w["label"], w["value"]))
    if "timing_ms" in doc:
        lines.append("timing_ms: %d" % doc["timing_ms"])
    return "\n".join(lines) + "\n"


def _emit(report, args, started):
    if not args.no_timing:
        report.doc["timing_ms"] = int((time.monotonic() - started) * 1000)
    if args.format == "json":
        sys.stdout.write(dumps_canonical(report.doc))
    else:
        sys.stdout.write(_render_text(report.doc))
    return 1 if report.failed else 0


def _load_algebra(args):
    loaded = docs.load_document(args.document)
    if isinstance(loaded, FiniteAlgebraData):
        raise DocumentError("$.kind", "this subcommand expects an algebra document")
    return loaded


def _working_algebra(doc: AlgebraDocument, args):
    g = doc.algebra
    if args.truncation is not None:
        return truncate(g, args.truncation)
    return g


def _named_or_literal(doc, g, literal, flag="--element"):
    if literal is None:
        raise DocumentError(flag, "this subcommand needs an element")
    if literal in (doc.elements or {}):
        vec = doc.elements[literal]
        g.space.check_member(vec)
        return vec
    return docs.parse_element_literal(literal, g.space)


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def cmd_verify(args, report):
    loaded = docs.load_document(args.document)
    if isinstance(loaded, FiniteAlgebraData):
        conv = build_convolution(loaded, args.arity_bound or 2)
        g = conv.algebra
    else:
        g = _working_algebra(loaded, args)
    bound = args.arity_bound if args.arity_bound else g.kmax + 1
    rep = verify_structure(g, bound)
    filt = check_filtration(g)
    report.check("structure (degree, weight, Jacobi up to arity %d)" % bound, rep.ok,
                 violations=len(rep.violations))
    report.check("filtration compatibility", filt.ok)
    for v in rep.violations[:5]:
        report.witness("%s at l_%d%r" % (v.kind, v.arity, list(v.where)),
                       g.space, v.witness)
    report.dimension("basis", g.space.dim)


def cmd_truncate(args, report):
    doc = _load_algebra(args)
    order = args.truncation if args.truncation is not None else 4
    gr = truncate(doc.algebra, order)
    report.check("truncation computed", True, order=order)
    report.dimension("basis", gr.space.dim)
    report.extra("algebra", docs.serialize_algebra(gr))


def cmd_mc_residual(args, report):
    doc = _load_algebra(args)
    g = _working_algebra(doc, args)
    tau = _named_or_literal(doc, g, args.element)
    res = mc_residual(g, tau)
    report.check("Maurer-Cartan equation", is_zero(res))
    if not is_zero(res):
        report.witness("residual", g.space, res)


def cmd_mc_system(args, report):
    doc = _load_algebra(args)
    g = _working_algebra(doc, args)
    system = mc_polynomial_system(g)
    report.check("system emitted", True,
                 variables=len(system.variables),
                 equations=len(system.equation_ids))
    report.extra("system", {"variables": system.variables,
                            "equations": system.render()})


def cmd_twist(args, report):
    doc = _load_algebra(args)
    g = _working_algebra(doc, args)
    tau = _named_or_literal(doc, g, args.element)
    try:
        tw = twist(g, tau)
    except NotMaurerCartanError as exc:
        report.check("element is Maurer-Cartan", False)
        report.witness("residual", g.space, exc.residual)
        return
    report.check("element is Maurer-Cartan", True)
    report.check("twisted structure verified (Jacobi, filtration, d^2=0)", True)
    report.extra("algebra", docs.serialize_algebra(tw.algebra))


def cmd_lift(args, report):
    doc = _load_algebra(args)
    g = _working_algebra(doc, args)
    phi = _named_or_literal(doc, g, args.element) if args.element else {}
    order = max(args.order, 2)
    lift = lift_deformation(g, phi, order)
    report.dimension("tangent (order-1 mod gauge)", lift.tangent_dimension)
    report.dimension("Z1", len(lift.z1))
    report.dimension("H2", lift.h2.dimension)
    branches = []
    for br in lift.branches:
        entry = {"seed": docs.render_vec_ordered(g.space, br.seed),
                 "reached_order": br.reached_order(), "steps": []}
        for st in br.steps:
            entry["steps"].append({
                "order": st.order,
                "lifted": st.lifted,
                "obstruction_class": docs.render_vec_ordered(g.space,
                                                             st.obstruction_class),
            })
        branches.append(entry)
        report.check("branch %s lifts to order %d" %
                     (format_vector(g.space, br.seed), order - 1),
                     br.reached_order() == order - 1,
                     reached=br.reached_order())
    report.extra("branches", branches)


def cmd_gauge_act(args, report):
    doc = _load_algebra(args)
    g = _working_algebra(doc, args)
    xi = _named_or_literal(doc, g, args.xi, "--xi")
    tau = _named_or_literal(doc, g, args.element)
    acted = gauge_act(g, xi, tau)
    report.check("result is Maurer-Cartan", True)
    report.witness("exp(xi).tau", g.space, acted.value)


def cmd_gauge_connect(args, report):
    doc = _load_algebra(args)
    g = _working_algebra(doc, args)
    xi = _named_or_literal(doc, g, args.xi, "--xi")
    tau = _named_or_literal(doc, g, args.element)
    h = homotopy_from_gauge(g, xi, tau)
    xi2 = gauge_from_homotopy(h)
    same = gauge_act(g, xi2, tau).value == gauge_act(g, xi, tau).value
    report.check("homotopy endpoints are (tau, exp(xi).tau)", True)
    report.check("Magnus round trip acts identically", same)
    report.witness("recovered gauge element", g.space, xi2)
    report.extra("homotopy", {
        "f0": {str(j): docs.render_vec_ordered(g.space, v)
               for j, v in sorted(h.f0.items())},
        "f1": {str(j): docs.render_vec_ordered(g.space, v)
               for j, v in sorted(h.f1.items())},
    })


def cmd_bch(args, report):
    doc = _load_algebra(args)
    g = _working_algebra(doc, args)
    x = _named_or_literal(doc, g, args.xi, "--xi")
    y = _named_or_literal(doc, g, args.eta, "--eta")
    z = bch(g, x, y)
    report.check("BCH computed", True)
    report.witness("bch(x,y)", g.space, z)


def cmd_simplex_verify(args, report):
    doc = _load_algebra(args)
    g = _working_algebra(doc, args)
    n = args.simplex_dim
    value = {}
    literal = args.element or ""
    for i, chunk in enumerate(literal.split(",")):
        if not chunk.strip():
            continue
        ident, _, lit = chunk.partition(":")
        value[ident.strip()] = docs._rat(lit.strip(), "element[%d]" % i)
    for ident in value:
        split_tensor_id(g, ident)  # structural validation with a clear error
    ok, simplex, residual = mc_simplex_verify(g, value, n, args.t_degree)
    report.check("simplicial Maurer-Cartan identity (dimension %d)" % n, ok)
    if not ok:
        report.witness("residual", simplex.extension.algebra.space, residual)


def cmd_pi0(args, report):
    doc = _load_algebra(args)
    g = _working_algebra(doc, args)
    A = (doc.coefficients.get(args.coefficients)
         if args.coefficients in (doc.coefficients or {})
         else polynomial_truncation(max(args.order, 2)))
    rep = moduli_set(g, A)
    report.check("moduli computed", rep.status != "not decided",
                 status=rep.status)
    if rep.status == "computed":
        report.dimension("pi0 (= H^1)", rep.details["dimension"])
        for i, r in enumerate(rep.representatives):
            report.witness("class %d" % i, g.space, r)
    report.extra("description", rep.description)


def cmd_morphism_verify(args, report):
    doc = _load_algebra(args)
    if not doc.morphisms:
        raise DocumentError("$.morphisms", "document carries no morphism blocks")
    for name, f in doc.morphisms.items():
        rep = verify_morphism(f, max(f.source.kmax, f.target.kmax) + 1)
        report.check("morphism %r respects brackets and weights" % name, rep.ok,
                     violations=len(rep.violations))
        R = args.truncation if args.truncation is not None else 4
        sq = stagewise_quasi_iso(f, R)
        report.check("morphism %r stagewise quasi-isomorphism (R=%d)" % (name, R),
                     sq.ok)


def cmd_gm_check(args, report):
    doc = _load_algebra(args)
    if not doc.morphisms:
        raise DocumentError("$.morphisms", "document carries no morphism blocks")
    R = args.truncation if args.truncation is not None else 4
    for name, f in doc.morphisms.items():
        gm = goldman_millson_check(f, R, max_order=max(args.order, 2))
        report.check("Goldman-Millson evidence for %r" % name,
                     gm.status == "pass", status=gm.status)
        if gm.h1_bijection:
            report.dimension("H1 source (%s)" % name, gm.h1_bijection["dim_source"])
            report.dimension("H1 target (%s)" % name, gm.h1_bijection["dim_target"])


def cmd_tangent(args, report):
    loaded = docs.load_document(args.document)
    if isinstance(loaded, FiniteAlgebraData):
        conv = build_convolution(loaded, args.arity_bound or 2)
        g = conv.algebra
        phi = conv.mu_vector()
    else:
        g = _working_algebra(loaded, args)
        phi = (_named_or_literal(loaded, g, args.element)
               if args.element else {})
    rep = tangent_report(g, phi)
    report.check("three tangent computations agree", rep.agree)
    report.dimension("H0 tangent complex", rep.h0_tangent)
    report.dimension("H1 twisted algebra", rep.h1_twisted)
    report.dimension("order-1 deformations mod gauge", rep.order1_deformations)
    report.dimension("stabilizer H^-1", rep.stabilizer_dimension)


def cmd_hochschild(args, report):
    loaded = docs.load_document(args.document)
    if not isinstance(loaded, FiniteAlgebraData):
        raise DocumentError("$.kind", "hochschild expects an associative-algebra document")
    N = args.arity_bound or 2
    verdict = structure_as_mc(loaded, N)
    report.check("product is associative (= Maurer-Cartan)", verdict.is_mc)
    report.check("residual equals the associator table", verdict.matches_associator)
    if not verdict.is_mc:
        return
    pipeline = deformation_pipeline(loaded, N, max(args.order, 2))
    report.check("tangent numbers agree", pipeline.tangent.agree)
    report.dimension("tangent", pipeline.tangent.h0_tangent)
    report.dimension("stabilizer", pipeline.tangent.stabilizer_dimension)
    for s, dim in pipeline.piece_dimensions.items():
        report.dimension("dim piece %d" % s, dim)
    blocked = [docs.render_vec(br.seed) for br in pipeline.lifts.branches
               if br.steps and not br.steps[-1].lifted]
    report.extra("blocked_branches", blocked)


COMMANDS = {
    "verify": cmd_verify,
    "truncate": cmd_truncate,
    "mc-residual": cmd_mc_residual,
    "mc-system": cmd_mc_system,
    "twist": cmd_twist,
    "lift": cmd_lift,
    "gauge-act": cmd_gauge_act,
    "gauge-connect": cmd_gauge_connect,
    "bch": cmd_bch,
    "simplex-verify": cmd_simplex_verify,
    "pi0": cmd_pi0,
    "morphism-verify": cmd_morphism_verify,
    "gm-check": cmd_gm_check,
    "tangent": cmd_tangent,
    "hochschild": cmd_hochschild,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mcspaces",
        description="exact computations with filtered L-infinity algebras")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("document", help="input JSON document")
        p.add_argument("--truncation", type=int, default=None,
                       help="work in g/F_R (default: as stored, else 4)")
        p.add_argument("--arity-bound", type=int, default=None,
                       help="verification arity bound (default kmax+1)")
        p.add_argument("--order", type=int, default=2,
                       help="artinian order n for K[t]/(t^n)")
        p.add_argument("--t-degree", type=int, default=None,
                       help="polynomial degree bound for form slices")
        p.add_argument("--element", default=None,
                       help="element literal 'x:1,z:-2/3' or a named element")
        p.add_argument("--xi", default=None, help="gauge element literal")
        p.add_argument("--eta", default=None, help="second gauge element (bch)")
        p.add_argument("--simplex-dim", type=int, default=1,
                       help="simplicial dimension for simplex-verify")
        p.add_argument("--coefficients", default=None,
                       help="named coefficient block for pi0")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--no-timing", action="store_true",
                       help="omit the timing field for byte-identical output")
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    started = time.monotonic()
    report = Report([args.command, args.document],
                    {k: v for k, v in vars(args).items()
                     if k not in ("command", "document") and v not in (None, False)})
    try:
        COMMANDS[args.command](args, report)
    except (DocumentError, StructuralError, NotDGLieError, OSError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except NotMaurerCartanError as exc:
        report.check("element is Maurer-Cartan", False)
        report.doc["witnesses"].append({
            "label": "residual",
            "value": "nonzero",
            "coordinates": docs.render_vec(exc.residual),
        })
    return _emit(report, args, started)


if __name__ == "__main__":
    sys.exit(main())
