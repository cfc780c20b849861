"""Filtered morphisms: verification, stagewise quasi-isomorphisms,
Goldman-Millson style desk checks, and invariance under twisting.

A morphism here is strict: a single degree-0 weight-non-decreasing
linear map commuting with every bracket.  "Quasi-isomorphism at every
stage" is checked by exact cohomology of the subcomplexes F_r and, as
the Five-Lemma consequence, of the quotient towers; "bijection of moduli
sets" is tested at the layers where it is decidable at this scale:
the H^1 isomorphism over dual numbers and order-by-order matching of
lift obstructions over K[t]/(t^n).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .exactlin import (
    GradedSpace,
    LinearMap,
    StructuralError,
    Vec,
    cohomology,
    echelon_vectors,
    in_span,
    is_zero,
    rank_of_rows,
    reduce_against,
    image_basis_slice,
    vadd,
    vclean,
    vscale,
)
from .filtered import truncate
from .linf import LInftyAlgebra, eval_bracket
from .mc import MCElement, lift_deformation, mc_element, mc_residual, twist


@dataclass
class FilteredMorphism:
    source: LInftyAlgebra
    target: LInftyAlgebra
    map: LinearMap

    def __post_init__(self):
        if self.map.degree != 0:
            raise StructuralError("morphisms have degree 0")

    def apply(self, v: Vec) -> Vec:
        return self.map.apply(v)


def morphism(source, target, columns) -> FilteredMorphism:
    m = LinearMap(source.space, target.space, 0,
                  {b: target.space.vector(col) for b, col in columns.items()})
    return FilteredMorphism(source, target, m)


@dataclass
class MorphismReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_morphism(f: FilteredMorphism, arity_bound: int) -> MorphismReport:
    """f respects degree, weight, and every bracket up to the arity bound."""
    violations = []
    g, h = f.source, f.target
    for b in g.space.ids:
        col = f.map.columns.get(b, {})
        for k in col:
            if h.space.degree_of(k) != g.space.degree_of(b):
                violations.append(("degree", b, dict(col)))
                break
        minw = h.space.min_weight_of_vector(col)
        if minw is not None and minw < g.space.weight_of(b):
            violations.append(("weight", b, dict(col)))
    kmax = min(arity_bound, max(g.kmax, h.kmax))
    for k in range(1, kmax + 1):
        kg = g.table.entries.get(k, {})
        has_g = bool(kg)
        has_h = bool(h.table.entries.get(k, {})) if k <= h.kmax else False
        if not has_g and not has_h:
            continue
        for ids in itertools.combinations_with_replacement(g.space.ids, k):
            lhs_inner = (eval_bracket(g, k, [g.space.basis_vector(i) for i in ids])
                         if k <= g.kmax else {})
            lhs = f.apply(lhs_inner)
            rhs = (eval_bracket(h, k, [f.apply(g.space.basis_vector(i)) for i in ids])
                   if k <= h.kmax else {})
            if vclean(lhs) != vclean(rhs):
                violations.append(("bracket", (k, ids),
                                   {"f(l_k)": lhs, "l_k(f)": rhs}))
    return MorphismReport(not violations, violations)


# ---------------------------------------------------------------------------
# stagewise cohomology comparisons
# ---------------------------------------------------------------------------

def _filtration_stage(g: LInftyAlgebra, r: int) -> LInftyAlgebra:
    """F_r as a complex (same brackets restricted; enough for cohomology)."""
    keep = [b for b in g.space.basis if b.weight >= r]
    space = GradedSpace(keep)
    from .linf import BracketTable
    table = BracketTable(g.kmax)
    for (b,), val in g.table.entries.get(1, {}).items():
        if b in space._index:
            inside = vclean({k: c for k, c in val.items() if k in space._index})
            if inside != vclean(val):
                raise StructuralError("differential does not preserve F_%d" % r)
            if inside:
                table.set_entry(1, (b,), inside)
    return LInftyAlgebra(space, table, name="F_%d" % r)


def _restrict_map(f: FilteredMorphism, src: LInftyAlgebra, dst: LInftyAlgebra):
    cols = {}
    for b in src.space.ids:
        col = f.map.columns.get(b, {})
        cols[b] = {k: c for k, c in col.items() if k in dst.space._index}
        if vclean(cols[b]) != vclean(col):
            # components outside the stage: f would not be filtered
            raise StructuralError("morphism does not restrict to the stage")
    return LinearMap(src.space, dst.space, 0, cols)


def induced_map_iso_on_cohomology(m: LinearMap, d_src: LinearMap, d_tgt: LinearMap,
                                  degree: int):
    """Is the induced map H^degree(source) -> H^degree(target) invertible?

    Exact check: classes of images of source representatives must span
    the target cohomology and be independent modulo coboundaries.
    """
    hs = cohomology(d_src, d_src, degree)
    ht = cohomology(d_tgt, d_tgt, degree)
    if hs.dimension != ht.dimension:
        return False, hs.dimension, ht.dimension
    slice_ids = d_tgt.source.slice_ids(degree)
    b_ech = image_basis_slice(d_tgt, degree - d_tgt.degree)
    combined = list(b_ech)
    index = {k: i for i, k in enumerate(slice_ids)}
    rank = 0
    for rep in hs.representatives:
        img = m.apply(rep)
        red = reduce_against(slice_ids, combined, img)
        if not is_zero(red):
            lead = min(red, key=lambda k: index[k])
            red = vscale(Fraction(1) / red[lead], red)
            combined.append(red)
            combined.sort(key=lambda row: index[min(row, key=lambda k: index[k])])
            rank += 1
    return rank == ht.dimension, hs.dimension, ht.dimension


@dataclass
class StagewiseReport:
    ok: bool
    stages: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def stagewise_quasi_iso(f: FilteredMorphism, order: int) -> StagewiseReport:
    """Quasi-isomorphism verdict per filtration stage and per quotient level.

    For each r <= order the restriction F_r f and the induced map on
    g/F_r are both checked to be isomorphisms on cohomology in every
    populated degree.
    """
    stages = []
    ok = True
    g, h = f.source, f.target
    degrees = sorted(set(g.space.degrees()) | set(h.space.degrees()))
    degrees = list(range(min(degrees, default=0) - 1, max(degrees, default=0) + 2))
    for r in range(1, order + 1):
        entry = {"stage": r, "sub": [], "quotient": []}
        gs, hs = _filtration_stage(g, r), _filtration_stage(h, r)
        fm = _restrict_map(f, gs, hs)
        for n in degrees:
            iso, ds, dt = induced_map_iso_on_cohomology(
                fm, gs.differential(), hs.differential(), n)
            entry["sub"].append({"degree": n, "iso": iso,
                                 "dim_source": ds, "dim_target": dt})
            ok = ok and iso
        gq, hq = truncate(g, r), truncate(h, r)
        fq = _restrict_map(f, gq, hq)
        for n in degrees:
            iso, ds, dt = induced_map_iso_on_cohomology(
                fq, gq.differential(), hq.differential(), n)
            entry["quotient"].append({"degree": n, "iso": iso,
                                      "dim_source": ds, "dim_target": dt})
            ok = ok and iso
        stages.append(entry)
    return StagewiseReport(ok, stages)


# ---------------------------------------------------------------------------
# Goldman-Millson at desk scale
# ---------------------------------------------------------------------------

@dataclass
class GoldmanMillsonReport:
    status: str                  # 'pass' | 'hypotheses not met' | 'fail'
    hypothesis: dict = field(default_factory=dict)
    h1_bijection: dict = field(default_factory=dict)
    orders: list = field(default_factory=list)


def goldman_millson_check(f: FilteredMorphism, order: int,
                          max_order: int = 3) -> GoldmanMillsonReport:
    """Bijection evidence for the induced map of Maurer-Cartan moduli sets.

    Hypotheses (checked, failures reported as such): stagewise
    quasi-isomorphism; both algebras concentrated in non-negative
    degrees.  Evidence: the induced H^1 map of the truncations is an
    isomorphism; over K[t]/(t^n), n <= max_order, the lift reports of both
    sides match, with obstruction classes corresponding under f.
    """
    g, h = f.source, f.target
    hyp = {}
    neg = [b.ident for b in g.space.basis if b.degree < 0]
    neg += [b.ident for b in h.space.basis if b.degree < 0]
    hyp["non_negative"] = not neg
    sq = stagewise_quasi_iso(f, order)
    hyp["stagewise_quasi_iso"] = sq.ok
    if not (sq.ok and hyp["non_negative"]):
        return GoldmanMillsonReport("hypotheses not met", hyp)
    gq, hq = truncate(g, order), truncate(h, order)
    fq = _restrict_map(f, gq, hq)
    iso, ds, dt = induced_map_iso_on_cohomology(
        fq, gq.differential(), hq.differential(), 1)
    report = GoldmanMillsonReport("pass", hyp,
                                  {"iso": iso, "dim_source": ds, "dim_target": dt})
    if not iso:
        report.status = "fail"
        return report
    for n in range(2, max_order + 1):
        src = lift_deformation(gq, {}, n)
        tgt = lift_deformation(hq, {}, n)
        entry = {"order": n,
                 "tangent_source": src.tangent_dimension,
                 "tangent_target": tgt.tangent_dimension,
                 "branches": []}
        if src.tangent_dimension != tgt.tangent_dimension:
            report.status = "fail"
        # image representatives must again form a basis of target H^1
        slice1 = hq.space.slice_ids(1)
        d_h = hq.differential()
        b1 = image_basis_slice(d_h, 0)
        span = list(b1)
        matched = 0
        for branch in src.branches:
            img = fq.apply(branch.seed)
            red = reduce_against(slice1, span, img)
            if not is_zero(red):
                span = echelon_vectors(slice1, span + [red])
                matched += 1
        entry["h1_correspondence"] = (matched == tgt.tangent_dimension)
        if not entry["h1_correspondence"]:
            report.status = "fail"
        # obstruction matching branch by branch: push the source branch
        # forward and compare the order of first obstruction and the
        # image of the obstruction class
        for branch in src.branches:
            coeffs = {j: fq.apply(v) for j, v in branch.coefficients.items()}
            from .mc import _poly_residual_coefficient
            tw_h = tgt.twisted
            first_block = None
            for step in branch.steps:
                if not step.lifted:
                    first_block = step
            pushed = {"seed": branch.seed,
                      "source_blocked_at": (first_block.order if first_block else None)}
            if first_block is not None:
                o_img = fq.apply(first_block.obstruction_cocycle)
                slice2 = hq.space.slice_ids(2)
                b2 = image_basis_slice(d_h, 1)
                pushed["image_class_vanishes"] = in_span(slice2, b2, o_img)
                # target obstruction of the pushed partial solution
                o_tgt = _poly_residual_coefficient(tw_h, coeffs, first_block.order)
                pushed["target_obstruction_matches"] = veq_mod(
                    slice2, b2, o_img, o_tgt)
                if pushed["image_class_vanishes"]:
                    report.status = "fail"
            entry["branches"].append(pushed)
        report.orders.append(entry)
    return report


def veq_mod(coord_ids, echelon, u: Vec, v: Vec) -> bool:
    """u = v modulo the span of the echelon rows."""
    from .exactlin import vsub
    return is_zero(reduce_against(coord_ids, echelon, vsub(u, v)))


# ---------------------------------------------------------------------------
# invariance under twisting
# ---------------------------------------------------------------------------

@dataclass
class TwistPushforwardReport:
    status: str
    details: dict = field(default_factory=dict)


def twist_pushforward_check(f: FilteredMorphism, phi, order: int) -> TwistPushforwardReport:
    """Push a Maurer-Cartan element through f and compare the twisted sides.

    Checks, in sequence: f(phi) is Maurer-Cartan; f is a morphism of the
    twisted algebras; the twisted morphism is a stagewise
    quasi-isomorphism.  Functoriality of residuals (F(f tau) = f F(tau))
    is what makes the first step automatic; it is still verified exactly.
    """
    g, h = f.source, f.target
    phi_vec = phi.value if isinstance(phi, MCElement) else vclean(phi)
    details = {}
    res_src = mc_residual(g, phi_vec)
    img = f.apply(phi_vec)
    res_img = mc_residual(h, img)
    details["residual_functorial"] = (vclean(f.apply(res_src)) == vclean(res_img))
    if not is_zero(res_src):
        return TwistPushforwardReport("hypotheses not met",
                                      {"reason": "phi is not Maurer-Cartan",
                                       "residual": res_src})
    if not is_zero(res_img):
        return TwistPushforwardReport("fail",
                                      {"reason": "f(phi) fails MC",
                                       "residual": res_img, **details})
    sq = stagewise_quasi_iso(f, order)
    if not sq.ok:
        return TwistPushforwardReport("hypotheses not met",
                                      {"reason": "untwisted morphism is not a "
                                                 "stagewise quasi-isomorphism"})
    tg = twist(g, phi_vec).algebra
    th = twist(h, img).algebra
    ftw = FilteredMorphism(tg, th, LinearMap(tg.space, th.space, 0,
                                             {b: f.map.column(b)
                                              for b in f.map.columns}))
    rep = verify_morphism(ftw, max(tg.kmax, th.kmax))
    details["twisted_morphism"] = rep.ok
    sq_tw = stagewise_quasi_iso(ftw, order)
    details["twisted_stagewise"] = sq_tw.ok
    details["stages"] = sq_tw.stages
    status = "pass" if (rep.ok and sq_tw.ok and details["residual_functorial"]) else "fail"
    return TwistPushforwardReport(status, details)
