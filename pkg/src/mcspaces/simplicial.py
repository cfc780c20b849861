"""Polynomial de Rham forms on low simplices and the simplicial MC set.

Omega_n is presented in normal form with t_0 eliminated through
t_0 = 1 - sum t_i, so Omega_1 is literally K[t] + K[t]dt.  Only n <= 2
is materialized, as a finite-dimensional slice: monomials of total
degree <= D where each dt counts 1.  Monomials beyond the bound are
truncated to zero, which is an honest dg quotient (the span of
high-degree monomials is a differential ideal), and every verification
picks D large enough that the identities it checks are not clipped.

Face maps evaluate/merge barycentric coordinates and degeneracies
duplicate them; the boundary conventions put d_0 at t = 0 and d_1 at
t = 1 on 1-simplices, matching the rest of the package (a homotopy runs
from its start at t = 0 to the gauge translate at t = 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .exactlin import StructuralError, Vec, is_zero, solve_linear, vadd, vclean, vscale
from .filtered import CoefficientAlgebra, ExtendedAlgebra, extend_scalars
from .gauge import (
    Homotopy,
    Path,
    bracket,
    gauge_act,
    homotopy_from_gauge,
    moduli_set,
    path_add,
    path_clean,
    path_delta,
    path_eval,
    path_scale,
    validate_homotopy,
)
from .linf import LInftyAlgebra
from .mc import MCElement, mc_element, mc_residual


# ---------------------------------------------------------------------------
# monomial bookkeeping: a monomial is (powers tuple, dt flags tuple)
# ---------------------------------------------------------------------------

def _monomial_id(powers, flags, names):
    parts = []
    for name, e in zip(names, powers):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append("%s^%d" % (name, e))
    for name, f in zip(names, flags):
        if f:
            parts.append("d%s" % name)
    return "*".join(parts) if parts else "1"


@dataclass
class SullivanForms:
    """Degree-D slice of Omega_n (n <= 2) as a coefficient cdga."""

    n: int
    bound: int
    names: list
    algebra: CoefficientAlgebra
    monomials: dict = field(default_factory=dict)   # id -> (powers, flags)

    def monomial(self, powers, flags):
        return _monomial_id(tuple(powers), tuple(flags), self.names)


def omega(n: int, bound: int) -> SullivanForms:
    """Materialize the degree-<=bound slice of Omega_n, n in {0, 1, 2}."""
    if n not in (0, 1, 2):
        raise StructuralError("only simplicial dimensions 0, 1, 2 are supported")
    if bound < 0:
        raise StructuralError("degree bound must be >= 0")
    names = [] if n == 0 else (["t"] if n == 1 else ["t1", "t2"])
    monos = []
    for powers in itertools.product(range(bound + 1), repeat=n):
        for flags in itertools.product((0, 1), repeat=n):
            if sum(powers) + sum(flags) <= bound:
                monos.append((tuple(powers), tuple(flags)))
    monos.sort(key=lambda m: (sum(m[0]) + sum(m[1]), m[1], m[0]))
    ids = [_monomial_id(p, f, names) for p, f in monos]
    lookup = dict(zip(ids, monos))
    basis = [(mid, sum(f)) for mid, (p, f) in zip(ids, monos)]

    def mul(m1, m2):
        (p1, f1), (p2, f2) = m1, m2
        if any(a and b for a, b in zip(f1, f2)):
            return None, 0
        powers = tuple(a + b for a, b in zip(p1, p2))
        flags = tuple(a or b for a, b in zip(f1, f2))
        if sum(powers) + sum(flags) > bound:
            return None, 0
        # sign: move each dt of m2 leftward past the dts of m1 that follow
        # its slot; dt factors are kept in variable order
        sign = 1
        for j, b in enumerate(f2):
            if b:
                crossings = sum(1 for i in range(j + 1, n) if f1[i])
                sign *= (-1) ** crossings
        return (powers, flags), sign

    products = {}
    for (ida, ma), (idb, mb) in itertools.product(zip(ids, monos), repeat=2):
        out, sign = mul(ma, mb)
        products[(ida, idb)] = {} if out is None else {
            _monomial_id(out[0], out[1], names): Fraction(sign)}

    differential = {}
    for mid, (p, f) in zip(ids, monos):
        image: Vec = {}
        for i in range(n):
            if p[i] == 0 or f[i]:
                # d(t_i^a ... dt_i ...) term with repeated dt_i dies
                if p[i] == 0:
                    continue
            np_ = list(p)
            np_[i] -= 1
            nf = list(f)
            if nf[i]:
                continue
            nf[i] = 1
            if sum(np_) + sum(nf) > bound:
                continue
            # moving the fresh dt_i into variable order past earlier dts
            sign = (-1) ** sum(1 for j in range(i) if f[j])
            target = _monomial_id(tuple(np_), tuple(nf), names)
            image = vadd(image, {target: Fraction(sign * p[i])})
        if image:
            differential[mid] = image
    alg = CoefficientAlgebra("Omega_%d<=%d" % (n, bound),
                             basis, "1", products,
                             maximal=[i for i in ids if i != "1"],
                             differential=differential,
                             validate=len(ids) <= 24)
    forms = SullivanForms(n, bound, names, alg, lookup)
    return forms


def extend_by_forms(g: LInftyAlgebra, n: int, bound: int):
    forms = omega(n, bound)
    return forms, extend_scalars(g, forms.algebra, ideal_only=False)


# ---------------------------------------------------------------------------
# substitution maps between form slices (faces and degeneracies)
# ---------------------------------------------------------------------------

def _substitute_monomial(src: SullivanForms, dst: SullivanForms, mono_id,
                         images: dict) -> Vec:
    """Image of one monomial under a cdga map given on the t generators.

    dt images are the differentials of the t images, so the substitution
    commutes with d by construction.
    """
    powers, flags = src.monomials[mono_id]
    acc = {"1": Fraction(1)}
    for name, e in zip(src.names, powers):
        for _ in range(e):
            acc = dst.algebra.multiply(acc, images[name])
    for name, f in zip(src.names, flags):
        if f:
            acc = dst.algebra.multiply(acc, dst.algebra.d(images[name]))
    return acc


_CONST = lambda c: {"1": Fraction(c)} if c else {}


def face_images(n: int, i: int, dst: SullivanForms):
    """Generator images of the i-th face map Omega_n -> Omega_{n-1}.

    On 1-simplices d_0 evaluates at t = 0 and d_1 at t = 1; the
    2-simplex faces are indexed compatibly (the simplicial identities
    are property-tested, not assumed).
    """
    if n == 1:
        return {"t": _CONST(0) if i == 0 else _CONST(1)}
    if n == 2:
        t = {"t": Fraction(1)}
        if i == 0:
            return {"t1": t, "t2": {}}
        if i == 1:
            return {"t1": {}, "t2": t}
        if i == 2:
            return {"t1": vadd(_CONST(1), vscale(-1, t)), "t2": t}
    raise StructuralError("face d_%d undefined in dimension %d" % (i, n))


def degeneracy_images(n: int, i: int, dst: SullivanForms):
    """Generator images of the i-th degeneracy Omega_n -> Omega_{n+1}."""
    if n == 0:
        return {}
    if n == 1:
        t1 = {"t1": Fraction(1)}
        t2 = {"t2": Fraction(1)}
        if i == 0:
            return {"t": vadd(t1, t2)}
        if i == 1:
            return {"t": t2}
    raise StructuralError("degeneracy s_%d undefined in dimension %d" % (i, n))


@dataclass
class MCSimplex:
    base: LInftyAlgebra
    dimension: int
    forms: SullivanForms
    extension: ExtendedAlgebra
    value: Vec

    def residual(self) -> Vec:
        return mc_residual(self.extension.algebra, self.value)


def mc_simplex(g: LInftyAlgebra, value: Vec, n: int, bound=None) -> MCSimplex:
    """Wrap and verify a degree-1 element of g (x) Omega_n as an MC simplex."""
    ok, simplex, residual = mc_simplex_verify(g, value, n, bound)
    if not ok:
        raise StructuralError("candidate fails the simplicial MC equation")
    return simplex


def split_tensor_id(g: LInftyAlgebra, ident: str):
    """Parse 'base' or 'base*monomial' against the base algebra's ids."""
    if ident in g.space._index:
        return ident, "1"
    for b in sorted(g.space.ids, key=len, reverse=True):
        if ident.startswith(b + "*"):
            return b, ident[len(b) + 1:]
    raise StructuralError("cannot parse tensor id %r" % (ident,))


def _monomial_degree(mono: str) -> int:
    if mono == "1":
        return 0
    total = 0
    for factor in mono.split("*"):
        if factor.startswith("d"):
            total += 1
        elif "^" in factor:
            total += int(factor.split("^")[1])
        else:
            total += 1
    return total


def mc_simplex_verify(g: LInftyAlgebra, value: Vec, n: int, bound=None):
    """Exact polynomial-identity check of the MC equation in g (x) Omega_n.

    Returns (ok, MCSimplex, residual witness).  The working slice bound
    is enlarged so that no residual term can be clipped by truncation.
    """
    if bound is None:
        used = 0
        for ident in value:
            _, mono = split_tensor_id(g, ident)
            used = max(used, _monomial_degree(mono))
        work = used * max(g.kmax, 1) + 1
    else:
        work = bound
    forms = omega(n, work)
    big = g.space.dim * forms.algebra.dim > 160
    ext = extend_scalars(g, forms.algebra, ideal_only=False,
                         table_support=list(value) if big else None)
    ext.algebra.space.check_member(value)
    residual = mc_residual(ext.algebra, value)
    simplex = MCSimplex(g, n, forms, ext, vclean(value))
    return is_zero(residual), simplex, residual


def apply_form_map(simplex: MCSimplex, dst_forms: SullivanForms, images) -> Vec:
    """Push the simplex value through 1 (x) f for a substitution f on forms."""
    dst_ext = extend_scalars(simplex.base, dst_forms.algebra, ideal_only=False,
                             table_support=[])
    out: Vec = {}
    for ident, c in simplex.value.items():
        b, a = simplex.extension.factors[ident]
        img = _substitute_monomial(simplex.forms, dst_forms, a, images)
        for am, x in img.items():
            tid = dst_ext.tensor(b, am)
            s = out.get(tid, 0) + c * x
            if s:
                out[tid] = s
            elif tid in out:
                del out[tid]
    return out


def faces_degeneracies(simplex: MCSimplex):
    """All faces and degeneracies, each re-verified as an MC simplex."""
    n = simplex.dimension
    out = {}
    if n >= 1:
        dst = omega(n - 1, simplex.forms.bound)
        for i in range(n + 1):
            images = face_images(n, i, dst)
            vec = apply_form_map(simplex, dst, images)
            ok, face, res = mc_simplex_verify(simplex.base, vec, n - 1,
                                              simplex.forms.bound)
            if not ok:
                raise AssertionError("face map broke the MC condition; bug")
            out["d%d" % i] = face
    if n <= 1:
        dst = omega(n + 1, simplex.forms.bound)
        for i in range(n + 1):
            images = degeneracy_images(n, i, dst)
            vec = apply_form_map(simplex, dst, images)
            ok, degen, res = mc_simplex_verify(simplex.base, vec, n + 1,
                                               simplex.forms.bound)
            if not ok:
                raise AssertionError("degeneracy map broke the MC condition; bug")
            out["s%d" % i] = degen
    return out


def homotopy_to_simplex(h: Homotopy, bound=None) -> MCSimplex:
    """Reinterpret a homotopy as a 1-simplex: f0 + f1 dt maps to f0 - f1 (x) dt."""
    g = h.ambient
    D = bound if bound is not None else max(h.t_degree() + 1, 2)
    forms = omega(1, D * max(g.kmax, 1) + 1)
    ext = extend_scalars(g, forms.algebra, ideal_only=False, table_support=[])
    value: Vec = {}
    for j, v in h.f0.items():
        mono = forms.monomial((j,), (0,))
        for b, c in v.items():
            value[ext.tensor(b, mono)] = c
    for j, v in h.f1.items():
        mono = forms.monomial((j,), (1,))
        for b, c in v.items():
            value[ext.tensor(b, mono)] = -c
    ok, simplex, res = mc_simplex_verify(g, value, 1, forms.bound)
    if not ok:
        raise AssertionError("valid homotopy must give an MC 1-simplex")
    return simplex


def simplex_to_homotopy(simplex: MCSimplex) -> Homotopy:
    if simplex.dimension != 1:
        raise StructuralError("only 1-simplices convert to homotopies")
    f0: Path = {}
    f1: Path = {}
    for ident, c in simplex.value.items():
        b, a = simplex.extension.factors[ident]
        (j,), (flag,) = simplex.forms.monomials[a]
        if flag:
            f1.setdefault(j, {})[b] = -c
        else:
            f0.setdefault(j, {})[b] = c
    h = Homotopy(simplex.base, path_clean(f0), path_clean(f1))
    return validate_homotopy(h)


# ---------------------------------------------------------------------------
# consequences of the fibration theorem, at desk scale
# ---------------------------------------------------------------------------

@dataclass
class FibrationReport:
    status: str          # 'pass' | 'hypotheses not met' | 'fail'
    details: dict = field(default_factory=dict)


def _stagewise_surjective(f):
    """Exact rank check of F_r f : F_r g -> F_r h for every stage r."""
    from .exactlin import rank_of_rows
    g, h = f.source, f.target
    R = max(g.effective_order(), h.effective_order())
    for r in range(1, R + 1):
        h_ids = [b.ident for b in h.space.basis if b.weight >= r]
        if not h_ids:
            continue
        g_ids = [b.ident for b in g.space.basis if b.weight >= r]
        index = {k: i for i, k in enumerate(h_ids)}
        rows = []
        for b in g_ids:
            row = [Fraction(0)] * len(h_ids)
            for k, c in f.map.columns.get(b, {}).items():
                if k in index:
                    row[index[k]] = c
            rows.append(row)
        if rank_of_rows(rows) < len(h_ids):
            return False, r
    return True, None


def solve_flow(g: LInftyAlgebra, generator: Path, start: Vec) -> Path:
    """Unique polynomial solution of dF/dt = -d(f1) + [f1, F], F(0) = start.

    Coefficient recursion: (m+1) F_{m+1} = -d(f1)_m + sum_{i+j=m} [f1_i, F_j].
    Terminates because each bracket strictly increases weight.
    """
    F: Path = {0: dict(start)} if start else {}
    rhs_const = path_scale(-1, path_delta(g, generator))
    gen_deg = max(generator, default=0)
    m = 0
    zero_run = 0
    while zero_run <= gen_deg + 1:
        nxt: Vec = dict(rhs_const.get(m, {}))
        for i, u in generator.items():
            j = m - i
            if j in F:
                nxt = vadd(nxt, bracket(g, u, F[j]))
        coeff = vscale(Fraction(1, m + 1), nxt)
        if coeff:
            F[m + 1] = coeff
            zero_run = 0
        else:
            zero_run += 1
        m += 1
        if m > 4 * (g.effective_order() + 1) * (gen_deg + 2):
            raise AssertionError("flow recursion failed to terminate; bug")
    return path_clean(F)


def fibration_consequence_check(f, order: int, mc_probes=None) -> FibrationReport:
    """Desk-scale consequences of 'MC of a stagewise surjection is a fibration'.

    (a) Maurer-Cartan surjectivity: each probe MC element of the target
        is lifted order-by-order in weight; a failure is reported with
        the obstruction witness.
    (b) Path lifting: for every 1-simplex of the target (given as a
        homotopy) plus a lift of its start point, a lifting 1-simplex is
        constructed by lifting the generator through the degree-0
        surjection and solving the flow upstairs.
    """
    from .morphisms import FilteredMorphism, verify_morphism
    if not isinstance(f, FilteredMorphism):
        raise StructuralError("expected a FilteredMorphism")
    rep = verify_morphism(f, max(f.source.kmax, f.target.kmax))
    if not rep.ok:
        return FibrationReport("hypotheses not met",
                               {"reason": "not a filtered morphism"})
    surj, stage = _stagewise_surjective(f)
    if not surj:
        return FibrationReport("hypotheses not met",
                               {"reason": "not stagewise surjective", "stage": stage})
    g, h = f.source, f.target
    details = {"mc_lifts": [], "path_lifts": []}
    probes = mc_probes if mc_probes is not None else _default_mc_probes(h)
    for tau in probes:
        mc_element(h, tau)
        lift, obstruction = _lift_mc_by_weight(f, tau, order)
        if lift is None:
            return FibrationReport("fail", {"unliftable": tau,
                                            "obstruction": obstruction})
        details["mc_lifts"].append({"target": tau, "lift": lift})
        if not g.is_dg_lie():
            continue
        for xi_h in _degree0_probes(h):
            hom = homotopy_from_gauge(h, xi_h, tau)
            start_lift = lift
            lifted = lift_one_simplex(f, hom, start_lift)
            details["path_lifts"].append({
                "generator": xi_h, "start": tau, "lift_f0": lifted.f0,
                "lift_f1": lifted.f1})
    return FibrationReport("pass", details)


def _default_mc_probes(h: LInftyAlgebra):
    sys_ids = h.space.slice_ids(1)
    probes = [{}]
    for b in sys_ids:
        cand = {b: Fraction(1)}
        if is_zero(mc_residual(h, cand)):
            probes.append(cand)
    return probes


def _degree0_probes(h: LInftyAlgebra):
    out = [{b: Fraction(1)} for b in h.space.slice_ids(0)]
    return out or [{}]


def _lift_mc_by_weight(f, tau: Vec, order: int):
    """Solve f(x) = tau, F(x) = 0 by correcting weight by weight.

    Returns (lift, None) or (None, obstruction witness).
    """
    g, h = f.source, f.target
    sol = solve_linear(f.map, tau)
    if sol.solution is None:
        return None, {"linear": tau}
    x = {b: c for b, c in sol.solution.items() if g.space.degree_of(b) == 1}
    d = g.differential()
    for r in range(1, order + 1):
        res = mc_residual(g, x)
        if is_zero(res):
            return x, None
        res_r = {b: c for b, c in res.items() if g.space.weight_of(b) == r}
        if is_zero(res_r):
            continue
        # correction of weight >= r in ker(f), degree 1, with d(c) = -res_r
        correction = _solve_in_kernel(f, d, vscale(-1, res_r), r)
        if correction is None:
            return None, {"weight": r, "witness": res_r}
        x = vadd(x, correction)
    res = mc_residual(g, x)
    if is_zero(res):
        return x, None
    return None, {"weight": "beyond order", "witness": res}


def _solve_in_kernel(f, d, target: Vec, weight: int):
    """Element of ker(f) in degree 1 and weight >= weight with d(c) = target."""
    g = f.source
    candidates = [b.ident for b in g.space.basis
                  if b.degree == 1 and b.weight >= weight]
    from .exactlin import GradedSpace, LinearMap
    if not candidates:
        return None
    sub = GradedSpace([(b, 1, g.space.weight_of(b)) for b in candidates])
    cols = {}
    # combined condition: d(c) = target and f(c) = 0, stacked into one map
    combined_ids = [("d", b.ident) for b in g.space.basis] + \
                   [("f", b.ident) for b in f.target.space.basis]
    space_combined = GradedSpace([("%s:%s" % tag, 0, 1) for tag in combined_ids])
    for b in candidates:
        col = {}
        for k, c in d.columns.get(b, {}).items():
            col["d:%s" % k] = c
        for k, c in f.map.columns.get(b, {}).items():
            col["f:%s" % k] = c
        cols[b] = col
    m = LinearMap(sub, space_combined, 0, cols)
    goal = {"d:%s" % k: c for k, c in target.items()}
    sol = solve_linear(m, goal)
    return sol.solution


def lift_one_simplex(f, hom: Homotopy, start_lift: Vec) -> Homotopy:
    """Kan lifting of a 1-simplex along a stagewise surjection, constructively."""
    g, h = f.source, f.target
    validate_homotopy(hom)
    assert f.map.apply(start_lift) == vclean(path_eval(hom.f0, 0))
    # lift the generator coefficient-wise through the degree-0 part of f
    gen_lift: Path = {}
    for j, v in hom.f1.items():
        sol = solve_linear(f.map, v)
        if sol.solution is None:
            raise AssertionError("stagewise surjection must lift degree-0 vectors")
        gen_lift[j] = {b: c for b, c in sol.solution.items()
                       if g.space.degree_of(b) == 0}
    F0 = solve_flow(g, gen_lift, start_lift)
    lifted = Homotopy(g, F0, gen_lift)
    validate_homotopy(lifted)
    # the image downstairs is the original homotopy, exactly
    img_f0 = path_clean({j: f.map.apply(v) for j, v in F0.items()})
    img_f1 = path_clean({j: f.map.apply(v) for j, v in gen_lift.items()})
    assert img_f0 == hom.f0 and img_f1 == hom.f1
    return lifted


def pi0(g: LInftyAlgebra, A, candidate=None):
    """Connected components of the simplicial MC set, via gauge orbits."""
    return moduli_set(g, A, candidate=candidate)
