"""Deformation complex of a finite-dimensional associative algebra.

The convolution dg Lie algebra has graded pieces
g_s = Hom(X^{(s+1)}, X) in cohomological degree s and weight s, for
s = 1..N, with the Gerstenhaber bracket.  Arity-1 cochains Hom(X, X)
stay outside the filtered algebra: the bracket with them preserves
weight, so no strict filtration can contain them; this matches building
the complex from generators of arity >= 2 only.  Their infinitesimal
action (conjugation of the product) is still exposed through the raw
bracket, and tested against the first-order expansion of
(1 + xi t) mu((1 - xi t) a, (1 - xi t) b).

A bilinear product mu is associative exactly when its Maurer-Cartan
residual 1/2 [mu, mu] = mu o mu vanishes, and that residual is the
associator (a, b, c) -> mu(mu(a, b), c) - mu(a, mu(b, c)) on the nose.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .exactlin import StructuralError, Vec, fraction, is_zero, sign_pow, vadd, vclean, vscale
from .linf import BracketTable, LInftyAlgebra, eval_bracket
from .exactlin import GradedSpace
from .mc import mc_element, mc_residual, lift_deformation, twist
from .tangent import tangent_report


class BudgetExceededError(ValueError):
    pass


@dataclass
class FiniteAlgebraData:
    """Underlying space X with candidate structure constants mu: X (x) X -> X."""

    name: str
    basis: list
    product: dict                       # (a, b) -> Vec
    degrees: dict = field(default_factory=dict)   # defaults to 0
    differential: dict = field(default_factory=dict)

    def __post_init__(self):
        self.basis = [str(b) for b in self.basis]
        if len(set(self.basis)) != len(self.basis):
            raise StructuralError("duplicate basis ids in algebra data")
        self.product = {
            (a, b): vclean({k: fraction(c) for k, c in v.items()})
            for (a, b), v in self.product.items()
        }
        for (a, b), v in self.product.items():
            for k in list(v) + [a, b]:
                if k not in self.basis:
                    raise StructuralError("product mentions unknown id %r" % (k,))
        self.degrees = {b: int(self.degrees.get(b, 0)) for b in self.basis}

    @property
    def dimension(self):
        return len(self.basis)

    def is_ungraded(self):
        return all(d == 0 for d in self.degrees.values()) and not self.differential

    def mu(self, a, b) -> Vec:
        return dict(self.product.get((a, b), {}))

    def mu_vec(self, u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for a, x in u.items():
            for b, y in v.items():
                for k, c in self.mu(a, b).items():
                    s = out.get(k, 0) + x * y * c
                    if s:
                        out[k] = s
                    elif k in out:
                        del out[k]
        return out


def associativity_defect(X: FiniteAlgebraData):
    """Brute-force associator table over all basis triples."""
    defects = {}
    for a, b, c in itertools.product(X.basis, repeat=3):
        left = X.mu_vec(X.mu(a, b), {c: Fraction(1)})
        right = X.mu_vec({a: Fraction(1)}, X.mu(b, c))
        d = vclean(vadd(left, vscale(-1, right)))
        if d:
            defects[(a, b, c)] = d
    return defects


def is_associative(X: FiniteAlgebraData) -> bool:
    return not associativity_defect(X)


# ---------------------------------------------------------------------------
# cochains
# ---------------------------------------------------------------------------

def cochain_id(inputs, output) -> str:
    return "%s->%s" % (".".join(inputs), output)


def parse_cochain_id(ident: str):
    lhs, output = ident.split("->")
    return tuple(lhs.split(".")), output


def gerstenhaber_circ(X, f, g) -> dict:
    """Pre-Lie composition f o g of cochain dicts {(inputs, output): coeff}.

    Cochains are maps X^{(m)} -> X for an ungraded X; the slot-insertion
    sign is (-1)^{(i-1)(n-1)} for insertion at slot i of an n-ary g.
    """
    out = {}
    for (fin, fout), cf in f.items():
        m = len(fin)
        for (gin, gout), cg in g.items():
            n = len(gin)
            for i in range(m):
                if fin[i] != gout:
                    continue
                sign = sign_pow(i * (n - 1))
                key = (fin[:i] + gin + fin[i + 1:], fout)
                s = out.get(key, 0) + sign * cf * cg
                if s:
                    out[key] = s
                elif key in out:
                    del out[key]
    return out


def gerstenhaber_bracket(X, f, g, m, n) -> dict:
    """[f, g] = f o g - (-1)^{(m-1)(n-1)} g o f on cochain dicts."""
    fg = gerstenhaber_circ(X, f, g)
    gf = gerstenhaber_circ(X, g, f)
    sign = sign_pow((m - 1) * (n - 1))
    out = dict(fg)
    for key, c in gf.items():
        s = out.get(key, 0) - sign * c
        if s:
            out[key] = s
        elif key in out:
            del out[key]
    return out


@dataclass
class ConvolutionComplex:
    data: FiniteAlgebraData
    arity_bound: int
    algebra: LInftyAlgebra

    def piece_dimension(self, s: int) -> int:
        return self.data.dimension ** (s + 2)

    def mu_vector(self) -> Vec:
        out = {}
        for (a, b), v in self.data.product.items():
            for k, c in v.items():
                out[cochain_id((a, b), k)] = c
        return vclean(out)


def build_convolution(X: FiniteAlgebraData, arity_bound: int,
                      budget: int = 6000) -> ConvolutionComplex:
    """Filtered dg Lie algebra of cochains of arity 2..N+1 on X.

    The degree-1 slice of every truncation is finite dimensional by
    construction; its per-level dimensions are in the report of callers.
    """
    if arity_bound < 2:
        raise StructuralError("arity bound must be >= 2")
    if not X.is_ungraded():
        raise StructuralError(
            "only X concentrated in degree 0 builds the full complex; "
            "graded data supports residual verification only")
    d = X.dimension
    total = sum(d ** (s + 2) for s in range(1, arity_bound + 1))
    if total > budget:
        raise BudgetExceededError(
            "cochain basis of size %d exceeds the budget %d" % (total, budget))
    basis = []
    for s in range(1, arity_bound + 1):
        for inputs in itertools.product(X.basis, repeat=s + 1):
            for output in X.basis:
                basis.append((cochain_id(inputs, output), s, s))
    space = GradedSpace(basis)
    table = BracketTable(2)
    for i, (ida, sa, _) in enumerate(basis):
        fa = {parse_cochain_id(ida): Fraction(1)}
        for idb, sb, _ in basis[i:]:
            if sa + sb > arity_bound:
                continue
            fb = {parse_cochain_id(idb): Fraction(1)}
            br = gerstenhaber_bracket(X, fa, fb, sa + 1, sb + 1)
            val = vclean({cochain_id(inp, out): c for (inp, out), c in br.items()})
            if val:
                table.set_entry(2, (ida, idb), val)
    alg = LInftyAlgebra(space, table, name="C(%s)" % X.name,
                        truncation_order=arity_bound + 1)
    return ConvolutionComplex(X, arity_bound, alg)


@dataclass
class MCVerdict:
    is_mc: bool
    residual: Vec
    associator: dict
    matches_associator: bool


def structure_as_mc(X: FiniteAlgebraData, arity_bound: int = 2) -> MCVerdict:
    """mu is Maurer-Cartan exactly when it is associative; both are computed.

    The weight-2 component of the residual is compared entry by entry
    with the brute-force associator.
    """
    if X.is_ungraded():
        conv = build_convolution(X, max(arity_bound, 2))
        mu = conv.mu_vector()
        res = mc_residual(conv.algebra, mu)
    else:
        res = graded_binary_residual(X)
    assoc = associativity_defect(X)
    assoc_vec = vclean({cochain_id(t, k): c
                        for t, v in assoc.items() for k, c in v.items()})
    return MCVerdict(is_zero(res), res, assoc,
                     vclean(res) == assoc_vec)


def graded_binary_residual(X: FiniteAlgebraData) -> Vec:
    """Residual of a binary product on graded X: d(mu) + associator.

    Supports the data model for graded inputs; only this verification is
    offered there (no convolution algebra is built).
    """
    out = {}
    dX = {b: vclean({k: fraction(c) for k, c in v.items()})
          for b, v in X.differential.items()}

    def d_of(v: Vec) -> Vec:
        acc: Vec = {}
        for b, c in v.items():
            acc = vadd(acc, vscale(c, dX.get(b, {})))
        return acc

    for a, b in itertools.product(X.basis, repeat=2):
        # d(mu)(a,b) = d(mu(a,b)) - mu(da, b) - (-1)^{|a|} mu(a, db)
        term = d_of(X.mu(a, b))
        term = vadd(term, vscale(-1, X.mu_vec(dX.get(a, {}), {b: Fraction(1)})))
        term = vadd(term, vscale(-sign_pow(X.degrees[a]),
                                 X.mu_vec({a: Fraction(1)}, dX.get(b, {}))))
        for k, c in vclean(term).items():
            out[cochain_id((a, b), k)] = out.get(cochain_id((a, b), k), 0) + c
    for (a, b, c), v in associativity_defect(X).items():
        for k, x in v.items():
            key = cochain_id((a, b, c), k)
            s = out.get(key, 0) + x
            if s:
                out[key] = s
            elif key in out:
                del out[key]
    return vclean(out)


def conjugation_first_order(X: FiniteAlgebraData, xi: dict) -> dict:
    """t-coefficient of (1 + xi t) mu((1 - xi t) a, (1 - xi t) b)."""
    out = {}
    for a, b in itertools.product(X.basis, repeat=2):
        term = {}
        term = vadd(term, _apply_endo(X, xi, X.mu(a, b)))
        term = vadd(term, vscale(-1, X.mu_vec(_endo_of_basis(X, xi, a),
                                              {b: Fraction(1)})))
        term = vadd(term, vscale(-1, X.mu_vec({a: Fraction(1)},
                                              _endo_of_basis(X, xi, b))))
        for k, c in vclean(term).items():
            out[(a, b, k)] = c
    return out


def _endo_of_basis(X, xi, a) -> Vec:
    return dict(xi.get(a, {}))


def _apply_endo(X, xi, v: Vec) -> Vec:
    out: Vec = {}
    for b, c in v.items():
        out = vadd(out, vscale(c, xi.get(b, {})))
    return out


def gauge_conjugation_check(X: FiniteAlgebraData, xi: dict) -> bool:
    """Bracket route equals conjugation route for the order-1 action.

    The gauge transform of mu by xi t over the dual numbers is
    mu - [mu, xi] t; the conjugation route expands the change of basis
    1 + xi t.  Both are raw cochain computations.
    """
    mu = {}
    for pair, v in X.product.items():
        for k, c in v.items():
            mu[(pair, k)] = c
    xi_cochain = {((a,), k): c for a, v in xi.items() for k, c in v.items()}
    br = gerstenhaber_bracket(X, mu, xi_cochain, 2, 1)
    minus_dmu_xi = {}
    for (inp, out), c in br.items():
        minus_dmu_xi[(inp[0], inp[1], out)] = -c
    conj = conjugation_first_order(X, xi)
    return {k: v for k, v in minus_dmu_xi.items() if v} == \
           {k: v for k, v in conj.items() if v}


@dataclass
class PipelineReport:
    verdict: MCVerdict
    tangent: object
    lifts: object
    piece_dimensions: dict


def deformation_pipeline(X: FiniteAlgebraData, arity_bound: int,
                         max_order: int) -> PipelineReport:
    """Twist by mu, compare the three tangent numbers, lift to max_order."""
    verdict = structure_as_mc(X, arity_bound)
    if not verdict.is_mc:
        raise StructuralError("mu is not associative; nothing to deform")
    conv = build_convolution(X, arity_bound)
    mu = conv.mu_vector()
    tr = tangent_report(conv.algebra, mu)
    lifts = lift_deformation(conv.algebra, mu, max_order + 1)
    dims = {s: conv.piece_dimension(s) for s in range(1, arity_bound + 1)}
    return PipelineReport(verdict, tr, lifts, dims)
