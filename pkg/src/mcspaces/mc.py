"""Maurer-Cartan functional, twisting and order-by-order deformation lifting.

The residual of a degree-1 element is the finite sum

    F(tau) = sum_{k>=1} (1/k!) [tau^k],

which terminates in a truncated algebra (kmax and the weight bound).
Because every degree-1 basis element is odd, [tau^k] expands over
multisets of the support of tau with the multinomial weights
1/(m_1! m_2! ...); no Koszul signs appear between degree-1 entries.

Twisting by a verified element phi replaces every bracket by

    l_k^phi(x_1,...,x_k) = sum_{i>=0} (1/i!) l_{i+k}(phi^i, x_1,...,x_k),

producing a new algebra on the same filtered space.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exactlin import (
    StructuralError,
    Vec,
    cohomology,
    format_vector,
    in_span,
    is_zero,
    reduce_against,
    image_basis_slice,
    kernel_basis_slice,
    solve_linear,
    vadd,
    vclean,
    vscale,
)
from .filtered import check_filtration, extend_scalars, polynomial_truncation
from .linf import (
    BracketTable,
    LInftyAlgebra,
    eval_bracket,
    sort_tuple_with_sign,
    verify_structure,
)


class NotMaurerCartanError(ValueError):
    def __init__(self, residual):
        self.residual = residual
        super().__init__("element fails the Maurer-Cartan equation")


def _degree_one_multisets(support, k):
    return itertools.combinations_with_replacement(support, k)


def _multiset_weight(ids):
    w = Fraction(1)
    for _, count in itertools.groupby(ids):
        w /= math.factorial(len(list(count)))
    return w


def mc_residual(g: LInftyAlgebra, tau: Vec) -> Vec:
    """Exact value of sum_k (1/k!) [tau^k]; tau must be homogeneous of degree 1."""
    g.space.check_member(tau)
    deg = g.space.degree_of_vector(tau)
    if deg not in (None, 1):
        raise StructuralError("Maurer-Cartan candidates have degree 1, got %s" % deg)
    support = sorted(tau, key=g.space.index_of)
    out: Vec = {}
    for k in range(1, g.kmax + 1):
        if not g.table.entries.get(k):
            continue
        for ids in _degree_one_multisets(support, k):
            coeff = _multiset_weight(ids)
            for i in ids:
                coeff *= tau[i]
            val = eval_bracket(g, k, [g.space.basis_vector(i) for i in ids])
            if val:
                out = vadd(out, vscale(coeff, val))
    return out


@dataclass
class MCElement:
    ambient: LInftyAlgebra
    value: Vec
    residual: Vec = field(default_factory=dict)

    def __post_init__(self):
        self.value = vclean(self.value)


def mc_element(g: LInftyAlgebra, value: Vec) -> MCElement:
    """Verify the Maurer-Cartan equation and certify the element."""
    res = mc_residual(g, value)
    if not is_zero(res):
        raise NotMaurerCartanError(res)
    return MCElement(g, value, res)


@dataclass
class TwistedAlgebra:
    base: LInftyAlgebra
    twist: MCElement
    algebra: LInftyAlgebra


def twist(g: LInftyAlgebra, phi) -> TwistedAlgebra:
    """Twisted algebra g^phi; refuses unverified elements, re-verifies output.

    The postcondition (the twisted structure satisfies Jacobi and the
    filtration rule, and d_phi squares to zero) is asserted here because
    it is cheap at this scale and any failure would falsify the
    implementation rather than the input.
    """
    if isinstance(phi, MCElement):
        if phi.ambient is not g:
            phi = mc_element(g, phi.value)
    else:
        phi = mc_element(g, phi)
    value = phi.value
    support = sorted(value, key=g.space.index_of)
    table = BracketTable(g.kmax)
    for k in range(1, g.kmax + 1):
        for key in itertools.combinations_with_replacement(g.space.ids, k):
            canon, sign = sort_tuple_with_sign(g.space, key)
            if canon != key or sign == 0:
                continue
            acc: Vec = {}
            for i in range(0, g.kmax - k + 1):
                if not g.table.entries.get(i + k):
                    continue
                for phis in _degree_one_multisets(support, i):
                    coeff = _multiset_weight(phis)
                    for p in phis:
                        coeff *= value[p]
                    args = [g.space.basis_vector(p) for p in phis]
                    args += [g.space.basis_vector(b) for b in key]
                    val = eval_bracket(g, i + k, args)
                    if val:
                        acc = vadd(acc, vscale(coeff, val))
            if acc:
                table.set_entry(k, key, acc)
    tw = LInftyAlgebra(g.space, table,
                       name=(g.name or "g") + "^phi",
                       truncation_order=g.truncation_order)
    rep = verify_structure(tw, min(g.kmax + 1, 4))
    if not rep.ok:
        raise AssertionError("twisted algebra fails verify_structure: %s"
                             % rep.violations[0].message)
    filt = check_filtration(tw)
    if not filt.ok:
        raise AssertionError("twisted algebra fails the filtration rule")
    d = tw.differential()
    for b in tw.space.ids:
        if not is_zero(d.apply(d.column(b))):
            raise AssertionError("twisted differential does not square to zero")
    return TwistedAlgebra(g, phi, tw)


def twisted_differential(g: LInftyAlgebra, phi) -> "LinearMap":
    return twist(g, phi).algebra.differential()


# ---------------------------------------------------------------------------
# the Maurer-Cartan polynomial system
# ---------------------------------------------------------------------------

class Polynomial:
    """Multivariate polynomial over Q: {exponent tuple -> Fraction}."""

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = dict(terms or {})

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    def add_term(self, expo, coeff):
        c = self.terms.get(expo, Fraction(0)) + coeff
        if c:
            self.terms[expo] = c
        else:
            self.terms.pop(expo, None)

    def evaluate(self, values):
        total = Fraction(0)
        for expo, c in self.terms.items():
            t = c
            for v, e in zip(values, expo):
                t *= v ** e
            total += t
        return total

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def render(self, names):
        if not self.terms:
            return "0"
        chunks = []
        for expo in sorted(self.terms, reverse=True):
            c = self.terms[expo]
            factors = []
            for name, e in zip(names, expo):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append("%s^%d" % (name, e))
            mono = "*".join(factors) if factors else "1"
            if abs(c) == 1 and factors:
                body = mono
            else:
                body = "%s*%s" % (abs(c), mono) if factors else "%s" % abs(c)
            if not chunks:
                chunks.append(body if c > 0 else "-" + body)
            else:
                chunks.append(("+ " if c > 0 else "- ") + body)
        return " ".join(chunks)


@dataclass
class PolynomialSystem:
    variables: list            # degree-1 basis ids, the coordinates
    equation_ids: list         # degree-2 basis ids, one equation per id
    equations: dict            # id -> Polynomial

    def evaluate(self, point: Vec) -> Vec:
        values = [point.get(v, Fraction(0)) for v in self.variables]
        out = {}
        for ident, poly in self.equations.items():
            val = poly.evaluate(values)
            if val:
                out[ident] = val
        return out

    def render(self):
        return {ident: poly.render(self.variables)
                for ident, poly in self.equations.items()}


def mc_polynomial_system(g: LInftyAlgebra) -> PolynomialSystem:
    """Polynomial equations cutting out MC(g) in coordinates on the degree-1 slice."""
    variables = g.space.slice_ids(1)
    eq_ids = g.space.slice_ids(2)
    var_index = {v: i for i, v in enumerate(variables)}
    equations = {ident: Polynomial.zero(len(variables)) for ident in eq_ids}
    for k in range(1, g.kmax + 1):
        if not g.table.entries.get(k):
            continue
        for ids in _degree_one_multisets(variables, k):
            weight = _multiset_weight(ids)
            val = eval_bracket(g, k, [g.space.basis_vector(i) for i in ids])
            if is_zero(val):
                continue
            expo = [0] * len(variables)
            for i in ids:
                expo[var_index[i]] += 1
            expo = tuple(expo)
            for ident, c in val.items():
                equations[ident].add_term(expo, weight * c)
    return PolynomialSystem(variables, eq_ids, equations)


# ---------------------------------------------------------------------------
# order-by-order lifting over K[t]/(t^n)
# ---------------------------------------------------------------------------

def _poly_residual_coefficient(tw: LInftyAlgebra, coeffs: dict, order: int) -> Vec:
    """t^order coefficient of F(sum_j psi_j t^j) in g^phi (x) (t)/(t^n).

    `coeffs` maps j >= 1 to the degree-1 vector psi_j.
    """
    out: Vec = {}
    for k in range(1, tw.kmax + 1):
        if not tw.table.entries.get(k):
            continue
        for split in _compositions(order, k):
            if any(j not in coeffs for j in split):
                continue
            weight = _multiset_weight(split)
            args = [coeffs[j] for j in split]
            val = eval_bracket(tw, k, args)
            if val:
                out = vadd(out, vscale(weight, val))
    return out


def _compositions(total, k):
    """Non-decreasing k-tuples of integers >= 1 summing to total."""
    def rec(remaining, parts, minimum):
        if parts == 1:
            if remaining >= minimum:
                yield (remaining,)
            return
        for first in range(minimum, remaining // parts + 1):
            for rest in rec(remaining - first, parts - 1, first):
                yield (first,) + rest
    yield from rec(total, k, 1)


@dataclass
class LiftStep:
    order: int
    obstruction_cocycle: Vec
    obstruction_class: Vec       # reduced against coboundaries; zero iff liftable
    lifted: bool
    correction: Vec | None


@dataclass
class LiftBranch:
    seed: Vec                    # order-1 representative in H^1(g^phi)
    coefficients: dict           # j -> psi_j reached so far
    steps: list = field(default_factory=list)

    def reached_order(self):
        return max(self.coefficients, default=0)


@dataclass
class DeformationLiftReport:
    order: int
    twisted: LInftyAlgebra
    z1: list
    h1_representatives: list
    h2: object
    branches: list

    @property
    def tangent_dimension(self):
        return len(self.h1_representatives)


def lift_deformation(g: LInftyAlgebra, phi, order: int) -> DeformationLiftReport:
    """Deform phi over K[t]/(t^order): tangent space, then order-by-order lifts.

    Order-1 solutions are Z^1(g^phi) (x) t; modulo the infinitesimal gauge
    action through d_phi they form H^1(g^phi).  Each H^1 representative is
    pushed upward: at order k the t^k residual of the current polynomial
    is a degree-2 cocycle whose class in H^2(g^phi) is the obstruction;
    the branch continues with a deterministic particular solution exactly
    when that class vanishes.
    """
    if order < 2:
        raise StructuralError("order must be >= 2 (dual numbers)")
    tw = twist(g, phi).algebra
    d = tw.differential()
    z1 = kernel_basis_slice(d, 1)
    h1 = cohomology(d, d, 1)
    h2 = cohomology(d, d, 2)
    slice2 = tw.space.slice_ids(2)
    b2 = image_basis_slice(d, 1)
    branches = []
    for seed in h1.representatives:
        branch = LiftBranch(seed, {1: dict(seed)})
        for k in range(2, order):
            obstruction = _poly_residual_coefficient(tw, branch.coefficients, k)
            reduced = reduce_against(slice2, b2, obstruction)
            if is_zero(reduced):
                sol = solve_linear(d, vscale(-1, obstruction))
                correction = {} if sol.solution is None else {
                    b: c for b, c in sol.solution.items()
                    if tw.space.degree_of(b) == 1
                }
                if sol.solution is None:
                    raise AssertionError("vanishing obstruction class must be solvable")
                branch.coefficients[k] = correction
                branch.steps.append(LiftStep(k, obstruction, {}, True, correction))
            else:
                branch.steps.append(LiftStep(k, obstruction, reduced, False, None))
                break
        branches.append(branch)
    return DeformationLiftReport(order, tw, z1, h1.representatives, h2, branches)
