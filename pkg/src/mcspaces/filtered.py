"""Filtrations, nilpotent truncations and extension of scalars.

The filtration starts at F_1 = everything (weights are >= 1).  Truncating
at order R keeps the basis of weight < R and kills every bracket
component of weight >= R; the result is nilpotent because bracketing
strictly increases weight.  Completion is never materialized: all
computations happen in a truncation chosen by the caller.

Coefficient algebras cover both local artinian algebras (dual numbers,
K[t]/(t^n), fat points) and finite-dimensional graded slices of cdgas
such as polynomial de Rham forms.  Extension of scalars imposes the
standard Koszul sign: moving a coefficient a_i past a later algebra
argument x_j contributes (-1)^{|a_i||x_j|}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .exactlin import (
    GradedSpace,
    sign_pow,
    StructuralError,
    Vec,
    echelon_vectors,
    fraction,
    is_zero,
    vadd,
    vclean,
    vscale,
)
from .linf import (
    BracketTable,
    LInftyAlgebra,
    Violation,
    StructureReport,
    check_table_grading,
    eval_bracket,
    sort_tuple_with_sign,
)


def check_filtration(g: LInftyAlgebra) -> StructureReport:
    """Weight rule on every table entry; the differential must not drop weight."""
    violations = [v for v in check_table_grading(g) if v.kind == "weight"]
    return StructureReport(not violations, violations)


def truncate(g: LInftyAlgebra, order: int) -> LInftyAlgebra:
    """Quotient by F_R: keep weights < R, project brackets, record the order."""
    if order < 1:
        raise StructuralError("truncation order must be >= 1")
    keep = [b for b in g.space.basis if b.weight < order]
    space = GradedSpace(keep)
    table = BracketTable(g.kmax)
    for k, entries in g.table.entries.items():
        for key, val in entries.items():
            if any(i not in space for i in key):
                continue
            projected = vclean({i: c for i, c in val.items() if i in space})
            if projected:
                table.set_entry(k, key, projected)
    name = g.name and "%s/F_%d" % (g.name, order)
    return LInftyAlgebra(space, table, name=name, truncation_order=order)


def truncation_projection(g: LInftyAlgebra, order: int):
    """The canonical surjection g -> g/F_R as (truncated algebra, column map)."""
    gr = truncate(g, order)
    cols = {b: {b: Fraction(1)} for b in gr.space.ids}
    return gr, cols


# ---------------------------------------------------------------------------
# coefficient algebras
# ---------------------------------------------------------------------------

class CoefficientAlgebra:
    """Unital graded-commutative algebra with a chosen maximal ideal basis.

    `products` gives the multiplication on basis pairs; missing pairs are
    filled in by graded commutativity, and everything is validated
    (unit law, commutativity, associativity) at construction.  An
    optional differential makes it a cdga.
    """

    def __init__(self, name, basis, unit, products, maximal=None, differential=None,
                 validate=True):
        self.name = name
        self.ids = [str(b) for b, _ in basis]
        self.degree = {str(b): int(d) for b, d in basis}
        if len(set(self.ids)) != len(self.ids):
            raise StructuralError("duplicate coefficient ids")
        self.index = {b: i for i, b in enumerate(self.ids)}
        if unit not in self.index:
            raise StructuralError("unit %r not in basis" % (unit,))
        self.unit = unit
        self.maximal = list(maximal) if maximal is not None else None
        self.table = {}
        for (a, b), out in products.items():
            self._set_product(a, b, out)
        for a in self.ids:
            self._set_product(self.unit, a, {a: Fraction(1)})
        self._fill_commutative()
        self.differential = None
        if differential:
            self.differential = {
                a: vclean({k: fraction(c) for k, c in v.items()})
                for a, v in differential.items()
            }
        if validate:
            self._validate()

    def _set_product(self, a, b, out):
        out = vclean({k: fraction(c) for k, c in out.items()})
        for k in out:
            if k not in self.index:
                raise StructuralError("product lands outside basis: %r" % (k,))
        prev = self.table.get((a, b))
        if prev is not None and prev != out:
            raise StructuralError("conflicting products for (%r, %r)" % (a, b))
        self.table[(a, b)] = out

    def _fill_commutative(self):
        for a, b in itertools.product(self.ids, repeat=2):
            if (a, b) in self.table:
                continue
            if (b, a) in self.table:
                sign = sign_pow(self.degree[a] * self.degree[b])
                self.table[(a, b)] = vscale(sign, self.table[(b, a)])
            else:
                self.table[(a, b)] = {}

    def _validate(self):
        for a, b in itertools.product(self.ids, repeat=2):
            sign = sign_pow(self.degree[a] * self.degree[b])
            if self.table[(a, b)] != vscale(sign, self.table[(b, a)]):
                raise StructuralError("not graded-commutative at (%r, %r)" % (a, b))
            got = self.table[(a, b)]
            want = self.degree[a] + self.degree[b]
            for k in got:
                if self.degree[k] != want:
                    raise StructuralError("product (%r,%r) not homogeneous" % (a, b))
        for a, b, c in itertools.product(self.ids, repeat=3):
            left = self.multiply(self.table[(a, b)], {c: Fraction(1)})
            right = self.multiply({a: Fraction(1)}, self.table[(b, c)])
            if left != right:
                raise StructuralError(
                    "multiplication not associative at (%r,%r,%r)" % (a, b, c))
        if self.maximal is not None:
            if self.unit in self.maximal:
                raise StructuralError("unit cannot lie in the maximal ideal")
            if set(self.maximal) | {self.unit} != set(self.ids):
                raise StructuralError("basis must split as unit plus maximal ideal")
        if self.differential is not None:
            for a, v in self.differential.items():
                for k in v:
                    if self.degree[k] != self.degree[a] + 1:
                        raise StructuralError("differential of %r not degree +1" % (a,))
            for a in self.ids:
                dd = self.d(self.d({a: Fraction(1)}))
                if not is_zero(dd):
                    raise StructuralError("coefficient differential does not square to zero")

    @property
    def dim(self):
        return len(self.ids)

    def multiply(self, u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for a, x in u.items():
            for b, y in v.items():
                for k, c in self.table[(a, b)].items():
                    s = out.get(k, 0) + x * y * c
                    if s:
                        out[k] = s
                    elif k in out:
                        del out[k]
        return out

    def product_of_basis(self, ids) -> Vec:
        acc = {self.unit: Fraction(1)}
        for a in ids:
            acc = self.multiply(acc, {a: Fraction(1)})
            if not acc:
                break
        return acc

    def d(self, v: Vec) -> Vec:
        if self.differential is None:
            return {}
        out: Vec = {}
        for a, c in v.items():
            out = vadd(out, vscale(c, self.differential.get(a, {})))
        return out

    def ideal_ids(self):
        if self.maximal is None:
            raise StructuralError("algebra %r has no designated maximal ideal" % self.name)
        return list(self.maximal)


def nilpotency_index(A: CoefficientAlgebra) -> int:
    """Smallest n with m_A^n = 0, by iterated products of ideal spans."""
    ideal = [{a: Fraction(1)} for a in A.ideal_ids()]
    current = echelon_vectors(A.ids, ideal)
    n = 1
    while current:
        if n > A.dim + 1:
            raise StructuralError(
                "maximal ideal of %r is not nilpotent within the dimension bound"
                % A.name)
        nxt = [A.multiply(u, v) for u in current for v in ideal]
        current = echelon_vectors(A.ids, nxt)
        n += 1
    return n


def polynomial_truncation(n: int, var="t") -> CoefficientAlgebra:
    """K[t]/(t^n), concentrated in degree 0; the ideal is (t)."""
    if n < 1:
        raise StructuralError("need n >= 1")
    ids = ["1"] + ["%s" % var if k == 1 else "%s^%d" % (var, k) for k in range(1, n)]
    basis = [(b, 0) for b in ids]
    prod = {}
    for i in range(n):
        for j in range(n):
            a = ids[i]
            b = ids[j]
            if i + j < n:
                prod[(a, b)] = {ids[i + j]: Fraction(1)}
            else:
                prod[(a, b)] = {}
    return CoefficientAlgebra("K[%s]/(%s^%d)" % (var, var, n), basis, "1", prod,
                              maximal=ids[1:])


def dual_numbers(var="t") -> CoefficientAlgebra:
    return polynomial_truncation(2, var)


def fat_point_uv() -> CoefficientAlgebra:
    """K[u,v]/(u^2, v^2, uv): all pairwise ideal products vanish."""
    basis = [("1", 0), ("u", 0), ("v", 0)]
    prod = {("u", "u"): {}, ("u", "v"): {}, ("v", "v"): {}}
    return CoefficientAlgebra("K[u,v]/(u,v)^2", basis, "1", prod, maximal=["u", "v"])


# ---------------------------------------------------------------------------
# extension of scalars
# ---------------------------------------------------------------------------

def tensor_id(b, a, unit):
    return b if a == unit else "%s*%s" % (b, a)


@dataclass
class ExtendedAlgebra:
    algebra: LInftyAlgebra
    base: LInftyAlgebra
    coefficients: CoefficientAlgebra
    ideal_only: bool
    factors: dict = field(default_factory=dict)   # tensor id -> (base id, coeff id)

    def tensor(self, b, a):
        return tensor_id(b, a, self.coefficients.unit)

    def embed(self, vec: Vec, coeff=None) -> Vec:
        """Base vector times a coefficient basis element (default the unit)."""
        a = coeff if coeff is not None else self.coefficients.unit
        if self.ideal_only and a == self.coefficients.unit:
            raise StructuralError("unit coefficient unavailable in g (x) m_A")
        return {self.tensor(b, a): c for b, c in vec.items()}

    def coefficient_of(self, vec: Vec, coeff) -> Vec:
        """Extract the base-vector coefficient of a given algebra element."""
        out = {}
        for ident, c in vec.items():
            b, a = self.factors[ident]
            if a == coeff:
                out[b] = c
        return out

    def split(self, vec: Vec) -> dict:
        """Decompose into {coefficient id: base Vec}."""
        out = {}
        for ident, c in vec.items():
            b, a = self.factors[ident]
            out.setdefault(a, {})[b] = c
        return out


def extend_scalars(g: LInftyAlgebra, A: CoefficientAlgebra,
                   ideal_only: bool = False, table_support=None) -> ExtendedAlgebra:
    """Induced L-infinity structure on g (x) A, or on g (x) m_A.

    Brackets on pure tensors:
        l_k(x_1 (x) a_1, ..., x_k (x) a_k)
            = (-1)^{sum_{i<j} |a_i||x_j|} l_k(x_1,...,x_k) (x) a_1...a_k,
    and for a cdga the differential gains the term
        (-1)^{|x|} x (x) dA(a).
    The weight of x (x) a is the weight of x.

    When `table_support` is given, only bracket entries with every input
    in that id set are materialized (enough for residuals of elements
    supported there; large form slices stay tractable).
    """
    coeff_ids = A.ideal_ids() if ideal_only else list(A.ids)
    unit = A.unit
    basis = []
    factors = {}
    for b in g.space.basis:
        for a in coeff_ids:
            ident = tensor_id(b.ident, a, unit)
            basis.append((ident, b.degree + A.degree[a], b.weight))
            factors[ident] = (b.ident, a)
    space = GradedSpace(basis)
    if table_support is not None:
        support = set(table_support)
        basis_for_table = [b for b in basis if b[0] in support]
    else:
        basis_for_table = basis
    table = BracketTable(g.kmax)

    def tens(base_vec: Vec, coeff_vec: Vec) -> Vec:
        out = {}
        for b, c in base_vec.items():
            for a, x in coeff_vec.items():
                if ideal_only and a == unit:
                    raise StructuralError(
                        "bracket escapes the ideal part; extend with ideal_only=False")
                out[tensor_id(b, a, unit)] = c * x
        return out

    for k in range(1, g.kmax + 1):
        if not g.table.entries.get(k) and not (k == 1 and A.differential):
            continue
        for combo in itertools.combinations_with_replacement(basis_for_table, k):
            ids = tuple(x[0] for x in combo)
            canon, sign0 = sort_tuple_with_sign(space, ids)
            if canon != ids or sign0 == 0:
                continue
            pairs = [factors[i] for i in ids]
            xs = [p[0] for p in pairs]
            cs = [p[1] for p in pairs]
            sign = 1
            for i in range(k):
                for j in range(i + 1, k):
                    sign *= sign_pow(A.degree[cs[i]] * g.space.degree_of(xs[j]))
            base_val = eval_bracket(g, k, [g.space.basis_vector(x) for x in xs])
            value: Vec = {}
            if base_val:
                coeff_val = A.product_of_basis(cs)
                if coeff_val:
                    value = vscale(sign, tens(base_val, coeff_val))
            if k == 1 and A.differential is not None:
                b, a = pairs[0]
                da = A.d({a: Fraction(1)})
                if da:
                    extra = tens(g.space.basis_vector(b),
                                 vscale(sign_pow(g.space.degree_of(b)), da))
                    value = vadd(value, extra)
            if value:
                table.set_entry(k, ids, value)
    ext = LInftyAlgebra(space, table,
                        name="%s(x)%s" % (g.name or "g", A.name),
                        truncation_order=g.truncation_order)
    return ExtendedAlgebra(ext, g, A, ideal_only, factors)
