"""Core L-infinity structures: bracket tables, Koszul signs, generalized Jacobi.

Conventions (fixed once, used everywhere):

* cohomological grading, the differential l_1 raises degree by 1;
* l_k has degree 2 - k, so the Maurer-Cartan sum is homogeneous of
  degree 2 on degree-1 inputs;
* graded antisymmetry:  [..., x, y, ...] = -(-1)^{|x||y|} [..., y, x, ...],
  so swapping two odd arguments is free and a repeated even argument
  forces the bracket to vanish;
* weights: bracketing with k >= 2 inputs strictly increases the
  filtration weight (output weight >= max input weight + 1) while l_1
  never decreases it.

Brackets are stored only on canonically ordered tuples (non-decreasing
basis position); every other ordering is derived through the Koszul sign.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .exactlin import (
    GradedSpace,
    sign_pow,
    LinearMap,
    StructuralError,
    Vec,
    fraction,
    is_zero,
    vadd,
    vclean,
    vscale,
)


class BracketUndefinedError(ValueError):
    pass


def koszul_sign(perm, degrees) -> int:
    """Sign relating (x_{perm[0]}, ..., x_{perm[k-1]}) to (x_0, ..., x_{k-1}).

    Composed from adjacent transpositions, each contributing
    -(-1)^{|a||b|} for the two entries it swaps.  `perm` is a tuple of
    0-based positions, `degrees[i]` the degree of x_i.
    """
    lst = list(perm)
    if sorted(lst) != list(range(len(degrees))):
        raise StructuralError("not a permutation: %r" % (perm,))
    sign = 1
    # bubble sort back to the identity, tracking each adjacent swap
    for i in range(len(lst)):
        for j in range(len(lst) - 1 - i):
            if lst[j] > lst[j + 1]:
                sign *= -sign_pow(degrees[lst[j]] * degrees[lst[j + 1]])
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
    return sign


def sort_tuple_with_sign(space: GradedSpace, ids):
    """Canonical (non-decreasing) reordering of a basis tuple and its sign.

    Returns (tuple, sign); sign 0 means the bracket vanishes identically
    because an even-degree entry repeats.
    """
    keyed = [(space.index_of(i), space.degree_of(i), i) for i in ids]
    sign = 1
    lst = list(keyed)
    for i in range(len(lst)):
        for j in range(len(lst) - 1 - i):
            if lst[j][0] > lst[j + 1][0]:
                sign *= -sign_pow(lst[j][1] * lst[j + 1][1])
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
    for a, b in zip(lst, lst[1:]):
        if a[0] == b[0] and a[1] % 2 == 0:
            return tuple(x[2] for x in lst), 0
    return tuple(x[2] for x in lst), sign


class BracketTable:
    """Finite family of brackets l_k, k <= kmax, on canonical basis tuples."""

    def __init__(self, kmax: int, entries=None):
        if kmax < 1:
            raise StructuralError("kmax must be >= 1")
        self.kmax = int(kmax)
        # entries[k][tuple of ids] = Vec
        self.entries = {k: {} for k in range(1, self.kmax + 1)}
        for k, table in (entries or {}).items():
            for key, val in table.items():
                self.set_entry(int(k), tuple(key), val)

    def set_entry(self, k: int, key, value: Vec):
        if not (1 <= k <= self.kmax):
            raise BracketUndefinedError("arity %d exceeds kmax=%d" % (k, self.kmax))
        if len(key) != k:
            raise StructuralError("tuple %r has wrong arity for l_%d" % (key, k))
        value = vclean({i: fraction(c) for i, c in value.items()})
        if value:
            self.entries[k][tuple(key)] = value
        else:
            self.entries[k].pop(tuple(key), None)

    def entry(self, k: int, key) -> Vec:
        return dict(self.entries.get(k, {}).get(tuple(key), {}))

    def arities(self):
        return [k for k in range(1, self.kmax + 1) if self.entries.get(k)]


class LInftyAlgebra:
    """A graded space together with a bracket table and optional truncation order."""

    def __init__(self, space: GradedSpace, table: BracketTable, name="",
                 truncation_order=None):
        self.space = space
        self.table = table
        self.name = name
        self.truncation_order = truncation_order
        for k, entries in table.entries.items():
            for key in entries:
                canon, sign = sort_tuple_with_sign(space, key)
                if canon != key or sign == 0:
                    raise StructuralError(
                        "table entry %r is not stored in canonical order" % (key,)
                    )

    @property
    def kmax(self):
        return self.table.kmax

    def is_dg_lie(self) -> bool:
        return all(not self.table.entries.get(k) for k in range(3, self.kmax + 1))

    def effective_order(self) -> int:
        """Truncation order R: every weight >= R is zero in this algebra."""
        if self.truncation_order is not None:
            return self.truncation_order
        return self.space.max_weight() + 1

    def differential(self) -> LinearMap:
        cols = {}
        for (b,), v in self.table.entries.get(1, {}).items():
            cols[b] = v
        return LinearMap(self.space, self.space, 1, cols)


def make_algebra(basis, kmax, brackets, name="", truncation_order=None):
    """Convenience constructor from raw basis triples and bracket entries.

    `brackets` is an iterable of (inputs tuple, output dict) pairs; arity
    is the tuple length.  Inputs may be in any order; they are
    canonicalized with the Koszul sign here.
    """
    space = GradedSpace(basis)
    table = BracketTable(kmax)
    for key, out in brackets:
        k = len(key)
        canon, sign = sort_tuple_with_sign(space, tuple(key))
        if sign == 0:
            if vclean({i: fraction(c) for i, c in out.items()}):
                raise StructuralError(
                    "bracket on %r must vanish (repeated even entry)" % (key,)
                )
            continue
        val = vscale(sign, space.vector(out))
        prev = table.entry(k, canon)
        table.set_entry(k, canon, vadd(prev, val))
    return LInftyAlgebra(space, table, name=name, truncation_order=truncation_order)


def eval_bracket(g: LInftyAlgebra, k: int, args) -> Vec:
    """Multilinear, antisymmetric evaluation of l_k on vectors.

    Absent table entries are zero; arities above kmax are refused.
    """
    if not (1 <= k <= g.kmax):
        raise BracketUndefinedError("bracket l_%d undefined (kmax=%d)" % (k, g.kmax))
    if len(args) != k:
        raise StructuralError("l_%d applied to %d arguments" % (k, len(args)))
    for a in args:
        g.space.check_member(a)
    out: Vec = {}
    table = g.table.entries.get(k, {})
    if not table:
        return out
    supports = [sorted(a.items()) for a in args]
    for combo in itertools.product(*supports):
        ids = tuple(c[0] for c in combo)
        coeff = Fraction(1)
        for _, c in combo:
            coeff *= c
        canon, sign = sort_tuple_with_sign(g.space, ids)
        if sign == 0:
            continue
        val = table.get(canon)
        if not val:
            continue
        f = coeff * sign
        for ident, c in val.items():
            s = out.get(ident, 0) + f * c
            if s:
                out[ident] = s
            elif ident in out:
                del out[ident]
    return out


def eval_bracket_basis(g: LInftyAlgebra, k: int, ids) -> Vec:
    """l_k on basis elements given by id, in the order given."""
    return eval_bracket(g, k, [g.space.basis_vector(i) for i in ids])


def shuffles(i: int, k: int):
    """(i, k-i)-shuffles as pairs (S, complement) of 0-based position tuples."""
    universe = range(k)
    for S in itertools.combinations(universe, i):
        Sc = tuple(j for j in universe if j not in S)
        yield S, Sc


def jacobi_residual(g: LInftyAlgebra, k: int, ids) -> Vec:
    """Exact value of the arity-k generalized Jacobi sum on a basis tuple.

    Term for the shuffle sigma and inner arity i:
        (-1)^{eps(i)} l_{k-i+1}( l_i(x_{sigma(1..i)}), x_{sigma(i+1..k)} )
    with eps(i) = i + sum over inverted pairs of (|x_a||x_b| + 1), the
    inverted pairs being the entries the shuffle transposes.  That sum is
    exactly (-1)^i times the antisymmetric Koszul sign of the shuffle;
    the degree-(2-k) convention calibrates it against the classical
    graded Leibniz and Jacobi identities (see tests).
    """
    degrees = [g.space.degree_of(i) for i in ids]
    total: Vec = {}
    for i in range(1, k + 1):
        j = k - i + 1
        if i > g.kmax or j > g.kmax:
            continue
        if not g.table.entries.get(i) or not g.table.entries.get(j):
            continue
        for S, Sc in shuffles(i, k):
            perm = S + Sc
            sign = sign_pow(i) * koszul_sign(perm, degrees)
            inner = eval_bracket_basis(g, i, [ids[p] for p in S])
            if is_zero(inner):
                continue
            outer_args = [inner] + [g.space.basis_vector(ids[p]) for p in Sc]
            term = eval_bracket(g, j, outer_args)
            if term:
                total = vadd(total, vscale(sign, term))
    return total


@dataclass
class Violation:
    kind: str           # 'degree' | 'weight' | 'jacobi'
    arity: int
    where: tuple
    witness: Vec
    message: str


@dataclass
class StructureReport:
    ok: bool
    violations: list = field(default_factory=list)
    checked_arity: int = 0

    def __bool__(self):
        return self.ok


def check_table_grading(g: LInftyAlgebra):
    """Degree and weight bookkeeping of every table entry."""
    violations = []
    sp = g.space
    for k, entries in g.table.entries.items():
        for key, val in entries.items():
            want = sum(sp.degree_of(i) for i in key) + 2 - k
            for ident in val:
                if sp.degree_of(ident) != want:
                    violations.append(Violation(
                        "degree", k, key, dict(val),
                        "l_%d%r has a component %r of degree %d, expected %d"
                        % (k, key, ident, sp.degree_of(ident), want)))
                    break
            maxw = max(sp.weight_of(i) for i in key)
            need = maxw + 1 if k >= 2 else sp.weight_of(key[0])
            minw = sp.min_weight_of_vector(val)
            if minw is not None and minw < need:
                violations.append(Violation(
                    "weight", k, key, dict(val),
                    "l_%d%r lands in weight %d, filtration requires >= %d"
                    % (k, key, minw, need)))
    return violations


def verify_structure(g: LInftyAlgebra, arity_bound: int) -> StructureReport:
    """Degree/weight bookkeeping plus vanishing of every Jacobi residual.

    Violations are report content, not exceptions; each carries a witness.
    """
    violations = list(check_table_grading(g))
    sp = g.space
    maxw = sp.max_weight()
    for k in range(1, arity_bound + 1):
        for ids in itertools.combinations_with_replacement(sp.ids, k):
            if k >= 2 and max(sp.weight_of(i) for i in ids) + 1 > maxw:
                continue  # every residual term has weight beyond the space
            res = jacobi_residual(g, k, ids)
            if not is_zero(res):
                violations.append(Violation(
                    "jacobi", k, ids, res,
                    "generalized Jacobi fails at arity %d on %r" % (k, ids)))
    return StructureReport(not violations, violations, arity_bound)
