"""Exact rational linear algebra over graded, weight-filtered bases.

Every scalar is a ``fractions.Fraction``; there is no floating point
anywhere in this package.  Vectors are sparse dicts mapping basis
identifiers to nonzero Fractions, so equality of vectors is literal dict
equality and all verdicts downstream are exact.

Pivoting is deterministic (first nonzero entry in basis order), which
makes kernel bases, cohomology representatives and quotient projections
reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Vec = dict  # basis identifier -> nonzero Fraction


class StructuralError(ValueError):
    """Raised when inputs do not fit together (unknown ids, wrong spaces)."""


class NotAComplexError(ValueError):
    """d_out composed with d_in is nonzero; carries a witness basis id."""

    def __init__(self, witness, value):
        self.witness = witness
        self.value = value
        super().__init__(
            "composite differential is nonzero on %r: %s" % (witness, value)
        )


def fraction(x) -> Fraction:
    """Coerce ints, strings like '3' or '-1/2', and Fractions. Floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise StructuralError("exact arithmetic only: cannot accept %r" % (x,))


def sign_pow(exponent: int) -> int:
    """(-1)^exponent as an int, safe for negative exponents."""
    return -1 if exponent % 2 else 1


# ---------------------------------------------------------------------------
# sparse vector helpers
# ---------------------------------------------------------------------------

def vclean(v: Vec) -> Vec:
    return {k: c for k, c in v.items() if c != 0}


def vadd(u: Vec, v: Vec) -> Vec:
    out = dict(u)
    for k, c in v.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        elif k in out:
            del out[k]
    return out


def vsub(u: Vec, v: Vec) -> Vec:
    return vadd(u, vscale(-1, v))


def vscale(c, v: Vec) -> Vec:
    c = fraction(c)
    if c == 0:
        return {}
    return {k: c * x for k, x in v.items()}


def vneg(v: Vec) -> Vec:
    return {k: -x for k, x in v.items()}


def is_zero(v: Vec) -> bool:
    return not v


def veq(u: Vec, v: Vec) -> bool:
    return vclean(u) == vclean(v)


@dataclass(frozen=True)
class BasisVector:
    ident: str
    degree: int
    weight: int


class GradedSpace:
    """Finite ordered basis, each element carrying a degree and a weight >= 1."""

    def __init__(self, basis):
        elems = []
        for b in basis:
            if isinstance(b, BasisVector):
                elems.append(b)
            else:
                ident, degree, weight = b
                elems.append(BasisVector(str(ident), int(degree), int(weight)))
        self.basis = elems
        self.ids = [b.ident for b in elems]
        if len(set(self.ids)) != len(self.ids):
            raise StructuralError("duplicate basis identifiers")
        for b in elems:
            if b.weight < 1:
                raise StructuralError(
                    "weight of %r is %d; weights start at 1" % (b.ident, b.weight)
                )
        self._index = {b.ident: i for i, b in enumerate(elems)}
        self._degree = {b.ident: b.degree for b in elems}
        self._weight = {b.ident: b.weight for b in elems}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __contains__(self, ident) -> bool:
        return ident in self._index

    def index_of(self, ident) -> int:
        return self._index[ident]

    def degree_of(self, ident) -> int:
        return self._degree[ident]

    def weight_of(self, ident) -> int:
        return self._weight[ident]

    def degrees(self):
        return sorted({b.degree for b in self.basis})

    def max_weight(self) -> int:
        return max((b.weight for b in self.basis), default=0)

    def slice_ids(self, degree: int):
        return [b.ident for b in self.basis if b.degree == degree]

    def basis_vector(self, ident) -> Vec:
        if ident not in self._index:
            raise StructuralError("unknown basis id %r" % (ident,))
        return {ident: Fraction(1)}

    def vector(self, data) -> Vec:
        """Build a member vector from a dict or (id, coeff) pairs."""
        items = data.items() if isinstance(data, dict) else data
        out = {}
        for ident, c in items:
            if ident not in self._index:
                raise StructuralError("unknown basis id %r" % (ident,))
            c = fraction(c)
            if c:
                out[ident] = out.get(ident, Fraction(0)) + c
        return vclean(out)

    def check_member(self, v: Vec):
        for ident in v:
            if ident not in self._index:
                raise StructuralError("vector mentions unknown id %r" % (ident,))

    def degree_of_vector(self, v: Vec):
        """Common degree of a homogeneous vector, None for zero; raises if mixed."""
        degs = {self._degree[k] for k in v}
        if not degs:
            return None
        if len(degs) > 1:
            raise StructuralError("vector is not degree homogeneous: %r" % sorted(degs))
        return degs.pop()

    def min_weight_of_vector(self, v: Vec):
        return min((self._weight[k] for k in v), default=None)

    def sort_key(self, v: Vec):
        return sorted((self._index[k], k) for k in v)

    def same_basis(self, other) -> bool:
        return self.basis == other.basis


def format_vector(space: GradedSpace, v: Vec) -> str:
    """Readable coordinate form, e.g. '1/2·y - 3·x', ordered by the basis."""
    if not v:
        return "0"
    parts = []
    for ident in space.ids:
        if ident not in v:
            continue
        c = v[ident]
        mag = ident if abs(c) == 1 else "%s·%s" % (abs(c), ident)
        if not parts:
            parts.append(mag if c > 0 else "-" + mag)
        else:
            parts.append(("+ " if c > 0 else "- ") + mag)
    return " ".join(parts)


class LinearMap:
    """Column-wise linear map between graded spaces, with a degree shift."""

    def __init__(self, source: GradedSpace, target: GradedSpace, degree: int,
                 columns=None):
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.columns = {}
        for ident, col in (columns or {}).items():
            if ident not in source._index:
                raise StructuralError("column for unknown source id %r" % (ident,))
            col = vclean({k: fraction(c) for k, c in col.items()})
            target.check_member(col)
            if col:
                self.columns[ident] = col

    @classmethod
    def identity(cls, space: GradedSpace):
        return cls(space, space, 0, {b: {b: Fraction(1)} for b in space.ids})

    @classmethod
    def zero(cls, source, target, degree=0):
        return cls(source, target, degree, {})

    def column(self, ident) -> Vec:
        return dict(self.columns.get(ident, {}))

    def apply(self, v: Vec) -> Vec:
        self.source.check_member(v)
        out = {}
        for ident, c in v.items():
            for k, x in self.columns.get(ident, {}).items():
                s = out.get(k, 0) + c * x
                if s:
                    out[k] = s
                elif k in out:
                    del out[k]
        return out

    def compose(self, inner: "LinearMap") -> "LinearMap":
        """self o inner."""
        if inner.target is not self.source and not inner.target.same_basis(self.source):
            raise StructuralError("composition mismatch")
        cols = {b: self.apply(inner.column(b)) for b in inner.columns}
        return LinearMap(inner.source, self.target, self.degree + inner.degree, cols)

    def slice_matrix(self, degree: int):
        """Rows over the target slice at degree+shift, columns over the source slice."""
        src = self.source.slice_ids(degree)
        tgt = self.target.slice_ids(degree + self.degree)
        tgt_index = {k: i for i, k in enumerate(tgt)}
        rows = [[Fraction(0)] * len(src) for _ in tgt]
        for j, s in enumerate(src):
            for k, c in self.columns.get(s, {}).items():
                if k in tgt_index:
                    rows[tgt_index[k]][j] = c
        return src, tgt, rows

    def full_matrix(self):
        src = list(self.source.ids)
        tgt = list(self.target.ids)
        tgt_index = {k: i for i, k in enumerate(tgt)}
        rows = [[Fraction(0)] * len(src) for _ in tgt]
        for j, s in enumerate(src):
            for k, c in self.columns.get(s, {}).items():
                rows[tgt_index[k]][j] = c
        return src, tgt, rows


# ---------------------------------------------------------------------------
# Gaussian elimination
# ---------------------------------------------------------------------------

def rref(rows):
    """Reduced row echelon form with first-nonzero pivoting, fully exact.

    Returns (new_rows, pivot_columns).  Input rows are not modified.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank_of_rows(rows) -> int:
    return len(rref(rows)[1])


@dataclass
class SolveResult:
    solution: Vec | None
    kernel: list


def solve_linear(m: LinearMap, target: Vec) -> SolveResult:
    """One exact preimage plus a kernel basis, or solution=None if unsolvable."""
    m.target.check_member(target)
    src, tgt, rows = m.full_matrix()
    tgt_index = {k: i for i, k in enumerate(tgt)}
    b = [Fraction(0)] * len(tgt)
    for k, c in target.items():
        b[tgt_index[k]] = c
    aug = [row + [bv] for row, bv in zip(rows, b)]
    red, pivots = rref(aug)
    ncols = len(src)
    if ncols in pivots:
        return SolveResult(None, _kernel_from_rref(red, pivots, src, ncols))
    sol = {}
    for r, pc in enumerate(pivots):
        val = red[r][ncols]
        if val:
            sol[src[pc]] = val
    kernel = _kernel_from_rref(red, pivots, src, ncols)
    return SolveResult(sol, kernel)


def _kernel_from_rref(red, pivots, src, ncols):
    pivset = [p for p in pivots if p < ncols]
    free = [c for c in range(ncols) if c not in pivset]
    kernel = []
    for fc in free:
        vec = {src[fc]: Fraction(1)}
        for r, pc in enumerate(pivset):
            c = red[r][fc]
            if c:
                vec[src[pc]] = -c
        kernel.append(vclean(vec))
    return kernel


def kernel_basis(m: LinearMap):
    return solve_linear(m, {}).kernel


def kernel_basis_slice(m: LinearMap, degree: int):
    src, _, rows = m.slice_matrix(degree)
    if not src:
        return []
    if not rows:
        return [{s: Fraction(1)} for s in src]
    red, pivots = rref(rows)
    return _kernel_from_rref(red, pivots, src, len(src))


def image_basis_slice(m: LinearMap, degree: int):
    """Deterministic echelon basis of the image of the degree slice."""
    src = m.source.slice_ids(degree)
    tgt = m.target.slice_ids(degree + m.degree)
    vecs = [m.columns.get(s, {}) for s in src]
    return echelon_vectors(tgt, vecs)


def echelon_vectors(coord_ids, vecs):
    """RREF a family of vectors over the given coordinate order; drop zeros."""
    index = {k: i for i, k in enumerate(coord_ids)}
    rows = []
    for v in vecs:
        row = [Fraction(0)] * len(coord_ids)
        for k, c in v.items():
            if k in index:
                row[index[k]] = c
        rows.append(row)
    if not rows:
        return []
    red, pivots = rref(rows)
    out = []
    for r in range(len(pivots)):
        v = {coord_ids[j]: red[r][j] for j in range(len(coord_ids)) if red[r][j]}
        out.append(v)
    return out


def reduce_against(coord_ids, echelon, v: Vec) -> Vec:
    """Reduce v modulo an echelon family (rows with leading 1s)."""
    index = {k: i for i, k in enumerate(coord_ids)}
    out = dict(v)
    for row in echelon:
        lead = min(row, key=lambda k: index[k])
        c = out.get(lead, 0)
        if c:
            out = vsub(out, vscale(c, row))
    return out


def in_span(coord_ids, echelon, v: Vec) -> bool:
    return is_zero(reduce_against(coord_ids, echelon, v))


@dataclass
class CohomologyResult:
    degree: int
    cocycles: list
    coboundaries: list
    representatives: list
    dimension: int


def cohomology(d_in: LinearMap, d_out: LinearMap, degree: int) -> CohomologyResult:
    """Kernel of d_out modulo image of d_in in the given degree, exactly.

    Raises NotAComplexError (with a witness basis element) if
    d_out o d_in is nonzero anywhere.
    """
    if not d_in.target.same_basis(d_out.source):
        raise StructuralError("differentials do not compose")
    for b in d_in.source.ids:
        img = d_out.apply(d_in.column(b))
        if not is_zero(img):
            raise NotAComplexError(b, img)
    Z = kernel_basis_slice(d_out, degree)
    B = image_basis_slice(d_in, degree - d_in.degree)
    slice_ids = d_out.source.slice_ids(degree)
    combined = list(B)
    reps = []
    index = {k: i for i, k in enumerate(slice_ids)}
    for z in Z:
        r = reduce_against(slice_ids, combined, z)
        if not is_zero(r):
            lead = min(r, key=lambda k: index[k])
            r = vscale(Fraction(1) / r[lead], r)
            combined.append(r)
            combined.sort(key=lambda row: index[min(row, key=lambda k: index[k])])
            reps.append(r)
    dim = len(Z) - len(B)
    assert dim == len(reps)
    return CohomologyResult(degree, Z, B, reps, dim)


def quotient_basis(space: GradedSpace, subspace):
    """Quotient of a graded space by the span of the given vectors.

    Returns (quotient space, projection) where the projection kills the
    subspace exactly and is the identity on the surviving basis classes.
    """
    for v in subspace:
        space.check_member(v)
    ech = echelon_vectors(space.ids, [vclean(v) for v in subspace])
    index = {k: i for i, k in enumerate(space.ids)}
    pivot_ids = {min(row, key=lambda k: index[k]) for row in ech}
    surviving = [b for b in space.basis if b.ident not in pivot_ids]
    quot = GradedSpace(surviving)
    cols = {}
    for b in space.basis:
        if b.ident in pivot_ids:
            row = next(r for r in ech if min(r, key=lambda k: index[k]) == b.ident)
            col = {k: -c for k, c in row.items() if k != b.ident}
            cols[b.ident] = col
        else:
            cols[b.ident] = {b.ident: Fraction(1)}
    proj = LinearMap(space, quot, 0, cols)
    return quot, proj
