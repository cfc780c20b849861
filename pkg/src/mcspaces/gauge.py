"""Gauge group of a truncated dg Lie algebra and the gauge/homotopy bridge.

The degree-0 part exponentiates through the Baker-Campbell-Hausdorff
product (Dynkin's series, which terminates: a nested bracket on m
letters has weight at least m, hence vanishes once m reaches the
truncation order).  The action on Maurer-Cartan elements is

    exp(xi).tau = e^{[xi,-]}(tau) - ((e^{[xi,-]} - id)/[xi,-])(d xi),

again a terminating series.

Homotopies are pairs (f0, f1) of polynomial paths, f0 of degree 1 and f1
of degree 0, subject to the two split Maurer-Cartan equations

    d f0(t) + 1/2 [f0(t), f0(t)] = 0        identically in t,
    d f0/dt = -d(f1) + [f1, f0].

A gauge element xi yields the homotopy
    f0(t) = e^{t[xi,-]}(tau) - ((e^{t[xi,-]} - id)/[xi,-])(d xi),  f1 = xi,
and conversely the time-ordered flow of a homotopy's generator f1(t) is
resummed into a single group element by the (terminating) Magnus
expansion, integrated exactly over Q[t].

Seen inside g (x) Omega_1 with the standard tensor Koszul signs, the
pair (f0, f1) corresponds to the Maurer-Cartan element f0 - f1 dt; the
sign on f1 is the bridge between the two equivalent sign systems and is
applied by `homotopy_to_simplex_vector`.
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
    is_zero,
    solve_linear,
    vadd,
    vclean,
    vscale,
    vsub,
)
from .linf import LInftyAlgebra, eval_bracket
from .mc import MCElement, mc_element, mc_residual


class NotDGLieError(ValueError):
    pass


class MagnusError(ValueError):
    def __init__(self, residual):
        self.residual = residual
        super().__init__("Magnus element fails the defining gauge identity")


def _require_dg_lie(g: LInftyAlgebra):
    if not g.is_dg_lie():
        raise NotDGLieError("gauge operations need a dg Lie algebra (l_k = 0, k >= 3)")


def _require_degree(g, v: Vec, want, what):
    deg = g.space.degree_of_vector(v)
    if deg not in (None, want):
        raise StructuralError("%s must be homogeneous of degree %d" % (what, want))


def bracket(g: LInftyAlgebra, x: Vec, y: Vec) -> Vec:
    if g.kmax < 2:
        return {}
    return eval_bracket(g, 2, [x, y])


def delta(g: LInftyAlgebra, x: Vec) -> Vec:
    return g.differential().apply(x)


# ---------------------------------------------------------------------------
# Baker-Campbell-Hausdorff via the Dynkin series
# ---------------------------------------------------------------------------

def _nested_right(g, letters):
    """[w1, [w2, [..., wm]]] for a word over {x, y} vectors."""
    acc = letters[-1]
    for w in reversed(letters[:-1]):
        acc = bracket(g, w, acc)
        if is_zero(acc):
            return {}
    return acc


def _pair_sequences(n, total):
    """Sequences ((r1,s1),...,(rn,sn)) with ri+si >= 1 summing to total."""
    def rec(parts, remaining):
        if parts == 0:
            if remaining == 0:
                yield ()
            return
        for block in range(1, remaining - parts + 2):
            for r in range(block + 1):
                s = block - r
                for rest in rec(parts - 1, remaining - block):
                    yield ((r, s),) + rest
    yield from rec(n, total)


def bch(g: LInftyAlgebra, x: Vec, y: Vec) -> Vec:
    """Dynkin-series BCH product, truncated exactly by the weight filtration."""
    _require_dg_lie(g)
    _require_degree(g, x, 0, "gauge element")
    _require_degree(g, y, 0, "gauge element")
    R = g.effective_order()
    out: Vec = {}
    for m in range(1, R):
        for n in range(1, m + 1):
            for seq in _pair_sequences(n, m):
                denom = Fraction(m)
                for r, s in seq:
                    denom *= math.factorial(r) * math.factorial(s)
                letters = []
                for r, s in seq:
                    letters.extend([x] * r)
                    letters.extend([y] * s)
                term = letters[0] if m == 1 else _nested_right(g, letters)
                if is_zero(term):
                    continue
                coeff = Fraction((-1) ** (n - 1), n) / denom
                out = vadd(out, vscale(coeff, term))
    return out


# ---------------------------------------------------------------------------
# gauge action
# ---------------------------------------------------------------------------

def gauge_act(g: LInftyAlgebra, xi: Vec, tau) -> MCElement:
    """exp(xi).tau, exactly; the output is re-verified Maurer-Cartan."""
    _require_dg_lie(g)
    _require_degree(g, xi, 0, "gauge element")
    if isinstance(tau, MCElement):
        tau_vec = tau.value
    else:
        tau_vec = tau
        mc_element(g, tau_vec)
    out = dict(tau_vec)
    term = dict(tau_vec)
    k = 1
    while True:
        term = bracket(g, xi, term)
        if is_zero(term):
            break
        out = vadd(out, vscale(Fraction(1, math.factorial(k)), term))
        k += 1
    dxi = delta(g, xi)
    term = dict(dxi)
    k = 1
    while not is_zero(term):
        out = vsub(out, vscale(Fraction(1, math.factorial(k)), term))
        term = bracket(g, xi, term)
        k += 1
    res = mc_residual(g, out)
    if not is_zero(res):
        raise AssertionError("gauge action left the Maurer-Cartan set; this is a bug")
    return MCElement(g, out, res)


# ---------------------------------------------------------------------------
# polynomial paths in t
# ---------------------------------------------------------------------------

Path = dict  # t-power -> Vec, zero coefficients absent


def path_clean(p: Path) -> Path:
    return {j: vclean(v) for j, v in p.items() if vclean(v)}


def path_add(p: Path, q: Path) -> Path:
    out = dict(p)
    for j, v in q.items():
        out[j] = vadd(out.get(j, {}), v)
    return path_clean(out)


def path_scale(c, p: Path) -> Path:
    return path_clean({j: vscale(c, v) for j, v in p.items()})


def path_bracket(g, p: Path, q: Path) -> Path:
    out: Path = {}
    for i, u in p.items():
        for j, v in q.items():
            w = bracket(g, u, v)
            if w:
                out[i + j] = vadd(out.get(i + j, {}), w)
    return path_clean(out)


def path_delta(g, p: Path) -> Path:
    return path_clean({j: delta(g, v) for j, v in p.items()})


def path_ddt(p: Path) -> Path:
    return path_clean({j - 1: vscale(j, v) for j, v in p.items() if j >= 1})


def path_integrate(p: Path) -> Path:
    """Exact antiderivative with zero constant term."""
    return path_clean({j + 1: vscale(Fraction(1, j + 1), v) for j, v in p.items()})


def path_eval(p: Path, t) -> Vec:
    t = Fraction(t)
    out: Vec = {}
    for j, v in p.items():
        out = vadd(out, vscale(t ** j, v))
    return out


def path_degree(g, p: Path):
    degs = {g.space.degree_of_vector(v) for v in p.values() if v}
    degs.discard(None)
    if len(degs) > 1:
        raise StructuralError("path is not degree homogeneous")
    return degs.pop() if degs else None


@dataclass
class Homotopy:
    """f0 + f1 dt with the two split Maurer-Cartan equations holding exactly."""

    ambient: LInftyAlgebra
    f0: Path
    f1: Path

    def __post_init__(self):
        self.f0 = path_clean(self.f0)
        self.f1 = path_clean(self.f1)

    def t_degree(self):
        return max(list(self.f0) + list(self.f1) + [0])


def homotopy_defects(h: Homotopy):
    """(Maurer-Cartan defect in t, flow defect) - both zero for a valid homotopy."""
    g = h.ambient
    mc_defect = path_add(path_delta(g, h.f0),
                         path_scale(Fraction(1, 2), path_bracket(g, h.f0, h.f0)))
    flow = path_add(path_scale(-1, path_delta(g, h.f1)),
                    path_bracket(g, h.f1, h.f0))
    flow_defect = path_add(path_ddt(h.f0), path_scale(-1, flow))
    return mc_defect, flow_defect


def validate_homotopy(h: Homotopy):
    _require_dg_lie(h.ambient)
    if path_degree(h.ambient, h.f0) not in (None, 1):
        raise StructuralError("f0 must be a degree-1 path")
    if path_degree(h.ambient, h.f1) not in (None, 0):
        raise StructuralError("f1 must be a degree-0 path")
    mc_defect, flow_defect = homotopy_defects(h)
    if mc_defect:
        raise StructuralError("f0 fails the Maurer-Cartan equation in t")
    if flow_defect:
        raise StructuralError("the flow equation df0/dt = -d(f1) + [f1, f0] fails")
    return h


def homotopy_from_gauge(g: LInftyAlgebra, xi: Vec, tau) -> Homotopy:
    """The polynomial homotopy from tau to exp(xi).tau with constant generator xi.

    f0(t) = e^{t[xi,-]}(tau) - sum_{k>=1} (t^k/k!) [xi,-]^{k-1}(d xi), f1 = xi.
    """
    _require_dg_lie(g)
    _require_degree(g, xi, 0, "gauge element")
    tau_vec = tau.value if isinstance(tau, MCElement) else tau
    mc_element(g, tau_vec)
    f0: Path = {0: dict(tau_vec)}
    term = dict(tau_vec)
    k = 1
    while True:
        term = bracket(g, xi, term)
        if is_zero(term):
            break
        f0 = path_add(f0, {k: vscale(Fraction(1, math.factorial(k)), term)})
        k += 1
    dxi = delta(g, xi)
    term = dict(dxi)
    k = 1
    while not is_zero(term):
        f0 = path_add(f0, {k: vscale(-Fraction(1, math.factorial(k)), term)})
        term = bracket(g, xi, term)
        k += 1
    h = Homotopy(g, f0, {0: dict(xi)} if xi else {})
    validate_homotopy(h)
    end0, end1 = homotopy_faces(h)
    assert end0.value == vclean(tau_vec)
    assert end1.value == gauge_act(g, xi, tau_vec).value
    return h


def homotopy_faces(h: Homotopy):
    """(f0 at t=0, f0 at t=1), each verified Maurer-Cartan."""
    g = h.ambient
    return mc_element(g, path_eval(h.f0, 0)), mc_element(g, path_eval(h.f0, 1))


def _bernoulli_numbers(n):
    """B_0..B_n with B_1 = -1/2, by the defining recurrence."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        s = Fraction(0)
        for j in range(m):
            s += Fraction(math.comb(m + 1, j)) * B[j]
        B.append(-s / (m + 1))
    return B


def magnus_generator(g: LInftyAlgebra, f1: Path) -> Vec:
    """Magnus resummation at t=1 of the time-dependent gauge generator f1(t).

    Solves Omega' = sum_n (B_n/n!) ad_Omega^n (f1(t)), Omega(0) = 0 by
    Picard iteration; each pass is an exact polynomial integral and the
    iteration stabilizes because ad strictly increases weight.
    """
    _require_dg_lie(g)
    R = g.effective_order()
    bern = _bernoulli_numbers(max(R, 2))
    omega: Path = {}
    for _ in range(R + 2):
        rhs: Path = dict(f1)
        ad_term: Path = dict(f1)
        for n in range(1, R):
            ad_term = path_bracket(g, omega, ad_term)
            if not ad_term:
                break
            rhs = path_add(rhs, path_scale(bern[n] / math.factorial(n), ad_term))
        new = path_integrate(rhs)
        if new == omega:
            return path_eval(omega, 1)
        omega = new
    raise AssertionError("Magnus iteration failed to stabilize; check truncation data")


def gauge_from_homotopy(h: Homotopy) -> Vec:
    """A gauge element carrying d0(h) to d1(h), from the Magnus expansion.

    Raises MagnusError exposing the residual if the defining identity
    exp(xi').d0 = d1 fails, which would indicate a depth-bound mistake.
    """
    validate_homotopy(h)
    g = h.ambient
    xi = magnus_generator(g, h.f1)
    start, end = homotopy_faces(h)
    acted = gauge_act(g, xi, start)
    if acted.value != end.value:
        raise MagnusError(vsub(acted.value, end.value))
    return xi


# ---------------------------------------------------------------------------
# moduli of Maurer-Cartan elements (restricted scope)
# ---------------------------------------------------------------------------

@dataclass
class ModuliReport:
    status: str                  # 'computed' | 'verified' | 'not decided'
    description: str
    representatives: list = field(default_factory=list)
    details: dict = field(default_factory=dict)


def moduli_set(g: LInftyAlgebra, A, candidate=None) -> ModuliReport:
    """Gauge orbits of MC(g (x) m_A) in the decidable regimes.

    Over the dual numbers the orbit space is H^1(g) with explicit
    representatives.  Given a candidate (xi, tau, tau') triple the orbit
    membership is verified outright.  Everything else is reported as
    'not decided' rather than guessed.
    """
    from .filtered import nilpotency_index
    _require_dg_lie(g)
    if candidate is not None:
        xi, tau, tau_prime = candidate
        acted = gauge_act(g, xi, tau)
        ok = acted.value == vclean(tau_prime)
        return ModuliReport(
            "verified",
            "orbit membership check for the supplied gauge element",
            details={"accepted": ok, "acted": acted.value})
    if A.maximal is not None and nilpotency_index(A) == 2 and not A.differential:
        d = g.differential()
        h1 = cohomology(d, d, 1)
        return ModuliReport(
            "computed",
            "orbits over a square-zero artinian algebra are H^1 (x) m_A",
            representatives=[dict(r) for r in h1.representatives],
            details={"dimension": h1.dimension, "ideal": A.ideal_ids()})
    return ModuliReport(
        "not decided",
        "general orbit decision is outside the declared scope; "
        "supply a candidate gauge element or use order-by-order lifting")
