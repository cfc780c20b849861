"""Tangent spaces of the Maurer-Cartan variety and of its gauge quotient.

At a Maurer-Cartan element phi the variety has tangent space
Z^1(g^phi), the degree-1 cocycles of the twisted differential.  The
quotient by the gauge group is represented by its computable shadow, the
two-term complex

    -d_phi : g^0 -> Z^1(g^phi)

whose H^0 is the space of infinitesimal deformations modulo equivalence
and whose H^{-1} is the infinitesimal stabilizer Z^0(g^phi).  The
differential is computed twice: directly as -d_phi, and as the
orbit-map derivative over the dual numbers (the t-coefficient of
exp(xi t).phi minus phi); any mismatch is an implementation-falsifying
error, not a data error.
"""

from __future__ import annotations

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
    kernel_basis_slice,
    quotient_basis,
    vclean,
    vscale,
    vsub,
)
from .filtered import dual_numbers, extend_scalars
from .gauge import gauge_act
from .linf import LInftyAlgebra
from .mc import MCElement, lift_deformation, mc_element, mc_residual, twist


def tangent_mc(g: LInftyAlgebra, phi) -> list:
    """Basis of Z^1(g^phi) = ker(d_phi) in degree 1, exactly."""
    tw = twist(g, phi).algebra
    return kernel_basis_slice(tw.differential(), 1)


def dual_number_tangent_check(g: LInftyAlgebra, phi, candidates) -> bool:
    """phi + psi t is MC over the dual numbers iff psi lies in Z^1(g^phi).

    Both directions are verified on the given spanning family.
    """
    phi_vec = phi.value if isinstance(phi, MCElement) else vclean(phi)
    ext = extend_scalars(g, dual_numbers(), ideal_only=False)
    z1 = tangent_mc(g, phi_vec)
    slice1 = g.space.slice_ids(1)
    ech = echelon_vectors(slice1, z1)
    for psi in candidates:
        candidate = dict(ext.embed(phi_vec))
        for b, c in psi.items():
            candidate[ext.tensor(b, "t")] = c
        residual = mc_residual(ext.algebra, candidate)
        if in_span(slice1, ech, psi) != is_zero(residual):
            return False
    return True


@dataclass
class TangentComplexResult:
    phi: MCElement
    degree_minus1_ids: list        # basis of g^0
    degree0_basis: list            # basis of Z^1(g^phi)
    differential: LinearMap        # -d_phi : g^0 -> Z^1 coordinates
    h0_dimension: int
    h0_representatives: list
    hminus1_basis: list            # Z^0(g^phi), the infinitesimal stabilizer
    twisted: LInftyAlgebra


def tangent_complex(g: LInftyAlgebra, phi) -> TangentComplexResult:
    """The two-term tangent complex of the quotient at [phi].

    The orbit-map route and the direct route to the differential are
    compared entry by entry before anything else is computed.
    """
    if not g.is_dg_lie():
        raise StructuralError("the gauge quotient needs a dg Lie algebra")
    phi_el = phi if isinstance(phi, MCElement) else mc_element(g, phi)
    phi_vec = phi_el.value
    tw = twist(g, phi_vec).algebra
    d_tw = tw.differential()
    ids0 = g.space.slice_ids(0)
    ext = extend_scalars(g, dual_numbers(), ideal_only=False)
    cols = {}
    for b in ids0:
        direct = vscale(-1, d_tw.apply({b: Fraction(1)}))
        # orbit route: exp(xi t).phi = phi + (coefficient) t
        xi_t = {ext.tensor(b, "t"): Fraction(1)}
        acted = gauge_act(ext.algebra, xi_t, ext.embed(phi_vec))
        moved = vsub(acted.value, ext.embed(phi_vec))
        orbit = ext.coefficient_of(moved, "t")
        if vclean(orbit) != vclean(direct):
            raise AssertionError(
                "orbit-map differential disagrees with -d_phi at %r; "
                "this falsifies the implementation" % (b,))
        cols[b] = direct
    z1 = kernel_basis_slice(d_tw, 1)
    sub0 = GradedSpace([(b, 0, g.space.weight_of(b)) for b in ids0])
    diff = LinearMap(sub0, g.space, 1, cols)
    # H^0 = Z^1 / im(d_phi), computed through an explicit quotient
    slice1 = g.space.slice_ids(1)
    image = echelon_vectors(slice1, [cols[b] for b in ids0])
    ech = list(image)
    reps = []
    index = {k: i for i, k in enumerate(slice1)}
    from .exactlin import reduce_against
    for z in z1:
        r = reduce_against(slice1, ech, z)
        if not is_zero(r):
            lead = min(r, key=lambda k: index[k])
            r = vscale(Fraction(1) / r[lead], r)
            ech.append(r)
            ech.sort(key=lambda row: index[min(row, key=lambda k: index[k])])
            reps.append(r)
    hminus1 = kernel_basis_slice(d_tw, 0)
    return TangentComplexResult(phi_el, ids0, z1, diff,
                                len(reps), reps, hminus1, tw)


@dataclass
class TangentReport:
    h0_tangent: int
    h1_twisted: int
    order1_deformations: int
    agree: bool
    stabilizer_dimension: int
    details: dict = field(default_factory=dict)


def tangent_report(g: LInftyAlgebra, phi) -> TangentReport:
    """Three independent computations of the tangent dimension, compared.

    dim H^0 of the tangent complex, dim H^1 of the twisted algebra, and
    the number of order-1 deformations modulo gauge from the lifting
    machinery must agree exactly; inequality raises.
    """
    tc = tangent_complex(g, phi)
    d_tw = tc.twisted.differential()
    h1 = cohomology(d_tw, d_tw, 1)
    lift = lift_deformation(g, tc.phi.value, 2)
    dims = (tc.h0_dimension, h1.dimension, lift.tangent_dimension)
    if len(set(dims)) != 1:
        raise AssertionError(
            "tangent dimensions disagree (H0 T, H1 twisted, order-1 lifts) = %r"
            % (dims,))
    stab = len(tc.hminus1_basis)
    return TangentReport(dims[0], dims[1], dims[2], True, stab,
                         details={"h0_representatives": tc.h0_representatives,
                                  "stabilizer": tc.hminus1_basis})


def stabilizer_fixes_phi(g: LInftyAlgebra, phi) -> bool:
    """Every H^{-1} basis element fixes phi over the dual numbers, exactly."""
    tc = tangent_complex(g, phi)
    ext = extend_scalars(g, dual_numbers(), ideal_only=False)
    base = ext.embed(tc.phi.value)
    for xi in tc.hminus1_basis:
        xi_t = {ext.tensor(b, "t"): c for b, c in xi.items()}
        acted = gauge_act(ext.algebra, xi_t, base)
        if acted.value != vclean(base):
            return False
    return True
