import random
from fractions import Fraction

import pytest

from mcspaces.exactlin import is_zero, vclean, veq
from mcspaces.filtered import dual_numbers, extend_scalars, polynomial_truncation
from mcspaces.linf import eval_bracket_basis, make_algebra, verify_structure
from mcspaces.mc import (
    NotMaurerCartanError,
    lift_deformation,
    mc_element,
    mc_polynomial_system,
    mc_residual,
    twist,
)

import oracles


def nil2():
    return make_algebra([("x", 1, 1), ("y", 2, 2)], 2,
                        [(("x", "x"), {"y": 1})], name="nil2")


def twistable():
    return make_algebra([("x", 1, 1), ("z", 1, 1), ("y", 2, 2)], 2,
                        [(("x", "x"), {"y": 1}), (("z",), {"y": Fraction(-1, 2)})],
                        name="twistable")


def test_residual_of_zero():
    assert mc_residual(nil2(), {}) == {}


def test_residual_nil2_quadratic():
    # F(c x) = (c^2/2) y: only k = 2 contributes
    g = nil2()
    assert mc_residual(g, {"x": Fraction(1)}) == {"y": Fraction(1, 2)}
    assert mc_residual(g, {"x": Fraction(3)}) == {"y": Fraction(9, 2)}
    assert mc_residual(g, {"x": Fraction(-2, 3)}) == {"y": Fraction(2, 9)}


def test_residual_requires_degree_one():
    g = nil2()
    with pytest.raises(Exception):
        mc_residual(g, {"y": Fraction(1)})


def test_residual_dual_numbers_is_twisted_differential():
    # F(phi + psi t) = (d_phi psi) t over the dual numbers, for every
    # degree-1 psi (the paper's tangent computation)
    g = twistable()
    phi = {"x": Fraction(1), "z": Fraction(1)}
    d_phi = twist(g, phi).algebra.differential()
    ext = extend_scalars(g, dual_numbers(), ideal_only=False)
    for psi in ({"x": Fraction(1)}, {"z": Fraction(2)},
                {"x": Fraction(1, 2), "z": Fraction(-3)}):
        candidate = dict(ext.embed(phi))
        for b, c in psi.items():
            candidate[ext.tensor(b, "t")] = c
        res = mc_residual(ext.algebra, candidate)
        expected = {ext.tensor(b, "t"): c for b, c in d_phi.apply(psi).items()}
        assert vclean(res) == vclean(expected)


def test_mc_element_certification():
    g = twistable()
    el = mc_element(g, {"x": Fraction(2), "z": Fraction(4)})   # beta = alpha^2
    assert el.residual == {}
    with pytest.raises(NotMaurerCartanError):
        mc_element(g, {"x": Fraction(1)})


def test_twist_by_zero_is_identity(corpus_algebras):
    for name, g in corpus_algebras.items():
        if g.space.dim > 8:
            continue
        tw = twist(g, {}).algebra
        for k in range(1, g.kmax + 1):
            assert tw.table.entries.get(k, {}) == g.table.entries.get(k, {}), name


def test_twist_abelian_unchanged():
    g = make_algebra([("h", 0, 1), ("x", 1, 1), ("w", 2, 1)], 2, [])
    tw = twist(g, {"x": Fraction(5)}).algebra
    assert not any(tw.table.entries.get(k) for k in (1, 2))


def test_twist_refuses_non_mc():
    with pytest.raises(NotMaurerCartanError):
        twist(nil2(), {"x": Fraction(1)})


def test_twisted_differential_formula():
    # d_phi x = y, d_phi z = -1/2 y for phi = x + z; frozen by hand from
    # d_phi = delta + [phi, -]
    g = twistable()
    d = twist(g, {"x": Fraction(1), "z": Fraction(1)}).algebra.differential()
    assert d.apply({"x": Fraction(1)}) == {"y": Fraction(1)}
    assert d.apply({"z": Fraction(1)}) == {"y": Fraction(-1, 2)}
    assert d.apply({"y": Fraction(1)}) == {}


def test_twisted_differential_matches_series_formula(corpus_points):
    """d_phi equals delta + sum_k (1/k!) [phi^k, -] entry by entry."""
    import math
    from mcspaces.exactlin import vadd, vscale
    from mcspaces.linf import eval_bracket
    for name, g, phi in corpus_points:
        if not is_zero(mc_residual(g, phi)):
            continue
        tw = twist(g, phi).algebra
        d_tw = tw.differential()
        d_g = g.differential()
        for b in g.space.ids:
            expected = d_g.apply(g.space.basis_vector(b))
            power = [phi]
            for k in range(1, g.kmax):
                if k + 1 > g.kmax:
                    break
                args = power + [g.space.basis_vector(b)]
                term = eval_bracket(g, k + 1, args)
                expected = vadd(expected,
                                vscale(Fraction(1, math.factorial(k)), term))
                power = power + [phi]
        # the loop above rebuilds only k = 1 (deeper powers vanish at
        # this truncation depth for every corpus algebra: kmax = 2)
            assert veq(d_tw.apply(g.space.basis_vector(b)), expected), (name, b)


def test_twisted_weight_rule(corpus_points):
    from mcspaces.filtered import check_filtration
    for name, g, phi in corpus_points:
        tw = twist(g, phi).algebra
        assert check_filtration(tw).ok, name
        assert verify_structure(tw, 3).ok, name


def test_polynomial_system_abelian_zero():
    g = make_algebra([("x", 1, 1), ("y", 2, 2)], 2, [])
    system = mc_polynomial_system(g)
    assert all(not p.terms for p in system.equations.values())


def test_polynomial_system_nil2():
    system = mc_polynomial_system(nil2())
    assert system.variables == ["x"]
    assert system.render() == {"y": "1/2*x^2"}


def test_polynomial_system_two_variables():
    # l2(x1,x2) = y gives the single equation c1 c2 = 0 (hand expansion)
    g = make_algebra([("x1", 1, 1), ("x2", 1, 1), ("y", 2, 2)], 2,
                     [(("x1", "x2"), {"y": 1})])
    system = mc_polynomial_system(g)
    assert system.render() == {"y": "x1*x2"}
    rng = random.Random(7)
    for _ in range(100):
        point = {"x1": Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                 "x2": Fraction(rng.randint(-9, 9), rng.randint(1, 9))}
        assert system.evaluate(point) == mc_residual(g, point)


def test_polynomial_system_evaluation_matches_residual(corpus_algebras):
    rng = random.Random(20260810)
    for name, g in corpus_algebras.items():
        system = mc_polynomial_system(g)
        for _ in range(100):
            point = {b: Fraction(rng.randint(-6, 6), rng.randint(1, 4))
                     for b in g.space.slice_ids(1) if rng.random() < 0.8}
            assert system.evaluate(point) == mc_residual(g, point), name


def test_lift_abelian_dual_numbers():
    # solutions = Z^1 (x) t, mod gauge = H^1 (x) t
    g = make_algebra([("u", 0, 1), ("v", 1, 1), ("w", 1, 1)], 2,
                     [(("u",), {"v": 1})])
    rep = lift_deformation(g, {}, 2)
    assert len(rep.z1) == 2                     # v and w are closed
    assert rep.tangent_dimension == 1           # v is exact
    d = g.differential()
    src, tgt, rows = d.slice_matrix(1)
    assert oracles.nullspace_dimension(rows, len(src)) == 2


def test_lift_nil2_obstruction_at_order_two():
    # branch seeded at x: obstruction (1/2) y with nonvanishing class
    rep = lift_deformation(nil2(), {}, 3)
    assert rep.tangent_dimension == 1
    branch = rep.branches[0]
    assert branch.seed == {"x": Fraction(1)}
    step = branch.steps[0]
    assert step.order == 2 and not step.lifted
    assert step.obstruction_cocycle == {"y": Fraction(1, 2)}
    assert not is_zero(step.obstruction_class)


def test_lift_twistable_unobstructed():
    # the x-seed on the twistable algebra lifts: the obstruction cocycle
    # (1/2) y is exact (d z = -1/2 y), correction z
    g = twistable()
    rep = lift_deformation(g, {}, 3)
    assert rep.tangent_dimension == 1
    branch = rep.branches[0]
    assert branch.steps[0].lifted
    coeffs = branch.coefficients
    assert set(coeffs) == {1, 2}
    # verify the lifted polynomial solves MC mod t^3 in g (x) (t)/(t^3)
    ext = extend_scalars(g, polynomial_truncation(3), ideal_only=True)
    candidate = {}
    for j, vec in coeffs.items():
        mono = "t" if j == 1 else "t^%d" % j
        for b, c in vec.items():
            candidate[ext.tensor(b, mono)] = c
    assert is_zero(mc_residual(ext.algebra, candidate))


def test_lift_hochschild_matches_cohomology_oracle():
    from mcspaces.hochschild import FiniteAlgebraData, build_convolution
    X = FiniteAlgebraData("k2", ["e1", "e2"],
                          {("e1", "e1"): {"e1": 1}, ("e2", "e2"): {"e2": 1}})
    conv = build_convolution(X, 2)
    mu = conv.mu_vector()
    rep = lift_deformation(conv.algebra, mu, 2)
    d = rep.twisted.differential()
    src, tgt, rows = d.slice_matrix(1)
    oracle_z1 = oracles.nullspace_dimension(rows, len(src))
    # no degree-0 part: mod gauge = Z^1
    assert rep.tangent_dimension == oracle_z1 == 4
