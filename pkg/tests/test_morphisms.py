from fractions import Fraction

import pytest

from mcspaces.exactlin import is_zero
from mcspaces.linf import make_algebra
from mcspaces.mc import mc_residual
from mcspaces.morphisms import (
    goldman_millson_check,
    morphism,
    stagewise_quasi_iso,
    twist_pushforward_check,
    verify_morphism,
)

import oracles


def nil2():
    return make_algebra([("x", 1, 1), ("y", 2, 2)], 2, [(("x", "x"), {"y": 1})],
                        name="nil2", truncation_order=3)


def gm_pair(corpus_docs):
    doc = corpus_docs["gm-a-pair.json"]
    f = doc.morphisms["projection"]
    return doc, f


def test_identity_morphism_passes(corpus_algebras):
    for name, g in corpus_algebras.items():
        f = morphism(g, g, {b: {b: 1} for b in g.space.ids})
        assert verify_morphism(f, 3).ok, name


def test_zero_map_between_abelian_algebras():
    a = make_algebra([("x", 1, 1)], 2, [])
    b = make_algebra([("w", 1, 1)], 2, [])
    f = morphism(a, b, {"x": {}})
    assert verify_morphism(f, 3).ok


def test_scaling_y_breaks_the_bracket():
    g = nil2()
    f = morphism(g, g, {"x": {"x": 1}, "y": {"y": 2}})
    rep = verify_morphism(f, 3)
    assert not rep.ok
    kinds = [v[0] for v in rep.violations]
    assert "bracket" in kinds


def test_morphisms_preserve_mc_and_residuals(corpus_docs):
    """f(MC element) is MC, and F(f tau) = f F(tau) for arbitrary tau."""
    doc, f = gm_pair(corpus_docs)
    g, h = f.source, f.target
    phi = doc.elements["phi"]
    assert is_zero(mc_residual(g, phi))
    assert is_zero(mc_residual(h, f.apply(phi)))
    for tau in ({"x": Fraction(1)}, {"z": Fraction(2)},
                {"x": Fraction(1), "z": Fraction(-1), "v": Fraction(5)}):
        lhs = mc_residual(h, f.apply(tau))
        rhs = f.apply(mc_residual(g, tau))
        assert lhs == rhs, tau


def test_stagewise_quasi_iso_identity():
    g = nil2()
    f = morphism(g, g, {b: {b: 1} for b in g.space.ids})
    assert stagewise_quasi_iso(f, 3).ok


def test_stagewise_quasi_iso_acyclic_projection(corpus_docs):
    doc, f = gm_pair(corpus_docs)
    rep = stagewise_quasi_iso(f, 3)
    assert rep.ok
    # sanity against the sympy rank oracle at stage 1, degree 1
    g = f.source
    d = g.differential()
    src, tgt, rows = d.slice_matrix(1)
    z1 = oracles.nullspace_dimension(rows, len(src))
    src0, tgt0, rows0 = d.slice_matrix(0)
    b1 = oracles.rank(rows0)
    assert z1 - b1 == 1        # H^1(source) = 1, matching the target


def test_inclusion_with_new_cocycle_is_not_quasi_iso():
    g = nil2()
    bigger = make_algebra([("x", 1, 1), ("y", 2, 2), ("w", 1, 1)], 2,
                          [(("x", "x"), {"y": 1})], name="nil2-w",
                          truncation_order=3)
    inc = morphism(g, bigger, {"x": {"x": 1}, "y": {"y": 1}})
    assert verify_morphism(inc, 3).ok
    rep = stagewise_quasi_iso(inc, 3)
    assert not rep.ok     # H^1 grows from 1 to 2


def test_goldman_millson_identity_is_trivially_bijective():
    g = nil2()
    f = morphism(g, g, {b: {b: 1} for b in g.space.ids})
    gm = goldman_millson_check(f, 3, max_order=3)
    assert gm.status == "pass"


def test_goldman_millson_on_corpus_pair(corpus_docs):
    doc, f = gm_pair(corpus_docs)
    gm = goldman_millson_check(f, 3, max_order=3)
    assert gm.status == "pass"
    assert gm.h1_bijection == {"iso": True, "dim_source": 1, "dim_target": 1}
    for entry in gm.orders:
        assert entry["tangent_source"] == entry["tangent_target"] == 1
        assert entry["h1_correspondence"]
        # both sides lift with the (1/2) y cocycle killed by z: nothing blocks
        for br in entry["branches"]:
            assert br["source_blocked_at"] is None


def test_goldman_millson_hypothesis_failure_reported():
    # negative degrees break the hypothesis, not the consequence
    neg = make_algebra([("m", -1, 1), ("x", 1, 1)], 2, [], truncation_order=2)
    f = morphism(neg, neg, {b: {b: 1} for b in neg.space.ids})
    gm = goldman_millson_check(f, 2, max_order=2)
    assert gm.status == "hypotheses not met"
    assert not gm.hypothesis["non_negative"]


def test_twist_pushforward_zero_reduces_to_stagewise(corpus_docs):
    doc, f = gm_pair(corpus_docs)
    rep = twist_pushforward_check(f, {}, 3)
    assert rep.status == "pass"


def test_twist_pushforward_with_corpus_phi(corpus_docs):
    doc, f = gm_pair(corpus_docs)
    rep = twist_pushforward_check(f, doc.elements["phi"], 3)
    assert rep.status == "pass"
    assert rep.details["residual_functorial"]
    assert rep.details["twisted_morphism"]
    assert rep.details["twisted_stagewise"]


def test_twist_pushforward_broken_morphism_fails_mc():
    # send x to 2x: the image of the MC element phi = x + z then fails MC
    g = make_algebra([("x", 1, 1), ("z", 1, 1), ("y", 2, 2)], 2,
                     [(("x", "x"), {"y": 1}), (("z",), {"y": Fraction(-1, 2)})],
                     name="tw", truncation_order=3)
    f = morphism(g, g, {"x": {"x": 2}, "z": {"z": 1}, "y": {"y": 1}})
    rep = twist_pushforward_check(f, {"x": Fraction(1), "z": Fraction(1)}, 3)
    assert rep.status == "fail"
    assert "residual" in rep.details
