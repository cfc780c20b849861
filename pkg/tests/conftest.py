import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from fractions import Fraction

from mcspaces import documents as docs
from mcspaces.documents import load_document

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"

CORPUS_ALGEBRA_FILES = [
    "abelian.json", "nil2.json", "heis0.json", "twistable.json", "gm-a-pair.json",
]
CORPUS_ASSOCIATIVE_FILES = [
    "hochschild-k1.json", "hochschild-k2-diagonal.json",
    "hochschild-k2-dualnumbers.json",
]


def corpus_path(name):
    return CORPUS / name


@pytest.fixture(scope="session")
def corpus_docs():
    return {name: load_document(corpus_path(name))
            for name in CORPUS_ALGEBRA_FILES}


@pytest.fixture(scope="session")
def corpus_algebras(corpus_docs):
    """Every corpus algebra, morphism targets included."""
    out = {}
    for name, doc in corpus_docs.items():
        out[name[:-5]] = doc.algebra
        for mname, f in doc.morphisms.items():
            out["%s/%s" % (name[:-5], mname)] = f.target
    return out


@pytest.fixture(scope="session")
def corpus_points(corpus_docs):
    """(algebra, phi) pairs used by the twist/tangent criteria."""
    points = []
    for name, doc in corpus_docs.items():
        g = doc.algebra
        points.append((name[:-5], g, {}))
        for el_name, vec in doc.elements.items():
            points.append(("%s:%s" % (name[:-5], el_name), g, vec))
    # extra nonzero Maurer-Cartan points on heis0 (any degree-1 vector is MC)
    heis = corpus_docs["heis0.json"].algebra
    points.append(("heis0:a", heis, {"a": Fraction(1)}))
    points.append(("heis0:b", heis, {"b": Fraction(1)}))
    # the target of the GM pair at its own phi
    gm = corpus_docs["gm-a-pair.json"]
    target = gm.morphisms["projection"].target
    points.append(("gm-a-target:phi", target, dict(gm.elements["phi"])))
    return points


@pytest.fixture(scope="session")
def gauge_pairs(corpus_docs):
    """(algebra, xi, tau) triples with tau Maurer-Cartan, for gauge tests."""
    from mcspaces.mc import mc_residual
    from mcspaces.exactlin import is_zero
    triples = []
    heis = corpus_docs["heis0.json"].algebra
    for xi in ({"p": Fraction(1)}, {"q": Fraction(2)},
               {"p": Fraction(1), "q": Fraction(-1, 2), "z": Fraction(3)}):
        for tau in ({}, {"a": Fraction(1)}, {"a": Fraction(-2), "b": Fraction(1, 3)}):
            triples.append(("heis0", heis, xi, tau))
    gm = corpus_docs["gm-a-pair.json"].algebra
    phi = dict(corpus_docs["gm-a-pair.json"].elements["phi"])
    for xi in ({"u": Fraction(1)}, {"u": Fraction(-3, 2)}):
        for tau in (phi, {}):
            assert is_zero(mc_residual(gm, tau))
            triples.append(("gm-a-source", gm, xi, tau))
    ab = corpus_docs["abelian.json"].algebra
    triples.append(("abelian", ab, {"h": Fraction(2)}, {"x": Fraction(1)}))
    return triples
