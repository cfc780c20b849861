"""JSON document formats: algebras, finite associative algebras, reports.

Rational literals travel as strings ("3", "-1/2"); floating point
numbers are rejected at parse time so exactness survives serialization.
Serialization is canonical: key order is construction order, arrays are
basis-ordered, and repeated runs produce byte-identical documents.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .exactlin import GradedSpace, StructuralError, Vec, vclean
from .filtered import CoefficientAlgebra
from .hochschild import FiniteAlgebraData
from .linf import BracketTable, LInftyAlgebra, make_algebra
from .morphisms import FilteredMorphism, morphism

FORMAT = "mcspaces/1"


class DocumentError(ValueError):
    """Malformed document; the message carries a JSON-path position."""

    def __init__(self, path, message):
        self.path = path
        super().__init__("%s: %s" % (path, message))


def _rat(value, path) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise DocumentError(path, "floating point and booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise DocumentError(path, "not a rational literal: %r" % value)
    raise DocumentError(path, "expected a rational string, got %r" % (value,))


def _coeff_map(obj, path) -> dict:
    if not isinstance(obj, dict):
        raise DocumentError(path, "expected an object of rational coordinates")
    return {str(k): _rat(v, "%s.%s" % (path, k)) for k, v in obj.items()}


def render_rational(c: Fraction) -> str:
    return str(c)


def render_vec(v: Vec) -> dict:
    return {k: render_rational(v[k]) for k in v}


def render_vec_ordered(space: GradedSpace, v: Vec) -> dict:
    return {k: render_rational(v[k]) for k in space.ids if k in v}


# ---------------------------------------------------------------------------
# algebra documents
# ---------------------------------------------------------------------------

def parse_algebra_fragment(doc, path="$") -> LInftyAlgebra:
    if not isinstance(doc, dict):
        raise DocumentError(path, "expected an object")
    if "basis" not in doc:
        raise DocumentError(path, "missing 'basis'")
    basis = []
    for i, entry in enumerate(doc["basis"]):
        p = "%s.basis[%d]" % (path, i)
        for key in ("id", "degree", "weight"):
            if key not in entry:
                raise DocumentError(p, "missing %r" % key)
        if not isinstance(entry["degree"], int) or isinstance(entry["degree"], bool):
            raise DocumentError(p, "degree must be an integer")
        if not isinstance(entry["weight"], int) or isinstance(entry["weight"], bool):
            raise DocumentError(p, "weight must be an integer")
        basis.append((str(entry["id"]), entry["degree"], entry["weight"]))
    kmax = doc.get("max_arity")
    brackets = []
    for i, entry in enumerate(doc.get("brackets", [])):
        p = "%s.brackets[%d]" % (path, i)
        if "inputs" not in entry or "output" not in entry:
            raise DocumentError(p, "bracket entries need 'inputs' and 'output'")
        inputs = tuple(str(x) for x in entry["inputs"])
        output = _coeff_map(entry["output"], p + ".output")
        brackets.append((inputs, output))
    if kmax is None:
        kmax = max((len(i) for i, _ in brackets), default=1)
    trunc = doc.get("truncation")
    try:
        return make_algebra(basis, kmax, brackets,
                            name=str(doc.get("name", "")),
                            truncation_order=trunc)
    except StructuralError as exc:
        raise DocumentError(path, str(exc))


def parse_coefficient_block(doc, path) -> CoefficientAlgebra:
    basis = []
    for i, entry in enumerate(doc.get("basis", [])):
        p = "%s.basis[%d]" % (path, i)
        if "id" not in entry:
            raise DocumentError(p, "missing 'id'")
        basis.append((str(entry["id"]), int(entry.get("degree", 0))))
    products = {}
    for i, entry in enumerate(doc.get("products", [])):
        p = "%s.products[%d]" % (path, i)
        products[(str(entry["left"]), str(entry["right"]))] = \
            _coeff_map(entry.get("output", {}), p + ".output")
    differential = None
    if doc.get("differential"):
        differential = {str(k): _coeff_map(v, "%s.differential.%s" % (path, k))
                        for k, v in doc["differential"].items()}
    try:
        return CoefficientAlgebra(str(doc.get("name", "A")), basis,
                                  str(doc.get("unit", "1")), products,
                                  maximal=doc.get("maximal"),
                                  differential=differential)
    except StructuralError as exc:
        raise DocumentError(path, str(exc))


class AlgebraDocument:
    """Parsed algebra file: a primary algebra plus optional attachments."""

    def __init__(self, algebra, elements, morphisms, coefficients, raw):
        self.algebra = algebra
        self.elements = elements          # name -> Vec
        self.morphisms = morphisms        # name -> FilteredMorphism
        self.coefficients = coefficients  # name -> CoefficientAlgebra
        self.raw = raw


def parse_algebra_document(doc) -> AlgebraDocument:
    if doc.get("format") != FORMAT:
        raise DocumentError("$.format", "expected %r" % FORMAT)
    if doc.get("kind", "algebra") != "algebra":
        raise DocumentError("$.kind", "not an algebra document")
    algebra = parse_algebra_fragment(doc, "$")
    elements = {}
    for name, coords in (doc.get("elements") or {}).items():
        vec = _coeff_map(coords, "$.elements.%s" % name)
        algebra.space.check_member(vec)
        elements[str(name)] = vclean(vec)
    morphisms = {}
    for i, block in enumerate(doc.get("morphisms") or []):
        p = "$.morphisms[%d]" % i
        if "target" not in block or "map" not in block:
            raise DocumentError(p, "morphism blocks need 'target' and 'map'")
        target = parse_algebra_fragment(block["target"], p + ".target")
        columns = {str(b): _coeff_map(col, "%s.map.%s" % (p, b))
                   for b, col in block["map"].items()}
        try:
            morphisms[str(block.get("name", "f%d" % i))] = \
                morphism(algebra, target, columns)
        except StructuralError as exc:
            raise DocumentError(p, str(exc))
    coefficients = {}
    for i, block in enumerate(doc.get("coefficients") or []):
        p = "$.coefficients[%d]" % i
        A = parse_coefficient_block(block, p)
        coefficients[A.name] = A
    return AlgebraDocument(algebra, elements, morphisms, coefficients, doc)


def serialize_algebra(g: LInftyAlgebra, name=None, elements=None,
                      morphisms_raw=None) -> dict:
    doc = {
        "format": FORMAT,
        "kind": "algebra",
        "name": name if name is not None else g.name,
        "max_arity": g.kmax,
    }
    if g.truncation_order is not None:
        doc["truncation"] = g.truncation_order
    doc["basis"] = [{"id": b.ident, "degree": b.degree, "weight": b.weight}
                    for b in g.space.basis]
    entries = []
    for k in range(1, g.kmax + 1):
        table = g.table.entries.get(k, {})
        for key in sorted(table, key=lambda t: tuple(g.space.index_of(i) for i in t)):
            entries.append({"inputs": list(key),
                            "output": render_vec_ordered(g.space, table[key])})
    doc["brackets"] = entries
    if elements:
        doc["elements"] = {n: render_vec_ordered(g.space, v)
                           for n, v in elements.items()}
    if morphisms_raw:
        doc["morphisms"] = morphisms_raw
    return doc


# ---------------------------------------------------------------------------
# finite associative algebra documents
# ---------------------------------------------------------------------------

def parse_associative_document(doc) -> FiniteAlgebraData:
    if doc.get("format") != FORMAT:
        raise DocumentError("$.format", "expected %r" % FORMAT)
    if doc.get("kind") != "associative":
        raise DocumentError("$.kind", "not an associative-algebra document")
    if "basis" not in doc:
        raise DocumentError("$", "missing 'basis'")
    basis = [str(b) for b in doc["basis"]]
    product = {}
    for i, entry in enumerate(doc.get("product", [])):
        p = "$.product[%d]" % i
        product[(str(entry["left"]), str(entry["right"]))] = \
            _coeff_map(entry.get("output", {}), p + ".output")
    degrees = {str(k): int(v) for k, v in (doc.get("degrees") or {}).items()}
    differential = {str(k): _coeff_map(v, "$.differential.%s" % k)
                    for k, v in (doc.get("differential") or {}).items()}
    try:
        return FiniteAlgebraData(str(doc.get("name", "X")), basis, product,
                                 degrees=degrees, differential=differential)
    except StructuralError as exc:
        raise DocumentError("$", str(exc))


def serialize_associative(X: FiniteAlgebraData) -> dict:
    doc = {
        "format": FORMAT,
        "kind": "associative",
        "name": X.name,
        "basis": list(X.basis),
        "product": [{"left": a, "right": b, "output": render_vec(v)}
                    for (a, b), v in X.product.items()],
    }
    if any(X.degrees[b] for b in X.basis):
        doc["degrees"] = dict(X.degrees)
    if X.differential:
        doc["differential"] = {k: render_vec(v) for k, v in X.differential.items()}
    return doc


# ---------------------------------------------------------------------------
# loading, canonical dumps, element literals
# ---------------------------------------------------------------------------

def load_document(path):
    """Parse a file into an AlgebraDocument or FiniteAlgebraData."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh, parse_float=_reject_float)
        except json.JSONDecodeError as exc:
            raise DocumentError("line %d column %d" % (exc.lineno, exc.colno),
                                exc.msg)
    kind = doc.get("kind", "algebra")
    if kind == "algebra":
        return parse_algebra_document(doc)
    if kind == "associative":
        return parse_associative_document(doc)
    raise DocumentError("$.kind", "unknown document kind %r" % kind)


def _reject_float(text):
    raise DocumentError("$", "floating point literal %r is not accepted" % text)


def dumps_canonical(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=True) + "\n"


def parse_element_literal(text, space: GradedSpace) -> Vec:
    """Parse 'x:1,z:-2/3' into an exact vector of the given space."""
    out = {}
    text = text.strip()
    if not text or text == "0":
        return out
    for i, chunk in enumerate(text.split(",")):
        if ":" not in chunk:
            raise DocumentError("element[%d]" % i,
                                "expected 'id:rational', got %r" % chunk)
        ident, _, lit = chunk.partition(":")
        ident = ident.strip()
        if ident not in space._index:
            raise DocumentError("element[%d]" % i, "unknown basis id %r" % ident)
        c = _rat(lit.strip(), "element[%d]" % i)
        if c:
            out[ident] = out.get(ident, Fraction(0)) + c
    return vclean(out)
