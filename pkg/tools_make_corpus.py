"""Regenerate the JSON corpus in canonical serialization."""

import pathlib

from mcspaces import documents as docs

HERE = pathlib.Path(__file__).parent
CORPUS = HERE / "corpus"


def algebra_doc(name, basis, brackets, truncation=None, max_arity=2,
                elements=None, morphisms=None):
    doc = {
        "format": docs.FORMAT,
        "kind": "algebra",
        "name": name,
        "max_arity": max_arity,
    }
    if truncation is not None:
        doc["truncation"] = truncation
    doc["basis"] = [{"id": b, "degree": d, "weight": w} for b, d, w in basis]
    doc["brackets"] = [{"inputs": list(i), "output": o} for i, o in brackets]
    if elements:
        doc["elements"] = elements
    if morphisms:
        doc["morphisms"] = morphisms
    return doc


def write(name, doc):
    path = CORPUS / name
    path.write_text(docs.dumps_canonical(doc), encoding="utf-8")
    print("wrote", path)


abelian = algebra_doc(
    "abelian",
    [("h", 0, 1), ("x", 1, 1), ("x2", 1, 2), ("y", 2, 1)],
    [],
    truncation=3,
)

nil2 = algebra_doc(
    "nil2",
    [("x", 1, 1), ("y", 2, 2)],
    [(("x", "x"), {"y": "1"})],
    truncation=3,
)

heis0 = algebra_doc(
    "heis0",
    [("p", 0, 1), ("q", 0, 1), ("z", 0, 2), ("a", 1, 1), ("b", 1, 2)],
    [(("p", "q"), {"z": "1"}), (("p", "a"), {"b": "1"})],
    truncation=3,
)

twistable = algebra_doc(
    "twistable",
    [("x", 1, 1), ("z", 1, 1), ("y", 2, 2)],
    [(("z",), {"y": "-1/2"}), (("x", "x"), {"y": "1"})],
    truncation=3,
    elements={"phi": {"x": "1", "z": "1"}},
)

gm_target = {
    "name": "gm-a-target",
    "max_arity": 2,
    "truncation": 3,
    "basis": [{"id": "x", "degree": 1, "weight": 1},
              {"id": "z", "degree": 1, "weight": 1},
              {"id": "y", "degree": 2, "weight": 2}],
    "brackets": [{"inputs": ["z"], "output": {"y": "-1/2"}},
                 {"inputs": ["x", "x"], "output": {"y": "1"}}],
}

gm_a = algebra_doc(
    "gm-a-source",
    [("x", 1, 1), ("z", 1, 1), ("y", 2, 2), ("u", 0, 1), ("v", 1, 1)],
    [(("z",), {"y": "-1/2"}), (("u",), {"v": "1"}), (("x", "x"), {"y": "1"})],
    truncation=3,
    elements={"phi": {"x": "1", "z": "1"}},
    morphisms=[{
        "name": "projection",
        "target": gm_target,
        "map": {"x": {"x": "1"}, "z": {"z": "1"}, "y": {"y": "1"},
                "u": {}, "v": {}},
    }],
)


def associative_doc(name, basis, products, degrees=None, differential=None):
    doc = {
        "format": docs.FORMAT,
        "kind": "associative",
        "name": name,
        "basis": list(basis),
        "product": [{"left": a, "right": b, "output": out}
                    for (a, b), out in products],
    }
    if degrees:
        doc["degrees"] = degrees
    if differential:
        doc["differential"] = differential
    return doc


hoch_k1 = associative_doc("k", ["e"], [(("e", "e"), {"e": "1"})])

hoch_diag = associative_doc(
    "k-times-k", ["e1", "e2"],
    [(("e1", "e1"), {"e1": "1"}),
     (("e1", "e2"), {}),
     (("e2", "e1"), {}),
     (("e2", "e2"), {"e2": "1"})],
)

hoch_dual = associative_doc(
    "dual-numbers", ["one", "eps"],
    [(("one", "one"), {"one": "1"}),
     (("one", "eps"), {"eps": "1"}),
     (("eps", "one"), {"eps": "1"}),
     (("eps", "eps"), {})],
)


if __name__ == "__main__":
    CORPUS.mkdir(exist_ok=True)
    write("abelian.json", abelian)
    write("nil2.json", nil2)
    write("heis0.json", heis0)
    write("twistable.json", twistable)
    write("gm-a-pair.json", gm_a)
    write("hochschild-k1.json", hoch_k1)
    write("hochschild-k2-diagonal.json", hoch_diag)
    write("hochschild-k2-dualnumbers.json", hoch_dual)
