"""JSON round-trip formats and DOT export.

Formats: `precat-presentation/v1`, `precat-table/v1`, `precat-map/v1`,
`strict-model/v1`, `complex/v1` and `marking/v1`.  Morphisms travel in the
canonical text serialization of the site; table labels are stringified, so
a reloaded table carries opaque string labels with an identical census and
action graph.  Everything is emitted with sorted keys so identical inputs
give byte-identical artifacts.
"""

from __future__ import annotations

import json

from .theta import (
    DeltaMap, ThetaError, ThetaMorphism, ThetaObject, project, zero,
)
from .presheaf import (
    Element, PrecatError, PrecatMap, Presentation, RelationArc, Table,
    make_table,
)
from .svk import ComboComplex, Edge, Face
from .structure import StrictModel, category_model, set_model


def dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# -- morphism text ----------------------------------------------------------

def parse_object(text: str, n: int) -> ThetaObject:
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise PrecatError(f"bad object syntax {text!r}")
    inner = body[1:-1].strip()
    comps = tuple(int(t) for t in inner.split(",")) if inner else ()
    return ThetaObject(n, comps)


def _parse_digits(token: str, p: int, q: int) -> DeltaMap:
    vals = tuple(int(t) for t in token.split(",")) if "," in token \
        else tuple(int(ch) for ch in token)
    return DeltaMap(p, q, vals)


def parse_morphism(text: str, n: int) -> ThetaMorphism:
    """Inverse of ThetaMorphism.text()."""
    try:
        head, body = text.split(":", 1)
        src_s, tgt_s = head.split("->")
        src = parse_object(src_s, n)
        tgt = parse_object(tgt_s, n)
        body = body.strip()
        assert body.startswith("[") and body.endswith("]")
        tokens = body[1:-1].split("|") if body != "[]" else []
    except (ValueError, AssertionError) as exc:
        raise PrecatError(f"bad morphism syntax {text!r}") from exc
    comps = []
    for i, tok in enumerate(tokens):
        if tok == "*":
            break
        comps.append(_parse_digits(tok, src.padded(i), tgt.padded(i)))
    for i in range(len(comps), n):
        comps.append(DeltaMap.constant(src.padded(i), tgt.padded(i), 0))
    return project(n, comps)


# -- presentations ----------------------------------------------------------

def presentation_to_json(A: Presentation) -> dict:
    return {
        "schema": "precat-presentation/v1",
        "n": A.n,
        "generators": [list(N.components) for N in A.generators],
        "relations": [
            {"p": list(arc.level.components),
             "left": {"gen": arc.left_gen, "map": arc.left_map.text()},
             "right": {"gen": arc.right_gen, "map": arc.right_map.text()}}
            for arc in A.relations],
    }


def presentation_from_json(doc: dict) -> Presentation:
    if doc.get("schema") != "precat-presentation/v1":
        raise PrecatError("expected a precat-presentation/v1 document")
    n = int(doc["n"])
    gens = tuple(ThetaObject(n, tuple(c)) for c in doc["generators"])
    rels = []
    for r in doc.get("relations", []):
        level = ThetaObject(n, tuple(r["p"]))
        rels.append(RelationArc(level,
                                int(r["left"]["gen"]),
                                parse_morphism(r["left"]["map"], n),
                                int(r["right"]["gen"]),
                                parse_morphism(r["right"]["map"], n)))
    return Presentation(n, gens, tuple(rels))


# -- maps --------------------------------------------------------------------

def map_to_json(pm: PrecatMap) -> dict:
    if not isinstance(pm.target, Presentation):
        raise PrecatError("only maps between presentations serialize")
    return {
        "schema": "precat-map/v1",
        "source": presentation_to_json(pm.source),
        "target": presentation_to_json(pm.target),
        "images": [{"gen": x.gen, "map": x.rep.text()} for x in pm.images],
    }


def map_from_json(doc: dict) -> PrecatMap:
    if doc.get("schema") != "precat-map/v1":
        raise PrecatError("expected a precat-map/v1 document")
    src = presentation_from_json(doc["source"])
    tgt = presentation_from_json(doc["target"])
    images = tuple(tgt.element(int(d["gen"]), parse_morphism(d["map"], tgt.n))
                   for d in doc["images"])
    return PrecatMap(src, tgt, images)


# -- tables ------------------------------------------------------------------

def label_str(x) -> str:
    if isinstance(x, Element):
        return x.text()
    if isinstance(x, ThetaObject):
        return x.text()
    if isinstance(x, ThetaMorphism):
        return x.text()
    if isinstance(x, tuple):
        return "(" + ";".join(label_str(t) for t in x) + ")"
    if isinstance(x, str):
        return x
    return repr(x)


def table_to_json(T: Table) -> dict:
    return {
        "schema": "precat-table/v1",
        "n": T.n,
        "degree_bound": T.degree_bound,
        "levels": [{"object": list(M.components),
                    "elements": [label_str(x) for x in xs]}
                   for M, xs in T.levels],
        "action": sorted([f.text(), label_str(x), label_str(y)]
                         for (f, x), y in T.action),
    }


def table_from_json(doc: dict) -> Table:
    if doc.get("schema") != "precat-table/v1":
        raise PrecatError("expected a precat-table/v1 document")
    n = int(doc["n"])
    levels = {ThetaObject(n, tuple(lv["object"])): tuple(lv["elements"])
              for lv in doc["levels"]}
    action = {}
    for f_s, x_s, y_s in doc.get("action", []):
        action[(parse_morphism(f_s, n), x_s)] = y_s
    return make_table(n, int(doc["degree_bound"]), levels, action)


# -- complexes ----------------------------------------------------------------

def complex_to_json(cx: ComboComplex) -> dict:
    return {
        "schema": "complex/v1",
        "vertices": list(cx.vertices),
        "edges": [{"name": e.name, "src": e.src, "dst": e.dst}
                  for e in cx.edges],
        "faces": [{"name": f.name, "word": [[n, s] for n, s in f.word]}
                  for f in cx.faces],
    }


def complex_from_json(doc: dict) -> ComboComplex:
    if doc.get("schema") != "complex/v1":
        raise PrecatError("expected a complex/v1 document")
    return ComboComplex(
        tuple(doc["vertices"]),
        tuple(Edge(e["name"], e["src"], e["dst"]) for e in doc["edges"]),
        tuple(Face(f["name"], tuple((n, int(s)) for n, s in f["word"]))
              for f in doc.get("faces", [])))


# -- strict models ------------------------------------------------------------

def model_to_json(A: StrictModel) -> dict:
    if A.n == 0:
        return {"schema": "strict-model/v1", "n": 0,
                "elements": [label_str(e) for e in A.elements]}
    return {
        "schema": "strict-model/v1",
        "n": A.n,
        "objects": [label_str(x) for x in A.objects],
        "homs": [{"src": label_str(x), "dst": label_str(y),
                  "elements": [label_str(e) for e in A.hom_objects(x, y)]}
                 for x in A.objects for y in A.objects],
        "compose": [{"x": label_str(x), "y": label_str(y), "z": label_str(z),
                     "table": [[label_str(a), label_str(b), label_str(c)]
                               for (a, b), c in sorted(
                                   A._compose[(x, y, z)].items(),
                                   key=lambda kv: (label_str(kv[0][0]),
                                                   label_str(kv[0][1])))]}
                    for x in A.objects for y in A.objects for z in A.objects],
        "ids": [[label_str(x), label_str(A.ident(x))] for x in A.objects],
    }


def model_from_json(doc: dict) -> StrictModel:
    if doc.get("schema") != "strict-model/v1":
        raise PrecatError("expected a strict-model/v1 document")
    if int(doc["n"]) == 0:
        return set_model(tuple(doc["elements"]))
    if int(doc["n"]) != 1:
        raise PrecatError("only 1-models load from JSON")
    objects = tuple(doc["objects"])
    homs = {}
    for h in doc["homs"]:
        homs[(h["src"], h["dst"])] = tuple(h["elements"])
    compose = {}
    for c in doc["compose"]:
        compose[(c["x"], c["y"], c["z"])] = {(a, b): v for a, b, v in c["table"]}
    ids = {x: v for x, v in doc["ids"]}
    return category_model(objects, homs, compose, ids)


# -- markings ------------------------------------------------------------------

def marking_to_json(marking) -> list:
    return [{"fingerprint": e.fingerprint(), "extension": e.extension.text()}
            for e in marking.entries]


# -- DOT -----------------------------------------------------------------------

def groupoid_to_dot(cat, name="groupoid") -> str:
    lines = [f"digraph {json.dumps(name)} {{"]
    for x in sorted(cat.objects, key=str):
        lines.append(f"  {json.dumps(label_str(x))};")
    inv = dict(cat.inverses)
    for a in cat.arrows:
        if a.name in inv and a.name.endswith("~"):
            continue
        lines.append(f"  {json.dumps(label_str(a.src))} -> "
                     f"{json.dumps(label_str(a.dst))} "
                     f"[label={json.dumps(a.name)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
