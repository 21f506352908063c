"""JSON interchange for groupoids, algebra elements, and homomorphism matrices."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .cstar import AlgebraElement
from .decomposition import HomMatrix
from .errors import HypothesisError, StructuralError
from .groupoid import FiniteGroupoid, validation_report
from .inverse_semigroup import Bisection, GermGroupoid

__all__ = [
    "canonical_json",
    "digest",
    "groupoid_to_doc",
    "groupoid_from_doc",
    "load_groupoid",
    "element_to_doc",
    "element_from_doc",
    "hom_to_doc",
    "hom_from_doc",
    "load_hom",
    "bisection_to_doc",
    "germ_to_doc",
]


def canonical_json(obj) -> str:
    """Deterministic serialization: sorted keys, compact separators."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


# -- groupoid documents --------------------------------------------------------


def groupoid_to_doc(g: FiniteGroupoid, meta: dict | None = None) -> dict:
    doc = {
        "arrows": g.arrow_count,
        "units": list(g.units),
        "src": list(g.src),
        "rng": list(g.rng),
        "compose": [[a, b, c] for (a, b), c in sorted(g.compose.items())],
        "inv": list(g.inv),
    }
    if meta:
        doc["meta"] = meta
    return doc


def _require(doc: dict, key: str, kind) -> object:
    if key not in doc:
        raise StructuralError(f"groupoid document is missing {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise StructuralError(f"groupoid field {key!r} has the wrong type")
    return value


def groupoid_from_doc(doc: dict, *, validate: bool = True) -> FiniteGroupoid:
    if not isinstance(doc, dict):
        raise StructuralError("groupoid document must be an object")
    n = _require(doc, "arrows", int)
    units = _require(doc, "units", list)
    src = _require(doc, "src", list)
    rng = _require(doc, "rng", list)
    inv = _require(doc, "inv", list)
    compose_triples = _require(doc, "compose", list)
    triples = []
    for item in compose_triples:
        if not (isinstance(item, list) and len(item) == 3
                and all(isinstance(v, int) for v in item)):
            raise StructuralError("compose entries must be [a, b, ab] id triples")
        triples.append(tuple(item))
    g = FiniteGroupoid(n, units, src, rng, triples, inv)
    if validate:
        report = validation_report(g, stop_early=True)
        if not report.ok:
            v = report.violations[0]
            raise HypothesisError(
                f"groupoid document violates {v.axiom}: {v.detail}")
    return g


def load_groupoid(path: str | Path, *, validate: bool = True) -> FiniteGroupoid:
    with open(path) as fh:
        doc = json.load(fh)
    return groupoid_from_doc(doc, validate=validate)


# -- algebra elements ------------------------------------------------------------


def element_to_doc(f: AlgebraElement) -> dict:
    return {"coeff": [[float(z.real), float(z.imag)] for z in f.coeff]}


def element_from_doc(doc: dict, g: FiniteGroupoid) -> AlgebraElement:
    coeff = _require(doc, "coeff", list)
    values = []
    for item in coeff:
        if not (isinstance(item, list) and len(item) == 2):
            raise StructuralError("coeff entries must be [re, im] pairs")
        values.append(complex(float(item[0]), float(item[1])))
    return AlgebraElement(g, values)


# -- homomorphism matrices --------------------------------------------------------


def hom_to_doc(hm: HomMatrix, meta: dict | None = None) -> dict:
    flat = [[float(z.real), float(z.imag)] for z in hm.entries.reshape(-1)]
    doc = {
        "source": groupoid_to_doc(hm.source),
        "target": groupoid_to_doc(hm.target),
        "rows": hm.target.arrow_count,
        "cols": hm.source.arrow_count,
        "entries": flat,
    }
    if meta:
        doc["meta"] = meta
    return doc


def _resolve_groupoid(ref, base: Path | None, *, validate: bool) -> FiniteGroupoid:
    if isinstance(ref, str):
        path = Path(ref)
        if base is not None and not path.is_absolute():
            path = base / path
        return load_groupoid(path, validate=validate)
    return groupoid_from_doc(ref, validate=validate)


def hom_from_doc(doc: dict, *, base: Path | None = None,
                 validate_groupoids: bool = True) -> HomMatrix:
    if not isinstance(doc, dict):
        raise StructuralError("homomorphism document must be an object")
    for key in ("source", "target", "rows", "cols", "entries"):
        if key not in doc:
            raise StructuralError(f"homomorphism document is missing {key!r}")
    source = _resolve_groupoid(doc["source"], base, validate=validate_groupoids)
    target = _resolve_groupoid(doc["target"], base, validate=validate_groupoids)
    rows, cols = int(doc["rows"]), int(doc["cols"])
    if rows != target.arrow_count or cols != source.arrow_count:
        raise StructuralError("declared shape does not match the groupoids")
    flat = doc["entries"]
    if not isinstance(flat, list) or len(flat) != rows * cols:
        raise StructuralError("entries must hold rows*cols [re, im] pairs")
    values = []
    for item in flat:
        if not (isinstance(item, list) and len(item) == 2):
            raise StructuralError("entries must be [re, im] pairs")
        values.append(complex(float(item[0]), float(item[1])))
    entries = np.array(values, dtype=complex).reshape(rows, cols)
    return HomMatrix(source, target, entries)


def load_hom(path: str | Path, *, validate_groupoids: bool = True) -> HomMatrix:
    path = Path(path)
    with open(path) as fh:
        doc = json.load(fh)
    return hom_from_doc(doc, base=path.parent,
                        validate_groupoids=validate_groupoids)


# -- bisections and germ groupoids ---------------------------------------------


def bisection_to_doc(b: Bisection) -> dict:
    return {"groupoid": groupoid_to_doc(b.groupoid), "arrows": list(b.arrows)}


def germ_to_doc(germs: GermGroupoid) -> dict:
    return {
        "groupoid": groupoid_to_doc(germs.groupoid),
        "representatives": [[s, x] for (s, x) in germs.reps],
    }
