"""JSON space files.

A document has keys ``name``, ``dimension``, ``vertices``, ``top_simplices``
and ``skeleta`` (``{"i": [simplices generating X^i]}``), plus the optional
``orientation_hint`` and ``boundary``.  :func:`dumps` writes the canonical
form: sorted vertices, simplices ordered by (size, vertices), skeleta reduced
to minimal generators.
"""

from __future__ import annotations

import json
from typing import Optional

from .complex import StratifiedComplex


class SpaceFileError(ValueError):
    """A malformed or invalid space file.  ``where`` points at the culprit."""

    def __init__(self, message: str, where: Optional[str] = None):
        super().__init__(message if where is None else "%s (at %s)" % (message, where))
        self.where = where


def _simplex(obj, where: str, vertices) -> tuple:
    if not isinstance(obj, list) or not obj:
        raise SpaceFileError("a simplex must be a non-empty list of vertex ids", where)
    for v in obj:
        if not isinstance(v, int) or isinstance(v, bool):
            raise SpaceFileError("vertex id %r is not an integer" % (v,), where)
        if vertices is not None and v not in vertices:
            raise SpaceFileError("vertex %d is not declared" % v, where)
    s = tuple(sorted(obj))
    if len(set(s)) != len(s):
        raise SpaceFileError("repeated vertex in simplex %s" % (list(obj),), where)
    return s


def from_document(doc) -> StratifiedComplex:
    if not isinstance(doc, dict):
        raise SpaceFileError("space file must be a JSON object")
    for key in ("name", "top_simplices"):
        if key not in doc:
            raise SpaceFileError("missing key %r" % key)
    known = {"name", "dimension", "vertices", "top_simplices", "skeleta", "orientation_hint", "boundary"}
    extra = sorted(set(doc) - known)
    if extra:
        raise SpaceFileError("unknown key %r" % extra[0])
    vertices = doc.get("vertices")
    if vertices is not None:
        if not isinstance(vertices, list):
            raise SpaceFileError("'vertices' must be a list")
        vertices = set(vertices)
    tops = [_simplex(s, "top_simplices[%d]" % k, vertices) for k, s in enumerate(doc["top_simplices"])]
    skeleta = {}
    raw = doc.get("skeleta") or {}
    if not isinstance(raw, dict):
        raise SpaceFileError("'skeleta' must be an object")
    for i, gens in raw.items():
        try:
            ii = int(i)
        except ValueError:
            raise SpaceFileError("skeleton key %r is not an integer" % i) from None
        skeleta[ii] = [_simplex(s, "skeleta[%s][%d]" % (i, k), vertices) for k, s in enumerate(gens)]
    boundary = [_simplex(s, "boundary[%d]" % k, vertices) for k, s in enumerate(doc.get("boundary", []))]
    dim = doc.get("dimension")
    if dim is not None and (not isinstance(dim, int) or dim < 0):
        raise SpaceFileError("'dimension' must be a non-negative integer")
    actual = max(len(s) - 1 for s in tops) if tops else -1
    if dim is not None and dim != actual:
        raise SpaceFileError("declared dimension %d but top simplices have dimension %d" % (dim, actual))
    try:
        X = StratifiedComplex.from_data(str(doc["name"]), tops, skeleta, boundary=boundary)
    except ValueError as e:
        raise SpaceFileError(str(e)) from None
    rep = X.validate()
    if not rep.ok:
        raise SpaceFileError("invalid space: " + rep.errors[0])
    hint = doc.get("orientation_hint")
    if hint is not None:
        s = _simplex(hint, "orientation_hint", vertices)
        if s not in X.levels or len(s) - 1 != X.dim:
            raise SpaceFileError("orientation hint is not a top simplex", "orientation_hint")
        X = X.with_orientation_hint(s)
    return X


def to_document(X: StratifiedComplex) -> dict:
    def enc(s):
        return list(s)
    doc = {
        "name": X.name,
        "dimension": X.dim,
        "vertices": sorted(v for (v,) in X.simplices_of_dim(0)),
        "top_simplices": [enc(s) for s in X.top_simplices()],
        "skeleta": {str(i): [enc(s) for s in gens] for i, gens in X.skeleta_generators().items()},
    }
    if X.boundary:
        doc["boundary"] = [enc(s) for s in sorted(X.boundary, key=lambda s: (len(s), s))
                           if not any(c in X.boundary for c in X.cofaces[s])]
    if X.orientation_hint is not None:
        doc["orientation_hint"] = enc(X.orientation_hint)
    return doc


def loads(text: str) -> StratifiedComplex:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpaceFileError("not valid JSON: %s" % e) from None
    return from_document(doc)


def load(path: str) -> StratifiedComplex:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(X: StratifiedComplex) -> str:
    return json.dumps(to_document(X), indent=1, sort_keys=True) + "\n"


def dump(X: StratifiedComplex, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(X))
