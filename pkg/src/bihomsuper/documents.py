"""Algebra-description documents: a JSON tree format with exact rationals.

A document carries one graded space, optionally one binary and one ternary
structure tensor, named maps (square matrices with a declared parity, or rows
standing for linear forms), named scalars, and free-text metadata.  Indices in
serialized tensors are 1-based, matching the usual e_1 .. e_n notation;
everything in memory is 0-based.

Serialization is canonical: rationals are reduced "p/q" strings ("p" when the
denominator is 1), tensor entries are sorted, keys are sorted, and the dump is
deterministic, so two documents with the same semantic content serialize to
identical bytes and parse -> serialize -> parse is the identity.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    EVEN,
    ODD,
    BihomError,
    GradedMap,
    LinearForm,
    ParityError,
    StructureTensor2,
    StructureTensor3,
    SuperSpace,
)

__all__ = [
    "FORMAT_VERSION",
    "AlgebraDocument",
    "DocumentError",
    "parse_document",
    "serialize_document",
    "load_document",
    "save_document",
    "document_digest",
]

FORMAT_VERSION = "bihom-algebra/1"


class DocumentError(BihomError):
    """Invalid document text or structure; carries the offending field path."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class AlgebraDocument:
    """Validated in-memory form of one algebra-description file."""

    space: SuperSpace
    bracket2: StructureTensor2 | None = None
    bracket3: StructureTensor3 | None = None
    maps: dict[str, GradedMap] = field(default_factory=dict)
    forms: dict[str, LinearForm] = field(default_factory=dict)
    scalars: dict[str, Fraction] = field(default_factory=dict)
    metadata: str = ""
    multiplicative: bool = False

    def map_named(self, name: str, path: str = "maps") -> GradedMap:
        if name not in self.maps:
            raise DocumentError(f"map {name!r} is not defined", path)
        return self.maps[name]

    def form_named(self, name: str, path: str = "maps") -> LinearForm:
        if name not in self.forms:
            raise DocumentError(f"row {name!r} is not defined", path)
        return self.forms[name]

    def structure_maps(self) -> tuple[GradedMap, GradedMap]:
        """alpha and beta, defaulting to the identity when absent."""
        ident = GradedMap.identity(self.space)
        return self.maps.get("alpha", ident), self.maps.get("beta", ident)


def _expect(cond: bool, message: str, path: str) -> None:
    if not cond:
        raise DocumentError(message, path)


def _parse_scalar(raw: object, path: str) -> Fraction:
    if isinstance(raw, bool):
        raise DocumentError("expected a rational, got a boolean", path)
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise DocumentError(f"not a rational number: {raw!r}", path) from None
    raise DocumentError(f"expected a rational string, got {type(raw).__name__}", path)


def _scalar_str(c: Fraction) -> str:
    return str(c)


def _parse_space(node: object) -> SuperSpace:
    _expect(isinstance(node, dict), "space must be an object", "space")
    dim = node.get("dim")
    parities = node.get("parities")
    _expect(isinstance(dim, int) and dim >= 1, "dim must be a positive integer", "space.dim")
    _expect(isinstance(parities, list), "parities must be a list", "space.parities")
    _expect(len(parities) == dim, "parities length must equal dim", "space.parities")
    for n, p in enumerate(parities):
        _expect(p in (EVEN, ODD), "parities entries must be 0 or 1", f"space.parities[{n}]")
    return SuperSpace(tuple(parities))


def _parse_tensor2(node: object, space: SuperSpace) -> StructureTensor2:
    _expect(isinstance(node, list), "bracket2 must be a list of entries", "bracket2")
    entries: dict[tuple[int, int, int], Fraction] = {}
    for n, item in enumerate(node):
        path = f"bracket2[{n}]"
        _expect(isinstance(item, list) and len(item) == 4, "entry must be [i, j, k, c]", path)
        i, j, k = item[0], item[1], item[2]
        for t, name in zip((i, j, k), ("i", "j", "k")):
            _expect(isinstance(t, int) and 1 <= t <= space.dim,
                    f"index {name} must be in 1..{space.dim}", path)
        c = _parse_scalar(item[3], path)
        if c != 0 and space.parities[k - 1] != (space.parities[i - 1] + space.parities[j - 1]) % 2:
            raise DocumentError("entry violates parity additivity", path)
        key = (i - 1, j - 1, k - 1)
        entries[key] = entries.get(key, Fraction(0)) + c
    try:
        return StructureTensor2.from_dict(space, entries)
    except ParityError as exc:  # pragma: no cover - caught entrywise above
        raise DocumentError(str(exc), "bracket2") from exc


def _parse_tensor3(node: object, space: SuperSpace) -> StructureTensor3:
    _expect(isinstance(node, list), "bracket3 must be a list of entries", "bracket3")
    entries: dict[tuple[int, int, int, int], Fraction] = {}
    for n, item in enumerate(node):
        path = f"bracket3[{n}]"
        _expect(isinstance(item, list) and len(item) == 5, "entry must be [i, j, l, k, c]", path)
        i, j, l, k = item[0], item[1], item[2], item[3]
        for t, name in zip((i, j, l, k), ("i", "j", "l", "k")):
            _expect(isinstance(t, int) and 1 <= t <= space.dim,
                    f"index {name} must be in 1..{space.dim}", path)
        c = _parse_scalar(item[4], path)
        parity_sum = (space.parities[i - 1] + space.parities[j - 1] + space.parities[l - 1]) % 2
        if c != 0 and space.parities[k - 1] != parity_sum:
            raise DocumentError("entry violates parity additivity", path)
        key = (i - 1, j - 1, l - 1, k - 1)
        entries[key] = entries.get(key, Fraction(0)) + c
    try:
        return StructureTensor3.from_dict(space, entries)
    except ParityError as exc:  # pragma: no cover - caught entrywise above
        raise DocumentError(str(exc), "bracket3") from exc


def _parse_maps(node: object, space: SuperSpace) -> tuple[dict[str, GradedMap], dict[str, LinearForm]]:
    _expect(isinstance(node, dict), "maps must be an object", "maps")
    maps: dict[str, GradedMap] = {}
    forms: dict[str, LinearForm] = {}
    for name, spec in node.items():
        path = f"maps.{name}"
        _expect(isinstance(spec, dict), "map entry must be an object", path)
        if "row" in spec:
            row = spec["row"]
            _expect(isinstance(row, list) and len(row) == space.dim,
                    f"row must have {space.dim} entries", f"{path}.row")
            coeffs = [_parse_scalar(c, f"{path}.row[{n}]") for n, c in enumerate(row)]
            try:
                forms[name] = LinearForm(space, tuple(coeffs))
            except ParityError as exc:
                raise DocumentError(str(exc), f"{path}.row") from exc
            continue
        parity = spec.get("parity", EVEN)
        _expect(parity in (EVEN, ODD), "parity must be 0 or 1", f"{path}.parity")
        matrix = spec.get("matrix")
        _expect(isinstance(matrix, list) and len(matrix) == space.dim,
                f"matrix must have {space.dim} rows", f"{path}.matrix")
        rows = []
        for rnum, row in enumerate(matrix):
            _expect(isinstance(row, list) and len(row) == space.dim,
                    f"matrix rows must have {space.dim} entries", f"{path}.matrix[{rnum}]")
            rows.append(tuple(
                _parse_scalar(c, f"{path}.matrix[{rnum}][{cnum}]") for cnum, c in enumerate(row)
            ))
        try:
            maps[name] = GradedMap(space, tuple(rows), parity)
        except ParityError as exc:
            raise DocumentError(str(exc), f"{path}.matrix") from exc
    return maps, forms


def parse_document(text: str) -> AlgebraDocument:
    """Parse and validate one document; raises DocumentError with a field path."""
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON at line {exc.lineno}, column {exc.colno}") from exc
    _expect(isinstance(tree, dict), "document must be a JSON object", "")
    fmt = tree.get("format")
    _expect(fmt == FORMAT_VERSION, f"unsupported format {fmt!r}", "format")
    unknown = set(tree) - {
        "format", "space", "bracket2", "bracket3", "maps", "scalars", "metadata",
        "multiplicative",
    }
    _expect(not unknown, f"unknown sections: {sorted(unknown)}", "")
    space = _parse_space(tree.get("space"))
    bracket2 = _parse_tensor2(tree["bracket2"], space) if "bracket2" in tree else None
    bracket3 = _parse_tensor3(tree["bracket3"], space) if "bracket3" in tree else None
    maps, forms = _parse_maps(tree.get("maps", {}), space)
    scalars: dict[str, Fraction] = {}
    scalars_node = tree.get("scalars", {})
    _expect(isinstance(scalars_node, dict), "scalars must be an object", "scalars")
    for name, raw in scalars_node.items():
        scalars[name] = _parse_scalar(raw, f"scalars.{name}")
    metadata = tree.get("metadata", "")
    _expect(isinstance(metadata, str), "metadata must be a string", "metadata")
    multiplicative = tree.get("multiplicative", False)
    _expect(isinstance(multiplicative, bool), "multiplicative must be a boolean", "multiplicative")
    return AlgebraDocument(
        space=space,
        bracket2=bracket2,
        bracket3=bracket3,
        maps=maps,
        forms=forms,
        scalars=scalars,
        metadata=metadata,
        multiplicative=multiplicative,
    )


def serialize_document(doc: AlgebraDocument) -> str:
    """Canonical text form; stable under parse -> serialize round trips."""
    tree: dict[str, object] = {
        "format": FORMAT_VERSION,
        "space": {"dim": doc.space.dim, "parities": list(doc.space.parities)},
    }
    if doc.multiplicative:
        tree["multiplicative"] = True
    if doc.bracket2 is not None:
        tree["bracket2"] = [
            [i + 1, j + 1, k + 1, _scalar_str(c)]
            for (i, j, k), c in sorted(doc.bracket2.entries)
        ]
    if doc.bracket3 is not None:
        tree["bracket3"] = [
            [i + 1, j + 1, l + 1, k + 1, _scalar_str(c)]
            for (i, j, l, k), c in sorted(doc.bracket3.entries)
        ]
    maps_node: dict[str, object] = {}
    for name in sorted(doc.maps):
        m = doc.maps[name]
        maps_node[name] = {
            "parity": m.parity,
            "matrix": [[_scalar_str(c) for c in row] for row in m.matrix],
        }
    for name in sorted(doc.forms):
        if name in maps_node:
            raise DocumentError(f"name {name!r} used for both a matrix and a row", "maps")
        maps_node[name] = {"row": [_scalar_str(c) for c in doc.forms[name].coefficients]}
    if maps_node:
        tree["maps"] = maps_node
    if doc.scalars:
        tree["scalars"] = {name: _scalar_str(c) for name, c in sorted(doc.scalars.items())}
    if doc.metadata:
        tree["metadata"] = doc.metadata
    return json.dumps(tree, indent=2, sort_keys=True) + "\n"


def load_document(path: str) -> AlgebraDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_document(fh.read())


def save_document(doc: AlgebraDocument, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_document(doc))


def document_digest(doc: AlgebraDocument) -> str:
    """SHA-256 of the canonical serialization, for report provenance."""
    return hashlib.sha256(serialize_document(doc).encode("utf-8")).hexdigest()
