"""JSON file formats for algebras, certificates and reports.

Scalars are always written as strings (``"3"``, ``"-1/2"``) so exactness
never depends on how a JSON reader treats numbers.

Algebra file::

    {"name": "sl(2)", "field": "Q" | {"Fp": 5}, "dim": 3,
     "structure_constants": [[i, j, k, "value"], ...],   # omitted entries are 0
     "basis": ["E12", "H1", "E21"],                       # optional
     "layout": [3, 3]}                                    # optional, direct sums

Certificate file::

    {"algebra_hash": "<sha256>", "field": ..., "pairs": [[[a...], [b...]], ...]}
"""

from __future__ import annotations

import json
from pathlib import Path

from .algebra import Algebra
from .catalog import CatalogError, parse_catalog_spec, parse_field
from .decision import (
    Certificate,
    ExhaustiveGap,
    NoZeroDivisorsAssumed,
    ProvenNotZPD,
    ProvenZPD,
    Unknown,
    Verdict,
)
from .linalg import FieldSpec

__all__ = [
    "FormatError",
    "field_to_json",
    "algebra_to_json",
    "algebra_from_json",
    "certificate_to_json",
    "certificate_from_json",
    "verdict_to_json",
    "dumps",
    "load_algebra",
    "load_certificate",
]


class FormatError(ValueError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def field_to_json(field: FieldSpec):
    return {"Fp": field.p} if field.is_prime_field else "Q"


def _vec(v) -> list[str]:
    return [str(x) for x in v]


def algebra_to_json(alg: Algebra) -> dict:
    doc = {
        "name": alg.name,
        "field": field_to_json(alg.field),
        "dim": alg.dim,
        "structure_constants": [[i, j, k, str(v)] for i, j, k, v in alg.sparse()],
        "basis": list(alg.labels),
    }
    if alg.layout is not None:
        doc["layout"] = list(alg.layout)
    return doc


def algebra_from_json(doc: dict) -> Algebra:
    try:
        field = parse_field(doc["field"])
        n = int(doc["dim"])
        entries = []
        for entry in doc.get("structure_constants", []):
            i, j, k, v = entry
            if not isinstance(v, (str, int)):
                raise FormatError(f"value {v!r} must be a string or integer")
            entries.append((int(i), int(j), int(k), field(str(v))))
        return Algebra.from_sparse(
            field, n, entries,
            name=str(doc.get("name", "algebra")),
            labels=tuple(doc.get("basis", ())),
            layout=tuple(doc["layout"]) if doc.get("layout") is not None else None,
        )
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, IndexError, ZeroDivisionError, CatalogError) as exc:
        raise FormatError(f"bad algebra file: {exc}") from exc


def certificate_to_json(cert: Certificate, alg: Algebra) -> dict:
    return {
        "algebra_hash": alg.structure_hash,
        "field": field_to_json(cert.field),
        "pairs": [[_vec(a), _vec(b)] for a, b in cert.pairs],
    }


def certificate_from_json(doc: dict) -> tuple[Certificate, str | None]:
    """Returns the certificate and the algebra hash it was issued for."""
    try:
        field = parse_field(doc["field"])
        pairs = tuple((field.vector(map(str, a)), field.vector(map(str, b)))
                      for a, b in doc["pairs"])
        return Certificate(field, pairs), doc.get("algebra_hash")
    except (KeyError, TypeError, ValueError, ZeroDivisionError, CatalogError) as exc:
        raise FormatError(f"bad certificate file: {exc}") from exc


def verdict_to_json(v: Verdict) -> dict:
    doc = {"kind": v.kind}
    if isinstance(v, ProvenZPD):
        doc["samples"] = v.samples
    elif isinstance(v, ProvenNotZPD):
        doc["samples"] = v.samples
        ev = v.evidence
        if isinstance(ev, ExhaustiveGap):
            doc["evidence"] = {"ExhaustiveGap": {"dim_span": ev.dim_span, "dim_ker": ev.dim_ker}}
        elif isinstance(ev, NoZeroDivisorsAssumed):
            doc["evidence"] = {"NoZeroDivisorsAssumed": {"dim_ker": ev.dim_ker}}
    elif isinstance(v, Unknown):
        doc["stats"] = {"samples_tried": v.samples_tried, "dim_reached": v.dim_reached,
                        "dim_required": v.dim_required, "reason": v.reason}
    return doc


def _read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def load_algebra(path: str) -> Algebra:
    """Read an algebra file, or build one from a ``catalog:`` pseudo-path."""
    if str(path).startswith("catalog:"):
        try:
            return parse_catalog_spec(str(path))
        except (CatalogError, ValueError) as exc:
            raise FormatError(str(exc)) from exc
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: expected a JSON object")
    return algebra_from_json(doc)


def load_certificate(path: str) -> tuple[Certificate, str | None]:
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: expected a JSON object")
    return certificate_from_json(doc)
