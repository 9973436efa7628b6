"""JSON algebra spec files.

Format::

    {"name": str, "p": int, "dim": int, "basis": [str, ...],
     "bracket": [{"left": i, "right": j, "value": [int] * dim}, ...],   # i < j, omitted pairs are 0
     "pmap": [[int] * dim] * dim,
     "field": {"ext_degree": k, "modulus": [...]}}                       # optional
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .errors import ParseError, ValidationError
from .exactfield import CODE, is_prime
from .liecore import Algebra, validate


def algebra_to_spec(A: Algebra) -> dict:
    bracket = []
    for i in range(A.dim):
        for j in range(i + 1, A.dim):
            if A.structure[i, j].any():
                bracket.append({"left": i, "right": j, "value": [int(c) for c in A.structure[i, j]]})
    return {
        "name": A.name,
        "p": int(A.p),
        "dim": int(A.dim),
        "basis": list(A.names),
        "bracket": bracket,
        "pmap": [[int(c) for c in row] for row in A.pmap_basis],
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _int(value, what):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{what} must be an integer, got {value!r}")
    return value


def _residues(values, p, dim, what):
    if not isinstance(values, list) or len(values) != dim:
        raise ParseError(f"{what} must be a list of {dim} integers")
    out = []
    for c in values:
        c = _int(c, what)
        if not 0 <= c < p:
            raise ParseError(f"{what} has entry {c} outside [0, {p})")
        out.append(c)
    return out


def spec_to_algebra(doc, check=True) -> Algebra:
    """Parse a spec document; ``ParseError`` on malformed input, ``ValidationError`` if the axioms fail."""
    if not isinstance(doc, dict):
        raise ParseError("spec must be a JSON object")
    for key in ("p", "dim", "basis", "pmap"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    p = _int(doc["p"], "p")
    if not is_prime(p):
        raise ParseError(f"p = {p} is not prime")
    dim = _int(doc["dim"], "dim")
    basis = doc["basis"]
    if not isinstance(basis, list) or len(basis) != dim or not all(isinstance(b, str) for b in basis):
        raise ParseError(f"basis must be a list of {dim} strings")
    if len(set(basis)) != dim:
        raise ParseError("basis names must be distinct")
    structure = np.zeros((dim, dim, dim), dtype=CODE)
    seen = set()
    for k, entry in enumerate(doc.get("bracket", [])):
        if not isinstance(entry, dict) or not {"left", "right", "value"} <= set(entry):
            raise ParseError(f"bracket entry {k} needs left, right and value")
        i, j = _int(entry["left"], "left"), _int(entry["right"], "right")
        if not (0 <= i < j < dim):
            raise ParseError(f"bracket entry {k}: need 0 <= left < right < {dim}, got ({i}, {j})")
        if (i, j) in seen:
            raise ParseError(f"bracket pair ({i}, {j}) given twice")
        seen.add((i, j))
        v = np.array(_residues(entry["value"], p, dim, f"bracket ({i}, {j})"), dtype=CODE)
        structure[i, j] = v
        structure[j, i] = (-v) % p
    pm = doc["pmap"]
    if not isinstance(pm, list) or len(pm) != dim:
        raise ParseError(f"pmap must have {dim} rows")
    pmap = np.array([_residues(row, p, dim, f"pmap row {i}") for i, row in enumerate(pm)], dtype=CODE).reshape(dim, dim)
    hint = doc.get("field")
    A = Algebra(p, basis, structure, pmap, name=str(doc.get("name", "")), modulus_hint=hint)
    if check:
        report = validate(A)
        if not report.ok:
            raise ValidationError("; ".join(report.messages(A.names)), report)
    return A


def load(path) -> Algebra:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    return spec_to_algebra(doc)


def input_hash(A: Algebra) -> str:
    """SHA-256 of the canonical spec serialisation."""
    return hashlib.sha256(dumps(algebra_to_spec(A)).encode()).hexdigest()
