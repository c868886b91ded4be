"""JSON and LaTeX serialization for tensors and expansions."""

from __future__ import annotations

import json
import math
from importlib import resources
from typing import Optional

import numpy as np

from .engine import InvariantExpansion
from .combinatorics import orbit_size, SemiMagicSquare
from .tensor import HyperMatrix

TENSOR_REQUIRED = ("rank", "dim", "layout", "variance", "data")
TENSOR_OPTIONAL = ("symmetric",)


class InputError(ValueError):
    """Malformed input document; the message names the line and field."""


def _line_of(text: str, key: str) -> int:
    pos = text.find(f'"{key}"')
    return text.count("\n", 0, pos) + 1 if pos >= 0 else 1


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _is_number(x) -> bool:
    return (isinstance(x, (int, float)) and not isinstance(x, bool)) and math.isfinite(x)


def parse_tensor_document(text: str, source: str = "<input>") -> tuple[HyperMatrix, Optional[bool]]:
    """Parse a tensor document, returning the tensor and its ``symmetric`` flag."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{source}:1: top level must be an object")

    def fail(key, msg):
        raise InputError(f"{source}:{_line_of(text, key)}: field '{key}': {msg}")

    for key in doc:
        if key not in TENSOR_REQUIRED + TENSOR_OPTIONAL:
            fail(key, "unknown field")
    for key in TENSOR_REQUIRED:
        if key not in doc:
            raise InputError(f"{source}:1: missing required field '{key}'")
    rank, dim = doc["rank"], doc["dim"]
    if not _is_int(rank) or rank < 1:
        fail("rank", "must be a positive integer")
    if not _is_int(dim) or dim < 1:
        fail("dim", "must be a positive integer")
    if doc["layout"] != "row-major":
        fail("layout", 'must be "row-major"')
    if doc["variance"] not in ("covariant", "contravariant"):
        fail("variance", 'must be "covariant" or "contravariant"')
    data = doc["data"]
    if not isinstance(data, list):
        fail("data", "must be a flat array of numbers")
    if len(data) != dim**rank:
        fail("data", f"expected {dim**rank} numbers for rank {rank}, dim {dim}, got {len(data)}")
    for i, x in enumerate(data):
        if not _is_number(x):
            fail("data", f"entry {i} is not a finite number: {x!r}")
    sym = doc.get("symmetric")
    if sym is not None and not isinstance(sym, bool):
        fail("symmetric", "must be true or false")
    A = HyperMatrix.from_flat(rank, dim, data, doc["variance"])
    if sym and not A.is_symmetric(1e-12):
        fail("symmetric", "declared symmetric but the data is not symmetric")
    return A, sym


def read_tensor(path: str) -> tuple[HyperMatrix, Optional[bool]]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"{path}: cannot read: {e.strerror}") from None
    except UnicodeDecodeError:
        raise InputError(f"{path}: not valid UTF-8") from None
    return parse_tensor_document(text, path)


def format_number(x: float) -> str:
    """17 significant digits, enough to round-trip any float64."""
    return f"{float(x):.17g}"


def tensor_to_json(A: HyperMatrix, symmetric: Optional[bool] = None) -> str:
    parts = [
        f'"rank": {A.rank}',
        f'"dim": {A.dim}',
        '"layout": "row-major"',
        f'"variance": "{A.variance}"',
        '"data": [' + ", ".join(format_number(x) for x in A.flat) + "]",
    ]
    if symmetric is not None:
        parts.append(f'"symmetric": {"true" if symmetric else "false"}')
    return "{" + ", ".join(parts) + "}"


def tensor_to_dict(A: HyperMatrix) -> dict:
    return json.loads(tensor_to_json(A))


def expansion_to_dict(exp: InvariantExpansion) -> dict:
    terms = []
    for sq, c in exp.terms.items():
        terms.append({
            "square": [list(row) for row in sq],
            "coefficient": int(c),
            "class_size": orbit_size(SemiMagicSquare(sq, exp.rank)),
        })
    return {
        "rank": exp.rank,
        "order": exp.order,
        "prefactor_denominator": exp.prefactor_denominator,
        "terms": terms,
    }


def expansion_to_json(exp: InvariantExpansion) -> str:
    return json.dumps(expansion_to_dict(exp), indent=1)


def parse_expansion_document(text: str, source: str = "<input>") -> dict:
    """Validate an expansion document and return it as a plain dict."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from None
    required = ("rank", "order", "prefactor_denominator", "terms")
    if not isinstance(doc, dict) or set(doc) != set(required):
        raise InputError(f"{source}: expected exactly the fields {', '.join(required)}")
    n = doc["order"]
    if not _is_int(n) or doc["prefactor_denominator"] != math.factorial(n):
        raise InputError(f"{source}: field 'prefactor_denominator' must be order!")
    for i, t in enumerate(doc["terms"]):
        if set(t) != {"square", "coefficient", "class_size"}:
            raise InputError(f"{source}: terms[{i}] must have square, coefficient, class_size")
        SemiMagicSquare(tuple(map(tuple, t["square"])), doc["rank"])
    return doc


def _latex_matrix(sq) -> str:
    rows = r"\cr".join("&".join(str(x) for x in row) for row in sq)
    return r"\left(\matrix{" + rows + r"\cr}\right)"


def expansion_to_latex(exp: InvariantExpansion) -> str:
    """One signed matrix per line, prefactor 1/n!, zero coefficients omitted."""
    name = "c" if exp.rank == 2 else "C"
    symbol = r"{\bf a}" if exp.rank in (2, 3) else r"{\bf A}"
    lines = [r"\begin{eqnarray}",
             f"{name}_{exp.order}({symbol})&=&{{1\\over{{{exp.order}!}}}}\\,\\left[" ]
    for k, (sq, c) in enumerate(exp.nonzero_terms().items()):
        sign = "-" if c < 0 else ("+" if k else "")
        mag = "" if abs(c) == 1 else f"{abs(c)}\\,"
        lines.append(f"&&{sign}{mag}{_latex_matrix(sq)}\\nonumber\\\\")
    lines.append(r"&&\right]\,.")
    lines.append(r"\end{eqnarray}")
    return "\n".join(lines) + "\n"


def load_reference_tables() -> dict:
    """Published coefficient tables bundled with the package (as printed)."""
    with resources.files("hyperinv").joinpath("data/reference_tables.json").open(encoding="utf-8") as fh:
        return json.load(fh)
