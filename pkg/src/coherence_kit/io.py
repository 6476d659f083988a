"""State file serialization: JSON documents with complex entries as [re, im] pairs.

Floats are written as decimals with 17 significant digits, enough for every
double to round-trip exactly, so write-then-read reproduces amplitudes bit
for bit.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import DensityMatrix, IncoherentState, PureState, ValidationError
from .entanglement import BipartitePureState

STATE_KINDS = ("pure", "mixed", "bipartite-pure", "incoherent")


@dataclass(frozen=True, eq=False)
class StateFile:
    """Parsed state document: kind, explicit dims, complex data array."""

    kind: str
    dims: tuple[int, ...]
    data: np.ndarray


def _parse_complex(entry, where: str) -> complex:
    if isinstance(entry, (int, float)):
        return complex(entry)
    if (
        isinstance(entry, list)
        and len(entry) == 2
        and all(isinstance(part, (int, float)) for part in entry)
    ):
        return complex(entry[0], entry[1])
    raise ValidationError(f"{where}: expected a number or a [re, im] pair, got {entry!r}")


def _parse_real(entry, where: str) -> float:
    if isinstance(entry, (int, float)):
        return float(entry)
    raise ValidationError(f"{where}: expected a real number, got {entry!r}")


def parse_state_document(doc, source: str = "<memory>") -> StateFile:
    if not isinstance(doc, dict):
        raise ValidationError(f"{source}: state document must be an object")
    kind = doc.get("kind")
    if kind not in STATE_KINDS:
        raise ValidationError(
            f"{source}: field 'kind' must be one of {STATE_KINDS}, got {kind!r}"
        )
    dims = doc.get("dims")
    if not isinstance(dims, list) or not all(isinstance(d, int) and d >= 1 for d in dims):
        raise ValidationError(f"{source}: field 'dims' must be a list of positive integers")
    data = doc.get("data")
    if not isinstance(data, list) or not data:
        raise ValidationError(f"{source}: field 'data' must be a non-empty list")

    if kind in ("pure", "incoherent"):
        if len(dims) != 1:
            raise ValidationError(f"{source}: kind '{kind}' takes dims of length 1")
        n = dims[0]
        if len(data) != n:
            raise ValidationError(f"{source}: 'data' has {len(data)} entries, dims say {n}")
        if kind == "incoherent":
            values = np.array(
                [_parse_real(e, f"{source}: data[{i}]") for i, e in enumerate(data)]
            )
        else:
            values = np.array(
                [_parse_complex(e, f"{source}: data[{i}]") for i, e in enumerate(data)]
            )
        return StateFile(kind=kind, dims=(n,), data=values)

    if kind == "mixed":
        if len(dims) != 1:
            raise ValidationError(f"{source}: kind 'mixed' takes dims of length 1")
        shape = (dims[0], dims[0])
    else:
        if len(dims) != 2:
            raise ValidationError(f"{source}: kind 'bipartite-pure' takes dims of length 2")
        shape = (dims[0], dims[1])
    if len(data) != shape[0]:
        raise ValidationError(f"{source}: 'data' has {len(data)} rows, dims say {shape[0]}")
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise ValidationError(
                f"{source}: data[{i}] must be a list of {shape[1]} entries"
            )
        rows.append([_parse_complex(e, f"{source}: data[{i}][{j}]") for j, e in enumerate(row)])
    return StateFile(kind=kind, dims=tuple(dims), data=np.array(rows))


def load_state_file(path) -> StateFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_state_document(doc, source=str(path))


def _encode_complex(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def state_document(kind: str, data: np.ndarray) -> dict:
    arr = np.asarray(data)
    if kind in ("pure", "incoherent"):
        dims = [int(arr.shape[0])]
        if kind == "incoherent":
            body = [float(v) for v in arr]
        else:
            body = [_encode_complex(v) for v in arr]
    elif kind == "mixed":
        dims = [int(arr.shape[0])]
        body = [[_encode_complex(v) for v in row] for row in arr]
    elif kind == "bipartite-pure":
        dims = [int(arr.shape[0]), int(arr.shape[1])]
        body = [[_encode_complex(v) for v in row] for row in arr]
    else:
        raise ValidationError(f"unknown state kind {kind!r}")
    return {"kind": kind, "dims": dims, "data": body}


def render_json(obj, indent: int = 0, _level: int = 0) -> str:
    """JSON text with every float rendered at 17 significant digits."""
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{json.dumps(str(k))}: {render_json(v, indent, _level + 1)}"
            for k, v in obj.items()
        ]
        return _wrap(items, "{", "}", indent, _level)
    if isinstance(obj, (list, tuple)):
        if not len(obj):
            return "[]"
        items = [render_json(v, indent, _level + 1) for v in obj]
        return _wrap(items, "[", "]", indent, _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not np.isfinite(value):
            raise ValidationError("reports must contain only finite numbers")
        return format(value, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _wrap(items: list[str], opener: str, closer: str, indent: int, level: int) -> str:
    if not indent:
        return opener + ", ".join(items) + closer
    pad = " " * (indent * (level + 1))
    return (
        opener + "\n" + ",\n".join(pad + item for item in items)
        + "\n" + " " * (indent * level) + closer
    )


def dump_state_document(doc: dict) -> str:
    return render_json(doc)


def write_state_file(path, kind: str, data: np.ndarray) -> None:
    Path(path).write_text(dump_state_document(state_document(kind, data)) + "\n")


def to_state(sf: StateFile):
    """Materialize the validated state object a document describes."""
    if sf.kind == "pure":
        return PureState(sf.data)
    if sf.kind == "incoherent":
        return IncoherentState(sf.data)
    if sf.kind == "mixed":
        return DensityMatrix(sf.data)
    return BipartitePureState(sf.data)


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
