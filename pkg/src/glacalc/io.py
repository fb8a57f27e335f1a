"""JSON declaration files for algebroids, connections and IDS.

Indices in files are 1-based; expressions are strings in the expression
grammar.  Unknown fields are rejected.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Union

from .algebroid import FrameAlgebra, GeneralizedLieAlgebroidSpec, as_frame_algebra, pullback_algebroid
from .connection import Connection
from .errors import DeclarationError, GlacalcError
from .expr import CoordinateSystem, Expr
from .integrability import IDS
from .linalg import ExprMatrix

_PLAIN = {"base_coords", "rank", "frame", "anchor", "structure"}
_GENERALIZED = {"base_coords", "rank", "frame", "structure", "M_coords", "h", "eta", "rho", "h_eta_inverse"}
_META = {"name", "description"}


def _read(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DeclarationError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise DeclarationError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(data, dict):
        raise DeclarationError(f"{path}: top level must be an object")
    return data


def _check_fields(data: dict, allowed: set, required: set, where: str):
    unknown = sorted(set(data) - allowed - _META)
    if unknown:
        raise DeclarationError(f"{where}: unknown field(s) {', '.join(unknown)}")
    missing = sorted(required - set(data))
    if missing:
        raise DeclarationError(f"{where}: missing field(s) {', '.join(missing)}")


def _coords(value, where: str) -> CoordinateSystem:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise DeclarationError(f"{where}: coordinates must be a list of names")
    try:
        return CoordinateSystem(tuple(value))
    except GlacalcError as exc:
        raise DeclarationError(f"{where}: {exc}") from exc


def _expr(value, coords: CoordinateSystem, where: str) -> Expr:
    if isinstance(value, int) and not isinstance(value, bool):
        value = str(value)
    if not isinstance(value, str):
        raise DeclarationError(f"{where}: expected an expression string, got {value!r}")
    try:
        return coords.parse(value)
    except GlacalcError as exc:
        raise DeclarationError(f"{where}: {exc}") from exc


def _matrix(value, rows: int, cols: int, coords: CoordinateSystem, where: str) -> ExprMatrix:
    if not isinstance(value, list) or len(value) != rows:
        raise DeclarationError(f"{where}: expected {rows} rows")
    data = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != cols:
            raise DeclarationError(f"{where}: row {i + 1} must have {cols} entries")
        data.append([_expr(v, coords, f"{where}[{i + 1}][{j + 1}]") for j, v in enumerate(row)])
    return ExprMatrix(coords, data, cols=cols)


def _vector(value, n: int, coords: CoordinateSystem, where: str) -> List[Expr]:
    if not isinstance(value, list) or len(value) != n:
        raise DeclarationError(f"{where}: expected {n} expressions")
    return [_expr(v, coords, f"{where}[{i + 1}]") for i, v in enumerate(value)]


def _int(value, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise DeclarationError(f"{where}: expected an integer")
    return value


def _structure(records, p: int, coords: CoordinateSystem, where: str) -> Dict:
    if not isinstance(records, list):
        raise DeclarationError(f"{where}: structure must be a list")
    out = {}
    for k, rec in enumerate(records):
        here = f"{where}.structure[{k + 1}]"
        if not isinstance(rec, dict):
            raise DeclarationError(f"{here}: expected an object")
        _check_fields(rec, {"gamma", "alpha", "beta", "expr"}, {"gamma", "alpha", "beta", "expr"}, here)
        g, a, b = (_int(rec[f], f"{here}.{f}") for f in ("gamma", "alpha", "beta"))
        if not all(1 <= v <= p for v in (g, a, b)):
            raise DeclarationError(f"{here}: indices must lie in 1..{p}")
        if a >= b:
            raise DeclarationError(f"{here}: need alpha < beta")
        if (g - 1, a - 1, b - 1) in out:
            raise DeclarationError(f"{here}: duplicate entry")
        out[(g - 1, a - 1, b - 1)] = _expr(rec["expr"], coords, here)
    return out


@dataclass
class AlgebroidDeclaration:
    """A loaded algebroid file; ``spec`` is set for generalized declarations."""

    algebra: FrameAlgebra
    spec: Optional[GeneralizedLieAlgebroidSpec] = None
    path: Optional[str] = None

    @property
    def pullback(self) -> FrameAlgebra:
        """Algebra carrying connections and IDS (the pull-back, or the algebra itself)."""
        return pullback_algebroid(self.spec) if self.spec is not None else self.algebra


def algebroid_from_dict(data: dict, where: str = "algebroid") -> AlgebroidDeclaration:
    generalized = "M_coords" in data
    if generalized:
        _check_fields(data, _GENERALIZED, {"base_coords", "rank", "M_coords", "h", "eta", "rho"}, where)
    else:
        _check_fields(data, _PLAIN, {"base_coords", "rank", "anchor"}, where)
    N = _coords(data["base_coords"], f"{where}.base_coords")
    p = _int(data["rank"], f"{where}.rank")
    if p < 1:
        raise DeclarationError(f"{where}.rank: must be at least 1")
    frame = data.get("frame")
    if frame is not None:
        if not isinstance(frame, list) or len(frame) != p or not all(isinstance(f, str) for f in frame):
            raise DeclarationError(f"{where}.frame: expected {p} names")
    structure = _structure(data.get("structure", []), p, N, where)
    try:
        if not generalized:
            anchor = _matrix(data["anchor"], N.dimension, p, N, f"{where}.anchor")
            return AlgebroidDeclaration(FrameAlgebra(N, anchor, structure, rank=p, frame_names=frame))
        M = _coords(data["M_coords"], f"{where}.M_coords")
        rho = _matrix(data["rho"], M.dimension, p, N, f"{where}.rho")
        h = _vector(data["h"], N.dimension, M, f"{where}.h")
        eta = _vector(data["eta"], M.dimension, N, f"{where}.eta")
        inv = data.get("h_eta_inverse")
        if inv is not None:
            inv = _vector(inv, N.dimension, N, f"{where}.h_eta_inverse")
        spec = GeneralizedLieAlgebroidSpec(M, N, p, rho, tuple(h), tuple(eta), structure,
                                           tuple(inv) if inv is not None else None,
                                           tuple(frame) if frame else None)
        return AlgebroidDeclaration(as_frame_algebra(spec), spec)
    except DeclarationError:
        raise
    except GlacalcError as exc:
        raise DeclarationError(f"{where}: {exc}") from exc


def load_algebroid(path: str) -> AlgebroidDeclaration:
    decl = algebroid_from_dict(_read(path), os.path.basename(path))
    decl.path = path
    return decl


def connection_from_dict(data: dict, algebra: FrameAlgebra, where: str = "connection") -> Connection:
    _check_fields(data, {"gamma", "algebroid"}, {"gamma"}, where)
    records = data["gamma"]
    if not isinstance(records, list):
        raise DeclarationError(f"{where}.gamma: expected a list")
    p = algebra.rank
    table = {}
    for k, rec in enumerate(records):
        here = f"{where}.gamma[{k + 1}]"
        if not isinstance(rec, dict):
            raise DeclarationError(f"{here}: expected an object")
        _check_fields(rec, {"a", "b", "c", "expr"}, {"a", "b", "c", "expr"}, here)
        a, b, c = (_int(rec[f], f"{here}.{f}") for f in ("a", "b", "c"))
        if not all(1 <= v <= p for v in (a, b, c)):
            raise DeclarationError(f"{here}: indices must lie in 1..{p}")
        if (a - 1, b - 1, c - 1) in table:
            raise DeclarationError(f"{here}: duplicate entry")
        table[(a - 1, b - 1, c - 1)] = _expr(rec["expr"], algebra.coords, here)
    return Connection(algebra, table)


def load_connection(path: str, algebra: FrameAlgebra) -> Connection:
    return connection_from_dict(_read(path), algebra, os.path.basename(path))


def ids_from_dict(data: dict, algebra: FrameAlgebra, where: str = "ids") -> IDS:
    _check_fields(data, {"span", "algebroid"}, {"span"}, where)
    span = data["span"]
    if not isinstance(span, list) or not span or not isinstance(span[0], list):
        raise DeclarationError(f"{where}.span: expected a p x r array")
    M = _matrix(span, algebra.rank, len(span[0]), algebra.coords, f"{where}.span")
    try:
        return IDS(algebra, M)
    except GlacalcError as exc:
        raise DeclarationError(f"{where}: {exc}") from exc


def ids_algebroid_path(path: str) -> Optional[str]:
    """The ``algebroid`` reference of an IDS or connection file, resolved against its directory."""
    ref = _read(path).get("algebroid")
    if ref is None:
        return None
    if not isinstance(ref, str):
        raise DeclarationError(f"{os.path.basename(path)}.algebroid: expected a path")
    return os.path.normpath(os.path.join(os.path.dirname(path), ref))


def load_ids(path: str, algebra: FrameAlgebra) -> IDS:
    return ids_from_dict(_read(path), algebra, os.path.basename(path))


def algebroid_to_dict(A: FrameAlgebra) -> Dict[str, Any]:
    """Plain declaration for ``A`` (reloadable with :func:`algebroid_from_dict`)."""
    return {
        "base_coords": list(A.coords.names),
        "rank": A.rank,
        "frame": list(A.frame_names),
        "anchor": [[str(A.anchor[i, a]) for a in range(A.rank)] for i in range(A.dimension)],
        "structure": [{"gamma": g + 1, "alpha": a + 1, "beta": b + 1, "expr": str(v)}
                      for (g, a, b), v in A.structure_items()],
    }


def connection_to_dict(C: Connection) -> Dict[str, Any]:
    return {"gamma": [{"a": a + 1, "b": b + 1, "c": c + 1, "expr": str(v)} for (a, b, c), v in C.items()]}


def ids_to_dict(D: IDS) -> Dict[str, Any]:
    return {"span": [[str(D.span[i, j]) for j in range(D.r)] for i in range(D.p)]}


def dump(data: Union[dict, list], path: str):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")
