"""JSON/CSV interchange formats.

Complex entries are written as [re, im] pairs. Floats go through ``repr``
(shortest round-trip decimal), so a dump/load cycle is bit-exact.
"""

from __future__ import annotations

import hashlib
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from .errors import ValidationError


class FormatError(ValidationError):
    pass


def _finite(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)  # JSON has no inf/nan; keep them readable
    return x


def clean(obj):
    """Convert numpy scalars/arrays into plain JSON-able Python objects."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, np.generic):
        return _finite(obj.item())
    return _finite(obj)


def matrix_to_json(U) -> dict:
    A = np.asarray(U, dtype=complex)
    rows = [[[float(z.real), float(z.imag)] for z in row] for row in A]
    return {"n": int(A.shape[0]), "rows": rows}


def matrix_from_json(doc: dict) -> np.ndarray:
    try:
        rows = doc["rows"]
        A = np.array([[complex(float(re), float(im)) for re, im in row] for row in rows])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad matrix JSON: {exc}") from exc
    if A.ndim != 2 or A.shape[1] != 2:
        raise FormatError(f"matrix rows must be pairs of [re, im], got shape {A.shape}")
    if "n" in doc and doc["n"] != A.shape[0]:
        raise FormatError(f"declared n={doc['n']} but found {A.shape[0]} rows")
    return A


def config_to_json(cfg) -> dict:
    w = np.asarray(cfg.w if hasattr(cfg, "w") else cfg, dtype=float)
    return {"n": int(w.shape[0]), "w": w.tolist()}


def config_from_json(doc: dict) -> np.ndarray:
    try:
        W = np.array(doc["w"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad config JSON: {exc}") from exc
    if W.ndim != 2 or W.shape[1] != 3:
        raise FormatError(f"config vectors must be 3D, got shape {W.shape}")
    if "n" in doc and doc["n"] != W.shape[0]:
        raise FormatError(f"declared n={doc['n']} but found {W.shape[0]} vectors")
    return W


def polygon_from_json(doc: dict, normalize: bool = False):
    from .polygon import Polygon

    if "edges" in doc:
        return Polygon.from_edges(doc["edges"], normalize=normalize)
    if "vertices" in doc:
        return Polygon.from_vertices(doc["vertices"], normalize=normalize)
    raise FormatError("polygon JSON needs 'edges' or 'vertices'")


def read_json(path) -> tuple[dict, str]:
    """Load a JSON document and return it with the sha256 of the raw bytes."""
    raw = Path(path).read_bytes()
    return json.loads(raw), hashlib.sha256(raw).hexdigest()


def dumps(doc) -> str:
    return json.dumps(clean(doc), indent=2, allow_nan=False)


def write_json(path, doc) -> None:
    Path(path).write_text(dumps(doc) + "\n")


class Manifest:
    """Provenance block embedded in every file the CLI writes."""

    def __init__(self, command: str, argv: list[str], version: str, format_version: int):
        self.doc = {
            "command": command,
            "argv": list(argv),
            "version": version,
            "format_version": format_version,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "seeds": {},
            "inputs": {},
            "outputs": [],
        }
        self._t0 = time.perf_counter()

    def seed(self, name: str, value) -> None:
        self.doc["seeds"][name] = value

    def input(self, path, digest: str) -> None:
        self.doc["inputs"][str(path)] = digest

    def output(self, path) -> None:
        self.doc["outputs"].append(str(path))

    def finish(self) -> dict:
        self.doc["wall_clock_s"] = time.perf_counter() - self._t0
        return dict(self.doc)
