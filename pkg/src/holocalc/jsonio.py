"""File formats and deterministic report serialization.

All numbers cross the wire as JSON; complex scalars are [re, im] pairs.
Reports are emitted by a small serializer that prints every float with 17
significant digits, so identical inputs produce byte-identical documents and
every emitted value re-parses to the same double.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .chains import ChainComplex, ChainEndo
from .series import BUILTIN_NAMES, PowerSeries

__all__ = [
    "InputError",
    "complex_from_json",
    "dumps",
    "endo_from_json",
    "function_from_json",
    "load_document",
    "matrix_from_json",
    "matrix_to_json",
    "number_from_json",
    "number_to_json",
]


class InputError(ValueError):
    """Malformed input document."""


def load_document(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(
            f"malformed JSON in {path} at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None


def number_from_json(obj, what: str = "number") -> complex:
    """Accept [re, im] pairs or bare reals."""
    if isinstance(obj, (int, float)):
        return complex(obj)
    if (isinstance(obj, list) and len(obj) == 2
            and all(isinstance(c, (int, float)) for c in obj)):
        return complex(obj[0], obj[1])
    raise InputError(f"{what} must be a real or an [re, im] pair, got {obj!r}")


def number_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def function_from_json(obj) -> PowerSeries:
    """One of {"builtin": name}, {"coeffs": [...]}, {"recurrence": {...}}."""
    if not isinstance(obj, dict):
        raise InputError("function spec must be a JSON object")
    keys = {"builtin", "coeffs", "recurrence"} & obj.keys()
    if len(keys) != 1:
        raise InputError("function spec needs exactly one of builtin/coeffs/recurrence")
    if "builtin" in obj:
        name = obj["builtin"]
        if name not in BUILTIN_NAMES:
            raise InputError(f"unknown builtin {name!r}; choose from {BUILTIN_NAMES}")
        return PowerSeries.builtin(name)
    if "coeffs" in obj:
        if not isinstance(obj["coeffs"], list):
            raise InputError("coeffs must be a list")
        coeffs = [number_from_json(c, "coefficient") for c in obj["coeffs"]]
        return PowerSeries.from_coeffs(coeffs)
    rec = obj["recurrence"]
    if not isinstance(rec, dict) or not {"a0", "num", "den"} <= rec.keys():
        raise InputError("recurrence spec needs a0, num and den")
    if not (isinstance(rec["num"], list) and isinstance(rec["den"], list)):
        raise InputError("recurrence num/den must be coefficient lists")
    return PowerSeries.from_recurrence(
        number_from_json(rec["a0"], "a0"),
        [float(c) for c in rec["num"]],
        [float(c) for c in rec["den"]],
    )


def matrix_from_json(obj) -> np.ndarray:
    """Square matrix: {"dim": n, "entries": [[re, im], ...]} row-major."""
    if not isinstance(obj, dict) or "dim" not in obj or "entries" not in obj:
        raise InputError("matrix must be an object with dim and entries")
    n = obj["dim"]
    if not isinstance(n, int) or n < 0:
        raise InputError("matrix dim must be a nonnegative integer")
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != n * n:
        raise InputError(f"matrix needs {n * n} entries, got {len(entries) if isinstance(entries, list) else 'non-list'}")
    flat = [number_from_json(e, "matrix entry") for e in entries]
    return np.array(flat, dtype=complex).reshape(n, n)


def matrix_to_json(mat: np.ndarray) -> dict:
    a = np.asarray(mat, dtype=complex)
    return {"dim": int(a.shape[0]),
            "entries": [number_to_json(z) for z in a.ravel()]}


def _rect_from_json(obj, what: str) -> np.ndarray:
    if not isinstance(obj, dict) or not {"rows", "cols", "entries"} <= obj.keys():
        raise InputError(f"{what} must be an object with rows, cols and entries")
    r, c = obj["rows"], obj["cols"]
    if not (isinstance(r, int) and isinstance(c, int)) or r < 0 or c < 0:
        raise InputError(f"{what} rows/cols must be nonnegative integers")
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != r * c:
        raise InputError(f"{what} needs {r * c} entries")
    flat = [number_from_json(e, f"{what} entry") for e in entries]
    return np.array(flat, dtype=complex).reshape(r, c) if r * c else np.zeros((r, c), complex)


def complex_from_json(obj, grading: str | None = None) -> ChainComplex:
    """Chain complex document; cohomological input is reindexed to homological.

    {"d_min": i0, "dims": [...], "differentials": [{rows, cols, entries}, ...],
     "grading": "homological" | "cohomological"}; differentials[j] maps the
    degree above into degree d_min + j (for cohomological input, degree
    d_min + j into the degree above).
    """
    if not isinstance(obj, dict) or not {"d_min", "dims", "differentials"} <= obj.keys():
        raise InputError("complex must be an object with d_min, dims and differentials")
    mode = grading or obj.get("grading", "homological")
    if mode not in ("homological", "cohomological"):
        raise InputError("grading must be homological or cohomological")
    d_min = obj["d_min"]
    if not isinstance(d_min, int):
        raise InputError("d_min must be an integer")
    dims = obj["dims"]
    if not isinstance(dims, list) or not all(isinstance(d, int) for d in dims):
        raise InputError("dims must be a list of integers")
    diffs = [_rect_from_json(m, f"differential {j}") for j, m in enumerate(obj["differentials"])]
    if mode == "cohomological":
        # degree j becomes -j: reverse the ladder, maps keep their matrices
        dims = list(reversed(dims))
        diffs = list(reversed(diffs))
        d_min = -(d_min + len(dims) - 1)
    try:
        return ChainComplex(d_min, tuple(dims), tuple(diffs))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def endo_from_json(obj, dims) -> ChainEndo:
    """{"maps": [matrix, ...]} aligned with the complex dims."""
    if not isinstance(obj, dict) or "maps" not in obj or not isinstance(obj["maps"], list):
        raise InputError("endomorphism must be an object with a maps list")
    if len(obj["maps"]) != len(dims):
        raise InputError("endomorphism needs one map per degree")
    maps = []
    for m, d in zip(obj["maps"], dims):
        a = matrix_from_json(m)
        if a.shape != (d, d):
            raise InputError(f"endomorphism map must be {d}x{d}")
        maps.append(a)
    try:
        return ChainEndo(tuple(maps))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(float(x), ".17g")


def dumps(doc, indent: int = 0) -> str:
    """Serialize a report with fixed float formatting (17 significant digits)."""
    pad = "  " * indent
    if isinstance(doc, dict):
        if not doc:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {dumps(v, indent + 1)}'
                 for k, v in doc.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(doc, (list, tuple)):
        if not doc:
            return "[]"
        body = ", ".join(dumps(v, indent + 1) for v in doc)
        if len(body) <= 88:
            return f"[{body}]"
        items = [f"{pad}  {dumps(v, indent + 1)}" for v in doc]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(doc, bool) or doc is None:
        return json.dumps(doc)
    if isinstance(doc, (int, np.integer)):
        return str(int(doc))
    if isinstance(doc, (float, np.floating)):
        return _format_float(float(doc))
    if isinstance(doc, str):
        return json.dumps(doc)
    raise TypeError(f"cannot serialize {type(doc)!r}")
