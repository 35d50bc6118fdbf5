"""
Canonical JSON and CSV output.

Floats are written with 17 significant digits, dictionaries keep insertion
order and series terms are emitted in graded-lexicographic order, so emitting
a re-read payload reproduces the same bytes.
"""
import csv
import dataclasses
import io
import json
import math
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from src.vage_spaces.errors import UsageError
from src.vage_spaces.algebra.linsys import Realization, RingMatrix
from src.vage_spaces.algebra.series import Series
from src.vage_spaces.interfaces.weight import Weight
from src.vage_spaces.monoid.multi_index import MultiIndex, TruncationSpec


def format_float(value: float) -> str:
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    if value == 0.0:
        return "0"
    return "%.17g" % value


def series_to_json(f: Series) -> Dict[str, Any]:
    return {
        "window": f.window.to_json(),
        "terms": [
            {"alpha": alpha.to_json(), "re": c.real, "im": c.imag}
            for alpha, c in f.terms.items()
        ],
    }


def series_from_json(payload: Any, window: Optional[TruncationSpec] = None) -> Series:
    if not isinstance(payload, dict) or "terms" not in payload:
        raise UsageError("series JSON must be an object with 'window' and 'terms'")
    if "window" in payload:
        window = TruncationSpec.from_json(payload["window"])
    if window is None:
        raise UsageError("series JSON has no window")
    terms = {}
    for term in payload["terms"]:
        try:
            alpha = MultiIndex.from_json(term["alpha"])
            terms[alpha] = terms.get(alpha, 0.0) + complex(float(term.get("re", 0.0)), float(term.get("im", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad series term {term!r}") from exc
    return Series.from_terms(terms, window)


def matrix_to_json(m: RingMatrix) -> List[List[Dict[str, Any]]]:
    return [[series_to_json(entry) for entry in row] for row in m.to_grid()]


def matrix_from_json(payload: Any, window: TruncationSpec, cols: int = 0) -> RingMatrix:
    if not isinstance(payload, list) or any(not isinstance(row, list) for row in payload):
        raise UsageError("matrix JSON must be a list of rows")
    grid = [[series_from_json(entry, window) for entry in row] for row in payload]
    return RingMatrix.from_series(grid, window, cols=cols)


def realization_to_json(r: Realization) -> Dict[str, Any]:
    return {
        "window": r.window.to_json(),
        "A": matrix_to_json(r.a),
        "B": matrix_to_json(r.b),
        "C": matrix_to_json(r.c),
        "D": matrix_to_json(r.d),
    }


def _infer_window(payload: Dict[str, Any]) -> Optional[TruncationSpec]:
    if "window" in payload:
        return TruncationSpec.from_json(payload["window"])
    for key in ("D", "A", "B", "C"):
        for row in payload.get(key) or []:
            for entry in row:
                if isinstance(entry, dict) and "window" in entry:
                    return TruncationSpec.from_json(entry["window"])
    return None


def realization_from_json(payload: Any) -> Realization:
    if not isinstance(payload, dict) or not {"A", "B", "C", "D"} <= set(payload):
        raise UsageError("realization JSON must be an object with keys A, B, C and D")
    window = _infer_window(payload)
    if window is None:
        raise UsageError("realization JSON has no window")
    d = matrix_from_json(payload["D"], window)
    a = matrix_from_json(payload["A"], window)
    return Realization(
        a,
        matrix_from_json(payload["B"], window, cols=d.cols),
        matrix_from_json(payload["C"], window, cols=a.rows),
        d,
    )


def to_jsonable(value: Any) -> Any:
    """Convert library values (series, reports, numpy scalars...) to plain JSON data."""
    if isinstance(value, Series):
        return series_to_json(value)
    if isinstance(value, RingMatrix):
        return matrix_to_json(value)
    if isinstance(value, Realization):
        return realization_to_json(value)
    if isinstance(value, Weight):
        return value.to_spec()
    if isinstance(value, MultiIndex):
        return value.to_json()
    if isinstance(value, TruncationSpec):
        return value.to_json()
    if isinstance(value, Enum):
        return value.value if isinstance(value.value, str) else value.name
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    return value


def _encode(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_encode(v)}" for k, v in value.items()) + "}"
    if isinstance(value, list):
        return "[" + ", ".join(_encode(v) for v in value) + "]"
    raise UsageError(f"cannot encode {type(value).__name__} as JSON")


def dumps(value: Any) -> str:
    return _encode(to_jsonable(value))


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from exc


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, float) else v for v in row])
    return buffer.getvalue()
