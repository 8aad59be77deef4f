"""
CSV and JSON codecs for signals, weights, symbols, decompositions and witnesses.

Floats are written with `repr` so a write followed by a read is lossless, and
every writer emits rows in a fixed order.
"""

import csv
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

import numpy as np
from pydantic import BaseModel

from testbench.core.exceptions import ArtifactIOError
from testbench.domain.operators import Atom, AtomicDecomposition, LrsWitness, Symbol
from testbench.domain.signals import FrequencyInterval, TorusSignal
from testbench.domain.spaces import Weight

PathLike = Union[str, Path]


def format_float(value: float) -> str:
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def to_jsonable(value: Any) -> Any:
    """Plain JSON types for reports: models, arrays, Fractions and complex numbers."""
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump())
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        if value.imag == 0:
            return to_jsonable(value.real)
        return {"re": to_jsonable(value.real), "im": to_jsonable(value.imag)}
    if isinstance(value, float) and not math.isfinite(value):
        return format_float(value) if not math.isnan(value) else "nan"
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value  # enums
    return value


def _complex_columns(prefix: str, count: int) -> List[str]:
    if count == 1:
        return [f"{prefix}re", f"{prefix}im"]
    columns = []
    for index in range(count):
        columns += [f"{prefix}re_{index}", f"{prefix}im_{index}"]
    return columns


def _complex_cells(values: np.ndarray) -> List[str]:
    cells = []
    for value in np.asarray(values, dtype=complex).reshape(-1):
        cells += [format_float(value.real), format_float(value.imag)]
    return cells


def write_rows(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise ArtifactIOError(f"cannot write {target}: {exc}") from exc
    return target


def read_rows(path: PathLike) -> List[Dict[str, str]]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            return list(csv.DictReader(handle))
    except OSError as exc:
        raise ArtifactIOError(f"cannot read {path}: {exc}") from exc


def _complex_from_row(row: Dict[str, str], prefix: str, count: int) -> np.ndarray:
    names = _complex_columns(prefix, count)
    try:
        values = [
            complex(float(row[names[2 * i]]), float(row[names[2 * i + 1]])) for i in range(count)
        ]
    except (KeyError, ValueError) as exc:
        raise ArtifactIOError(f"malformed row {row}: {exc}") from exc
    return np.array(values, dtype=complex)


def write_signal_csv(signal: TorusSignal, path: PathLike) -> Path:
    """Columns j, x, then re/im per component."""
    flat = signal.flat()
    header = ["j", "x"] + _complex_columns("", signal.dimension)
    rows = (
        [j, format_float(j / signal.n_points)] + _complex_cells(flat[j])
        for j in range(signal.n_points)
    )
    return write_rows(path, header, rows)


def read_signal_csv(path: PathLike, dim_shape=()) -> TorusSignal:
    rows = read_rows(path)
    count = int(np.prod(dim_shape)) if dim_shape else 1
    samples = np.array([_complex_from_row(row, "", count) for row in rows])
    return TorusSignal.from_samples(samples.reshape((len(rows),) + tuple(dim_shape)))


def write_weight_csv(weight: Weight, path: PathLike) -> Path:
    rows = ([j, format_float(value)] for j, value in enumerate(weight.values))
    return write_rows(path, ["j", "w"], rows)


def read_weight_csv(path: PathLike) -> Weight:
    rows = read_rows(path)
    try:
        values = [float(row["w"]) for row in rows]
    except (KeyError, ValueError) as exc:
        raise ArtifactIOError(f"malformed weight file {path}: {exc}") from exc
    return Weight(values=values, metadata={"family": "file", "source": str(path)})


def write_symbol_csv(symbol: Symbol, path: PathLike) -> Path:
    """One row per frequency k; matrix entries are flattened row-major."""
    count = symbol.dimension**2
    header = ["k"] + _complex_columns("", count)
    half = symbol.n_points // 2
    rows = ([k - half] + _complex_cells(symbol.entries[k]) for k in range(symbol.n_points))
    return write_rows(path, header, rows)


def read_symbol_csv(path: PathLike, dimension: int = 1) -> Symbol:
    rows = read_rows(path)
    values = np.array([_complex_from_row(row, "", dimension**2) for row in rows])
    entries = values.reshape((len(rows), dimension, dimension))
    return Symbol(n_points=len(rows), entries=entries, metadata={"source": str(path)})


def decomposition_to_dict(decomposition: AtomicDecomposition) -> Dict[str, Any]:
    return {
        "method": decomposition.method,
        "target_q": decomposition.target_q,
        "l1_mass": decomposition.l1_mass,
        "lambdas": [float(value) for value in decomposition.lambdas],
        "atoms": [
            {
                "intervals": [[interval.lo, interval.hi] for interval in atom.intervals],
                "coefficients": to_jsonable(atom.coefficients),
            }
            for atom in decomposition.atoms
        ],
    }


def _complex_array(value) -> np.ndarray:
    if isinstance(value, dict):
        return np.complex128(complex(value["re"], value["im"]))
    if isinstance(value, list):
        return np.array([_complex_array(item) for item in value], dtype=complex)
    return np.complex128(value)


def decomposition_from_dict(payload: Dict[str, Any]) -> AtomicDecomposition:
    atoms = [
        Atom(
            intervals=[FrequencyInterval(lo=lo, hi=hi) for lo, hi in atom["intervals"]],
            coefficients=_complex_array(atom["coefficients"]),
        )
        for atom in payload["atoms"]
    ]
    return AtomicDecomposition(
        lambdas=payload["lambdas"],
        atoms=atoms,
        target_q=payload["target_q"],
        method=payload.get("method", "layered"),
    )


def witness_to_dict(witness: LrsWitness) -> Dict[str, Any]:
    return {
        "grid": list(witness.grid),
        "selection": witness.selection.tolist(),
        "inputs": to_jsonable(witness.inputs),
        "lhs": witness.lhs,
        "rhs": witness.rhs,
    }


def witness_from_dict(payload: Dict[str, Any]) -> LrsWitness:
    return LrsWitness(
        selection=payload["selection"],
        inputs=_complex_array(payload["inputs"]),
        lhs=payload.get("lhs", 0.0),
        rhs=payload.get("rhs", 1.0),
    )


def write_json(payload: Any, path: PathLike) -> Path:
    target = Path(path)
    text = json.dumps(to_jsonable(payload), indent=2, sort_keys=True)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text + "\n", encoding="utf-8")
    except OSError as exc:
        raise ArtifactIOError(f"cannot write {target}: {exc}") from exc
    return target


def read_json(path: PathLike) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ArtifactIOError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ArtifactIOError(f"{path} is not valid JSON: {exc}") from exc
