import json
from fractions import Fraction

import numpy as np
import pytest

from testbench.core.exceptions import ArtifactIOError
from testbench.domain.operators import LrsWitness, Symbol
from testbench.domain.spaces import Weight
from testbench.harmonic.torus_grid import random_signal
from testbench.harmonic.variation import atomic_decompose
from testbench.infrastructure.serialization import (
    decomposition_from_dict,
    decomposition_to_dict,
    format_float,
    read_json,
    read_rows,
    read_signal_csv,
    read_symbol_csv,
    read_weight_csv,
    to_jsonable,
    witness_from_dict,
    witness_to_dict,
    write_json,
    write_signal_csv,
    write_symbol_csv,
    write_weight_csv,
)


def test_format_float_is_lossless():
    assert format_float(0.1) == "0.1"
    assert float(format_float(1 / 3)) == 1 / 3
    assert format_float(float("inf")) == "inf"


def test_to_jsonable_handles_numeric_types():
    payload = {
        "fraction": Fraction(3, 2),
        "array": np.array([1.0, 2.0]),
        "complex": 1 + 2j,
        "real_complex": 3 + 0j,
        "numpy_scalar": np.float64(0.5),
        "infinite": float("inf"),
    }
    result = to_jsonable(payload)
    assert result == {
        "fraction": "3/2",
        "array": [1.0, 2.0],
        "complex": {"re": 1.0, "im": 2.0},
        "real_complex": 3.0,
        "numpy_scalar": 0.5,
        "infinite": "inf",
    }
    json.dumps(result)


def test_signal_csv_is_lossless(tmp_path, rng):
    signal = random_signal(rng, 16, (2,))
    path = write_signal_csv(signal, tmp_path / "signal.csv")
    header = read_rows(path)[0].keys()
    assert list(header) == ["j", "x", "re_0", "im_0", "re_1", "im_1"]
    restored = read_signal_csv(path, (2,))
    assert np.array_equal(restored.samples, signal.samples)


def test_weight_and_symbol_csv(tmp_path, rng):
    weight = Weight(values=rng.uniform(0.5, 2.0, 16))
    restored = read_weight_csv(write_weight_csv(weight, tmp_path / "weight.csv"))
    assert np.array_equal(restored.values, weight.values)

    entries = rng.standard_normal((16, 2, 2)) + 1j * rng.standard_normal((16, 2, 2))
    symbol = Symbol(n_points=16, entries=entries)
    restored = read_symbol_csv(write_symbol_csv(symbol, tmp_path / "symbol.csv"), 2)
    assert np.array_equal(restored.entries, symbol.entries)
    assert restored.at(-8)[0, 1] == entries[0, 0, 1]


def test_malformed_files_raise(tmp_path):
    bad = tmp_path / "weight.csv"
    bad.write_text("j,w\n0,abc\n", encoding="utf-8")
    with pytest.raises(ArtifactIOError):
        read_weight_csv(bad)
    with pytest.raises(ArtifactIOError):
        read_rows(tmp_path / "missing.csv")
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(ArtifactIOError):
        read_json(broken)


def test_decomposition_and_witness_dicts(tmp_path, scalar_block):
    decomposition = atomic_decompose(scalar_block, 1.5, 2)
    path = write_json(decomposition_to_dict(decomposition), tmp_path / "atoms.json")
    restored = decomposition_from_dict(read_json(path))
    interval = scalar_block.interval
    assert np.allclose(restored.reconstruct(interval), decomposition.reconstruct(interval))
    assert restored.method == decomposition.method

    witness = LrsWitness(
        selection=[[0, 1]], inputs=np.array([[[1.0, 1j], [2.0, 0.0]]]), lhs=2.0, rhs=1.0
    )
    payload = json.loads(json.dumps(witness_to_dict(witness)))
    assert payload["grid"] == [1, 2]
    restored = witness_from_dict(payload)
    assert np.array_equal(restored.inputs, witness.inputs)
    assert restored.bound == 2.0
