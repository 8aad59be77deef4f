import itertools

import numpy as np
import pytest

from testbench.core.exceptions import InvalidParameterError
from testbench.domain.operators import BlockValues, Symbol
from testbench.domain.spaces import SpaceSpec
from testbench.harmonic.gauges import AbsoluteGauge, OperatorNormGauge
from testbench.harmonic.variation import (
    atomic_decompose,
    block_vs_norm,
    build_holder_family,
    holder_quantity,
    layered_decomposition,
    single_atom_decomposition,
    validate_decomposition,
    variation_path,
    variation_seminorm,
    vs_norm,
)


def brute_force_variation(block, s):
    """Maximum over every partition with both endpoints forced."""
    table = block.gauge.pairwise(block.entries)
    last = block.length - 1
    best = 0.0
    for size in range(last):
        for inner in itertools.combinations(range(1, last), size):
            path = (0,) + inner + (last,)
            total = sum(table[a, b] ** s for a, b in zip(path, path[1:]))
            best = max(best, total)
    return best ** (1.0 / s)


def test_variation_of_known_block(scalar_block):
    value, path = variation_path(scalar_block, 2)
    assert value == pytest.approx(np.sqrt(18.0))
    assert path == [0, 2, 3]
    assert variation_seminorm(scalar_block, 1) == pytest.approx(6.0)
    assert block_vs_norm(scalar_block, 2) == pytest.approx(3.0 + np.sqrt(18.0))
    assert block_vs_norm(scalar_block, "inf") == pytest.approx(3.0)


def test_degenerate_blocks(absolute_gauge):
    single = BlockValues(entries=[2.0 + 1.0j], gauge=absolute_gauge)
    assert variation_path(single, 2) == (0.0, [0])
    constant = BlockValues(entries=np.full(6, 1.5), gauge=absolute_gauge)
    assert variation_seminorm(constant, 3) == 0.0
    with pytest.raises(InvalidParameterError):
        variation_seminorm(constant, "inf")
    with pytest.raises(InvalidParameterError):
        variation_seminorm(constant, "1/2")


@pytest.mark.parametrize("s", [1.0, 1.5, 2.0, 3.0])
def test_dynamic_program_matches_brute_force_scalar(rng, absolute_gauge, s):
    for length in range(2, 11):
        entries = rng.standard_normal(length) + 1j * rng.standard_normal(length)
        block = BlockValues(entries=entries, gauge=absolute_gauge)
        expected = brute_force_variation(block, s)
        assert variation_seminorm(block, s) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("s", [1.25, 2.0])
def test_dynamic_program_matches_brute_force_matrix(rng, s):
    gauge = OperatorNormGauge(SpaceSpec.lp(2, 2))
    for length in (3, 6, 9):
        entries = rng.standard_normal((length, 2, 2))
        block = BlockValues(entries=entries, gauge=gauge)
        expected = brute_force_variation(block, s)
        assert variation_seminorm(block, s) == pytest.approx(expected, rel=1e-12)


def test_vs_norm_takes_sup_over_blocks(absolute_gauge):
    values = np.zeros(16)
    values[8 + 4 : 8 + 8] = [0.0, 2.0, 0.0, 2.0]  # block [4, 8)
    symbol = Symbol.scalar(values)
    expected = 2.0 + (3 * 2.0**2) ** 0.5
    assert vs_norm(symbol, 2, absolute_gauge) == pytest.approx(expected)


def test_holder_quantity_dominates_variation(scalar_block):
    report = holder_quantity(scalar_block, 1.0)
    assert report.quantity == pytest.approx(12.0)
    assert report.bound == pytest.approx(15.0)
    assert report.bound >= block_vs_norm(scalar_block, 1)
    with pytest.raises(InvalidParameterError):
        holder_quantity(scalar_block, 1.5)


def test_single_atom_of_constant_block(absolute_gauge):
    block = BlockValues(entries=np.full(5, -2.0), gauge=absolute_gauge, start=3)
    dec = single_atom_decomposition(block, 2)
    assert dec.lambdas == [pytest.approx(2.0)]
    assert np.allclose(dec.reconstruct(block.interval), block.entries)


def test_decomposition_requires_q_above_s(scalar_block):
    with pytest.raises(InvalidParameterError):
        atomic_decompose(scalar_block, 2, 2)


def test_layered_decomposition_reconstructs(rng, absolute_gauge):
    entries = np.cumsum(rng.standard_normal(32))
    block = BlockValues(entries=entries, gauge=absolute_gauge, start=16)
    dec = layered_decomposition(block, 1.5, 2.0)
    report = validate_decomposition(dec, block)
    assert report.max_reconstruction_error <= 1e-10
    assert all(check.mass <= 1 + 1e-9 for check in report.atoms)
    assert all(check.inside_block and check.disjoint for check in report.atoms)


def test_atomic_decomposition_is_valid(scalar_block):
    dec = atomic_decompose(scalar_block, 1.5, 2)
    report = validate_decomposition(dec, scalar_block)
    assert report.valid
    assert report.atom_bound_holds


def test_atoms_have_bounded_variation(rng):
    gauge = AbsoluteGauge()
    for _ in range(20):
        length = int(rng.integers(4, 40))
        cuts = np.sort(rng.choice(np.arange(1, length), size=min(5, length - 1), replace=False))
        bounds = np.concatenate(([0], cuts, [length]))
        values = rng.standard_normal(len(bounds) - 1)
        values /= np.sum(np.abs(values) ** 2) ** 0.5
        dense = np.concatenate([np.full(b - a, v) for a, b, v in zip(bounds, bounds[1:], values)])
        block = BlockValues(entries=dense, gauge=gauge)
        assert block_vs_norm(block, 2) <= 3 + 1e-12


def test_holder_family_members(rng):
    values = np.exp(1j * np.linspace(0, np.pi, 32))
    family = build_holder_family(Symbol.scalar(values), 0.5, 4)
    assert family.size > 0
    assert family.dimension == 1
    assert np.all(np.isfinite(family.matrices))
