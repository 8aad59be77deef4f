import numpy as np
import pytest
from pydantic import ValidationError

from testbench.core.exceptions import FrequencyOutOfRangeError, InvalidParameterError
from testbench.domain.operators import Symbol
from testbench.domain.signals import FrequencyInterval, TorusSignal
from testbench.harmonic.torus_grid import (
    dft,
    dyadic_partition,
    frequencies,
    idft,
    project,
    project_many,
    random_signal,
    split_across_blocks,
    translate,
)


def test_frequencies_storage_order():
    assert frequencies(8).tolist() == [0, 1, 2, 3, -4, -3, -2, -1]


def test_dft_of_pure_frequency():
    n = 16
    j = np.arange(n)
    signal = TorusSignal.from_samples(np.exp(2j * np.pi * 3 * j / n))
    spectrum = dft(signal)
    assert spectrum.at(3) == pytest.approx(1.0)
    others = np.delete(spectrum.coefficients, 3 + n // 2)
    assert np.allclose(others, 0.0, atol=1e-12)
    with pytest.raises(FrequencyOutOfRangeError):
        spectrum.at(8)


def test_symbol_lookup_stays_on_the_grid():
    symbol = Symbol.scalar(np.arange(8, dtype=float))
    assert symbol.at(-4)[0, 0] == 0
    assert symbol.at(3)[0, 0] == 7
    for k in (4, -5, 100):
        with pytest.raises(FrequencyOutOfRangeError):
            symbol.at(k)
    with pytest.raises(InvalidParameterError):
        symbol.at(-6)


def test_parseval_and_inverse(rng):
    signal = random_signal(rng, 32, (2,))
    spectrum = dft(signal)
    energy = np.mean(np.abs(signal.samples) ** 2, axis=0)
    assert np.allclose(energy, np.sum(np.abs(spectrum.coefficients) ** 2, axis=0))
    assert np.allclose(idft(spectrum).samples, signal.samples)


def test_dyadic_partition_blocks():
    partition = dyadic_partition(16)
    bounds = [(block.lo, block.hi) for block in partition.blocks]
    assert bounds == [(-8, -7), (-7, -3), (-3, -1), (-1, 0), (0, 1), (1, 2), (2, 4), (4, 8)]
    assert len(partition) == 8
    assert partition.block_index(5) == 7
    with pytest.raises(FrequencyOutOfRangeError):
        partition.block_index(8)
    assert partition.containing_block(FrequencyInterval(lo=2, hi=4)) == 6
    assert partition.containing_block(FrequencyInterval(lo=1, hi=3)) == -1


@pytest.mark.parametrize("n_points", [4, 12, 0])
def test_dyadic_partition_rejects_bad_sizes(n_points):
    with pytest.raises(InvalidParameterError):
        dyadic_partition(n_points)


def test_signal_validation():
    with pytest.raises(ValidationError):
        TorusSignal.from_samples(np.zeros(6))
    with pytest.raises(ValidationError):
        TorusSignal(n_points=8, samples=np.zeros(4))
    with pytest.raises(ValidationError):
        FrequencyInterval(lo=3, hi=3)


def test_block_projections_sum_to_signal(rng):
    signal = random_signal(rng, 64)
    partition = dyadic_partition(64)
    pieces = project_many(signal, partition.blocks)
    assert pieces.shape == (len(partition), 64)
    assert np.allclose(pieces.sum(axis=0), signal.samples)


def test_projection_is_idempotent(rng):
    signal = random_signal(rng, 32, (3,))
    interval = FrequencyInterval(lo=-5, hi=2)
    once = project(signal, interval)
    twice = project(once, interval)
    assert np.allclose(once.samples, twice.samples)
    assert np.allclose(project(signal, FrequencyInterval(lo=-16, hi=16)).samples, signal.samples)


def test_projection_outside_range_rejected(rng):
    signal = random_signal(rng, 16)
    with pytest.raises(InvalidParameterError):
        project(signal, FrequencyInterval(lo=0, hi=9))


def test_translate_commutes_with_projection(rng):
    signal = random_signal(rng, 32)
    shifted = translate(signal, 5)
    assert shifted.samples[5] == signal.samples[0]
    interval = FrequencyInterval(lo=2, hi=7)
    left = translate(project(signal, interval), 5).samples
    right = project(shifted, interval).samples
    assert np.allclose(left, right)


def test_split_across_blocks():
    pieces = split_across_blocks([FrequencyInterval(lo=-3, hi=5)], dyadic_partition(16))
    assert [(p.lo, p.hi) for p in pieces] == [(-3, -1), (-1, 0), (0, 1), (1, 2), (2, 4), (4, 5)]
