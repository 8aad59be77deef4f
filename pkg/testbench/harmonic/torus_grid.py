"""
Discrete torus: transforms, the dyadic partition and Fourier projections.

The forward transform carries the 1/N factor, so Parseval reads
(1/N) Σ_j |f_j|² = Σ_k |f̂(k)|².
"""

from typing import Iterable, List

import numpy as np

from testbench.core.exceptions import InvalidParameterError
from testbench.domain.signals import (
    DyadicPartition,
    FrequencyInterval,
    Spectrum,
    TorusSignal,
    is_power_of_two,
)


def frequencies(n_points: int) -> np.ndarray:
    """Frequencies in FFT storage order (0, 1, ..., N/2-1, -N/2, ..., -1)."""
    return np.fft.fftfreq(n_points, d=1.0 / n_points).round().astype(int)


def dft(signal: TorusSignal) -> Spectrum:
    coefficients = np.fft.fft(signal.samples, axis=0) / signal.n_points
    return Spectrum(
        n_points=signal.n_points,
        dim_shape=signal.dim_shape,
        coefficients=np.fft.fftshift(coefficients, axes=0),
    )


def idft(spectrum: Spectrum) -> TorusSignal:
    unshifted = np.fft.ifftshift(spectrum.coefficients, axes=0)
    samples = np.fft.ifft(unshifted, axis=0) * spectrum.n_points
    return TorusSignal(n_points=spectrum.n_points, dim_shape=spectrum.dim_shape, samples=samples)


def dyadic_partition(n_points: int) -> DyadicPartition:
    """
    Blocks {-N/2}, -[2^k, 2^{k+1}), {0}, [2^k, 2^{k+1}) for k = 0 .. log2(N)-2.

    Negative blocks are the integer points of (-2^{k+1}, -2^k].
    """
    if n_points < 8 or not is_power_of_two(n_points):
        raise InvalidParameterError(f"n_points must be a power of two >= 8, got {n_points}")
    top = int(np.log2(n_points)) - 2
    half = n_points // 2
    blocks = [FrequencyInterval(lo=-half, hi=-half + 1)]
    for k in range(top, -1, -1):
        blocks.append(FrequencyInterval(lo=-(2 ** (k + 1)) + 1, hi=-(2**k) + 1))
    blocks.append(FrequencyInterval(lo=0, hi=1))
    for k in range(top + 1):
        blocks.append(FrequencyInterval(lo=2**k, hi=2 ** (k + 1)))
    return DyadicPartition(n_points=n_points, blocks=blocks)


def check_interval(interval: FrequencyInterval, n_points: int) -> None:
    if not interval.fits(n_points):
        raise InvalidParameterError(
            f"interval {interval} outside the frequency range of N={n_points}"
        )


def spectral_mask(interval: FrequencyInterval, n_points: int) -> np.ndarray:
    """Indicator of the interval in FFT storage order."""
    check_interval(interval, n_points)
    k = frequencies(n_points)
    return (k >= interval.lo) & (k < interval.hi)


def project(signal: TorusSignal, interval: FrequencyInterval) -> TorusSignal:
    mask = spectral_mask(interval, signal.n_points)
    return _apply_mask(signal, mask)


def project_many(signal: TorusSignal, intervals: Iterable[FrequencyInterval]) -> np.ndarray:
    """
    S_I f for a list of intervals at once.

    Returns:
        array of shape (len(intervals), N, *dim_shape)
    """
    intervals = list(intervals)
    masks = np.stack([spectral_mask(interval, signal.n_points) for interval in intervals])
    spectrum = np.fft.fft(signal.samples, axis=0)
    expand = (slice(None), slice(None)) + (None,) * len(signal.dim_shape)
    return np.fft.ifft(masks[expand] * spectrum[None], axis=1)


def _apply_mask(signal: TorusSignal, mask: np.ndarray) -> TorusSignal:
    spectrum = np.fft.fft(signal.samples, axis=0)
    expand = (slice(None),) + (None,) * len(signal.dim_shape)
    samples = np.fft.ifft(spectrum * mask[expand], axis=0)
    return TorusSignal(n_points=signal.n_points, dim_shape=signal.dim_shape, samples=samples)


def translate(signal: TorusSignal, shift: int) -> TorusSignal:
    """Cyclic shift: result[j] = samples[j - shift]."""
    samples = np.roll(signal.samples, int(shift) % signal.n_points, axis=0)
    return TorusSignal(n_points=signal.n_points, dim_shape=signal.dim_shape, samples=samples)


def random_signal(rng: np.random.Generator, n_points: int, dim_shape=()) -> TorusSignal:
    """Complex Gaussian samples."""
    shape = (n_points,) + tuple(dim_shape)
    samples = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return TorusSignal(n_points=n_points, dim_shape=tuple(dim_shape), samples=samples)


def split_across_blocks(
    intervals: Iterable[FrequencyInterval], partition: DyadicPartition
) -> List[FrequencyInterval]:
    """Cut every interval at block boundaries so each piece lies in one block."""
    pieces = []
    for interval in intervals:
        for block in partition.blocks:
            lo, hi = max(interval.lo, block.lo), min(interval.hi, block.hi)
            if lo < hi:
                pieces.append(FrequencyInterval(lo=lo, hi=hi))
    return pieces
