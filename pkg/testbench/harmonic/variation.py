"""
Variation norms, Hölder quantities and constructive atomic decompositions.

A block is a run of consecutive integer frequencies carrying scalar or matrix
values together with the gauge that measures them.
"""

from typing import List, Optional, Tuple

import numpy as np

from testbench.core.exceptions import InvalidParameterError
from testbench.core.logger import log
from testbench.domain.exponent import is_inf, parse_exponent
from testbench.domain.interfaces.gauge import Gauge
from testbench.domain.operators import (
    Atom,
    AtomicDecomposition,
    BlockValues,
    OperatorFamily,
    Symbol,
)
from testbench.domain.reports import AtomCheck, DecompositionReport, HolderReport
from testbench.domain.signals import FrequencyInterval
from testbench.domain.spaces import SpaceSpec
from testbench.harmonic.torus_grid import dyadic_partition

MAX_LAYERS = 60
RESIDUAL_TOLERANCE = 1e-12
MASS_TOLERANCE = 1e-9


def _finite_exponent(s, name: str = "s") -> float:
    value = parse_exponent(s)
    if is_inf(value) or value < 1:
        raise InvalidParameterError(f"{name} must be a finite exponent >= 1, got {s}")
    return float(value)


def variation_path(block: BlockValues, s) -> Tuple[float, List[int]]:
    """
    Exact s-variation of a block and a maximizing partition.

    best[i] = max_{j<i} best[j] + gauge(f_i - f_j)^s with the first and last
    index forced; ties go to the earliest j.

    Returns:
        (variation, partition indices)
    """
    exponent = _finite_exponent(s)
    length = block.length
    if length == 1:
        return 0.0, [0]
    powered = block.gauge.pairwise(block.entries) ** exponent
    best = np.zeros(length)
    parent = np.zeros(length, dtype=int)
    for i in range(1, length):
        candidates = best[:i] + powered[:i, i]
        j = int(np.argmax(candidates))
        best[i] = candidates[j]
        parent[i] = j
    path = [length - 1]
    while path[-1] != 0:
        path.append(int(parent[path[-1]]))
    return float(best[-1] ** (1.0 / exponent)), path[::-1]


def variation_seminorm(block: BlockValues, s) -> float:
    return variation_path(block, s)[0]


def block_vs_norm(block: BlockValues, s) -> float:
    """sup-gauge plus s-variation on one block; s = ∞ gives the sup alone."""
    sup = block.gauge.sup(block.entries)
    if is_inf(parse_exponent(s)):
        return float(sup)
    return float(sup + variation_seminorm(block, s))


def vs_norm(symbol: Symbol, s, gauge: Gauge) -> float:
    """Supremum over the dyadic blocks of sup-gauge plus s-variation."""
    partition = dyadic_partition(symbol.n_points)
    return max(block_vs_norm(symbol.block(block, gauge), s) for block in partition.blocks)


def holder_quantity(
    block: BlockValues, alpha: float, gauge: Optional[Gauge] = None
) -> HolderReport:
    """
    |J|^α · max_{x≠y} gauge(f(x) - f(y)) / |x - y|^α.

    The report's `bound` is sup-gauge + that quantity, which majorizes the
    V^{1/α} norm of the block.
    """
    if not 0 < alpha <= 1:
        raise InvalidParameterError(f"Hölder exponent must lie in (0, 1], got {alpha}")
    if block.length < 2:
        raise InvalidParameterError("Hölder quantity needs a block of length >= 2")
    gauge = gauge or block.gauge
    table = gauge.pairwise(block.entries)
    index = np.arange(block.length)
    distance = np.abs(index[:, None] - index[None, :]).astype(float)
    np.fill_diagonal(distance, 1.0)
    seminorm = float(np.max(table / distance**alpha))
    quantity = block.length**alpha * seminorm
    sup = float(gauge.sup(block.entries))
    return HolderReport(
        quantity=quantity, sup_norm=sup, bound=sup + quantity, length=block.length, alpha=alpha
    )


def _constant_runs(entries: np.ndarray) -> List[Tuple[int, int]]:
    runs = []
    start = 0
    for i in range(1, len(entries)):
        if not np.array_equal(entries[i], entries[start]):
            runs.append((start, i))
            start = i
    runs.append((start, len(entries)))
    return runs


def _atom_from_pieces(
    block: BlockValues, pieces: List[Tuple[int, int]], values: np.ndarray, q: float
) -> Tuple[float, Optional[Atom]]:
    """Normalize a step function to unit ℓ^q coefficient mass."""
    masses = np.array([block.gauge(value) for value in values])
    keep = masses > 0
    if not np.any(keep):
        return 0.0, None
    weight = float(np.sum(masses[keep] ** q) ** (1.0 / q))
    intervals = [
        FrequencyInterval(lo=block.start + a, hi=block.start + b)
        for (a, b), kept in zip(pieces, keep)
        if kept
    ]
    return weight, Atom(intervals=intervals, coefficients=values[keep] / weight)


def single_atom_decomposition(block: BlockValues, q) -> AtomicDecomposition:
    """The whole block as one atom over its maximal constant runs."""
    q_value = _finite_exponent(q, "q")
    runs = _constant_runs(block.entries)
    values = np.array([block.entries[a] for a, _ in runs])
    weight, atom = _atom_from_pieces(block, runs, values, q_value)
    if atom is None:
        return AtomicDecomposition(lambdas=[], atoms=[], target_q=q_value, method="single")
    return AtomicDecomposition(
        lambdas=[weight], atoms=[atom], target_q=q_value, method="single"
    )


def _cut_by_oscillation(table: np.ndarray, threshold: float) -> List[Tuple[int, int]]:
    """Greedy pieces whose internal oscillation stays within the threshold."""
    pieces = []
    start = 0
    oscillation = 0.0
    for i in range(1, table.shape[0]):
        oscillation = max(oscillation, float(table[i, start:i].max()))
        if oscillation > threshold:
            pieces.append((start, i))
            start = i
            oscillation = 0.0
    pieces.append((start, table.shape[0]))
    return pieces


def layered_decomposition(block: BlockValues, s, q) -> AtomicDecomposition:
    """
    Stopping-time layering at thresholds t_k = 2^{-k}·‖f‖_{V^s}.

    Each layer cuts the residual into pieces of oscillation at most t_k,
    emits the piece averages as one atom and subtracts them.
    """
    q_value = _finite_exponent(q, "q")
    norm = block_vs_norm(block, s)
    residual = np.array(block.entries, dtype=complex)
    lambdas, atoms = [], []
    for k in range(MAX_LAYERS):
        if block.gauge.sup(residual) <= RESIDUAL_TOLERANCE:
            break
        threshold = norm * 2.0**-k
        pieces = _cut_by_oscillation(block.gauge.pairwise(residual), threshold)
        values = np.array([residual[a:b].mean(axis=0) for a, b in pieces])
        weight, atom = _atom_from_pieces(block, pieces, values, q_value)
        if atom is None:
            continue
        for (a, b), value in zip(pieces, values):
            residual[a:b] -= value
        lambdas.append(weight)
        atoms.append(atom)
    if np.any(residual):
        singletons = [(i, i + 1) for i in range(block.length)]
        weight, atom = _atom_from_pieces(block, singletons, residual, q_value)
        if atom is not None:
            lambdas.append(weight)
            atoms.append(atom)
    return AtomicDecomposition(lambdas=lambdas, atoms=atoms, target_q=q_value, method="layered")


def atomic_decompose(block: BlockValues, s, q) -> AtomicDecomposition:
    """
    R^q decomposition of a V^s block, q > s ≥ 1.

    Returns the layered decomposition or the single-atom fallback, whichever
    has the smaller ℓ¹ coefficient mass.
    """
    s_value = _finite_exponent(s)
    q_value = _finite_exponent(q, "q")
    if q_value <= s_value:
        raise InvalidParameterError(f"atomic decomposition needs q > s, got q={q}, s={s}")
    layered = layered_decomposition(block, s_value, q_value)
    fallback = single_atom_decomposition(block, q_value)
    chosen = fallback if fallback.l1_mass <= layered.l1_mass else layered
    log.debug(
        "atomic decomposition",
        length=block.length,
        method=chosen.method,
        atoms=len(chosen.atoms),
        l1_mass=chosen.l1_mass,
    )
    return chosen


def atom_mass(atom: Atom, gauge: Gauge, q: float) -> float:
    masses = np.array([gauge(c) for c in atom.coefficients])
    return float(np.sum(masses**q) ** (1.0 / q)) if masses.size else 0.0


def _difference_size(difference: np.ndarray, gauge: Gauge) -> float:
    """Gauge of a reconstruction residual, Frobenius size if it left the span."""
    if not np.any(difference):
        return 0.0
    value = gauge(difference)
    return float(value) if np.isfinite(value) else float(np.linalg.norm(difference))


def validate_decomposition(dec: AtomicDecomposition, block: BlockValues) -> DecompositionReport:
    """Reconstruction error, per-atom masses and the V^q ≤ 3 sanity bound."""
    interval = block.interval
    q = dec.target_q
    reconstruction = dec.reconstruct(interval)
    difference = reconstruction - block.entries
    error = max((_difference_size(d, block.gauge) for d in difference), default=0.0)

    checks = []
    for atom in dec.atoms:
        mass = atom_mass(atom, block.gauge, q)
        ordered = sorted(atom.intervals, key=lambda piece: piece.lo)
        disjoint = all(a.hi <= b.lo for a, b in zip(ordered, ordered[1:]))
        inside = all(interval.includes(piece) for piece in atom.intervals)
        dense = BlockValues(
            entries=atom.values_on(interval), gauge=block.gauge, start=interval.lo
        )
        vq = block_vs_norm(dense, q)
        checks.append(
            AtomCheck(
                mass=mass,
                vq_norm=vq,
                disjoint=disjoint,
                inside_block=inside,
                valid=mass <= 1 + MASS_TOLERANCE and disjoint and inside,
            )
        )
    atoms_bounded = all(check.vq_norm <= 3 + MASS_TOLERANCE for check in checks)
    return DecompositionReport(
        max_reconstruction_error=error,
        l1_mass=dec.l1_mass,
        atoms=checks,
        atom_bound_holds=atoms_bounded,
        valid=all(check.valid for check in checks) and atoms_bounded and error <= 1e-10,
    )


def _sample_indices(interval: FrequencyInterval, count: int) -> np.ndarray:
    points = np.linspace(interval.lo, interval.hi - 1, min(count, interval.length))
    return np.unique(np.round(points).astype(int))


def build_holder_family(
    symbol: Symbol,
    alpha: float,
    samples_per_block: int,
    spec: Optional[SpaceSpec] = None,
) -> OperatorFamily:
    """
    Family of sampled values m(k) and scaled difference quotients
    (m(x) - m(y)) / |x - y|^α · |J|^α on every dyadic block J.

    Both kinds of member have gauge at most one in the Minkowski gauge of the
    family, so sampled values and the Hölder quantity are controlled by 1.
    """
    if not 0 < alpha <= 1:
        raise InvalidParameterError(f"Hölder exponent must lie in (0, 1], got {alpha}")
    if samples_per_block < 1:
        raise InvalidParameterError("samples_per_block must be positive")
    members = {}

    def add(matrix: np.ndarray):
        if np.max(np.abs(matrix)) <= 1e-14:
            return
        members.setdefault(np.round(matrix, 12).tobytes(), matrix)

    for block in dyadic_partition(symbol.n_points).blocks:
        sampled = _sample_indices(block, samples_per_block)
        for k in sampled:
            add(symbol.at(int(k)))
        for i, x in enumerate(sampled):
            for y in sampled[i + 1 :]:
                quotient = (symbol.at(int(y)) - symbol.at(int(x))) / float(y - x) ** alpha
                add(quotient * float(block.length) ** alpha)

    if members:
        matrices = np.stack(list(members.values()))
    else:
        matrices = np.zeros((1, symbol.dimension, symbol.dimension), dtype=complex)
    spec = spec or SpaceSpec.lp(2, symbol.dimension)
    log.debug("Hölder family built", members=matrices.shape[0], alpha=alpha)
    return OperatorFamily(matrices=matrices, base_space_in=spec, base_space_out=spec)
