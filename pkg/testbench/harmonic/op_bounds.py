"""
Lower-bound search for ℓʳ(ℓˢ)- and R-bounds of finite operator families.

Nothing here certifies an upper bound for a general family: estimators
report the best witness they found. Positive singletons are the exception,
their bound equals the operator norm.
"""

import itertools
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from testbench.core.config import settings
from testbench.core.exceptions import InvalidParameterError, ShapeMismatchError
from testbench.core.logger import log
from testbench.core.parallel import parallel_map
from testbench.domain.exponent import compare, format_exponent, is_inf, parse_exponent
from testbench.domain.operators import LrsWitness, OperatorFamily, is_entrywise_nonnegative
from testbench.domain.reports import LrsEstimate, RBoundEstimate
from testbench.domain.spaces import Layer, SpaceSpec
from testbench.harmonic.gauges import OperatorNormGauge
from testbench.harmonic.mixed_norms import space_norm_batch
from testbench.observability.metrics import record_bound, record_evaluations

GRID_SIZES = (1, 2, 4, 8)
INITIAL_STEP = 0.1
MIN_STEP = 1e-4
SWAP_PROBABILITY = 0.25
POWER_ITERATIONS = 40

Objective = Callable[[np.ndarray, np.ndarray], Tuple[float, float]]


def _check_exponent(value, name: str):
    exponent = parse_exponent(value)
    if not is_inf(exponent) and exponent < 1:
        raise InvalidParameterError(f"{name} must lie in [1, inf], got {format_exponent(exponent)}")
    return exponent


def lattice_norm(values: np.ndarray, base: SpaceSpec, r, s) -> float:
    """
    ‖(Σ_j (Σ_k |v_{j,k}|^s)^{r/s})^{1/r}‖_base for values of shape (m, n, dim).

    Evaluated as the mixed norm of base(ℓ^r_m(ℓ^s_n)).
    """
    m, n = values.shape[:2]
    arranged = values.reshape((m, n) + base.shape)
    arranged = np.moveaxis(arranged, (0, 1), (-2, -1))
    spec = base.nest(Layer(exponent=r, dimension=m), Layer(exponent=s, dimension=n))
    return float(space_norm_batch(arranged, spec))


def apply_selection(matrices: np.ndarray, selection: np.ndarray, inputs: np.ndarray) -> np.ndarray:
    """outputs[j, k] = matrices[selection[j, k]] @ inputs[j, k], grouped by operator."""
    outputs = np.empty(inputs.shape, dtype=complex)
    for index in np.unique(selection):
        cells = selection == index
        outputs[cells] = inputs[cells] @ matrices[index].T
    return outputs


def _validate_witness(family: OperatorFamily, selection: np.ndarray, inputs: np.ndarray):
    if selection.size and (selection.min() < 0 or selection.max() >= family.size):
        raise InvalidParameterError(
            f"witness selects operators outside 0..{family.size - 1}"
        )
    if inputs.shape[-1] != family.dimension:
        raise ShapeMismatchError(
            f"witness vectors have dimension {inputs.shape[-1]}, family acts on "
            f"{family.dimension}"
        )


def eval_lrs(family: OperatorFamily, witness: LrsWitness, r, s) -> Tuple[float, float]:
    """(lhs, rhs) of the ℓʳ(ℓˢ) inequality for one witness."""
    r, s = _check_exponent(r, "r"), _check_exponent(s, "s")
    _validate_witness(family, witness.selection, witness.inputs)
    outputs = apply_selection(family.matrices, witness.selection, witness.inputs)
    lhs = lattice_norm(outputs, family.base_space_out, r, s)
    rhs = lattice_norm(witness.inputs, family.base_space_in, r, s)
    return lhs, rhs


def _lrs_objective(family: OperatorFamily, r, s) -> Objective:
    def objective(outputs, inputs):
        return (
            lattice_norm(outputs, family.base_space_out, r, s),
            lattice_norm(inputs, family.base_space_in, r, s),
        )

    return objective


def _top_right_singular(matrix: np.ndarray) -> np.ndarray:
    """Leading right singular vector by power iteration on A^H A."""
    vector = np.ones(matrix.shape[1], dtype=complex)
    for _ in range(POWER_ITERATIONS):
        vector = matrix.conj().T @ (matrix @ vector)
        size = np.linalg.norm(vector)
        if size == 0:
            return np.ones(matrix.shape[1], dtype=complex)
        vector /= size
    return vector


def _single_cell_seeds(family: OperatorFamily, objective: Objective):
    """
    Deterministic one-cell witnesses: unit vectors, the constant vector and
    the leading singular vector of every member.

    Returns:
        (best ratio, best witness, evaluations)
    """
    n = family.dimension
    best_ratio, best = -1.0, None
    evaluations = 0
    base_in, base_out = family.base_space_in, family.base_space_out
    units = space_norm_batch(np.eye(n).reshape((n,) + base_in.shape), base_in)
    for index, matrix in enumerate(family.matrices):
        columns = matrix.T  # T e_i
        images = space_norm_batch(columns.reshape((n,) + base_out.shape), base_out)
        ratios = images / units
        evaluations += n
        column = int(np.argmax(ratios))
        candidates = [(float(ratios[column]), np.eye(n, dtype=complex)[column])]
        for vector in (np.ones(n, dtype=complex), _top_right_singular(matrix)):
            cell_in = vector[None, None, :]
            cell_out = (matrix @ vector)[None, None, :]
            lhs, rhs = objective(cell_out, cell_in)
            evaluations += 1
            candidates.append((lhs / rhs if rhs > 0 else 0.0, vector))
        for ratio, vector in candidates:
            if ratio > best_ratio:
                best_ratio = ratio
                best = (np.array([[index]]), vector[None, None, :].copy())
    return best_ratio, best, evaluations


def _random_vectors(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def hill_climb(
    family: OperatorFamily,
    objective: Objective,
    selection: np.ndarray,
    inputs: np.ndarray,
    iterations: int,
    rng: np.random.Generator,
):
    """
    Normalized coordinate ascent over one witness.

    Each step perturbs a single cell (occasionally swapping its operator),
    keeps the change when the ratio improves and halves the step otherwise.

    Returns:
        (ratio, selection, inputs, evaluations)
    """
    selection = selection.copy()
    inputs = inputs.astype(complex, copy=True)
    outputs = apply_selection(family.matrices, selection, inputs)
    lhs, rhs = objective(outputs, inputs)
    evaluations = 1
    if rhs <= 0:
        return 0.0, selection, inputs, evaluations
    inputs /= rhs
    outputs /= rhs
    ratio = lhs / rhs
    m, n = selection.shape
    step = INITIAL_STEP
    for _ in range(iterations):
        j, k = int(rng.integers(m)), int(rng.integers(n))
        old_index = selection[j, k]
        old_input, old_output = inputs[j, k].copy(), outputs[j, k].copy()
        scale = max(np.linalg.norm(old_input), np.linalg.norm(inputs) / np.sqrt(m * n))
        direction = _random_vectors(rng, family.dimension)
        direction /= np.linalg.norm(direction)
        inputs[j, k] = old_input + step * scale * direction
        if family.size > 1 and rng.random() < SWAP_PROBABILITY:
            selection[j, k] = int(rng.integers(family.size))
        outputs[j, k] = family.matrices[selection[j, k]] @ inputs[j, k]
        new_lhs, new_rhs = objective(outputs, inputs)
        evaluations += 1
        candidate = new_lhs / new_rhs if new_rhs > 0 else 0.0
        if candidate > ratio:
            ratio = candidate
            inputs /= new_rhs
            outputs /= new_rhs
        else:
            selection[j, k], inputs[j, k], outputs[j, k] = old_index, old_input, old_output
            step /= 2
            if step < MIN_STEP:
                step = INITIAL_STEP
    return ratio, selection, inputs, evaluations


def _restart_plan(budget: int, iterations: int) -> List[int]:
    """Iterations per restart so that the total evaluation count equals the budget."""
    per_restart = iterations + 1
    if budget < per_restart:
        return [max(budget - 1, 0)]
    return [iterations] * (budget // per_restart)


def _run_restarts(
    family: OperatorFamily,
    objective: Objective,
    budget: int,
    seed: int,
    iterations: int,
    grid_for: Callable[[int], Tuple[int, int]],
    threads: Optional[int],
):
    plan = _restart_plan(budget, iterations)
    streams = np.random.SeedSequence(seed).spawn(len(plan))

    def restart(index: int):
        rng = np.random.default_rng(streams[index])
        m, n = grid_for(index)
        selection = rng.integers(family.size, size=(m, n))
        inputs = _random_vectors(rng, (m, n, family.dimension))
        return hill_climb(family, objective, selection, inputs, plan[index], rng)

    results = parallel_map(restart, range(len(plan)), threads)
    best_index = max(range(len(results)), key=lambda i: (results[i][0], -i))
    return results[best_index], sum(result[3] for result in results)


def _lrs_grid(index: int) -> Tuple[int, int]:
    sizes = list(itertools.product(GRID_SIZES, GRID_SIZES))
    return sizes[index % len(sizes)]


def estimate_lrs_bound(
    family: OperatorFamily,
    r,
    s,
    budget: int,
    seed: int = 0,
    seed_witnesses: Optional[Iterable[LrsWitness]] = None,
    iterations: Optional[int] = None,
    threads: Optional[int] = None,
) -> LrsEstimate:
    """
    Largest lhs/rhs found over deterministic one-cell seeds, caller-provided
    seed witnesses and `budget` evaluations of seeded random restarts.

    Restarts sweep grid sizes m, n ∈ {1, 2, 4, 8} and run a fixed number of
    ascent iterations each. Deterministic given the seed, for any thread count.
    """
    if budget < 1:
        raise InvalidParameterError(f"budget must be >= 1, got {budget}")
    r, s = _check_exponent(r, "r"), _check_exponent(s, "s")
    iterations = settings.ASCENT_ITERATIONS if iterations is None else iterations
    objective = _lrs_objective(family, r, s)

    best_ratio, best, evaluations = _single_cell_seeds(family, objective)
    for witness in seed_witnesses or ():
        lhs, rhs = eval_lrs(family, witness, r, s)
        evaluations += 1
        if rhs > 0 and lhs / rhs > best_ratio:
            best_ratio, best = lhs / rhs, (witness.selection, witness.inputs)

    (ratio, selection, inputs, _), used = _run_restarts(
        family, objective, budget, seed, iterations, _lrs_grid, threads
    )
    evaluations += used
    if ratio > best_ratio:
        best_ratio, best = ratio, (selection, inputs)

    lhs, rhs = eval_lrs(family, LrsWitness(selection=best[0], inputs=best[1]), r, s)
    witness = LrsWitness(selection=best[0], inputs=best[1], lhs=lhs, rhs=rhs)
    record_evaluations("lrs", evaluations)
    record_bound("lrs", best_ratio)
    log.info(
        "lrs estimate finished",
        r=format_exponent(r),
        s=format_exponent(s),
        bound=best_ratio,
        evaluations=evaluations,
        grid=witness.grid,
    )
    return LrsEstimate(
        bound=best_ratio,
        r=format_exponent(r),
        s=format_exponent(s),
        budget=budget,
        seed=seed,
        evaluations=evaluations,
        witness=witness,
    )


def dualize_family(family: OperatorFamily) -> OperatorFamily:
    """Adjoint family acting from the dual of the target to the dual of the source."""
    return OperatorFamily(
        matrices=np.conj(np.transpose(family.matrices, (0, 2, 1))),
        base_space_in=family.base_space_out.dual(),
        base_space_out=family.base_space_in.dual(),
        positive=family.positive,
    )


def positive_single_bound(
    matrix, spec_in: SpaceSpec, spec_out: Optional[SpaceSpec] = None
) -> float:
    """
    Operator norm of an entrywise nonnegative matrix, which is exactly its
    ℓʳ(ℓˢ)-bound as a singleton family for every r and s.
    """
    matrix = np.atleast_2d(np.asarray(matrix))
    if not is_entrywise_nonnegative(matrix):
        raise InvalidParameterError("positive_single_bound needs an entrywise nonnegative matrix")
    gauge = OperatorNormGauge(spec_in, spec_out or spec_in)
    return gauge.evaluate_positive(matrix).value


def lrs_monotonicity_segment(
    family: OperatorFamily,
    r,
    s,
    points: Sequence[Tuple[object, object]],
    budget: int,
    seed: int = 0,
) -> List[LrsEstimate]:
    """
    Estimates at exponent pairs (u, v) with r ≤ u ≤ v ≤ s, where boundedness
    is inherited from the (r, s) pair.
    """
    r, s = _check_exponent(r, "r"), _check_exponent(s, "s")
    estimates = []
    for u, v in points:
        u, v = parse_exponent(u), parse_exponent(v)
        if not (compare(r, u) <= 0 and compare(u, v) <= 0 and compare(v, s) <= 0):
            raise InvalidParameterError(
                f"pair ({format_exponent(u)}, {format_exponent(v)}) is not on the segment "
                f"r <= u <= v <= s"
            )
        estimates.append(estimate_lrs_bound(family, u, v, budget, seed))
    return estimates


def _sign_patterns(count: int, rng: np.random.Generator, exact_max: int, draws: int):
    if count <= exact_max:
        return np.array(list(itertools.product((1.0, -1.0), repeat=count))), True
    return rng.choice((1.0, -1.0), size=(draws, count)), False


def rademacher_norm(values: np.ndarray, base: SpaceSpec, signs: np.ndarray) -> float:
    """(E‖Σ_k ε_k v_k‖²)^{1/2} over the given sign patterns; values (K, dim)."""
    sums = signs @ values
    norms = space_norm_batch(sums.reshape((sums.shape[0],) + base.shape), base)
    return float(np.sqrt(np.mean(norms**2)))


def estimate_r_bound(
    family: OperatorFamily,
    budget: int,
    seed: int = 0,
    iterations: Optional[int] = None,
    threads: Optional[int] = None,
) -> RBoundEstimate:
    """
    Largest ratio of Rademacher averages ‖Σ ε_k T_k x_k‖ / ‖Σ ε_k x_k‖ found.

    Expectations enumerate all 2^K sign patterns for K up to
    settings.RADEMACHER_EXACT_MAX and use a fixed Monte Carlo sample otherwise.
    """
    if budget < 1:
        raise InvalidParameterError(f"budget must be >= 1, got {budget}")
    iterations = settings.ASCENT_ITERATIONS if iterations is None else iterations
    exact_max, draws = settings.RADEMACHER_EXACT_MAX, settings.RADEMACHER_DRAWS
    pattern_rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(1)[0])
    patterns = {}
    exact = True

    def signs_for(count: int) -> np.ndarray:
        nonlocal exact
        if count not in patterns:
            patterns[count], is_exact = _sign_patterns(count, pattern_rng, exact_max, draws)
            exact = exact and is_exact
        return patterns[count]

    for count in GRID_SIZES:
        signs_for(count)

    def objective(outputs, inputs):
        signs = signs_for(outputs.shape[1])
        return (
            rademacher_norm(outputs[0], family.base_space_out, signs),
            rademacher_norm(inputs[0], family.base_space_in, signs),
        )

    best_ratio, best, evaluations = _single_cell_seeds(family, objective)
    (ratio, selection, _, _), used = _run_restarts(
        family,
        objective,
        budget,
        seed,
        iterations,
        lambda index: (1, GRID_SIZES[index % len(GRID_SIZES)]),
        threads,
    )
    evaluations += used
    if ratio > best_ratio:
        best_ratio, best = ratio, (selection, None)
    record_evaluations("rbound", evaluations)
    record_bound("rbound", best_ratio)
    log.info("R-bound estimate finished", bound=best_ratio, evaluations=evaluations)
    return RBoundEstimate(
        bound=best_ratio,
        budget=budget,
        seed=seed,
        evaluations=evaluations,
        exact_expectation=exact,
        selection=[int(i) for i in best[0].reshape(-1)],
    )
