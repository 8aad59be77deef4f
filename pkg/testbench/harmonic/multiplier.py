"""
Fourier multipliers on the discrete torus and the experiments built on them.

`multiplier_experiment` instruments the atomic-decomposition argument:
Littlewood–Paley over the dyadic blocks, atomic decomposition of the symbol
on each block, a Hölder split of every atom and the LPR square function.
Each stage is reported as its own ratio.
"""

from typing import Dict, List, Optional, Tuple

import numpy as np

from testbench.core.config import settings
from testbench.core.exceptions import InvalidParameterError, ShapeMismatchError, TestbenchError
from testbench.core.logger import log
from testbench.core.parallel import parallel_map
from testbench.domain.experiments import ExperimentConfig, IntervalFamilySpec, WeightSpec
from testbench.domain.exponent import compare, conjugate, format_exponent, is_inf, parse_exponent
from testbench.domain.interfaces.gauge import Gauge
from testbench.domain.operators import OperatorFamily, Symbol
from testbench.domain.reports import (
    ChainStages,
    LprReport,
    MultiplierReport,
    PlancherelReport,
    TrialRecord,
)
from testbench.domain.signals import FrequencyInterval, TorusSignal
from testbench.domain.spaces import SpaceSpec, Weight
from testbench.harmonic.gauges import AbsoluteGauge, OperatorNormGauge, default_gauge
from testbench.harmonic.mixed_norms import (
    ap_characteristic,
    concavify,
    is_umd_lattice,
    layer_norm,
    lp_weighted_norm,
    power_weight,
    space_norm_batch,
    weighted_lp,
)
from testbench.harmonic.exponents import ExponentParams, region_check
from testbench.harmonic.op_bounds import estimate_lrs_bound
from testbench.harmonic.torus_grid import (
    dft,
    dyadic_partition,
    idft,
    project_many,
    random_signal,
    split_across_blocks,
)
from testbench.harmonic.variation import atomic_decompose, vs_norm
from testbench.observability.metrics import record_bound, record_trials

MAX_FAMILY_MEMBERS = 64
CHAIN_THEOREMS = ("hscase_i", "hscase_ii", "mult_s_var_i", "mult_s_var_ii")


def _check_compatible(symbol: Symbol, signal: TorusSignal) -> None:
    if symbol.n_points != signal.n_points:
        raise ShapeMismatchError(
            f"symbol on N={symbol.n_points} applied to a signal on N={signal.n_points}"
        )
    if not symbol.is_scalar and signal.dimension != symbol.dimension:
        raise ShapeMismatchError(
            f"{symbol.dimension}x{symbol.dimension} symbol cannot act on samples of "
            f"shape {signal.dim_shape}"
        )


def apply_multiplier(symbol: Symbol, signal: TorusSignal) -> TorusSignal:
    """dft, multiply every coefficient by m(k), idft; scalar symbols act on any sample shape."""
    _check_compatible(symbol, signal)
    spectrum = dft(signal)
    coefficients = spectrum.coefficients
    if symbol.is_scalar:
        expand = (slice(None),) + (None,) * len(signal.dim_shape)
        product = symbol.entries[:, 0, 0][expand] * coefficients
    else:
        flat = coefficients.reshape(signal.n_points, symbol.dimension)
        product = np.einsum("kij,kj->ki", symbol.entries, flat).reshape(coefficients.shape)
    return idft(spectrum.model_copy(update={"coefficients": product}))


def _l2_norm(samples: np.ndarray) -> float:
    flat = samples.reshape(samples.shape[0], -1)
    return float(np.sqrt(np.mean(np.sum(np.abs(flat) ** 2, axis=1))))


def plancherel_ratio(symbol: Symbol, trials: int, seed: int = 0) -> PlancherelReport:
    """
    Largest ‖T_m f‖_{L²(ℓ²)} / ‖f‖_{L²(ℓ²)} over random inputs and the
    input concentrated at the frequency where ‖m(k)‖ peaks.
    """
    if trials < 0:
        raise InvalidParameterError(f"trials must be nonnegative, got {trials}")
    n = symbol.n_points
    dim_shape = () if symbol.is_scalar else (symbol.dimension,)
    streams = np.random.SeedSequence(seed).spawn(max(trials, 1))
    random_best = 0.0
    for index in range(trials):
        signal = random_signal(np.random.default_rng(streams[index]), n, dim_shape)
        output = apply_multiplier(symbol, signal)
        random_best = max(random_best, _l2_norm(output.samples) / _l2_norm(signal.samples))

    norms = symbol.operator_norms()
    peak = int(np.argmax(norms))
    frequency = peak - n // 2
    wave = np.exp(2j * np.pi * frequency * np.arange(n) / n)
    if symbol.is_scalar:
        samples = wave
    else:
        _, _, vh = np.linalg.svd(symbol.entries[peak])
        samples = wave[:, None] * vh[0].conj()[None, :]
    probe = TorusSignal(n_points=n, dim_shape=dim_shape, samples=samples)
    adversarial = _l2_norm(apply_multiplier(symbol, probe).samples) / _l2_norm(samples)
    bound = float(norms.max())
    record_bound("plancherel", max(random_best, adversarial))
    return PlancherelReport(
        max_ratio=max(random_best, adversarial),
        random_ratio=random_best,
        adversarial_ratio=adversarial,
        bound=bound,
        argmax_frequency=frequency,
        trials=trials,
    )


def check_disjoint(intervals: List[FrequencyInterval]) -> None:
    ordered = sorted(intervals, key=lambda interval: interval.lo)
    for left, right in zip(ordered, ordered[1:]):
        if left.overlaps(right):
            raise InvalidParameterError(f"intervals {left} and {right} overlap")


def group_by_block(
    signal_points: int, intervals: List[FrequencyInterval]
) -> Dict[int, List[FrequencyInterval]]:
    """Intervals split at block boundaries and grouped by containing dyadic block."""
    partition = dyadic_partition(signal_points)
    groups: Dict[int, List[FrequencyInterval]] = {}
    for piece in split_across_blocks(intervals, partition):
        groups.setdefault(partition.containing_block(piece), []).append(piece)
    return dict(sorted(groups.items()))


def _square_function(signal: TorusSignal, groups, q) -> np.ndarray:
    """(Σ_J (Σ_{I⊂J} |S_I f|^q)^{2/q})^{1/2} pointwise; shape (N, *dim)."""
    inner = [layer_norm(project_many(signal, pieces), q, axis=0) for pieces in groups.values()]
    return layer_norm(np.stack(inner), 2, axis=0)


def _pointwise_norm(values: np.ndarray, spec: SpaceSpec) -> np.ndarray:
    return space_norm_batch(values.reshape((values.shape[0],) + spec.shape), spec)


def _resolve_space(signal: TorusSignal, spec: Optional[SpaceSpec]) -> SpaceSpec:
    if spec is None:
        return SpaceSpec.lp(2, signal.dimension) if signal.dim_shape else SpaceSpec.scalar()
    if spec.size != signal.dimension:
        raise ShapeMismatchError(f"signal components {signal.dim_shape} do not fit space {spec}")
    return spec


def lpr_square_function(
    signal: TorusSignal,
    intervals: List[FrequencyInterval],
    q,
    p,
    weight: Optional[Weight] = None,
    spec: Optional[SpaceSpec] = None,
) -> float:
    """‖(Σ_J (Σ_{I⊂J} |S_I f|^q)^{2/q})^{1/2}‖_{L^p(w;X)} for disjoint intervals."""
    if not intervals:
        raise InvalidParameterError("interval family must be nonempty")
    check_disjoint(intervals)
    spec = _resolve_space(signal, spec)
    pointwise = _square_function(signal, group_by_block(signal.n_points, intervals), q)
    return weighted_lp(_pointwise_norm(pointwise, spec), p, weight)


def random_interval_family(
    rng: np.random.Generator, n_points: int, spec: Optional[IntervalFamilySpec] = None
) -> List[FrequencyInterval]:
    """
    Recursively split every dyadic block at uniform random points and keep
    each leaf independently; disjoint and block-contained by construction.
    """
    spec = spec or IntervalFamilySpec()
    leaves: List[FrequencyInterval] = []

    def split(lo: int, hi: int, depth: int):
        if hi - lo > 1 and depth < spec.max_depth and rng.random() < spec.split_probability:
            cut = int(rng.integers(lo + 1, hi))
            split(lo, cut, depth + 1)
            split(cut, hi, depth + 1)
        else:
            leaves.append(FrequencyInterval(lo=lo, hi=hi))

    for block in dyadic_partition(n_points).blocks:
        split(block.lo, block.hi, 0)
    kept = [leaf for leaf in leaves if rng.random() < spec.keep_probability]
    return kept or [max(leaves, key=lambda leaf: (leaf.length, -leaf.lo))]


def admissible_power_range(t) -> Tuple[float, float]:
    """|x|^α ∈ A_t exactly when -1 < α < t - 1."""
    return -1.0, float(t) - 1.0


def draw_weight(
    rng: np.random.Generator, n_points: int, spec: WeightSpec, class_exponent
) -> Tuple[Optional[Weight], Optional[float]]:
    """Weight for one trial and its power exponent (None for the uniform weight)."""
    if spec.family == "uniform":
        return None, None
    alpha = spec.alpha
    if alpha is None:
        if class_exponent is None or is_inf(class_exponent) or class_exponent <= 1:
            alpha = 0.0
        else:
            low, high = admissible_power_range(class_exponent)
            alpha = float(rng.uniform(low * spec.shrink, high * spec.shrink))
    return power_weight(n_points, alpha, spec.center), alpha


def _characteristic(weight: Optional[Weight], class_exponent) -> Optional[float]:
    if weight is None or class_exponent is None or is_inf(class_exponent):
        return None
    if class_exponent < 1 or weight.n_points > settings.ARC_LIMIT:
        return None
    return ap_characteristic(weight, class_exponent)


def _trial_rngs(seed: int, trials: int) -> List[np.random.Generator]:
    return [np.random.default_rng(stream) for stream in np.random.SeedSequence(seed).spawn(trials)]


def lpr_experiment(config: ExperimentConfig) -> LprReport:
    """
    Ratios ‖square function‖ / ‖f‖ in L^p(w;X) over random signals, interval
    families and weights from A_{p/q'}.

    A failed hypothesis p > q' is logged and reported, not raised.
    """
    spec = config.space
    q_dual = conjugate(config.q)
    hypothesis_ok = compare(config.p, q_dual) > 0
    if not hypothesis_ok:
        log.warning(
            "LPR hypothesis p > q' fails",
            p=format_exponent(config.p),
            q_dual=format_exponent(q_dual),
        )
    try:
        umd_ok = is_umd_lattice(concavify(spec, q_dual)) if not is_inf(q_dual) else False
    except InvalidParameterError:
        umd_ok = False
    class_exponent = None if is_inf(config.p) else _class_ratio(config.p, q_dual)

    def run(indexed):
        trial, rng = indexed
        signal = random_signal(rng, config.n_points, spec.shape)
        intervals = random_interval_family(rng, config.n_points, config.intervals)
        weight, alpha = draw_weight(rng, config.n_points, config.weight, class_exponent)
        ratio = lpr_square_function(signal, intervals, config.q, config.p, weight, spec) / (
            lp_weighted_norm(signal, config.p, weight, spec)
        )
        return TrialRecord(
            trial=trial,
            n_points=config.n_points,
            p=format_exponent(config.p),
            q=format_exponent(config.q),
            s=format_exponent(config.s),
            alpha=alpha,
            ap_char=_characteristic(weight, class_exponent),
            ratio=ratio,
        )

    records = parallel_map(
        run, list(enumerate(_trial_rngs(config.seed, config.trials))), config.threads
    )
    ratios = np.array([record.ratio for record in records])
    record_trials("lpr", len(records))
    record_bound("lpr", float(ratios.max()))
    log.info(
        "LPR experiment finished",
        n_points=config.n_points,
        trials=config.trials,
        max_ratio=float(ratios.max()),
    )
    return LprReport(
        max_ratio=float(ratios.max()),
        median_ratio=float(np.median(ratios)),
        hypothesis_ok=hypothesis_ok,
        umd_ok=umd_ok,
        trials=records,
    )


def _class_ratio(numerator, denominator):
    """numerator/denominator for exponents, with x/∞ = 0 (None when undefined)."""
    if is_inf(denominator):
        return None
    return parse_exponent(numerator) / denominator


def random_vs_symbol(
    seed: int, s, dim: int, n_points: int, target_norm: float, gauge: Optional[Gauge] = None
) -> Symbol:
    """
    Blockwise complex random walk, rescaled so that vs_norm equals `target_norm`.
    """
    if target_norm < 0:
        raise InvalidParameterError(f"target norm must be nonnegative, got {target_norm}")
    if dim < 1:
        raise InvalidParameterError(f"dimension must be positive, got {dim}")
    rng = np.random.default_rng(seed)
    shape = (n_points, dim, dim)
    entries = np.zeros(shape, dtype=complex)
    half = n_points // 2
    for block in dyadic_partition(n_points).blocks:
        length = block.length
        start = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        shape = (length, dim, dim)
        steps = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        steps[0] = 0
        walk = start + np.cumsum(steps / np.sqrt(length), axis=0)
        entries[block.lo + half : block.hi + half] = walk
    symbol = Symbol(n_points=n_points, entries=entries, metadata={"seed": seed, "s": str(s)})
    if target_norm == 0:
        return symbol.scaled(0)
    gauge = gauge or default_gauge(dim)
    return symbol.scaled(target_norm / vs_norm(symbol, s, gauge))


def _gauge_for(symbol: Symbol, spec: SpaceSpec) -> Gauge:
    if symbol.is_scalar:
        return AbsoluteGauge()
    return OperatorNormGauge(spec, spec)


def region_verdicts(config: ExperimentConfig) -> Dict[str, str]:
    verdicts = {}
    for theorem in CHAIN_THEOREMS:
        try:
            params = ExponentParams(
                theorem_id=theorem, p=config.p, q=config.q, r=config.r, s=config.s
            )
            verdicts[theorem] = region_check(params).status
        except TestbenchError as exc:
            verdicts[theorem] = f"n/a: {exc.message}"
    return verdicts


def _point_mass(n_points: int, dim_shape, center: int) -> TorusSignal:
    samples = np.zeros((n_points,) + tuple(dim_shape), dtype=complex)
    samples[center % n_points] = 1.0
    return TorusSignal(n_points=n_points, dim_shape=tuple(dim_shape), samples=samples)


def _apply_coefficient(coefficient: np.ndarray, values: np.ndarray, spec: SpaceSpec) -> np.ndarray:
    """c · S_I f pointwise; scalar coefficients scale, matrices act on the flattened sample."""
    if coefficient.ndim == 0:
        return coefficient * values
    flat = values.reshape(values.shape[0], -1)
    return (flat @ coefficient.T).reshape(values.shape)


def _decompose_blocks(symbol: Symbol, gauge: Gauge, s, q):
    """Per-block atomic decompositions padded to a common number of atoms."""
    decompositions = []
    for block in dyadic_partition(symbol.n_points).blocks:
        decompositions.append((block, atomic_decompose(symbol.block(block, gauge), s, q)))
    count = max(len(dec.atoms) for _, dec in decompositions)
    return decompositions, count


def chain_stages(
    symbol: Symbol,
    signal: TorusSignal,
    config: ExperimentConfig,
    gauge: Gauge,
    weight: Optional[Weight] = None,
) -> Tuple[ChainStages, List[np.ndarray]]:
    """
    Quantities of the decomposition argument for one input.

    Returns:
        (stages, normalized atom coefficients c̃ used in the Hölder split)
    """
    spec = config.space
    q_dual = conjugate(config.q)
    p = config.p

    def norm(pointwise):
        return weighted_lp(_pointwise_norm(pointwise, spec), p, weight)

    output = apply_multiplier(symbol, signal)
    partition = dyadic_partition(symbol.n_points)
    multiplier_norm = norm(output.samples)
    littlewood_paley = norm(layer_norm(project_many(output, partition.blocks), 2, axis=0))

    decompositions, count = _decompose_blocks(symbol, gauge, config.s, config.q)
    lambdas = np.zeros((count, len(decompositions)))
    for column, (_, dec) in enumerate(decompositions):
        lambdas[: len(dec.lambdas), column] = np.abs(dec.lambdas)
    totals = lambdas.max(axis=1) if count else np.zeros(0)

    atomic = holder_split = lpr = 0.0
    normalized: List[np.ndarray] = []
    for k in range(count):
        shape = (signal.n_points,) + signal.dim_shape
        atomic_sq = np.zeros(shape)
        holder_sq = np.zeros(shape)
        lpr_sq = np.zeros(shape)
        for column, (_, dec) in enumerate(decompositions):
            if k >= len(dec.atoms):
                continue
            atom = dec.atoms[k]
            projections = project_many(signal, atom.intervals)
            combined = np.zeros(shape, dtype=complex)
            split_terms = []
            for coefficient, projection in zip(atom.coefficients, projections):
                combined += _apply_coefficient(coefficient, projection, spec)
                size = gauge(coefficient)
                unit = coefficient / size if size > 0 else coefficient
                if size > 0:
                    normalized.append(unit)
                split_terms.append(_apply_coefficient(unit, projection, spec))
            atomic_sq += np.abs(combined) ** 2
            holder_sq += layer_norm(np.stack(split_terms), q_dual, axis=0) ** 2
            lpr_sq += layer_norm(projections, q_dual, axis=0) ** 2
        atomic += totals[k] * norm(np.sqrt(atomic_sq))
        holder_split += totals[k] * norm(np.sqrt(holder_sq))
        lpr += totals[k] * norm(np.sqrt(lpr_sq))

    input_norm = norm(signal.samples)
    lambda_total = float(totals.sum())

    def ratio(a, b):
        return float(a / b) if b > 0 else 0.0

    stages = ChainStages(
        multiplier_norm=multiplier_norm,
        littlewood_paley=littlewood_paley,
        atomic=atomic,
        holder_split=holder_split,
        lpr=lpr,
        input_norm=input_norm,
        lambda_total=lambda_total,
        stage1=ratio(multiplier_norm, littlewood_paley),
        stage2=ratio(littlewood_paley, holder_split),
        stage3=ratio(lpr, lambda_total * input_norm),
        lrs_ratio=ratio(holder_split, lpr),
    )
    return stages, normalized


def _coefficient_family(members: List[np.ndarray], spec: SpaceSpec) -> Optional[OperatorFamily]:
    """Deduplicated family of normalized coefficients acting on X."""
    unique: Dict[bytes, np.ndarray] = {}
    for member in members:
        matrix = member * np.eye(spec.size) if np.ndim(member) == 0 else member
        unique.setdefault(np.round(matrix, 10).tobytes(), matrix)
        if len(unique) >= MAX_FAMILY_MEMBERS:
            break
    if not unique:
        return None
    return OperatorFamily(
        matrices=np.stack(list(unique.values())), base_space_in=spec, base_space_out=spec
    )


def _value_family(symbol: Symbol, gauge: Gauge, spec: SpaceSpec) -> Optional[OperatorFamily]:
    members = []
    for k in range(-symbol.n_points // 2, symbol.n_points // 2):
        value = symbol.at(k)
        value = value[0, 0] if symbol.is_scalar else value
        size = gauge(value)
        if size > 0:
            members.append(np.asarray(value / size))
    return _coefficient_family(members, spec)


def multiplier_experiment(
    config: ExperimentConfig, symbol: Symbol, gauge: Optional[Gauge] = None
) -> MultiplierReport:
    """
    ‖T_m f‖_{L^p(w;X)} / ‖f‖_{L^p(w;X)} over the point mass at the weight's
    center (trial 0) and `config.trials` random signals.

    The worst trial is instrumented with the decomposition chain when the
    atomic decomposition applies (1 ≤ s < q < ∞); the ratio is normalized by
    vs_norm(m)·(ℓ²(ℓ^{q'}) lower-bound estimate of the normalized atom
    coefficients).
    """
    spec = config.space
    if symbol.n_points != config.n_points:
        raise ShapeMismatchError(
            f"symbol on N={symbol.n_points} does not match n_points={config.n_points}"
        )
    if not symbol.is_scalar and symbol.dimension != spec.size:
        raise ShapeMismatchError(
            f"{symbol.dimension}x{symbol.dimension} symbol cannot act on {spec}"
        )
    if not np.all(np.isfinite(symbol.entries)):
        raise InvalidParameterError("symbol must be finite")
    gauge = gauge or _gauge_for(symbol, spec)
    class_exponent = None if is_inf(config.p) else _class_ratio(config.p, config.s)
    center = config.weight.center

    def run(indexed):
        trial, rng = indexed
        weight, alpha = draw_weight(rng, config.n_points, config.weight, class_exponent)
        if trial == 0:
            signal = _point_mass(config.n_points, spec.shape, center)
        else:
            signal = random_signal(rng, config.n_points, spec.shape)
        output = apply_multiplier(symbol, signal)
        ratio = lp_weighted_norm(output, config.p, weight, spec) / lp_weighted_norm(
            signal, config.p, weight, spec
        )
        record = TrialRecord(
            trial=trial,
            n_points=config.n_points,
            p=format_exponent(config.p),
            q=format_exponent(config.q),
            s=format_exponent(config.s),
            alpha=alpha,
            ap_char=_characteristic(weight, class_exponent),
            ratio=ratio,
        )
        return record, signal, weight

    results = parallel_map(
        run, list(enumerate(_trial_rngs(config.seed, config.trials + 1))), config.threads
    )
    records = [record for record, _, _ in results]
    ratios = np.array([record.ratio for record in records])
    worst = int(np.argmax(ratios))
    variation = vs_norm(symbol, config.s, gauge)

    chain = None
    family = None
    decomposable = (
        not is_inf(config.s) and not is_inf(config.q) and compare(config.s, config.q) < 0
    )
    if decomposable and variation > 0:
        _, signal, weight = results[worst]
        chain, coefficients = chain_stages(symbol, signal, config, gauge, weight)
        records[worst] = records[worst].model_copy(
            update={"stage1": chain.stage1, "stage2": chain.stage2, "stage3": chain.stage3}
        )
        family = _coefficient_family(coefficients, spec)
    elif variation > 0:
        family = _value_family(symbol, gauge, spec)

    lrs = 0.0
    if family is not None:
        q_dual = conjugate(config.q)
        lrs = estimate_lrs_bound(
            family, 2, q_dual, config.lrs_budget, config.seed, threads=config.threads
        ).bound
    denominator = variation * lrs
    ratio = float(ratios.max())
    normalized = ratio / denominator if denominator > 0 else 0.0

    record_trials("multiplier", len(records))
    record_bound("multiplier", ratio)
    log.info(
        "multiplier experiment finished",
        n_points=config.n_points,
        ratio=ratio,
        vs_norm=variation,
        lrs_estimate=lrs,
        normalized=normalized,
    )
    return MultiplierReport(
        ratio=ratio,
        median_ratio=float(np.median(ratios)),
        vs_norm=variation,
        lrs_estimate=lrs,
        normalized_ratio=normalized,
        region_verdicts=region_verdicts(config),
        chain=chain,
        trials=records,
    )
