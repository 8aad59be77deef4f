"""
Full-scale checks of the exact computations and the expected trends.

The heavier experiments carry the `slow` marker; run `pytest -m "not slow"`
to skip them.
"""

import itertools
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import spearmanr

from testbench.domain.experiments import ExperimentConfig, WeightSpec
from testbench.domain.exponent import INF, conjugate, from_reciprocal
from testbench.domain.operators import BlockValues, OperatorFamily, Symbol
from testbench.domain.spaces import SpaceSpec
from testbench.harmonic.counterexample import tk_family, tk_quantity, tk_witness
from testbench.harmonic.exponents import (
    ExponentParams,
    TheoremId,
    region_check,
    region_vertices,
    symmetry_check,
)
from testbench.harmonic.gauges import AbsoluteGauge, OperatorNormGauge
from testbench.harmonic.mixed_norms import lp_weighted_norm
from testbench.harmonic.multiplier import (
    apply_multiplier,
    lpr_experiment,
    lpr_square_function,
    multiplier_experiment,
    plancherel_ratio,
    random_vs_symbol,
)
from testbench.harmonic.op_bounds import dualize_family, estimate_lrs_bound
from testbench.harmonic.torus_grid import dyadic_partition, project, random_signal
from testbench.harmonic.variation import (
    atomic_decompose,
    block_vs_norm,
    validate_decomposition,
    variation_seminorm,
)


def exhaustive_variation(block, s):
    table = block.gauge.pairwise(block.entries)
    last = block.length - 1
    best = 0.0
    for size in range(last):
        for inner in itertools.combinations(range(1, last), size):
            path = (0,) + inner + (last,)
            best = max(best, sum(table[a, b] ** s for a, b in zip(path, path[1:])))
    return best ** (1.0 / s)


def test_tk_counterexample_for_every_listed_exponent():
    for n, s, p in itertools.product(range(1, 13), (1.5, 2.0, 3.0), (1.5, 2.0, 4.0)):
        result = tk_quantity(n, s, p)
        assert result.rhs == 1.0
        assert result.lhs >= n ** (1 / s) / 4 * (1 - 1e-12), (n, s, p)


def test_variation_program_matches_enumeration():
    rng = np.random.default_rng(2)
    scalar = AbsoluteGauge()
    matrix = OperatorNormGauge(SpaceSpec.lp(2, 2))
    for trial in range(500):
        length = int(rng.integers(1, 13))
        s = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        if trial % 2:
            entries = rng.standard_normal(length) + 1j * rng.standard_normal(length)
            block = BlockValues(entries=entries, gauge=scalar)
        else:
            block = BlockValues(entries=rng.standard_normal((length, 2, 2)), gauge=matrix)
        if length == 1:
            assert variation_seminorm(block, s) == 0.0
            continue
        assert variation_seminorm(block, s) == pytest.approx(
            exhaustive_variation(block, s), rel=1e-12
        )


def test_random_atoms_have_bounded_variation():
    rng = np.random.default_rng(3)
    gauge = AbsoluteGauge()
    for _ in range(500):
        q = float(rng.uniform(1.1, 4.0))
        length = int(rng.integers(2, 64))
        pieces = int(rng.integers(1, min(8, length) + 1))
        cuts = np.sort(rng.choice(np.arange(1, length), size=pieces - 1, replace=False))
        bounds = np.concatenate(([0], cuts, [length]))
        values = rng.standard_normal(pieces) + 1j * rng.standard_normal(pieces)
        values /= np.sum(np.abs(values) ** q) ** (1 / q)
        dense = np.concatenate([np.full(b - a, v) for a, b, v in zip(bounds, bounds[1:], values)])
        assert block_vs_norm(BlockValues(entries=dense, gauge=gauge), q) <= 3 + 1e-12


def test_decompositions_are_sound():
    rng = np.random.default_rng(4)
    gauge = AbsoluteGauge()
    for trial in range(200):
        s = 1.2 if trial % 2 else 1.5
        length = int(rng.integers(2, 65))
        entries = np.cumsum(rng.standard_normal(length) + 1j * rng.standard_normal(length))
        block = BlockValues(entries=entries, gauge=gauge, start=length)
        report = validate_decomposition(atomic_decompose(block, s, s + 0.5), block)
        assert report.max_reconstruction_error <= 1e-10
        assert all(check.valid for check in report.atoms)


def test_decomposition_mass_is_stable_under_refinement():
    gauge = AbsoluteGauge()
    ratios = []
    for length in (16, 32, 64, 128):
        t = np.arange(length) / length
        block = BlockValues(entries=np.sin(2 * np.pi * t) + 0.5 * t, gauge=gauge, start=length)
        decomposition = atomic_decompose(block, 1.5, 2.0)
        ratios.append(decomposition.l1_mass / block_vs_norm(block, 1.5))
    assert max(ratios) < 2 * min(ratios)


@pytest.mark.slow
def test_plancherel_bound_on_matrix_symbols():
    rng = np.random.default_rng(5)
    n = 2**10
    for trial in range(100):
        entries = rng.standard_normal((n, 4, 4)) + 1j * rng.standard_normal((n, 4, 4))
        report = plancherel_ratio(Symbol(n_points=n, entries=entries), trials=2, seed=trial)
        assert report.max_ratio <= report.bound + 1e-9
        assert report.adversarial_ratio >= 0.999 * report.bound


def test_dyadic_square_function_is_the_l2_norm():
    rng = np.random.default_rng(6)
    blocks = dyadic_partition(256).blocks
    for _ in range(100):
        signal = random_signal(rng, 256)
        assert lpr_square_function(signal, blocks, 2, 2) == pytest.approx(
            lp_weighted_norm(signal, 2), rel=1e-12
        )


@pytest.mark.slow
def test_square_function_ratio_stays_bounded_as_grid_grows():
    coarse = lpr_experiment(ExperimentConfig(n_points=2**8, p=4, q=2, trials=200, seed=7))
    fine = lpr_experiment(ExperimentConfig(n_points=2**12, p=4, q=2, trials=200, seed=7))
    assert fine.max_ratio <= 2 * coarse.max_ratio


@pytest.mark.slow
@pytest.mark.parametrize("r", [1, 2, 4, INF])
@pytest.mark.parametrize("s", [1, 2, 4, INF])
def test_diagonal_singletons_are_certified(r, s):
    family = OperatorFamily.on_lp(np.diag([0.5, 2.0, 1.0]), 2)
    primal = estimate_lrs_bound(family, r, s, budget=10**4, seed=8)
    assert abs(primal.bound - 2.0) <= 1e-3
    dual = estimate_lrs_bound(dualize_family(family), conjugate(r), conjugate(s), 10**4, seed=8)
    assert dual.bound == pytest.approx(primal.bound, rel=0.05)


@pytest.mark.slow
def test_tk_family_is_ls_bounded_but_not_linf_ls_bounded():
    exponent = 1.05
    ls, linf = {}, {}
    for n in (2, 8):
        family = tk_family(n, p=exponent)
        ls[n] = estimate_lrs_bound(family, exponent, exponent, 12, seed=9, iterations=5).bound
        linf[n] = estimate_lrs_bound(
            family,
            INF,
            exponent,
            12,
            seed=9,
            seed_witnesses=[tk_witness(n)],
            iterations=5,
        ).bound
    assert ls[2] <= 1 + 1e-9
    assert ls[8] <= 1 + 1e-9
    assert linf[8] >= 1.5 * linf[2]


def _grid(step):
    values = [Fraction(i, step) for i in range(step + 1)]
    return [(x, y) for x in values for y in values]


def _count_disagreements(polygon, theorem, **extra):
    misses = 0
    for x, y in _grid(100):
        params = ExponentParams(
            theorem_id=theorem, p=from_reciprocal(x), s=from_reciprocal(y), **extra
        )
        misses += polygon.classify(x, y) != region_check(params).status
    return misses


@pytest.mark.slow
def test_polygons_agree_with_predicates_on_fine_grid():
    polygons = region_vertices("hscase")
    assert _count_disagreements(polygons.weighted, TheoremId.HSCASE_I) == 0
    assert _count_disagreements(polygons.unweighted, TheoremId.HSCASE_II) == 0
    for theta in ("1/4", "1/2", "3/4"):
        polygons = region_vertices("intermediate", theta)
        assert _count_disagreements(polygons.weighted, TheoremId.INTERMEDIATE_I, theta=theta) == 0
        assert (
            _count_disagreements(polygons.unweighted, TheoremId.INTERMEDIATE_II, theta=theta) == 0
        )
        for q in ("1", "3/2", "2"):
            polygons = region_vertices("interp", theta, q)
            extra = {"theta": theta, "q": q}
            assert _count_disagreements(polygons.weighted, TheoremId.INTERP_I, **extra) == 0
            assert _count_disagreements(polygons.unweighted, TheoremId.INTERP_II, **extra) == 0


def test_symmetry_identities_are_exact():
    rng = np.random.default_rng(10)
    for _ in range(50):
        theta = Fraction(int(rng.integers(1, 1000)), 1000)
        q = from_reciprocal(Fraction(int(rng.integers(1, 1001)), 1000))
        assert symmetry_check(theta, q).all_hold


def test_multiplier_ratio_is_scale_invariant_and_commutes():
    config = ExperimentConfig(
        n_points=64, p=4, q=2, s=1.5, trials=50, seed=11, lrs_budget=4, threads=1
    )
    symbol = random_vs_symbol(11, 1.5, 1, 64, 1.0)
    base = multiplier_experiment(config, symbol)
    for factor in (0.25, 3.0):
        scaled = multiplier_experiment(config, symbol.scaled(factor))
        assert scaled.normalized_ratio == pytest.approx(base.normalized_ratio, rel=1e-10)

    rng = np.random.default_rng(11)
    for _ in range(50):
        signal = random_signal(rng, 64)
        for block in dyadic_partition(64).blocks:
            left = apply_multiplier(symbol, project(signal, block)).samples
            right = project(apply_multiplier(symbol, signal), block).samples
            assert np.allclose(left, right, rtol=0, atol=1e-12)


@pytest.mark.slow
def test_weighted_ratio_trends_with_the_characteristic():
    symbol = random_vs_symbol(12, 1.5, 1, 64, 1.0)
    characteristics, ratios = [], []
    for alpha in np.linspace(0.0, 1.5, 20):
        config = ExperimentConfig(
            n_points=64,
            p=4,
            q=2,
            s=1.5,
            trials=2,
            seed=12,
            lrs_budget=2,
            weight=WeightSpec(family="power", alpha=float(alpha)),
            threads=1,
        )
        report = multiplier_experiment(config, symbol)
        characteristics.append(report.trials[0].ap_char)
        ratios.append(report.ratio)
    correlation, _ = spearmanr(characteristics, ratios)
    assert correlation >= 0
