import numpy as np
import pytest

from testbench.core.exceptions import InvalidParameterError, ShapeMismatchError
from testbench.domain.exponent import INF
from testbench.domain.operators import LrsWitness, OperatorFamily
from testbench.domain.spaces import SpaceSpec
from testbench.harmonic.op_bounds import (
    _restart_plan,
    apply_selection,
    dualize_family,
    estimate_lrs_bound,
    estimate_r_bound,
    eval_lrs,
    lattice_norm,
    lrs_monotonicity_segment,
    positive_single_bound,
    rademacher_norm,
)

DIAGONAL = np.diag([0.5, 2.0, 1.0])


@pytest.fixture
def diagonal_family():
    return OperatorFamily.on_lp(DIAGONAL, 2)


def test_lattice_norm_single_cell_is_base_norm():
    values = np.array([[[3.0, 4.0]]])
    assert lattice_norm(values, SpaceSpec.lp(2, 2), 1, INF) == pytest.approx(5.0)


def test_lattice_norm_mixes_cells_pointwise():
    values = np.zeros((2, 1, 2))
    values[0, 0] = [3.0, 0.0]
    values[1, 0] = [4.0, 1.0]
    # pointwise ℓ² over j gives (5, 1), then ℓ¹ over the base
    assert lattice_norm(values, SpaceSpec.lp(1, 2), 2, 2) == pytest.approx(6.0)
    assert lattice_norm(values, SpaceSpec.lp(1, 2), INF, 2) == pytest.approx(5.0)


def test_apply_selection():
    matrices = np.stack([np.eye(2), 2 * np.eye(2)])
    selection = np.array([[0, 1]])
    inputs = np.ones((1, 2, 2))
    outputs = apply_selection(matrices, selection, inputs)
    assert np.allclose(outputs[0, 0], [1.0, 1.0])
    assert np.allclose(outputs[0, 1], [2.0, 2.0])


def test_eval_lrs_validates_witness(diagonal_family):
    witness = LrsWitness(selection=[[1]], inputs=np.ones((1, 1, 3)))
    with pytest.raises(InvalidParameterError):
        eval_lrs(diagonal_family, witness, 2, 2)
    witness = LrsWitness(selection=[[0]], inputs=np.ones((1, 1, 2)))
    with pytest.raises(ShapeMismatchError):
        eval_lrs(diagonal_family, witness, 2, 2)
    with pytest.raises(InvalidParameterError):
        eval_lrs(diagonal_family, LrsWitness(selection=[[0]], inputs=np.ones((1, 1, 3))), 0.5, 2)


def test_positive_single_bound():
    assert positive_single_bound(DIAGONAL, SpaceSpec.lp(2, 3)) == pytest.approx(2.0)
    with pytest.raises(InvalidParameterError):
        positive_single_bound(-DIAGONAL, SpaceSpec.lp(2, 3))


@pytest.mark.parametrize("r", [1, 2, 4, "inf"])
@pytest.mark.parametrize("s", [1, 2, 4, "inf"])
def test_positive_singleton_estimate_recovers_norm(diagonal_family, r, s):
    estimate = estimate_lrs_bound(diagonal_family, r, s, budget=50, seed=1, iterations=10)
    assert abs(estimate.bound - 2.0) <= 1e-3
    assert estimate.witness.bound == pytest.approx(estimate.bound)
    assert estimate.label == "lower_bound"


def test_dual_family_estimate_agrees(diagonal_family):
    dual = dualize_family(diagonal_family)
    assert np.allclose(dual.matrices[0], DIAGONAL)
    primal = estimate_lrs_bound(diagonal_family, 4, "inf", budget=30, seed=2, iterations=10)
    adjoint = estimate_lrs_bound(dual, "4/3", 1, budget=30, seed=2, iterations=10)
    assert adjoint.bound == pytest.approx(primal.bound, rel=0.05)


def test_dualize_conjugates_spaces():
    family = OperatorFamily.on_lp(np.array([[1.0, 1j], [0.0, 1.0]]), 3)
    dual = dualize_family(family)
    assert str(dual.base_space_in) == "l3/2:2"
    assert dual.matrices[0, 0, 1] == 0.0
    assert dual.matrices[0, 1, 0] == -1j


def test_estimate_is_deterministic_for_any_thread_count(rng):
    family = OperatorFamily.on_lp(rng.standard_normal((3, 2, 2)), 2)
    first = estimate_lrs_bound(family, 2, 1, budget=40, seed=5, iterations=8, threads=1)
    second = estimate_lrs_bound(family, 2, 1, budget=40, seed=5, iterations=8, threads=4)
    assert first.bound == second.bound
    assert np.array_equal(first.witness.selection, second.witness.selection)
    assert first.evaluations == second.evaluations


def test_estimate_uses_seed_witnesses(diagonal_family):
    inputs = np.zeros((1, 1, 3))
    inputs[0, 0, 1] = 1.0
    witness = LrsWitness(selection=[[0]], inputs=inputs)
    estimate = estimate_lrs_bound(
        diagonal_family, 2, 2, budget=1, seed=0, seed_witnesses=[witness], iterations=1
    )
    assert estimate.bound == pytest.approx(2.0)


def test_budget_must_be_positive(diagonal_family):
    with pytest.raises(InvalidParameterError):
        estimate_lrs_bound(diagonal_family, 2, 2, budget=0)
    with pytest.raises(InvalidParameterError):
        estimate_r_bound(diagonal_family, budget=0)


def test_restart_plan_spends_budget():
    assert _restart_plan(50, 10) == [10, 10, 10, 10]
    assert _restart_plan(5, 10) == [4]
    assert _restart_plan(1, 10) == [0]


def test_monotonicity_segment(diagonal_family):
    estimates = lrs_monotonicity_segment(
        diagonal_family, 1, "inf", [(1, 2), (2, "inf")], budget=10, seed=0
    )
    assert len(estimates) == 2
    assert all(abs(e.bound - 2.0) <= 1e-3 for e in estimates)
    with pytest.raises(InvalidParameterError):
        lrs_monotonicity_segment(diagonal_family, 2, 4, [(1, 2)], budget=10)


def test_rademacher_norm_exact_patterns():
    values = np.array([[1.0, 0.0], [0.0, 1.0]])
    signs = np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]])
    assert rademacher_norm(values, SpaceSpec.lp(2, 2), signs) == pytest.approx(np.sqrt(2.0))


def test_r_bound_of_positive_singleton(diagonal_family):
    estimate = estimate_r_bound(diagonal_family, budget=30, seed=0, iterations=5)
    assert estimate.bound == pytest.approx(2.0, abs=1e-3)
    assert estimate.exact_expectation
    assert estimate.selection
