from fractions import Fraction

import numpy as np
import pytest

from testbench.core.exceptions import InvalidParameterError, MissingParameterError
from testbench.domain.exponent import (
    INF,
    compare,
    conjugate,
    format_exponent,
    from_reciprocal,
    parse_exponent,
    reciprocal,
)
from testbench.harmonic.exponents import (
    ExponentParams,
    TheoremId,
    interp_exponent,
    region_check,
    region_vertices,
    symmetry_check,
)


def test_parse_exponent_spellings():
    assert parse_exponent("3/2") == Fraction(3, 2)
    assert parse_exponent(1.5) == Fraction(3, 2)
    assert parse_exponent(0.1) == Fraction(1, 10)
    assert parse_exponent(4) == Fraction(4)
    for text in ("inf", "Infinity", " oo ", "∞"):
        assert parse_exponent(text) == INF
    assert parse_exponent(float("inf")) == INF


def test_parse_exponent_rejects_garbage():
    for bad in ("abc", "1/0", True, float("nan"), None):
        with pytest.raises(InvalidParameterError):
            parse_exponent(bad)


def test_reciprocal_and_conjugate():
    assert reciprocal(INF) == 0
    assert from_reciprocal(Fraction(0)) == INF
    assert from_reciprocal(Fraction(2, 3)) == Fraction(3, 2)
    assert conjugate(Fraction(3, 2)) == 3
    assert conjugate(Fraction(1)) == INF
    assert conjugate(INF) == 1
    with pytest.raises(InvalidParameterError):
        conjugate(Fraction(1, 2))


def test_compare_and_format():
    assert compare(INF, Fraction(10**6)) == 1
    assert compare(Fraction(2), INF) == -1
    assert compare(INF, INF) == 0
    assert compare(Fraction(3, 2), Fraction(3, 2)) == 0
    assert format_exponent(Fraction(4)) == "4"
    assert format_exponent(Fraction(5, 4)) == "5/4"
    assert format_exponent(INF) == "inf"


def test_interp_exponent():
    assert interp_exponent(2, INF, Fraction(1, 2)) == 4
    assert interp_exponent(Fraction(3, 2), 2, Fraction(1, 2)) == Fraction(12, 7)


def _check(theorem, **values):
    return region_check(ExponentParams(theorem_id=theorem, **values))


def test_hscase_ii_interior_and_boundary():
    assert _check(TheoremId.HSCASE_II, p="4", s="3").status == "admissible"
    verdict = _check(TheoremId.HSCASE_II, p="4", s="4")
    assert verdict.status == "boundary"
    assert not verdict.admissible
    assert "1/s > 1/2 - 1/p" in verdict.binding_constraints


def test_hscase_i_binding_and_failure():
    verdict = _check(TheoremId.HSCASE_I, p="4", s="2")
    assert verdict.status == "admissible"
    assert verdict.weight_class == "A_{p/s}"
    assert "s <= 2" in verdict.binding_constraints

    verdict = _check(TheoremId.HSCASE_I, p="2", s="3")
    assert verdict.status == "inadmissible"
    assert "p >= s" in verdict.failed_constraints


def test_multiplier_theorems_weight_classes():
    weighted = _check(TheoremId.MULT_S_VAR_I, q="3/2", p="4", s="5/4")
    assert weighted.status == "admissible"
    assert weighted.weight_class == "A_{p/q}"

    unweighted = _check(TheoremId.MULT_S_VAR_II, q="3/2", p="4/3", s="5/4")
    assert unweighted.status == "admissible"
    assert unweighted.weight_class == "alpha_{p,q'}"


def test_a1_endpoint_equalities():
    verdict = _check(TheoremId.A1_ENDPOINT, q="3/2", r="5/3", s="3/2", p="3/2")
    assert verdict.status == "admissible"
    assert "p = q" in verdict.binding_constraints
    assert _check(TheoremId.A1_ENDPOINT, q="3/2", r="5/3", s="3/2", p="2").status == (
        "inadmissible"
    )


def test_intro_lr_small_s_checked_at_two():
    assert _check(TheoremId.INTRO_LR, r="2", p="3", s="3/2").status == "admissible"
    assert _check(TheoremId.INTRO_LR, r="2", p="3", s="2").status == "admissible"


def test_domain_edges_are_strict():
    verdict = _check(TheoremId.HSCASE_II, p="inf", s="2")
    assert verdict.status == "boundary"
    assert "p < inf" in verdict.binding_constraints


def test_multiplier_theorems_include_s_equal_one():
    for theorem in (TheoremId.MULT_S_VAR_I, TheoremId.INTRO_MAIN):
        verdict = _check(theorem, p="4", q="2", s="1")
        assert verdict.status == "admissible"
        assert verdict.admissible
        assert "s >= 1" in verdict.binding_constraints
    assert _check(TheoremId.MULT_S_VAR_II, q="3/2", p="4/3", s="1").admissible
    assert _check(TheoremId.HSCASE_I, p="4", s="1").status == "boundary"


def test_missing_and_invalid_parameters():
    with pytest.raises(MissingParameterError):
        _check(TheoremId.MULT_S_VAR_I, p="4", s="5/4")
    with pytest.raises(InvalidParameterError):
        ExponentParams(theorem_id=TheoremId.INTERP_I, q="3/2", theta="1", p="2", s="2")
    with pytest.raises(InvalidParameterError):
        ExponentParams(theorem_id=TheoremId.HSCASE_II, p="1/2", s="2")


def _grid(step):
    values = [Fraction(i, step) for i in range(step + 1)]
    return [(x, y) for x in values for y in values]


def _agree(polygon, theorem, step, **extra):
    for x, y in _grid(step):
        params = ExponentParams(
            theorem_id=theorem, p=from_reciprocal(x), s=from_reciprocal(y), **extra
        )
        assert polygon.classify(x, y) == region_check(params).status, (theorem, x, y)


def test_hscase_polygons_match_predicates():
    polygons = region_vertices("hscase")
    _agree(polygons.weighted, TheoremId.HSCASE_I, 24)
    _agree(polygons.unweighted, TheoremId.HSCASE_II, 24)


@pytest.mark.parametrize("theta,q", [("1/2", "3/2"), ("1/3", "2"), ("3/4", "1")])
def test_interp_polygons_match_predicates(theta, q):
    polygons = region_vertices("interp", theta, q)
    _agree(polygons.weighted, TheoremId.INTERP_I, 24, q=q, theta=theta)
    _agree(polygons.unweighted, TheoremId.INTERP_II, 24, q=q, theta=theta)


def test_intermediate_polygons_match_predicates():
    polygons = region_vertices("intermediate", "1/2")
    _agree(polygons.weighted, TheoremId.INTERMEDIATE_I, 24, theta="1/2")
    _agree(polygons.unweighted, TheoremId.INTERMEDIATE_II, 24, theta="1/2")


def test_region_vertices_needs_inputs():
    with pytest.raises(MissingParameterError):
        region_vertices("interp", "1/2")
    with pytest.raises(InvalidParameterError):
        region_vertices("interp", "1/2", "3")
    with pytest.raises(InvalidParameterError):
        region_vertices("unknown")


def test_symmetry_identities_hold_for_random_rationals():
    rng = np.random.default_rng(7)
    for _ in range(50):
        theta = Fraction(int(rng.integers(1, 99)), 100)
        q = from_reciprocal(Fraction(int(rng.integers(50, 101)), 100))
        assert symmetry_check(theta, q).all_hold
