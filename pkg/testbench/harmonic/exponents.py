"""
Exact exponent arithmetic and admissible regions of the multiplier theorems.

All regions live in the (1/p, 1/s) unit square and are evaluated with
`fractions.Fraction`; a strict inequality met with equality is reported as
"boundary" rather than admissible.
"""

from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from testbench.core.exceptions import InvalidParameterError, MissingParameterError
from testbench.domain.exponent import (
    ExponentField,
    Exponent,
    format_exponent,
    from_reciprocal,
    parse_exponent,
    reciprocal,
)

HALF = Fraction(1, 2)
ZERO = Fraction(0)
ONE = Fraction(1)

Point = Tuple[Fraction, Fraction]


class TheoremId(str, Enum):
    HSCASE_I = "hscase_i"
    HSCASE_II = "hscase_ii"
    MULT_S_VAR_I = "mult_s_var_i"
    MULT_S_VAR_II = "mult_s_var_ii"
    INTRO_MAIN = "intro_main"
    A1_ENDPOINT = "a1_endpoint"
    INTERP_I = "interp_i"
    INTERP_II = "interp_ii"
    INTERMEDIATE_I = "intermediate_i"
    INTERMEDIATE_II = "intermediate_ii"
    INTRO_LR = "intro_lr"
    LR_SMALL_S = "lr_small_s"
    LR_LARGE_S = "lr_large_s"
    SCHATTEN = "schatten"
    LR_DIRECT_SUM = "lr_direct_sum"
    LR_WEIGHTED_S = "lr_weighted_s"


SMALL_S_CASES = ("i_a", "i_b", "ii_a", "ii_b", "iii_a", "iii_b")
DIRECT_SUM_CASES = ("i", "ii")


def as_fraction(value) -> Fraction:
    """Exact rational from a Fraction, int, string or float (through its repr)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidParameterError(f"cannot read {value!r} as a rational number") from exc


def interp_exponent(p, q, theta) -> Exponent:
    """[p, q]_θ defined by 1/[p,q]_θ = (1-θ)/p + θ/q, with 1/∞ = 0 and 1/0 = ∞."""
    theta = as_fraction(theta)
    if not ZERO <= theta <= ONE:
        raise InvalidParameterError(f"theta must lie in [0, 1], got {theta}")
    p, q = parse_exponent(p), parse_exponent(q)
    for name, value in (("p", p), ("q", q)):
        if reciprocal(value) > 1:
            raise InvalidParameterError(
                f"{name} must lie in [1, inf], got {format_exponent(value)}"
            )
    return from_reciprocal((1 - theta) * reciprocal(p) + theta * reciprocal(q))


def interp_reciprocal(p, q, theta) -> Fraction:
    return reciprocal(interp_exponent(p, q, theta))


class ExponentParams(BaseModel):
    """Exponents for one theorem; only the ones it consumes need to be set."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    theorem_id: TheoremId
    p: Optional[ExponentField] = None
    q: Optional[ExponentField] = None
    r: Optional[ExponentField] = None
    s: Optional[ExponentField] = None
    theta: Optional[Fraction] = None
    case: Optional[str] = None

    @field_validator("theta", mode="before")
    @classmethod
    def _theta(cls, value):
        if value is None:
            return None
        theta = as_fraction(value)
        if not ZERO < theta < ONE:
            raise InvalidParameterError(f"theta must lie in (0, 1), got {theta}")
        return theta

    @field_validator("p", "q", "r", "s")
    @classmethod
    def _at_least_one(cls, value):
        if value is not None and reciprocal(value) > 1:
            raise InvalidParameterError(
                f"exponents must lie in [1, inf], got {format_exponent(value)}"
            )
        return value

    def require(self, *names: str):
        values = []
        for name in names:
            value = getattr(self, name)
            if value is None:
                raise MissingParameterError(name, self.theorem_id.value)
            values.append(value)
        return values


class Constraint(BaseModel):
    """left < right, left <= right or left == right, with a readable label."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    label: str
    left: Fraction
    relation: Literal["<", "<=", "=="]
    right: Fraction

    def holds(self) -> bool:
        if self.relation == "<":
            return self.left < self.right
        if self.relation == "<=":
            return self.left <= self.right
        return self.left == self.right

    def holds_relaxed(self) -> bool:
        if self.relation == "<":
            return self.left <= self.right
        return self.holds()

    def active(self) -> bool:
        return self.left == self.right


def less(label: str, left, right) -> Constraint:
    return Constraint(label=label, left=Fraction(left), relation="<", right=Fraction(right))


def at_most(label: str, left, right) -> Constraint:
    return Constraint(label=label, left=Fraction(left), relation="<=", right=Fraction(right))


def equal(label: str, left, right) -> Constraint:
    return Constraint(label=label, left=Fraction(left), relation="==", right=Fraction(right))


class RegionVerdict(BaseModel):
    theorem_id: str
    admissible: bool
    status: Literal["admissible", "boundary", "inadmissible"]
    binding_constraints: List[str] = Field(default_factory=list)
    failed_constraints: List[str] = Field(default_factory=list)
    weight_class: str = "none"


def _domain(x: Fraction, y: Fraction, s_from_one: bool = False) -> List[Constraint]:
    s_low = at_most("s >= 1", y, ONE) if s_from_one else less("s > 1", y, ONE)
    return [
        less("p < inf", ZERO, x),
        less("p > 1", x, ONE),
        less("s < inf", ZERO, y),
        s_low,
    ]


def _q_range(q: Fraction, closed_low: bool = False, closed_high: bool = True) -> List[Constraint]:
    """1 < q <= 2 in reciprocal form, endpoints as requested."""
    low = at_most if closed_low else less
    high = at_most if closed_high else less
    return [low("q > 1", q, ONE), high("q <= 2", HALF, q)]


def _r_finite(r: Fraction) -> List[Constraint]:
    return [less("r < inf", ZERO, r), less("r > 1", r, ONE)]


def _lebesgue_large_s(x, y, r, label: str) -> List[Constraint]:
    """1/s > max{1/2-1/p, 1/2-1/r, 1/p-1/r} for r >= 2, the mirrored maxima otherwise."""
    if r <= HALF:
        return [
            less(f"{label} > 1/2 - 1/p", HALF - x, y),
            less(f"{label} > 1/2 - 1/r", HALF - r, y),
            less(f"{label} > 1/p - 1/r", x - r, y),
        ]
    return [
        less(f"{label} > 1/p - 1/2", x - HALF, y),
        less(f"{label} > 1/r - 1/2", r - HALF, y),
        less(f"{label} > 1/r - 1/p", r - x, y),
    ]


def _hscase_i(params, x, y):
    return [at_most("s <= 2", HALF, y), at_most("p >= s", x, y)], "A_{p/s}"


def _hscase_ii(params, x, y):
    return [
        less("1/s > 1/p - 1/2", x - HALF, y),
        less("1/s > 1/2 - 1/p", HALF - x, y),
    ], "none"


def _mult_s_var_i(params, x, y):
    (q,) = params.require("q")
    q = reciprocal(q)
    return _q_range(q) + [less("s < q", q, y), less("p > q", x, q)], "A_{p/q}"


def _mult_s_var_ii(params, x, y):
    (q,) = params.require("q")
    q = reciprocal(q)
    return _q_range(q) + [less("s < q", q, y), less("p < q'", 1 - q, x)], "alpha_{p,q'}"


def _a1_endpoint(params, x, y):
    q, r = (reciprocal(value) for value in params.require("q", "r"))
    constraints = [
        less("q > 1", q, ONE),
        less("q < 2", HALF, q),
        less("r > 1", r, ONE),
        less("r < 2", HALF, r),
        equal("s = min{q, r}", y, max(q, r)),
        equal("p = q", x, q),
    ]
    return constraints, "A_1"


def _interp_i(params, x, y):
    q, theta = params.require("q", "theta")
    q = reciprocal(q)
    a = (1 - theta) * q
    constraints = _q_range(q, closed_low=True) + [
        less("s < p", x, y),
        less("s < [q,2]_theta", a + theta / 2, y),
        at_most("s >= [q,1]_theta", y, a + theta),
    ]
    return constraints, "A_{p/s}"


def _interp_ii(params, x, y):
    q, theta = params.require("q", "theta")
    q = reciprocal(q)
    a = (1 - theta) * q
    constraints = _q_range(q, closed_low=True) + [
        less("1/s > 1/[q,2]_theta - 1/p", a + theta / 2 - x, y),
        less("1/s > (1-theta)/q", a, y),
        less("1/s > 1/p - theta/2", x - theta / 2, y),
        less("p > [q,1]_theta", x, a + theta),
    ]
    return constraints, "none"


def _intermediate_i(params, x, y):
    (theta,) = params.require("theta")
    return [
        less("1/s > 1/p", x, y),
        less("1/s > 1 - theta/2", 1 - theta / 2, y),
    ], "A_{p/s}"


def _intermediate_ii(params, x, y):
    (theta,) = params.require("theta")
    return [
        less("1/s > 1 - theta/2 - 1/p", 1 - theta / 2 - x, y),
        less("1/s > 1 - theta", 1 - theta, y),
        less("1/s > 1/p - theta/2", x - theta / 2, y),
    ], "none"


def _intro_lr(params, x, y):
    (r,) = params.require("r")
    r = reciprocal(r)
    # V^s ⊂ V^2 for s < 2, so smaller s is checked at s = 2
    effective = min(y, HALF)
    return _r_finite(r) + _lebesgue_large_s(x, effective, r, "1/max{s,2}"), "none"


def _lr_large_s(params, x, y):
    (r,) = params.require("r")
    r = reciprocal(r)
    constraints = _r_finite(r) + [at_most("s >= 2", y, HALF)]
    return constraints + _lebesgue_large_s(x, y, r, "1/s"), "none"


def _schatten(params, x, y):
    (r,) = params.require("r")
    r = reciprocal(r)
    gap = abs(r - (1 - r))
    dual_p = 1 - x
    if r <= HALF:
        rows = [
            less("1/s > 1/p' - 1/r", dual_p - r, y),
            less("1/s > |1/r - 1/r'|", gap, y),
            less("1/s > 1/p - 1/r", x - r, y),
        ]
    else:
        rows = [
            less("1/s > 1/r - 1/p'", r - dual_p, y),
            less("1/s > |1/r - 1/r'|", gap, y),
            less("1/s > 1/r - 1/p", r - x, y),
        ]
    return _r_finite(r) + rows, "none"


def _lr_small_s(params, x, y):
    (r,) = params.require("r")
    case = params.case
    if case is None:
        raise MissingParameterError("case", params.theorem_id.value)
    if case not in SMALL_S_CASES:
        raise InvalidParameterError(f"lr_small_s case must be one of {SMALL_S_CASES}, got {case!r}")
    r = reciprocal(r)
    constraints = [less("s < 2", HALF, y)]
    if case.startswith("iii"):
        constraints += [less("r < 2", HALF, r), less("r > 1", r, ONE)]
        if case == "iii_a":
            return constraints + [less("p < 2", HALF, x)], "alpha_{p,2}"
        return constraints + [less("p > r", x, r), less("s < r", r, y)], "A_{p/s}"
    if case.startswith("ii"):
        constraints += [less("r > 2", r, HALF), less("r < inf", ZERO, r)]
        if case == "ii_a":
            return constraints + [less("p > 2", x, HALF)], "A_{p/2}"
        return constraints + [less("p < r", r, x), less("s < r'", 1 - r, y)], "alpha_{p,s'}"
    constraints.append(equal("r = 2", r, HALF))
    if case == "i_a":
        return constraints + [at_most("p >= s", x, y)], "A_{p/s}"
    return constraints + [at_most("p <= s'", 1 - y, x)], "alpha_{p,s'}"


def _lr_direct_sum(params, x, y):
    (r,) = params.require("r")
    case = params.case
    if case is None:
        raise MissingParameterError("case", params.theorem_id.value)
    if case not in DIRECT_SUM_CASES:
        raise InvalidParameterError(f"lr_direct_sum case must be 'i' or 'ii', got {case!r}")
    r = reciprocal(r)
    constraints = [less("r > 1", r, ONE), less("r < 2", HALF, r), less("s < r", r, y)]
    if case == "i":
        return constraints + [less("p > r", x, r)], "A_{p/s}"
    return constraints + [less("p < r'", 1 - r, x)], "alpha_{p,s'}"


def _lr_weighted_s(params, x, y):
    (r,) = params.require("r")
    r = reciprocal(r)
    return _r_finite(r) + [
        less("s < 2", HALF, y),
        less("1/p < 1/s", x, y),
        at_most("1/s <= 1/r + 1/2", y, r + HALF),
    ], "A_{p/s}"


RULES: Dict[TheoremId, Callable] = {
    TheoremId.HSCASE_I: _hscase_i,
    TheoremId.HSCASE_II: _hscase_ii,
    TheoremId.MULT_S_VAR_I: _mult_s_var_i,
    TheoremId.INTRO_MAIN: _mult_s_var_i,
    TheoremId.MULT_S_VAR_II: _mult_s_var_ii,
    TheoremId.A1_ENDPOINT: _a1_endpoint,
    TheoremId.INTERP_I: _interp_i,
    TheoremId.INTERP_II: _interp_ii,
    TheoremId.INTERMEDIATE_I: _intermediate_i,
    TheoremId.INTERMEDIATE_II: _intermediate_ii,
    TheoremId.INTRO_LR: _intro_lr,
    TheoremId.LR_SMALL_S: _lr_small_s,
    TheoremId.LR_LARGE_S: _lr_large_s,
    TheoremId.SCHATTEN: _schatten,
    TheoremId.LR_DIRECT_SUM: _lr_direct_sum,
    TheoremId.LR_WEIGHTED_S: _lr_weighted_s,
}

# theorems stated for s in [1, q)
S_FROM_ONE = frozenset(
    {TheoremId.MULT_S_VAR_I, TheoremId.MULT_S_VAR_II, TheoremId.INTRO_MAIN}
)


def constraints_for(params: ExponentParams) -> Tuple[List[Constraint], str]:
    p, s = params.require("p", "s")
    x, y = reciprocal(p), reciprocal(s)
    constraints, weight_class = RULES[params.theorem_id](params, x, y)
    s_from_one = params.theorem_id in S_FROM_ONE
    return _domain(x, y, s_from_one) + constraints, weight_class


def region_check(params: ExponentParams) -> RegionVerdict:
    """Evaluate the theorem's exponent conditions exactly."""
    constraints, weight_class = constraints_for(params)
    failed = [c.label for c in constraints if not c.holds_relaxed()]
    strict_equal = [c.label for c in constraints if c.relation == "<" and c.active()]
    if failed:
        status = "inadmissible"
    elif strict_equal:
        status = "boundary"
    else:
        status = "admissible"
    binding = [c.label for c in constraints if c.active() or not c.holds()]
    return RegionVerdict(
        theorem_id=params.theorem_id.value,
        admissible=status == "admissible",
        status=status,
        binding_constraints=binding,
        failed_constraints=failed,
        weight_class=weight_class,
    )


def _cross(a: Point, b: Point, c: Point) -> Fraction:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


class Polygon(BaseModel):
    """
    Convex polygon with exact vertices; edge i joins vertex i and i+1 and is
    part of the region exactly when `closed_edges[i]` is set.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vertices: List[Point]
    closed_edges: List[bool]

    def edges(self):
        count = len(self.vertices)
        for i in range(count):
            yield self.vertices[i], self.vertices[(i + 1) % count], self.closed_edges[i]

    def orientation(self) -> int:
        area = sum(a[0] * b[1] - b[0] * a[1] for a, b, _ in self.edges())
        return 1 if area > 0 else -1

    def classify(self, x, y) -> str:
        """admissible (interior or closed edge), boundary (open edge) or inadmissible."""
        point = (as_fraction(x), as_fraction(y))
        sign = self.orientation()
        on_open = False
        for a, b, closed in self.edges():
            side = _cross(a, b, point) * sign
            if side < 0:
                return "inadmissible"
            if side == 0 and not closed:
                on_open = True
        return "boundary" if on_open else "admissible"


class RegionPolygons(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    figure: str
    weighted: Polygon
    unweighted: Polygon
    ticks: Dict[str, Fraction]


POLYGON_THEOREMS = {
    "hscase": (TheoremId.HSCASE_I, TheoremId.HSCASE_II),
    "interp": (TheoremId.INTERP_I, TheoremId.INTERP_II),
    "intermediate": (TheoremId.INTERMEDIATE_I, TheoremId.INTERMEDIATE_II),
}


def _hscase_polygons() -> RegionPolygons:
    corner = (ZERO, ONE)
    unweighted = Polygon(
        vertices=[corner, (ZERO, HALF), (HALF, ZERO), (ONE, HALF), (ONE, ONE)],
        closed_edges=[False] * 5,
    )
    weighted = Polygon(
        vertices=[corner, (ZERO, HALF), (HALF, HALF), (ONE, ONE)],
        closed_edges=[False, True, True, False],
    )
    return RegionPolygons(
        figure="hscase", weighted=weighted, unweighted=unweighted, ticks={"1/2": HALF}
    )


def _interp_polygons(theta: Fraction, q, figure: str) -> RegionPolygons:
    a = (1 - theta) * reciprocal(q)
    low, mid, high = a, a + theta / 2, a + theta
    unweighted = Polygon(
        vertices=[
            (ZERO, ONE),
            (ZERO, mid),
            (theta / 2, low),
            (mid, low),
            (high, mid),
            (high, ONE),
        ],
        closed_edges=[False] * 6,
    )
    weighted = Polygon(
        vertices=[(ZERO, mid), (mid, mid), (high, high), (ZERO, high)],
        closed_edges=[False, False, high < 1, False],
    )
    ticks = {
        "1/[inf,2]_theta": interp_reciprocal("inf", 2, theta),
        "1/[q,inf]_theta": interp_reciprocal(q, "inf", theta),
        "1/[q,2]_theta": interp_reciprocal(q, 2, theta),
        "1/[q,1]_theta": interp_reciprocal(q, 1, theta),
    }
    return RegionPolygons(figure=figure, weighted=weighted, unweighted=unweighted, ticks=ticks)


def region_vertices(figure: str, theta=None, q=None) -> RegionPolygons:
    """
    Weighted and unweighted admissible polygons for "hscase", "interp"
    (needs θ and q) or "intermediate" (needs θ; the interp picture at q = 1).
    """
    if figure == "hscase":
        return _hscase_polygons()
    if figure not in POLYGON_THEOREMS:
        raise InvalidParameterError(
            f"no polygon for {figure!r}; choose one of {sorted(POLYGON_THEOREMS)}"
        )
    if theta is None:
        raise MissingParameterError("theta", figure)
    theta = as_fraction(theta)
    if not ZERO < theta < ONE:
        raise InvalidParameterError(f"theta must lie in (0, 1), got {theta}")
    if figure == "intermediate":
        return _interp_polygons(theta, ONE, figure)
    if q is None:
        raise MissingParameterError("q", figure)
    q = parse_exponent(q)
    if not HALF <= reciprocal(q) <= ONE:
        raise InvalidParameterError(f"q must lie in [1, 2], got {format_exponent(q)}")
    return _interp_polygons(theta, q, figure)


class SymmetryReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    theta: Fraction
    q: str
    identities: Dict[str, Tuple[Fraction, Fraction]]
    all_hold: bool


def symmetry_check(theta, q) -> SymmetryReport:
    """The equal spacings of the tick marks 1/[q,∞]_θ, 1/[q,2]_θ, 1/[q,1]_θ and θ/2."""
    theta = as_fraction(theta)
    if not ZERO < theta < ONE:
        raise InvalidParameterError(f"theta must lie in (0, 1), got {theta}")
    q = parse_exponent(q)
    inf_2 = interp_reciprocal("inf", 2, theta)
    q_inf = interp_reciprocal(q, "inf", theta)
    q_2 = interp_reciprocal(q, 2, theta)
    q_1 = interp_reciprocal(q, 1, theta)
    identities = {
        "theta/2 = 1/[inf,2]": (theta / 2, inf_2),
        "1/[inf,2] = 1/[q,1] - 1/[q,2]": (inf_2, q_1 - q_2),
        "1/[q,1] - 1/[q,2] = 1/[q,2] - 1/[q,inf]": (q_1 - q_2, q_2 - q_inf),
        "(1-theta)/q = 1/[q,inf]": ((1 - theta) * reciprocal(q), q_inf),
        "1/[q,inf] = 1/[q,2] - 1/[inf,2]": (q_inf, q_2 - inf_2),
    }
    return SymmetryReport(
        theta=theta,
        q=format_exponent(q),
        identities=identities,
        all_hold=all(left == right for left, right in identities.values()),
    )
