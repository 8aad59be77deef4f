"""Result models returned by operations and serialized by the CLI."""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from testbench.domain.operators import LrsWitness


class HolderReport(BaseModel):
    quantity: float
    sup_norm: float
    bound: float  # sup + |J|^α [f]_{C^α}, the V^{1/α} majorant
    length: int
    alpha: float


class AtomCheck(BaseModel):
    mass: float
    vq_norm: float
    disjoint: bool
    inside_block: bool
    valid: bool


class DecompositionReport(BaseModel):
    max_reconstruction_error: float
    l1_mass: float
    atoms: List[AtomCheck]
    atom_bound_holds: bool
    valid: bool


class LrsEstimate(BaseModel):
    """Best witness found by the ℓʳ(ℓˢ) search; always a lower bound."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    bound: float
    label: str = "lower_bound"
    r: str
    s: str
    budget: int
    seed: int
    evaluations: int
    witness: Optional[LrsWitness] = None


class RBoundEstimate(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    bound: float
    label: str = "lower_bound"
    budget: int
    seed: int
    evaluations: int
    exact_expectation: bool
    selection: List[int] = Field(default_factory=list)


class TkResult(BaseModel):
    n: int
    s: float
    p: float
    lhs: float
    rhs: float
    rhs_exact: float
    lower_bound: float


class PlancherelReport(BaseModel):
    max_ratio: float
    random_ratio: float
    adversarial_ratio: float
    bound: float
    argmax_frequency: int
    trials: int


class TrialRecord(BaseModel):
    trial: int
    n_points: int
    p: str
    q: str
    s: str
    alpha: Optional[float] = None
    ap_char: Optional[float] = None
    ratio: float
    stage1: Optional[float] = None
    stage2: Optional[float] = None
    stage3: Optional[float] = None


class LprReport(BaseModel):
    max_ratio: float
    median_ratio: float
    hypothesis_ok: bool
    umd_ok: bool
    trials: List[TrialRecord]


class ChainStages(BaseModel):
    """Quantities of the atomic-decomposition chain on one input."""

    multiplier_norm: float
    littlewood_paley: float  # ‖(Σ_J |T_m S_J f|²)^{1/2}‖
    atomic: float  # Σ_k Λ_k ‖(Σ_J |A_k^J|²)^{1/2}‖
    holder_split: float  # Σ_k Λ_k ‖(Σ_J (Σ_I |c̃_I S_I f|^{q'})^{2/q'})^{1/2}‖
    lpr: float  # Σ_k Λ_k ‖(Σ_J (Σ_I |S_I f|^{q'})^{2/q'})^{1/2}‖
    input_norm: float
    lambda_total: float
    stage1: float  # multiplier_norm / littlewood_paley
    stage2: float  # littlewood_paley / holder_split, at most 1
    stage3: float  # lpr / (lambda_total · input_norm)
    lrs_ratio: float  # holder_split / lpr


class MultiplierReport(BaseModel):
    ratio: float
    median_ratio: float
    vs_norm: float
    lrs_estimate: float
    normalized_ratio: float
    region_verdicts: Dict[str, str]
    chain: Optional[ChainStages] = None
    trials: List[TrialRecord]
