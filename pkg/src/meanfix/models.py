from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

from meanfix.constants import NORM_TOL

Verdict = Literal["violated", "no-violation-found"]


class LipschitzEstimate(BaseModel):
    label: str = Field(description="Label of the map that was sampled")
    k_hat: float = Field(ge=0.0, description="Largest observed ratio |Tx - Ty| / |x - y|; a lower bound for k(T)")
    pairs_sampled: int = Field(description="Number of distinct pairs evaluated")
    argmax_pair: Tuple[List[float], List[float]] = Field(description="The pair attaining k_hat")
    seed: Optional[int] = Field(default=None, description="Seed of the sampler that produced the pairs")


class SelfMapReport(BaseModel):
    label: str = Field(description="Label of the map that was checked")
    points: int = Field(description="Number of sampled ball points")
    escapes: int = Field(description="Sampled points whose image left the ball beyond the slack")
    worst_overshoot: float = Field(description="Largest |Tx - center| - radius over the sample, may be negative")

    @property
    def passed(self) -> bool:
        return self.escapes == 0


class Violation(BaseModel):
    x: List[float]
    y: List[float]
    slack: float = Field(description="sum_k alpha_k |T^k x - T^k y|^p - |x - y|^p")


class MeanCheckReport(BaseModel):
    label: str
    alpha: List[float]
    p: float
    trials: int
    seed: int
    max_slack: float = Field(description="Largest sampled value of the mean inequality's left minus right side")
    n_violations: int
    violations: List[Violation] = Field(default_factory=list, description="Worst offending pairs, capped")
    verdict: Verdict = Field(description="Sampling can refute the inequality but never prove it")


class WitnessReport(BaseModel):
    label: str
    x: List[float]
    y: List[float]
    ratio: float = Field(description="Expansion ratio of the pair; above 1 for a genuine witness")
    inequality: Literal["nonexpansive", "mean"] = Field(
        description="Which inequality the pair violates: plain nonexpansiveness or the mean inequality"
    )
    seed: int


class ConditionResult(BaseModel):
    condition_id: str
    alpha: List[float]
    p: float
    lhs: float
    rhs: float
    verdict: bool
    interval_ok: Optional[bool] = Field(default=None, description="Range requirement on alpha_1, when the condition has one")
    alt_lhs: Optional[float] = Field(default=None, description="Left side of an equivalent algebraic form")
    alt_rhs: Optional[float] = Field(default=None, description="Right side of an equivalent algebraic form")
    k_estimates: Optional[List[float]] = Field(default=None, description="Lipschitz estimates k(T^j), j = 0, 1, ...")
    note: Optional[str] = None

    @classmethod
    def from_sides(cls, condition_id: str, alpha: List[float], p: float, lhs: float, rhs: float,
                   **kwargs) -> "ConditionResult":
        verdict = lhs <= rhs + NORM_TOL
        if kwargs.get("interval_ok") is not None:
            verdict = verdict and kwargs["interval_ok"]
        return cls(condition_id=condition_id, alpha=alpha, p=p, lhs=lhs, rhs=rhs, verdict=verdict, **kwargs)


class ChainCheck(BaseModel):
    bound: float = Field(description="tau residual divided by 1 - alpha_2 alpha_1^(-1/p)")
    observed: float = Field(description="|Tx - x|")
    passed: bool


class ResidualReport(BaseModel):
    primary: float = Field(description="|Jz - z| in the weighted product norm")
    exponents: List[int] = Field(description="Powers k_j of T attached to the parts")
    r_parts: List[float] = Field(description="|T^k_j xbar - x_j| for every part j")
    r_chain: List[float] = Field(description="|T^(k_(j+1) - 1) x_1 - x_(j+1)| for j = 1..n-1")
    r_tau: float = Field(description="|tau_alpha x_1 - x_1|")
    r_t_alpha: float = Field(description="|T_alpha z - z| with z = sum_j alpha_j T^(k_j - 1) x_1")
    r_T: float = Field(description="|T x_1 - x_1|")
    k_hat: Optional[float] = Field(default=None, description="Lipschitz estimate of T used for the bound check")
    bound: Optional[float] = Field(default=None, description="factor * max(1, k_hat) * primary")
    bounds_ok: Optional[bool] = None

    def bounded_entries(self) -> Dict[str, float]:
        """The residuals that the product-space argument drives to zero with the primary one."""
        entries = {f"r_part_{j + 1}": r for j, r in enumerate(self.r_parts[:2])}
        entries.update({f"r_chain_{j + 1}": r for j, r in enumerate(self.r_chain)})
        entries.update(r_tau=self.r_tau, r_t_alpha=self.r_t_alpha)
        return entries


class IterationTrace(BaseModel):
    scheme: Literal["km", "anchored"]
    parameter: float = Field(description="lambda for km, eps for anchored")
    residuals: List[float] = Field(description="Primary residual before each step, then at the final iterate")
    final_point: List[List[float]]
    seed: Optional[int] = None
    converged: bool
    stop_reason: Literal["tol", "max_iter", "inner_tol"]
    residual_increases: List[int] = Field(default_factory=list, description="Steps where the residual grew beyond slack")
    wall_clock: float = Field(default=0.0, exclude=True, description="Seconds spent; kept out of written reports")

    @property
    def steps(self) -> int:
        return len(self.residuals) - 1

    @property
    def final_residual(self) -> float:
        return self.residuals[-1]

    @property
    def monotone(self) -> bool:
        return not self.residual_increases


class ExampleVerification(BaseModel):
    example: str
    exact_checks: List[Dict] = Field(default_factory=list)
    self_map: List[SelfMapReport] = Field(default_factory=list)
    mean_check: Optional[MeanCheckReport] = None
    witness: Optional[WitnessReport] = None
    witness_expected: bool = False
    witness_threshold: Optional[float] = None
    failures: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures
