"""Run summaries printed by the command line."""
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from rationd import config
from rationd.model import total_utility
from rationd.schemas import Allocation, Instance, Rational, format_decimal, render_rational


def render_value(value: Fraction, exact: bool = False) -> str:
    """Six-decimal display, or the exact rational"""
    return render_rational(value) if exact else format_decimal(value, config.DECIMAL_PLACES)


class RunSummary(BaseModel):
    """Headline figures of one solver run"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    instance_digest: str
    solver: str
    utility: Rational
    matched_count: int
    per_day_counts: tuple[int, ...]
    duration_seconds: float = Field(ge=0)

    @model_validator(mode="after")
    def counts_agree(self) -> "RunSummary":
        if sum(self.per_day_counts) != self.matched_count:
            raise ValueError(f"per-day counts sum to {sum(self.per_day_counts)}, matched {self.matched_count}")
        return self

    @classmethod
    def from_allocation(cls, instance: Instance, solver: str, alloc: Allocation,
                        duration_seconds: float) -> "RunSummary":
        return cls(
            instance_digest=instance.digest(),
            solver=solver,
            utility=total_utility(instance, alloc),
            matched_count=alloc.matched_count,
            per_day_counts=tuple(alloc.per_day_counts(instance.num_days)),
            duration_seconds=duration_seconds,
        )

    def render(self, exact: bool = False) -> str:
        """Multi-line text block"""
        return "\n".join([
            f"solver:        {self.solver}",
            f"instance:      {self.instance_digest[:16]}",
            f"utility:       {render_value(self.utility, exact)}",
            f"matched:       {self.matched_count}",
            f"per day:       {' '.join(str(count) for count in self.per_day_counts)}",
            f"seconds:       {self.duration_seconds:.3f}",
        ])


def render_ratio(ratio: Optional[Fraction], exact: bool = False) -> str:
    return "inf" if ratio is None else render_value(ratio, exact)
