"""Schemas for rationd app."""
import hashlib
import functools
from enum import StrEnum
from decimal import Decimal
from fractions import Fraction
from typing import Annotated, Iterator, Literal, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer
from pydantic.functional_validators import BeforeValidator

from rationd.exceptions import ContractViolation


def exact_rational(value: object) -> Fraction:
    """Parse decimal strings, "p/q" strings and numbers into exact rationals"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("Booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # repr gives the shortest decimal that round-trips, so 0.95 stays 19/20
        return Fraction(repr(value))
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as error:
            raise ValueError(f"{value!r} is not a rational number") from error
    raise ValueError(f"Wrong type for rational: {type(value).__name__}")


def render_rational(value: Fraction) -> str:
    """Exact text form: a terminating decimal when possible, otherwise p/q"""
    denominator = value.denominator
    twos = fives = 0
    while denominator % 2 == 0:
        denominator //= 2
        twos += 1
    while denominator % 5 == 0:
        denominator //= 5
        fives += 1
    if denominator != 1:
        return f"{value.numerator}/{value.denominator}"

    places = max(twos, fives)
    scaled = abs(value.numerator) * 10**places // value.denominator
    sign = "-" if value < 0 else ""
    if places == 0:
        return f"{sign}{scaled}"
    digits = str(scaled).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def format_decimal(value: Fraction, places: int) -> str:
    """Fixed-point rendering used for display only"""
    scaled = round(value * 10**places)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    if places == 0:
        return f"{sign}{digits}"
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


Rational = Annotated[
    Fraction,
    BeforeValidator(exact_rational),
    PlainSerializer(render_rational, return_type=str),
]
"""Exact rational type, written as decimal or p/q text"""

BitVector = Annotated[
    tuple[bool, ...],
    PlainSerializer(lambda bits: [int(bit) for bit in bits], return_type=list[int]),
]
"""Availability vector, written as 0/1 integers"""

IdSet = Annotated[
    frozenset[str],
    PlainSerializer(sorted, return_type=list[str]),
]
"""Set of identifiers, written sorted so documents are byte-stable"""


class Agent(BaseModel):
    """Agent model"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    id: str = Field(title="Agent id")
    priority: Rational = Field(title="Priority factor alpha")
    availability: BitVector = Field(title="Availability per day")
    eligible: IdSet = Field(title="Eligible category ids", default=frozenset())
    group_label: Optional[str] = Field(title="Group label", default=None)

    def available_on(self, day_index: int) -> bool:
        """Availability on a 1-based day"""
        return 1 <= day_index <= len(self.availability) and self.availability[day_index - 1]


class Category(BaseModel):
    """Category model"""
    model_config = ConfigDict(frozen=True)

    id: str = Field(title="Category id")
    daily_quota: tuple[int, ...] = Field(title="Daily quota per day")
    overall_quota: Optional[int] = Field(title="Overall quota (Model 2)", default=None)


class DayView(BaseModel):
    """The part of an instance visible on one day"""
    model_config = ConfigDict(frozen=True)

    day_index: int = Field(title="Day index, 1-based")
    supply: int = Field(title="Daily supply")
    daily_quota: dict[str, int] = Field(title="Daily quota per category")
    available: tuple[str, ...] = Field(title="Agents available on the day")


class Instance(BaseModel):
    """Instance model"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    agents: tuple[Agent, ...] = Field(title="Agents", default=())
    categories: tuple[Category, ...] = Field(title="Categories", default=())
    num_days: int = Field(title="Number of days")
    daily_supply: tuple[int, ...] = Field(title="Daily supply per day")
    discount: Rational = Field(title="Discount factor delta")

    @functools.cached_property
    def agent_index(self) -> dict[str, int]:
        """Position of every agent id"""
        return {agent.id: index for index, agent in enumerate(self.agents)}

    @functools.cached_property
    def category_index(self) -> dict[str, int]:
        """Position of every category id"""
        return {category.id: index for index, category in enumerate(self.categories)}

    @property
    def has_overall_quotas(self) -> bool:
        """True when every category carries an overall quota (Model 2)"""
        return all(category.overall_quota is not None for category in self.categories)

    def agent(self, agent_id: str) -> Agent:
        """Agent by id"""
        return self.agents[self.agent_index[agent_id]]

    def category(self, category_id: str) -> Category:
        """Category by id"""
        return self.categories[self.category_index[category_id]]

    def day_view(self, day_index: int) -> DayView:
        """Supply, quotas and available agents of a single day"""
        if not 1 <= day_index <= self.num_days:
            raise ContractViolation(f"Day {day_index} outside 1..{self.num_days}")
        return DayView(
            day_index=day_index,
            supply=self.daily_supply[day_index - 1],
            daily_quota={category.id: category.daily_quota[day_index - 1]
                         for category in self.categories},
            available=tuple(agent.id for agent in self.agents if agent.available_on(day_index)),
        )

    def iter_day_views(self) -> Iterator[DayView]:
        """Day views in calendar order"""
        for day_index in range(1, self.num_days + 1):
            yield self.day_view(day_index)

    def with_availability(self, agent_id: str, availability: tuple[bool, ...]) -> "Instance":
        """Copy with one agent reporting a different availability vector"""
        agents = tuple(
            agent.model_copy(update={"availability": tuple(availability)}) if agent.id == agent_id else agent
            for agent in self.agents
        )
        return self._replace(agents=agents)

    def with_priorities(self, priorities: Mapping[str, Fraction]) -> "Instance":
        """Copy with the given agents' priority factors substituted"""
        agents = tuple(
            agent.model_copy(update={"priority": Fraction(priorities[agent.id])})
            if agent.id in priorities else agent
            for agent in self.agents
        )
        return self._replace(agents=agents)

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form"""
        return hashlib.sha256(self.model_dump_json().encode("utf-8")).hexdigest()

    def _replace(self, **changes: object) -> "Instance":
        """Fresh instance (no cached lookups carried over)"""
        fields = {name: getattr(self, name) for name in type(self).model_fields}
        fields.update(changes)
        return type(self)(**fields)


class Assignment(BaseModel):
    """Agent matched under a category on a day"""
    model_config = ConfigDict(frozen=True)

    status: Literal["matched"] = "matched"
    category: str = Field(title="Category id")
    day: int = Field(title="Day index, 1-based")


class Unmatched(BaseModel):
    """Agent left without the resource"""
    model_config = ConfigDict(frozen=True)

    status: Literal["unmatched"] = "unmatched"


UNMATCHED = Unmatched()

Slot = Annotated[Union[Assignment, Unmatched], Field(discriminator="status")]


class Allocation(BaseModel):
    """Allocation model: agent id -> (category, day) or unmatched"""
    model_config = ConfigDict(frozen=True)

    assignment: dict[str, Slot] = Field(title="Assignment per agent", default_factory=dict)

    @classmethod
    def empty(cls, instance: Instance) -> "Allocation":
        """Every agent unmatched"""
        return cls(assignment={agent.id: UNMATCHED for agent in instance.agents})

    @classmethod
    def from_matches(cls, instance: Instance, matches: Mapping[str, tuple[str, int]]) -> "Allocation":
        """Build from agent -> (category, day), in instance agent order"""
        unknown = set(matches) - set(instance.agent_index)
        if unknown:
            raise ContractViolation(f"Unknown agents in allocation: {sorted(unknown)}")
        assignment: dict[str, Assignment | Unmatched] = {}
        for agent in instance.agents:
            if agent.id in matches:
                category_id, day_index = matches[agent.id]
                assignment[agent.id] = Assignment(category=category_id, day=day_index)
            else:
                assignment[agent.id] = UNMATCHED
        return cls(assignment=assignment)

    def matched(self) -> Iterator[tuple[str, Assignment]]:
        """Matched agents with their slot"""
        for agent_id, slot in self.assignment.items():
            if isinstance(slot, Assignment):
                yield agent_id, slot

    def day_of(self, agent_id: str) -> Optional[int]:
        """Matched day or None"""
        slot = self.assignment.get(agent_id)
        return slot.day if isinstance(slot, Assignment) else None

    def on_day(self, day_index: int) -> dict[str, str]:
        """Agent -> category for one day"""
        return {agent_id: slot.category for agent_id, slot in self.matched() if slot.day == day_index}

    @property
    def matched_count(self) -> int:
        """Number of matched agents"""
        return sum(1 for _ in self.matched())

    def per_day_counts(self, num_days: int) -> list[int]:
        """Matched agents per day, days 1..num_days"""
        counts = [0] * num_days
        for _, slot in self.matched():
            if 1 <= slot.day <= num_days:
                counts[slot.day - 1] += 1
        return counts


class ViolationKind(StrEnum):
    """Constraint named by a violation"""
    SUPPLY = "supply"
    DAILY_QUOTA = "daily_quota"
    OVERALL_QUOTA = "overall_quota"
    ELIGIBILITY = "eligibility"
    AVAILABILITY = "availability"
    DUPLICATE = "duplicate"
    UNKNOWN = "unknown"
    SHAPE = "shape"
    NEGATIVE = "negative"
    DISCOUNT = "discount"
    PRIORITY = "priority"


class Violation(BaseModel):
    """One violated constraint"""
    model_config = ConfigDict(frozen=True)

    kind: ViolationKind = Field(title="Violated constraint")
    subjects: tuple[str, ...] = Field(title="Offending ids", default=())
    message: str = Field(title="Description")


class ValidationReport(BaseModel):
    """Validation report; empty means valid"""
    model_config = ConfigDict(frozen=True)

    violations: tuple[Violation, ...] = Field(title="Violations", default=())

    @property
    def ok(self) -> bool:
        """No violations"""
        return not self.violations

    def of_kind(self, kind: ViolationKind) -> list[Violation]:
        """Violations of one kind"""
        return [violation for violation in self.violations if violation.kind == kind]


class TieBreakOrder(BaseModel):
    """Agent precedence; first id has rank 1 (highest precedence)"""
    model_config = ConfigDict(frozen=True)

    order: tuple[str, ...] = Field(title="Agent ids by precedence")

    @classmethod
    def default(cls, instance: Instance) -> "TieBreakOrder":
        """Input order"""
        return cls(order=tuple(agent.id for agent in instance.agents))

    @functools.cached_property
    def ranks(self) -> dict[str, int]:
        """Agent id -> 1-based rank"""
        return {agent_id: position + 1 for position, agent_id in enumerate(self.order)}

    def rank(self, agent_id: str) -> int:
        """1-based rank of an agent"""
        return self.ranks[agent_id]

    def inverted(self) -> "TieBreakOrder":
        """Lowest precedence first"""
        return TieBreakOrder(order=tuple(reversed(self.order)))

    def check(self, instance: Instance) -> None:
        """Raise unless the order is a bijection on the instance's agents"""
        if len(set(self.order)) != len(self.order) or set(self.order) != set(instance.agent_index):
            raise ContractViolation("Tie-break order must list every agent exactly once")
