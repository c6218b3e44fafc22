"""Core data model: instances, assignments, prices, and welfare arithmetic.

All quantities are exact rationals (`fractions.Fraction`).  The verifiers in
this package decide equalities, so nothing in the model layer ever rounds;
floating point appears only inside the iterative equilibrium solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DimensionMismatch, InvalidAssignment


def to_rational(value) -> Fraction:
    """Coerce ints, strings like '19/20', floats and Fractions to Fraction."""
    if isinstance(value, bool):
        raise TypeError("booleans are not valid utilities")
    return Fraction(value)


class Instance:
    """An assignment problem: n agents, m objects, an n x m utility matrix.

    The matrix is stored as a tuple of row tuples of Fractions and is
    immutable after construction.  Construction only enforces shape; the
    positivity invariants (every row and every column has a positive entry)
    are reported by :func:`validate_instance` so that callers can surface
    all violations at once.
    """

    __slots__ = ("utilities",)

    def __init__(self, utilities: Sequence[Sequence]):
        rows = tuple(tuple(to_rational(v) for v in row) for row in utilities)
        if not rows:
            raise InvalidAssignment("an instance needs at least one agent")
        width = len(rows[0])
        if width == 0:
            raise InvalidAssignment("an instance needs at least one object")
        for i, row in enumerate(rows):
            if len(row) != width:
                raise DimensionMismatch(f"utility row {i}", width, len(row))
        object.__setattr__(self, "utilities", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Instance is immutable")

    @property
    def n(self) -> int:
        return len(self.utilities)

    @property
    def m(self) -> int:
        return len(self.utilities[0])

    def utility(self, agent: int, obj: int) -> Fraction:
        return self.utilities[agent][obj]

    def row(self, agent: int) -> tuple:
        return self.utilities[agent]

    def is_binary(self) -> bool:
        return all(v == 0 or v == 1 for row in self.utilities for v in row)

    def has_identical_rows(self) -> bool:
        return all(row == self.utilities[0] for row in self.utilities)

    def __eq__(self, other):
        return isinstance(other, Instance) and self.utilities == other.utilities

    def __hash__(self):
        return hash(self.utilities)

    def __repr__(self):
        return f"Instance(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class InstanceViolation:
    """One violated instance invariant, naming the offending row or column."""

    kind: str  # "zero_row" | "zero_column" | "negative_entry"
    agent: Optional[int] = None
    object: Optional[int] = None

    def __str__(self):
        if self.kind == "zero_row":
            return f"agent {self.agent} values no object"
        if self.kind == "zero_column":
            return f"object {self.object} is valued by no agent"
        return f"utility of agent {self.agent} for object {self.object} is negative"


def validate_instance(inst: Instance) -> list:
    """Return every violated instance invariant (empty list means valid)."""
    violations = []
    for i, row in enumerate(inst.utilities):
        for j, v in enumerate(row):
            if v < 0:
                violations.append(InstanceViolation("negative_entry", agent=i, object=j))
        if not any(v > 0 for v in row):
            violations.append(InstanceViolation("zero_row", agent=i))
    for j in range(inst.m):
        if not any(inst.utilities[i][j] > 0 for i in range(inst.n)):
            violations.append(InstanceViolation("zero_column", object=j))
    return violations


class FractionalAssignment:
    """An n x m matrix of fractions in [0, 1] whose columns each sum to 1."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        mat = tuple(tuple(to_rational(v) for v in row) for row in rows)
        if not mat or not mat[0]:
            raise InvalidAssignment("an assignment needs at least one agent and object")
        m = len(mat[0])
        for i, row in enumerate(mat):
            if len(row) != m:
                raise DimensionMismatch(f"assignment row {i}", m, len(row))
        for i, row in enumerate(mat):
            for j, v in enumerate(row):
                if v < 0 or v > 1:
                    raise InvalidAssignment(
                        f"share of object {j} for agent {i} is {v}, outside [0, 1]"
                    )
        for j in range(m):
            total = sum(row[j] for row in mat)
            if total != 1:
                raise InvalidAssignment(
                    f"object {j} is allocated {total} in total, not 1"
                )
        object.__setattr__(self, "rows", mat)

    def __setattr__(self, name, value):
        raise AttributeError("FractionalAssignment is immutable")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.rows[0])

    def row(self, agent: int) -> tuple:
        return self.rows[agent]

    def is_discrete(self) -> bool:
        return all(v == 0 or v == 1 for row in self.rows for v in row)

    def to_discrete(self) -> "DiscreteAssignment":
        if not self.is_discrete():
            raise InvalidAssignment("assignment has fractional entries")
        owner = []
        for j in range(self.m):
            owner.append(next(i for i in range(self.n) if self.rows[i][j] == 1))
        return DiscreteAssignment(owner)

    def __eq__(self, other):
        return isinstance(other, FractionalAssignment) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"FractionalAssignment(n={self.n}, m={self.m})"


class DiscreteAssignment:
    """A complete discrete assignment, stored as one owner per object."""

    __slots__ = ("owner",)

    def __init__(self, owner: Sequence[int]):
        owners = tuple(int(o) for o in owner)
        if not owners:
            raise InvalidAssignment("an assignment needs at least one object")
        if any(o < 0 for o in owners):
            raise InvalidAssignment("owner indices must be nonnegative")
        object.__setattr__(self, "owner", owners)

    def __setattr__(self, name, value):
        raise AttributeError("DiscreteAssignment is immutable")

    @property
    def m(self) -> int:
        return len(self.owner)

    def bundle(self, agent: int) -> tuple:
        return tuple(j for j, o in enumerate(self.owner) if o == agent)

    def bundles(self, n: int) -> list:
        out = [[] for _ in range(n)]
        for j, o in enumerate(self.owner):
            out[o].append(j)
        return [tuple(b) for b in out]

    def to_fractional(self, n: int) -> FractionalAssignment:
        if any(o >= n for o in self.owner):
            raise InvalidAssignment(f"owner index out of range for {n} agents")
        rows = [[1 if self.owner[j] == i else 0 for j in range(self.m)] for i in range(n)]
        return FractionalAssignment(rows)

    @classmethod
    def from_bundles(cls, m: int, bundles: Sequence[Sequence[int]]) -> "DiscreteAssignment":
        owner = [None] * m
        for i, bundle in enumerate(bundles):
            for j in bundle:
                if owner[j] is not None:
                    raise InvalidAssignment(f"object {j} assigned twice")
                owner[j] = i
        if any(o is None for o in owner):
            missing = [j for j, o in enumerate(owner) if o is None]
            raise InvalidAssignment(f"objects {missing} are unassigned")
        return cls(owner)

    def __eq__(self, other):
        return isinstance(other, DiscreteAssignment) and self.owner == other.owner

    def __hash__(self):
        return hash(self.owner)

    def __repr__(self):
        return f"DiscreteAssignment({list(self.owner)})"


class PriceVector:
    """One nonnegative price per object; every agent has budget 1."""

    __slots__ = ("prices",)

    def __init__(self, prices: Sequence):
        values = tuple(to_rational(p) for p in prices)
        if not values:
            raise InvalidAssignment("a price vector needs at least one object")
        for j, p in enumerate(values):
            if p < 0:
                raise InvalidAssignment(f"price of object {j} is {p}, negative")
        object.__setattr__(self, "prices", values)

    def __setattr__(self, name, value):
        raise AttributeError("PriceVector is immutable")

    @property
    def m(self) -> int:
        return len(self.prices)

    def bundle_price(self, objects: Sequence[int]) -> Fraction:
        return sum((self.prices[j] for j in objects), Fraction(0))

    def __getitem__(self, j: int) -> Fraction:
        return self.prices[j]

    def __iter__(self):
        return iter(self.prices)

    def __eq__(self, other):
        return isinstance(other, PriceVector) and self.prices == other.prices

    def __hash__(self):
        return hash(self.prices)

    def __repr__(self):
        return f"PriceVector({[str(p) for p in self.prices]})"


# ---------------------------------------------------------------------------
# Certificates: machine-checkable evidence attached to verifier verdicts.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnvyPair:
    """Agent `envious` strictly prefers the bundle of agent `envied`."""

    envious: int
    envied: int


@dataclass(frozen=True)
class DominatingAssignment:
    """An assignment weakly better for everyone and strictly better for one."""

    assignment: DiscreteAssignment


@dataclass(frozen=True)
class PriceSupport:
    """Prices under which the checked assignment is an equilibrium."""

    prices: PriceVector


@dataclass(frozen=True)
class ViolatingBundle:
    """A bundle strictly better for `agent` than its own bundle."""

    agent: int
    objects: tuple


@dataclass(frozen=True)
class KktViolation:
    """Agent `agent` owns object `object` without attaining the price ratio."""

    agent: int
    object: int
    ratio_gap: Fraction


Certificate = Union[EnvyPair, DominatingAssignment, PriceSupport, ViolatingBundle, KktViolation]


# ---------------------------------------------------------------------------
# Utility and welfare arithmetic.
# ---------------------------------------------------------------------------


def bundle_utility(inst: Instance, agent: int, row: Sequence) -> Fraction:
    """Additive utility of `agent` for an allocation row, exactly.

    `row` holds one share in [0, 1] per object; a discrete bundle is the
    special case of 0/1 shares.
    """
    shares = [to_rational(v) for v in row]
    if len(shares) != inst.m:
        raise DimensionMismatch("allocation row", inst.m, len(shares))
    if not 0 <= agent < inst.n:
        raise DimensionMismatch("agent index", inst.n, agent)
    u = inst.utilities[agent]
    return sum((s * u[j] for j, s in enumerate(shares)), Fraction(0))


def agent_utilities(inst: Instance, x) -> tuple:
    """Utility vector of an assignment (fractional or discrete), exactly."""
    x = as_fractional(inst, x)
    return tuple(bundle_utility(inst, i, x.rows[i]) for i in range(inst.n))


def nash_welfare(inst: Instance, x) -> Fraction:
    """Product of all agent utilities; 0 as soon as one agent gets nothing."""
    welfare = Fraction(1)
    for u in agent_utilities(inst, x):
        if u == 0:
            return Fraction(0)
        welfare *= u
    return welfare


def as_fractional(inst: Instance, x) -> FractionalAssignment:
    """Normalize discrete or fractional input to a FractionalAssignment."""
    if isinstance(x, DiscreteAssignment):
        if x.m != inst.m:
            raise DimensionMismatch("assignment", inst.m, x.m)
        return x.to_fractional(inst.n)
    if isinstance(x, FractionalAssignment):
        if x.n != inst.n:
            raise DimensionMismatch("assignment rows", inst.n, x.n)
        if x.m != inst.m:
            raise DimensionMismatch("assignment columns", inst.m, x.m)
        return x
    return FractionalAssignment(x)
