"""Instance documents, random generation, and number-partition reductions.

The wire format is a single JSON document with exact values only:

    {"agents": 2, "objects": 3, "utilities": [[2, 1, "1/2"], [1, 1, 1]]}

Utilities are integers or "numerator/denominator" strings; decimal floats are
rejected so that values survive round trips unchanged.  Serialization is
canonical (row-major, no whitespace, fractions in lowest terms), which makes
document digests and golden tests byte-stable.
"""

from __future__ import annotations

import hashlib
import json
import random
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DocumentSyntaxError,
    EmptyMultiset,
    InvariantError,
    SchemaError,
    SumMismatch,
    WindowViolation,
)
from .model import DiscreteAssignment, Instance, validate_instance

_RATIONAL_RE = re.compile(r"^(0|[1-9][0-9]*)/([1-9][0-9]*)$")


# ---------------------------------------------------------------------------
# Reduction inputs.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartitionInput:
    """A multiset of positive integers to split into two equal-sum halves."""

    integers: tuple

    def __init__(self, integers):
        values = tuple(int(v) for v in integers)
        if not values:
            raise EmptyMultiset("a partition input needs at least one integer")
        if any(v < 1 for v in values):
            raise SchemaError("integers", "partition inputs must be positive")
        object.__setattr__(self, "integers", values)

    @property
    def total(self) -> int:
        return sum(self.integers)


@dataclass(frozen=True)
class ThreePartitionInput:
    """3n positive weights, each strictly between W/4 and W/2, summing to nW."""

    weights: tuple
    bound: int

    def __init__(self, weights, bound):
        values = tuple(int(v) for v in weights)
        bound = int(bound)
        if not values or len(values) % 3:
            raise SchemaError("weights", "need a positive multiple of 3 weights")
        groups = len(values) // 3
        for j, w in enumerate(values):
            if 4 * w <= bound or 2 * w >= bound:
                raise WindowViolation(j, w, bound)
        if sum(values) != groups * bound:
            raise SumMismatch(sum(values), groups * bound)
        object.__setattr__(self, "weights", values)
        object.__setattr__(self, "bound", bound)

    @property
    def groups(self) -> int:
        return len(self.weights) // 3


def from_partition(pin: PartitionInput) -> Instance:
    """Two agents with identical utilities equal to the multiset's integers.

    The instance admits an equal-utility complete split exactly when the
    multiset admits an equal-sum bipartition; an odd total is a valid input
    that simply yields a no-instance.
    """
    return Instance([list(pin.integers), list(pin.integers)])


def from_three_partition(tin: ThreePartitionInput) -> Instance:
    """n agents with identical utilities equal to the 3n weights."""
    row = list(tin.weights)
    return Instance([row for _ in range(tin.groups)])


def gen_random(n: int, m: int, max_util: int, binary: bool = False, seed=None) -> Instance:
    """Seeded random instance with integer utilities in [0, max_util].

    Whole rows and columns are resampled until every agent values something
    and every object is valued, so the result always passes validation.
    """
    if n < 1 or m < 1:
        raise SchemaError("size", "need at least one agent and one object")
    if max_util < 1:
        raise SchemaError("max_util", "need max_util >= 1")
    top = 1 if binary else max_util
    rng = random.Random(seed)
    rows = [[rng.randint(0, top) for _ in range(m)] for _ in range(n)]
    while True:
        clean = True
        for i in range(n):
            if not any(rows[i]):
                rows[i] = [rng.randint(0, top) for _ in range(m)]
                clean = False
        for j in range(m):
            if not any(rows[i][j] for i in range(n)):
                for i in range(n):
                    rows[i][j] = rng.randint(0, top)
                clean = False
        if clean:
            return Instance(rows)


# ---------------------------------------------------------------------------
# Canonical example instances.
# ---------------------------------------------------------------------------


def separation_example() -> Instance:
    """2x4 instance separating envy-freeness + Pareto from price support.

    Giving agent 0 only its favourite object and agent 1 the rest is
    envy-free and Pareto optimal, yet admits no supporting prices; splitting
    the objects two and two does.
    """
    return Instance([[95, 5, 2, 1], [1, 2, 5, 95]])


def binary_gap_example() -> Instance:
    """Binary 2x3 instance whose best discrete welfare trails the fractional one.

    Every discrete split reaches Nash welfare at most 2 while sharing the
    contested middle object reaches 9/4, so no discrete assignment is
    supportable against fractional demand.
    """
    return Instance([[1, 1, 0], [0, 1, 1]])


# ---------------------------------------------------------------------------
# Documents.
# ---------------------------------------------------------------------------


def _render_value(value: Fraction):
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def serialize_instance(inst: Instance) -> str:
    """Canonical single-line JSON document for an instance."""
    doc = {
        "agents": inst.n,
        "objects": inst.m,
        "utilities": [[_render_value(v) for v in row] for row in inst.utilities],
    }
    return json.dumps(doc, separators=(",", ":"))


def parse_instance(text: str) -> Instance:
    """Parse and fully validate an instance document.

    Raises DocumentSyntaxError for malformed JSON, SchemaError for wrong
    shapes, negative values, or float literals, and InvariantError when the
    matrix fails the positivity invariants.
    """
    doc = _load_document(text)
    if not isinstance(doc, dict):
        raise SchemaError("document", "expected a JSON object")
    extra = set(doc) - {"agents", "objects", "utilities"}
    if extra:
        raise SchemaError(sorted(extra)[0], "unknown field")
    for field in ("agents", "objects", "utilities"):
        if field not in doc:
            raise SchemaError(field, "missing")
    n = _expect_count(doc["agents"], "agents")
    m = _expect_count(doc["objects"], "objects")
    utilities = doc["utilities"]
    if not isinstance(utilities, list) or len(utilities) != n:
        raise SchemaError("utilities", f"expected {n} rows")
    rows = []
    for i, row in enumerate(utilities):
        if not isinstance(row, list) or len(row) != m:
            raise SchemaError("utilities", f"row {i}: expected {m} entries")
        rows.append([_parse_value(v, i, j) for j, v in enumerate(row)])
    inst = Instance(rows)
    violations = validate_instance(inst)
    if violations:
        raise InvariantError(violations)
    return inst


def serialize_assignment(y: DiscreteAssignment) -> str:
    return json.dumps({"owner": list(y.owner)}, separators=(",", ":"))


def parse_assignment(text: str, inst: Instance) -> DiscreteAssignment:
    """Parse an {"owner": [...]} document against a specific instance."""
    doc = _load_document(text)
    if not isinstance(doc, dict) or set(doc) != {"owner"}:
        raise SchemaError("owner", "expected an object with a single 'owner' field")
    owner = doc["owner"]
    if not isinstance(owner, list) or len(owner) != inst.m:
        raise SchemaError("owner", f"expected {inst.m} entries")
    for j, o in enumerate(owner):
        if isinstance(o, bool) or not isinstance(o, int) or not 0 <= o < inst.n:
            raise SchemaError("owner", f"entry {j} must be an agent index below {inst.n}")
    return DiscreteAssignment(owner)


def instance_digest(inst: Instance) -> str:
    """sha256 of the canonical serialization."""
    return hashlib.sha256(serialize_instance(inst).encode("utf-8")).hexdigest()


def _load_document(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.lineno, exc.colno, exc.msg) from exc


def _expect_count(value, field):
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise SchemaError(field, "expected a positive integer")
    return value


def _parse_value(value, i, j):
    where = f"utilities[{i}][{j}]"
    if isinstance(value, bool):
        raise SchemaError(where, "booleans are not utilities")
    if isinstance(value, int):
        if value < 0:
            raise SchemaError(where, "utilities must be nonnegative")
        return Fraction(value)
    if isinstance(value, float):
        raise SchemaError(where, "decimal floats are not exact; use 'num/den'")
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise SchemaError(where, "expected 'numerator/denominator' with positive denominator")
        return Fraction(value)
    raise SchemaError(where, f"unsupported value {value!r}")
