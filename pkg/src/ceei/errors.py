"""Exception types shared across the toolkit."""


class CeeiError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(CeeiError):
    """A vector or matrix has the wrong length for the instance at hand."""

    def __init__(self, what, expected, got):
        self.what = what
        self.expected = expected
        self.got = got
        super().__init__(f"{what}: expected length {expected}, got {got}")


class InvalidAssignment(CeeiError):
    """An assignment matrix violates completeness or range constraints."""


class InstanceTooLarge(CeeiError):
    """An enumeration guard was exceeded."""

    def __init__(self, agents, objects, limit, required):
        self.agents = agents
        self.objects = objects
        self.limit = limit
        self.required = required
        super().__init__(
            f"instance with {agents} agents and {objects} objects needs "
            f"{required} enumeration steps, above the limit of {limit}"
        )


class NonConvergence(CeeiError):
    """The equilibrium solver stopped without meeting its tolerances."""

    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"no equilibrium after {iterations} iterations "
            f"(residual {residual:.3e})"
        )


class ZeroUtility(CeeiError):
    """A candidate utility vector has a zero entry where positivity is required."""

    def __init__(self, agent):
        self.agent = agent
        super().__init__(f"agent {agent} has zero utility")


class NotBinary(CeeiError):
    """A utility entry is neither 0 nor 1."""

    def __init__(self, agent, obj, value):
        self.agent = agent
        self.object = obj
        self.value = value
        super().__init__(f"utility of agent {agent} for object {obj} is {value}, not 0/1")


class NotIdenticalUtilities(CeeiError):
    """Utility rows differ where identical rows are required."""

    def __init__(self, agent):
        self.agent = agent
        super().__init__(f"utility row of agent {agent} differs from row 0")


class InconclusiveSearch(CeeiError):
    """A truncated search cannot answer an existence question."""

    def __init__(self, nodes_explored, best_welfare):
        self.nodes_explored = nodes_explored
        self.best_welfare = best_welfare
        super().__init__(
            f"search truncated after {nodes_explored} nodes; existence undecided"
        )


class EmptyMultiset(CeeiError):
    """A partition input contains no integers."""


class WindowViolation(CeeiError):
    """A weight lies outside the strict (W/4, W/2) window."""

    def __init__(self, index, weight, bound):
        self.index = index
        self.weight = weight
        self.bound = bound
        super().__init__(
            f"weight {weight} at position {index} violates {bound}/4 < w < {bound}/2"
        )


class SumMismatch(CeeiError):
    """Weights do not sum to the required total."""

    def __init__(self, total, expected):
        self.total = total
        self.expected = expected
        super().__init__(f"weights sum to {total}, expected {expected}")


class DocumentSyntaxError(CeeiError):
    """An instance or assignment document is not well-formed."""

    def __init__(self, line, col, message):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")


class SchemaError(CeeiError):
    """A document is well-formed but violates the schema."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"field '{field}': {message}")


class InvariantError(CeeiError):
    """A parsed instance violates the model invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        detail = "; ".join(str(v) for v in self.violations)
        super().__init__(f"instance invariants violated: {detail}")
