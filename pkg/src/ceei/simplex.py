"""Self-contained exact simplex over rationals for tiny LPs.

Solves  max c.z  subject to  A z <= b,  z >= 0  with b >= 0, so the slack
basis is feasible and no phase-1 is needed.  Bland's rule keeps the pivot
sequence finite and deterministic despite the degenerate rows the CEEI-DISC
verifier produces.  Intended for desk-scale problems only (tens of variables,
hundreds of constraints).
"""

from __future__ import annotations

from fractions import Fraction


class Unbounded(Exception):
    """The LP has feasible points of arbitrarily large objective value."""


def maximize(c, rows, rhs):
    """Return (optimal value, solution list) for max c.z, A z <= b, z >= 0.

    `c` is the objective vector, `rows` the constraint matrix A, `rhs` the
    vector b with every entry >= 0.  All entries may be ints or Fractions.
    """
    num_vars = len(c)
    num_cons = len(rows)
    c = [Fraction(v) for v in c]
    rhs = [Fraction(v) for v in rhs]
    if any(b < 0 for b in rhs):
        raise ValueError("rhs must be nonnegative for a slack start")

    # tableau: one row per constraint, columns = vars + slacks + rhs
    width = num_vars + num_cons + 1
    tableau = []
    for r, row in enumerate(rows):
        if len(row) != num_vars:
            raise ValueError(f"constraint {r} has {len(row)} coefficients, expected {num_vars}")
        t = [Fraction(v) for v in row] + [Fraction(0)] * num_cons + [rhs[r]]
        t[num_vars + r] = Fraction(1)
        tableau.append(t)
    # objective row stores -c so optimality is "no negative entries"
    obj = [-v for v in c] + [Fraction(0)] * (num_cons + 1)
    basis = [num_vars + r for r in range(num_cons)]

    while True:
        # Bland: entering variable = lowest index with a negative reduced cost
        enter = next((j for j in range(width - 1) if obj[j] < 0), None)
        if enter is None:
            break
        # ratio test; Bland tie-break on the leaving basic variable index
        leave = None
        best = None
        for r in range(num_cons):
            a = tableau[r][enter]
            if a > 0:
                ratio = tableau[r][-1] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best = ratio
                    leave = r
        if leave is None:
            raise Unbounded()
        _pivot(tableau, obj, leave, enter)
        basis[leave] = enter

    solution = [Fraction(0)] * num_vars
    for r, var in enumerate(basis):
        if var < num_vars:
            solution[var] = tableau[r][-1]
    value = sum((ci * zi for ci, zi in zip(c, solution)), Fraction(0))
    return value, solution


def _pivot(tableau, obj, row, col):
    pivot = tableau[row][col]
    tableau[row] = [v / pivot for v in tableau[row]]
    pivot_row = tableau[row]
    for r in range(len(tableau)):
        if r != row and tableau[r][col] != 0:
            factor = tableau[r][col]
            tableau[r] = [v - factor * p for v, p in zip(tableau[r], pivot_row)]
    if obj[col] != 0:
        factor = obj[col]
        for j in range(len(obj)):
            obj[j] -= factor * pivot_row[j]
