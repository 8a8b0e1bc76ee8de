"""Phase-one simplex in exact rational arithmetic.

Decides whether ``A x = b, x >= 0`` has a solution and returns one.
Bland's rule keeps the method finite on degenerate systems.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from numbers import Real


def find_feasible(
    A: Sequence[Sequence[Real]], b: Sequence[Real], tol: Fraction = Fraction(0)
) -> list[Fraction] | None:
    """A nonnegative solution of ``A x = b``, or None.

    ``tol`` bounds the leftover artificial mass accepted as feasible (0 for
    exact inputs); with ``tol > 0`` the returned point satisfies the system
    only up to that residual.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if len(b) != m:
        raise ValueError("right-hand side length does not match the rows")
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(m):
        if len(A[i]) != n:
            raise ValueError("ragged constraint matrix")
        row = [Fraction(v) for v in A[i]]
        bi = Fraction(b[i])
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
        # artificial columns n..n+m-1
        row.extend(Fraction(int(k == i)) for k in range(m))
        rows.append(row)
        rhs.append(bi)
    width = n + m
    basis = list(range(n, n + m))
    # reduced costs of the phase-one objective (sum of artificials)
    cost = [Fraction(0)] * width
    for j in range(n):
        cost[j] = -sum((rows[i][j] for i in range(m)), Fraction(0))

    while True:
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        leave, best = None, None
        for i in range(m):
            a = rows[i][entering]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            # the phase-one objective is bounded below by 0, so this cannot happen
            raise ArithmeticError("unbounded phase-one problem")
        piv_row = rows[leave]
        piv = piv_row[entering]
        if piv != 1:
            piv_row[:] = [v / piv for v in piv_row]
            rhs[leave] /= piv
        for i in range(m):
            if i == leave:
                continue
            factor = rows[i][entering]
            if factor:
                r = rows[i]
                for j in range(width):
                    pj = piv_row[j]
                    if pj:
                        r[j] -= factor * pj
                rhs[i] -= factor * rhs[leave]
        factor = cost[entering]
        for j in range(width):
            pj = piv_row[j]
            if pj:
                cost[j] -= factor * pj
        basis[leave] = entering

    # artificial mass left in the basis
    leftover = sum((rhs[i] for i, var in enumerate(basis) if var >= n), Fraction(0))
    if leftover > tol:
        return None
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = rhs[i]
    return x
