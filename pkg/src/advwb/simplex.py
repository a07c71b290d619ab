"""Dense two-phase simplex over exact rationals.

Solves min c.x subject to A x <= b, x >= 0 with Fraction arithmetic, so
feasibility and optimality decisions carry no rounding error.  Sized for the
small dense programs the measures module produces (hundreds of rows); pivots
use Dantzig's rule with a Bland fallback once degeneracy stalls progress.
"""

from __future__ import annotations

from fractions import Fraction

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

_ZERO = Fraction(0)
_ONE = Fraction(1)


class SimplexError(RuntimeError):
    pass


def solve_min(A, b, c, *, early_stop=None, max_pivots=200_000):
    """Minimize c.x over A x <= b, x >= 0, exactly.

    Returns (status, value, x).  `early_stop(value)` may end phase two as
    soon as a basic feasible solution reaches the caller's target; the
    reported value is then that solution's objective, not the optimum.
    """
    m = len(A)
    n = len(c)
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    c = [Fraction(v) for v in c]

    # columns: n structural, m slacks, then artificials for rows with b < 0
    art_rows = [i for i in range(m) if b[i] < 0]
    n_art = len(art_rows)
    width = n + m + n_art
    rows = []
    basis = []
    art_of_row = {}
    for k, i in enumerate(art_rows):
        art_of_row[i] = n + m + k
    for i in range(m):
        row = A[i] + [_ZERO] * (m + n_art) + [b[i]]
        row[n + i] = _ONE
        if i in art_of_row:
            for j in range(width + 1):
                row[j] = -row[j]
            row[art_of_row[i]] = _ONE
            basis.append(art_of_row[i])
        else:
            basis.append(n + i)
        rows.append(row)

    def pivot(rows, obj, basis, pr, pc):
        prow = rows[pr]
        piv = prow[pc]
        if piv != 1:
            inv = _ONE / piv
            rows[pr] = prow = [v * inv for v in prow]
        for r in rows:
            if r is prow:
                continue
            factor = r[pc]
            if factor:
                for j in range(len(prow)):
                    if prow[j]:
                        r[j] -= factor * prow[j]
        factor = obj[pc]
        if factor:
            for j in range(len(prow)):
                if prow[j]:
                    obj[j] -= factor * prow[j]
        basis[pr] = pc

    def run_phase(rows, obj, basis, allowed, stop=None):
        pivots = 0
        degenerate_run = 0
        while True:
            if stop is not None and stop(-obj[-1]):
                return "stopped"
            if degenerate_run > 64:
                pc = next((j for j in allowed if obj[j] < 0), None)  # Bland
            else:
                pc, best = None, _ZERO
                for j in allowed:
                    v = obj[j]
                    if v < best:
                        best, pc = v, j
            if pc is None:
                return OPTIMAL
            pr, best_ratio = None, None
            for i in range(len(rows)):
                coef = rows[i][pc]
                if coef > 0:
                    ratio = rows[i][-1] / coef
                    if best_ratio is None or ratio < best_ratio or (
                        ratio == best_ratio and basis[i] < basis[pr]
                    ):
                        best_ratio, pr = ratio, i
            if pr is None:
                return UNBOUNDED
            degenerate_run = degenerate_run + 1 if best_ratio == 0 else 0
            pivot(rows, obj, basis, pr, pc)
            pivots += 1
            if pivots > max_pivots:
                raise SimplexError("pivot limit exceeded")

    # phase one: drive artificials to zero
    if n_art:
        obj = [_ZERO] * (width + 1)
        for k in range(n_art):
            obj[n + m + k] = _ONE
        for i, r in enumerate(rows):
            if basis[i] >= n + m:
                for j in range(width + 1):
                    obj[j] -= r[j]
        allowed = list(range(n + m))
        status = run_phase(rows, obj, basis, allowed)
        if status == UNBOUNDED:
            raise SimplexError("phase one unbounded")
        if -obj[-1] != 0:
            return INFEASIBLE, None, None
        # pivot leftover artificials out of the basis
        for i in range(m):
            if basis[i] >= n + m:
                pc = next((j for j in range(n + m) if rows[i][j] != 0), None)
                if pc is None:
                    continue  # redundant row
                pivot(rows, [_ZERO] * (width + 1), basis, i, pc)
        for r in rows:
            del r[n + m : n + m + n_art]
        width_2 = n + m
    else:
        width_2 = width

    # phase two
    obj = c + [_ZERO] * (width_2 - n) + [_ZERO]
    for i in range(m):
        if basis[i] < len(obj) - 1 and obj[basis[i]]:
            factor = obj[basis[i]]
            row = rows[i]
            for j in range(width_2 + 1):
                if row[j]:
                    obj[j] -= factor * row[j]
    status = run_phase(rows, obj, basis, list(range(width_2)), stop=early_stop)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None
    x = [_ZERO] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = rows[i][-1]
    value = -obj[-1]
    return OPTIMAL, value, x
