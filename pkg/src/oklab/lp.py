"""Exact rational linear programming, just enough for geometry tests.

A single primitive is exposed: phase-1 simplex feasibility of
``A x = b, x >= 0`` over exact rationals (Bland's rule, so it always
terminates).  Convex-hull extremality and cone pointedness reduce to it.
"""

from __future__ import annotations

from fractions import Fraction


def feasible_nonneg(rows, rhs):
    """Is there an x >= 0 with ``rows @ x = rhs``?  Exact.

    ``rows`` is a list of m equality rows of length n.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [[Fraction(x) for x in r] for r in rows]
    b = [Fraction(x) for x in rhs]
    for i in range(m):
        if b[i] < 0:
            a[i] = [-x for x in a[i]]
            b[i] = -b[i]
    # Tableau with artificial basis; minimize the sum of artificials.
    # Columns: n structural + m artificial + rhs.  Artificials never
    # re-enter, so only structural reduced costs are tracked.
    tab = [a[i] + [Fraction(int(i == j)) for j in range(m)] + [b[i]]
           for i in range(m)]
    basis = [n + i for i in range(m)]
    obj = [sum(tab[i][j] for i in range(m)) for j in range(n)]
    obj.append(sum(tab[i][-1] for i in range(m)))
    while True:
        # Bland's rule: smallest structural index with positive reduced cost.
        enter = next((j for j in range(n)
                      if j not in basis and obj[j] > 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            break  # unbounded cannot happen in phase 1; defensive
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        f = obj[enter]
        if f:
            obj = [x - f * tab[leave][j] for j, x in enumerate(obj[:n])] + \
                  [obj[-1] - f * tab[leave][-1]]
        basis[leave] = enter
    return obj[-1] == 0


def in_convex_hull(point, points):
    """Exact membership of ``point`` in conv(points)."""
    if not points:
        return False
    n = len(point)
    rows = [[Fraction(q[i]) for q in points] for i in range(n)]
    rows.append([Fraction(1)] * len(points))
    rhs = [Fraction(x) for x in point] + [Fraction(1)]
    return feasible_nonneg(rows, rhs)


def cone_is_pointed(rays):
    """No nonzero nonnegative combination of the rays vanishes."""
    rays = [r for r in rays if any(r)]
    if not rays:
        return True
    n = len(rays[0])
    rows = [[Fraction(r[i]) for r in rays] for i in range(n)]
    rows.append([Fraction(1)] * len(rays))
    rhs = [Fraction(0)] * n + [Fraction(1)]
    return not feasible_nonneg(rows, rhs)
