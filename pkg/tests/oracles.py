"""Independent brute-force oracles used to pin expected values.

These deliberately avoid the library's algorithms: membership by
Caratheodory subset solves, face enumeration by exhaustive active-set
closure over all facet subsets, windings by upper-half-plane zero/pole
counts, projections by parametrized gradient descent.
"""

import itertools
from fractions import Fraction

import numpy as np

from conewh.exact import rank, rvec, solve_linear, vdot


def vrep_member(rays, x):
    """Exact membership in cone{rays} by Caratheodory subset enumeration."""
    x = rvec(x)
    if all(c == 0 for c in x):
        return True
    rays = [rvec(r) for r in rays]
    n = len(x)
    for size in range(1, n + 1):
        for subset in itertools.combinations(rays, size):
            if rank(list(subset)) < size:
                continue
            # solve sum mu_i r_i = x exactly: stack columns
            cols = list(zip(*subset))
            sol = solve_linear([rvec(c) for c in cols], x)
            if sol is not None and all(m >= 0 for m in sol):
                # verify (solve_linear returns any solution of the stacked system)
                recon = tuple(sum((m * r[j] for m, r in zip(sol, subset)), Fraction(0))
                              for j in range(n))
                if recon == x and all(m >= 0 for m in sol):
                    return True
    return False


def hrep_member(ineqs, x):
    x = rvec(x)
    return all(vdot(rvec(a), x) >= 0 for a in ineqs)


def integer_grid(n, radius):
    return [tuple(Fraction(c) for c in pt)
            for pt in itertools.product(range(-radius, radius + 1), repeat=n)]


def brute_force_faces(cone):
    """All faces by exhaustive subset enumeration over the facet inequalities.

    Returns the set of closed active sets with their generator tuples and dims.
    """
    m = len(cone.inequalities)
    found = {}
    for size in range(m + 1):
        for subset in itertools.combinations(range(m), size):
            gens = [g for g in cone.generators
                    if all(vdot(cone.inequalities[i], g) == 0 for i in subset)]
            closure = tuple(i for i in range(m)
                            if all(vdot(cone.inequalities[i], g) == 0 for g in gens))
            found[closure] = (tuple(sorted(set(gens))), rank(gens))
    return found


def brute_force_exposed_face(cone, x):
    """Smallest face through x by intersecting all supporting hyperplanes at x."""
    x = rvec(x)
    active = [i for i, a in enumerate(cone.inequalities) if vdot(a, x) == 0]
    gens = [g for g in cone.generators
            if all(vdot(cone.inequalities[i], g) == 0 for i in active)]
    closure = tuple(i for i in range(len(cone.inequalities))
                    if all(vdot(cone.inequalities[i], g) == 0 for g in gens))
    return closure, tuple(sorted(set(gens)))


def winding_from_zero_pole(zeros_upper, poles_upper):
    """Winding under the frozen (xi decreasing) orientation."""
    return poles_upper - zeros_upper


def lorentz_project_descent(x, max_iter=120000):
    """Projection onto {(w, t) : t >= ||w||} by projected gradient descent on
    the parametrization y = (w, ||w|| + s), s >= 0, with the apex compared as
    a separate candidate (the parametrization is non-smooth at w = 0).
    Independent of the closed form."""
    x = np.asarray(x, dtype=float)

    def objective(y):
        return 0.5 * np.sum((y - x) ** 2)

    w = x[:-1].copy()
    if np.linalg.norm(w) == 0:
        w = np.full_like(w, 1e-3)
    s = max(x[-1] - np.linalg.norm(w), 0.0)
    lr = 0.2
    for it in range(max_iter):
        nw = np.linalg.norm(w)
        if nw == 0:
            break
        u = w / nw
        y = np.concatenate([w, [nw + s]])
        r = y - x
        w = w - lr * (r[:-1] + r[-1] * u)
        s = max(s - lr * r[-1], 0.0)
        if it % 20000 == 19999:
            lr *= 0.5
    nw = np.linalg.norm(w)
    best = np.concatenate([w, [nw + s]])
    apex = np.zeros_like(x)
    return apex if objective(apex) < objective(best) else best


def gauge_by_bisection(member, x, hi=1e6, iters=200):
    """inf{a > 0 : x/a in C} by bisection on a membership oracle."""
    lo = 0.0
    hi = float(hi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if member(x, mid):
            hi = mid
        else:
            lo = mid
    return hi
