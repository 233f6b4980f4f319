"""Sampled set-convergence diagnostics on a bounded window.

Closed sets are represented by finite point samples on a uniform grid.  The
limes inferior / superior of a sequence are approximated operationally:
"all but finitely many" means each of the last K sets, "infinitely many"
means at least one hit in every consecutive block.  These are desk-scale
diagnostics, not exact set limits.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError
from .exact import as_float


@dataclass(frozen=True)
class SampledSet:
    """Finite float sample of a set, with a description tag."""

    points: np.ndarray            # shape (m, dim); m = 0 represents the empty set
    tag: str = ""

    @property
    def dim(self):
        return self.points.shape[1]

    def __len__(self):
        return len(self.points)


def window_grid(bounds, step, dim):
    """Uniform grid over [lo, hi]^dim as an (m, dim) array."""
    lo, hi = bounds
    axis = np.arange(lo, hi + step / 2, step)
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _dist_to_set(points, sample):
    if len(sample.points) == 0:
        return np.full(len(points), np.inf)
    tree = cKDTree(sample.points)
    return tree.query(points, k=1)[0]


def hausdorff_distance(a: SampledSet, b: SampledSet) -> float:
    """Symmetric Hausdorff distance between two point samples."""
    if len(a) == 0 and len(b) == 0:
        return 0.0
    if len(a) == 0 or len(b) == 0:
        return np.inf
    d_ab = _dist_to_set(a.points, b).max()
    d_ba = _dist_to_set(b.points, a).max()
    return float(max(d_ab, d_ba))


def _candidate_grid(seq, bounds, step):
    dim = seq[0].dim
    if bounds is None:
        finite = [s.points for s in seq if len(s)]
        if not finite:
            return np.empty((0, dim))
        allpts = np.concatenate(finite)
        lo = float(np.floor(allpts.min()))
        hi = float(np.ceil(allpts.max()))
        bounds = (lo, hi)
    return window_grid(bounds, step, dim)


def _validate(seq):
    if len(seq) < 2:
        raise DomainError("need at least two sets")


def pk_liminf(seq, eps, bounds=None, step=None) -> SampledSet:
    """Grid points within eps of each of the last ceil(len/2) sets."""
    _validate(seq)
    if eps <= 0:
        raise DomainError("eps must be positive")
    step = eps if step is None else step
    grid = _candidate_grid(seq, bounds, step)
    tail = seq[-max(2, (len(seq) + 1) // 2):]
    keep = np.ones(len(grid), dtype=bool)
    for s in tail:
        keep &= _dist_to_set(grid, s) < eps
    return SampledSet(grid[keep], tag="pk-liminf")


def pk_limsup(seq, eps, bounds=None, step=None) -> SampledSet:
    """Grid points within eps of at least one set in every consecutive block."""
    _validate(seq)
    if eps <= 0:
        raise DomainError("eps must be positive")
    step = eps if step is None else step
    grid = _candidate_grid(seq, bounds, step)
    nblocks = min(3, len(seq))
    blocks = [list(block) for block in np.array_split(np.arange(len(seq)), nblocks)]
    keep = np.ones(len(grid), dtype=bool)
    for block in blocks:
        hit = np.zeros(len(grid), dtype=bool)
        for i in block:
            hit |= _dist_to_set(grid, seq[i]) < eps
        keep &= hit
    return SampledSet(grid[keep], tag="pk-limsup")


def pk_converged(seq, eps, bounds=None, step=None):
    """Declare eps-convergence when liminf and limsup samples coincide within eps."""
    lo = pk_liminf(seq, eps, bounds, step)
    hi = pk_limsup(seq, eps, bounds, step)
    dist = hausdorff_distance(lo, hi)
    return dist <= eps, lo, hi, dist


def sample_cone(cone, bounds, step, shift=None, tag="") -> SampledSet:
    """Window sample of shift - C (or of C when shift is None) for an exact cone.

    Membership of a grid point p means shift - p in C, checked by float margins
    against the canonical inequalities.
    """
    normals = np.array([as_float(a) for a in cone.inequalities], dtype=float)
    grid = window_grid(bounds, step, cone.ambient_dim)
    pts = grid if shift is None else np.asarray(shift, dtype=float) - grid
    if len(normals) == 0:
        keep = np.ones(len(grid), dtype=bool)
    else:
        scale = np.linalg.norm(normals, axis=1)
        margins = (pts @ normals.T) / scale
        keep = (margins >= -1e-9).all(axis=1)
    return SampledSet(grid[keep], tag=tag)
