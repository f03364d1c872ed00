"""Subnormalized classical distributions, trace distance, and min-entropies.

All entropies are in bits. Smoothing optimizes over the ball of subnormalized
distributions within generalized trace distance eps of the input. For a
modification that removes total mass R and adds total mass A (disjoint
coordinates), the distance is max(R, A); adding mass never lowers a maximum,
so the optimum only removes mass and the ball constraint reduces to a removal
budget of eps. Capping the largest entries against that budget is therefore
exact, both unconditionally and per side-information column.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ClassicalDistribution",
    "JointDistribution",
    "gtd",
    "min_entropy",
    "cond_min_entropy",
    "smooth_min_entropy",
    "smooth_cond_min_entropy",
]

_MASS_TOL = 1e-12
_MAX_DENSE = 1 << 20


class ClassicalDistribution:
    """Subnormalized probability vector over a finite index set."""

    __slots__ = ("mass",)

    def __init__(self, mass):
        arr = np.asarray(mass, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("mass must be a 1-D vector")
        if arr.size > _MAX_DENSE:
            raise ValueError("dense distributions limited to 2^20 entries")
        if arr.min(initial=0.0) < -_MASS_TOL:
            raise ValueError("negative probability mass")
        if arr.sum() > 1.0 + _MASS_TOL:
            raise ValueError("total mass exceeds 1")
        arr = np.maximum(arr, 0.0)
        arr.setflags(write=False)
        self.mass = arr

    @classmethod
    def uniform(cls, nbits: int) -> "ClassicalDistribution":
        size = 1 << nbits
        return cls(np.full(size, 1.0 / size))

    @classmethod
    def point_mass(cls, size: int, index: int) -> "ClassicalDistribution":
        v = np.zeros(size)
        v[index] = 1.0
        return cls(v)

    @property
    def size(self) -> int:
        return self.mass.size

    def total(self) -> float:
        return float(self.mass.sum())


class JointDistribution:
    """Subnormalized joint mass over (x, z); x indexes rows, z columns."""

    __slots__ = ("mass",)

    def __init__(self, mass):
        arr = np.asarray(mass, dtype=np.float64)
        if arr.ndim != 2 or arr.size < 1:
            raise ValueError("mass must be a 2-D matrix")
        if arr.size > _MAX_DENSE:
            raise ValueError("dense joints limited to 2^20 entries")
        if arr.min(initial=0.0) < -_MASS_TOL:
            raise ValueError("negative probability mass")
        if arr.sum() > 1.0 + _MASS_TOL:
            raise ValueError("total mass exceeds 1")
        arr = np.maximum(arr, 0.0)
        arr.setflags(write=False)
        self.mass = arr

    @classmethod
    def from_conditional(cls, px: np.ndarray,
                         cond: np.ndarray) -> "JointDistribution":
        """Joint p(x) * w(z|x) from a prior and a stochastic matrix."""
        px = np.asarray(px, dtype=np.float64)
        cond = np.asarray(cond, dtype=np.float64)
        return cls(px[:, None] * cond)

    def total(self) -> float:
        return float(self.mass.sum())


def _mass_of(obj) -> np.ndarray:
    if isinstance(obj, (ClassicalDistribution, JointDistribution)):
        return obj.mass
    return np.asarray(obj, dtype=np.float64)


def gtd(p, q) -> float:
    """Generalized trace distance between two (sub)normalized mass vectors.

    Half the l1 distance plus half the difference of total masses; equals
    total variation distance when both arguments are normalized.
    """
    pm = _mass_of(p)
    qm = _mass_of(q)
    if pm.shape != qm.shape:
        raise ValueError("index spaces differ: %s vs %s" % (pm.shape, qm.shape))
    return 0.5 * float(np.abs(pm - qm).sum()) + 0.5 * abs(float(pm.sum() - qm.sum()))


def min_entropy(p: ClassicalDistribution) -> float:
    """-log2 of the largest mass."""
    top = float(p.mass.max())
    if top <= 0.0:
        raise ValueError("zero distribution has no min-entropy")
    return -np.log2(top)


def cond_min_entropy(j: JointDistribution) -> float:
    """-log2 sum_z max_x j(x, z)."""
    s = float(j.mass.max(axis=0).sum())
    if s <= 0.0:
        raise ValueError("zero distribution has no min-entropy")
    return -np.log2(s)


def smooth_min_entropy(p: ClassicalDistribution, eps: float) -> float:
    """Max min-entropy over the distance-eps ball of subnormalized vectors.

    The optimum caps all entries at the threshold t* where the mass above t*
    equals eps; the result is -log2 t*.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    total = p.total()
    if eps >= total:
        raise ValueError("eps >= total mass: entropy unbounded")
    if eps == 0.0:
        return min_entropy(p)
    t_star = _cap_threshold(p.mass, eps)
    # t* >= (total - eps)/support holds exactly; clamp away roundoff when
    # eps sits within float noise of the total mass
    t_star = max(t_star, (total - eps) / p.mass.size)
    return -np.log2(t_star)


def _cap_threshold(mass: np.ndarray, budget: float) -> float:
    """Threshold t with sum(max(mass - t, 0)) == budget, by water-filling."""
    v = np.sort(mass[mass > 0])[::-1]
    csum = np.cumsum(v)
    # lowering the cap from v[i-1] to v[i] removes i * (v[i-1] - v[i]) mass
    ranks = np.arange(1, v.size + 1)
    lower = np.append(v[1:], 0.0)
    removed_at_lower = csum - ranks * lower  # removal when cap = next level
    idx = int(np.searchsorted(removed_at_lower, budget))
    # cap sits in segment idx: removal = csum[idx] - (idx+1) * t = budget
    return (csum[idx] - budget) / (idx + 1)


def smooth_cond_min_entropy(j: JointDistribution, eps: float) -> float:
    """Max conditional min-entropy over the distance-eps ball.

    Solves min sum_z t_z subject to sum_z sum_x max(j(x,z) - t_z, 0) <= eps
    exactly: the objective is the guessing mass, its reduction per column is
    piecewise linear with integer slopes, and spending the removal budget on
    segments of ascending slope is optimal (the one-sided removal argument in
    the module docstring turns the eps-ball into this budget).
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    total = j.total()
    if eps >= total:
        raise ValueError("eps >= total mass: entropy unbounded")
    if eps == 0.0:
        return cond_min_entropy(j)
    rates, widths, guess0 = _column_segments(j.mass)
    order = np.argsort(rates, kind="stable")
    rates, widths = rates[order], widths[order]
    costs = rates * widths
    ccost = np.cumsum(costs)
    stop = int(np.searchsorted(ccost, eps))
    reduced = float(widths[:stop].sum())
    spent = float(ccost[stop - 1]) if stop else 0.0
    if stop < rates.size:
        reduced += (eps - spent) / float(rates[stop])
    t_sum = guess0 - reduced
    # the guessing mass is at least (total - eps)/rows exactly; clamp away
    # roundoff when eps sits within float noise of the total mass
    t_sum = max(t_sum, (total - eps) / j.mass.shape[0])
    return -np.log2(t_sum)


def _column_segments(mass: np.ndarray):
    """Per-column cap-lowering segments (slope, width) and initial guess mass.

    For a column sorted descending s1 >= s2 >= ..., lowering the cap through
    (s_{r+1}, s_r) removes r units of mass per unit of cap; the final segment
    runs down to zero with slope = number of positive entries.
    """
    cols = np.sort(mass, axis=0)[::-1]  # descending along x
    guess0 = float(cols[0].sum())
    nx = cols.shape[0]
    lower = np.vstack([cols[1:], np.zeros((1, cols.shape[1]))])
    widths = cols - lower  # widths[r] = s_{r+1} - s_{r+2}
    rates = np.broadcast_to(np.arange(1, nx + 1)[:, None], widths.shape)
    keep = widths > 0
    return (rates[keep].astype(np.float64).ravel(),
            widths[keep].ravel(), guess0)
