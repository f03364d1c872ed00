"""Brute-force ground truth for the combinatorial and entropic claims.

Everything here enumerates rather than derives: string spaces are walked as
integer ranges with hardware popcounts, probabilities are summed directly,
and the randomized entropy search proposes perturbations instead of solving.
The oracles refuse beyond their size limits rather than approximate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .bounds import intersection_bound
from .channel import BobChannel, typicality_tail_exact
from .entropy import (ClassicalDistribution, JointDistribution,
                      cond_min_entropy, gtd, min_entropy)
from .gf2 import BitString, LinearCode
from .hashing import enumerate_full_rank_seeds, sample_seed

__all__ = [
    "typical_intersection_exact",
    "IntersectionRow",
    "IntersectionReport",
    "verify_intersection_bound",
    "ClippedBscResult",
    "clipped_bsc_construction",
    "LhlResult",
    "lhl_check",
    "smooth_entropy_search",
]


def typical_intersection_exact(n: int, p: float, eps: float, x: BitString,
                               y: BitString) -> int:
    """Size of the typical-window overlap, enumerating all 2^n strings."""
    if n > 20:
        raise ValueError("exact intersection enumeration needs n <= 20")
    if len(x) != n or len(y) != n:
        raise ValueError("length mismatch")
    z = np.arange(1 << n, dtype=np.uint32)
    dx = np.bitwise_count(z ^ np.uint32(x.to_int()))
    dy = np.bitwise_count(z ^ np.uint32(y.to_int()))
    lo, hi = n * (p - eps), n * (p + eps)
    return int(np.count_nonzero((dx >= lo) & (dx <= hi)
                                & (dy >= lo) & (dy <= hi)))


@dataclass(frozen=True)
class IntersectionRow:
    weight: int
    sigma: float
    exact: int
    bound: float

    @property
    def ratio(self) -> float:
        return self.exact / self.bound if self.bound > 0 else 0.0


@dataclass(frozen=True)
class IntersectionReport:
    rows: tuple
    passed: bool
    max_ratio: float
    witness: IntersectionRow | None


def verify_intersection_bound(n: int, p: float, eps: float) -> IntersectionReport:
    """Exact intersection counts vs the analytic ceiling, per weight class.

    Translation invariance reduces all pairs at distance w to (0, any
    weight-w string), so one count per weight covers every pair. Checks the
    bound for each class and that counts vanish beyond sigma = p + 2 eps.
    """
    if n > 16:
        raise ValueError("weight sweep needs n <= 16")
    zero = BitString.zeros(n)
    rows = []
    max_ratio = 0.0
    witness = None
    passed = True
    for w in range(n + 1):
        y = BitString((np.arange(n) < w).astype(np.uint8))
        exact = typical_intersection_exact(n, p, eps, zero, y)
        sigma = w / (2.0 * n)
        bound = intersection_bound(n, p, eps, sigma)
        row = IntersectionRow(weight=w, sigma=sigma, exact=exact, bound=bound)
        rows.append(row)
        over = (exact > bound) or (sigma > p + 2 * eps and exact != 0)
        if over:
            passed = False
            witness = row
        if row.ratio > max_ratio:
            max_ratio = row.ratio
    return IntersectionReport(rows=tuple(rows), passed=passed, max_ratio=max_ratio,
                        witness=witness)


@dataclass(frozen=True)
class ClippedBscResult:
    gtd_actual: float
    tail: float
    min_entropy_per_input: float
    entropy_floor: float
    cond_min_entropy: float | None


def clipped_bsc_construction(n: int, p: float, eps: float,
                             with_conditional: bool = True) -> ClippedBscResult:
    """Zero the BSC law outside the typical window and measure what remains.

    Returns the exact distance to the unclipped law (equals the window tail:
    clipping removes precisely the tail mass), the per-input min-entropy of
    the clipped conditional law, the analytic floor
    n (h(p) - eps log2((1-p)/p)), and, for n <= 14, the conditional
    min-entropy of the clipped joint under a uniform input.
    """
    if n > 16:
        raise ValueError("dense construction needs n <= 16")
    z = np.arange(1 << n, dtype=np.uint32)
    d = np.bitwise_count(z).astype(np.float64)  # distances from input 0
    full = np.exp(xlogy(d, p) + xlogy(n - d, 1.0 - p))
    lo, hi = n * (p - eps), n * (p + eps)
    inside = (d >= lo) & (d <= hi)
    clipped = np.where(inside, full, 0.0)
    gtd_actual = gtd(ClassicalDistribution(full), ClassicalDistribution(clipped))
    tail = typicality_tail_exact(n, p, eps)
    h_in = min_entropy(ClassicalDistribution(clipped))
    c = np.log2((1.0 - p) / p)
    hp = -(xlogy(p, p) + xlogy(1 - p, 1 - p)) / np.log(2.0)
    floor = n * (float(hp) - eps * float(c))
    cond = None
    if with_conditional:
        if n > 14:
            raise ValueError("conditional construction needs n <= 14")
        cond = _clipped_cond_min_entropy(n, p, lo, hi)
    return ClippedBscResult(gtd_actual=gtd_actual, tail=tail,
                            min_entropy_per_input=h_in, entropy_floor=floor,
                            cond_min_entropy=cond)


def _clipped_cond_min_entropy(n: int, p: float, lo: float, hi: float) -> float:
    """Conditional min-entropy of the clipped joint, summed in output chunks.

    The joint is 2^-n Q(z|x) over all (x, z); per output z the guessing mass
    max over x is found by enumerating every input, in blocks to bound memory.
    """
    w = np.arange(n + 1, dtype=np.float64)
    pmf_w = np.exp(xlogy(w, p) + xlogy(n - w, 1.0 - p))
    pmf_w = np.where((w >= lo) & (w <= hi), pmf_w, 0.0)
    size = 1 << n
    x_ints = np.arange(size, dtype=np.uint32)
    chunk = max(1, (1 << 22) // size)
    total = 0.0
    for start in range(0, size, chunk):
        zc = np.arange(start, min(start + chunk, size), dtype=np.uint32)
        dists = np.bitwise_count(zc[:, None] ^ x_ints[None, :])
        total += float(pmf_w[dists].max(axis=1).sum())
    return -float(np.log2(total / size))


@dataclass(frozen=True)
class LhlResult:
    lhs: float
    rhs: float
    h_min: float
    n_seeds: int

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs + 1e-12


def lhl_check(code: LinearCode, hash_m: int, view_channel: BobChannel,
              seeds=None, rng: np.random.Generator | None = None) -> LhlResult:
    """Extractor quality vs the min-entropy ceiling, by full enumeration.

    lhs: average over seeds of the l1 distance between (digest, view) and
    (uniform digest) x (view marginal), with the input uniform on the code.
    rhs: 2 * 2^((hash_m - Hmin(input|view)) / 2) with the exact conditional
    min-entropy. seeds may be "all" (default), an explicit list, or an int
    sample size (requires rng).
    """
    k, n = code.k, code.n
    if n > 10 or k > 6:
        raise ValueError("full enumeration needs n <= 10 and k <= 6")
    if seeds is None or seeds == "all":
        seeds = enumerate_full_rank_seeds(k, hash_m)
    elif isinstance(seeds, int):
        if rng is None:
            raise ValueError("sampled seeds need an rng")
        seeds = [sample_seed(k, hash_m, rng) for _ in range(seeds)]
    msgs = np.arange(1 << k, dtype=np.uint32)
    umat = ((msgs[:, None] >> np.arange(k)) & 1).astype(np.uint8)
    laws = np.stack([view_channel.law(code.encode(BitString(u))).mass
                     for u in umat])  # (2^k, V)
    ncw = laws.shape[0]
    marginal = laws.mean(axis=0)
    joint = laws / ncw
    h_min = cond_min_entropy(JointDistribution(joint))
    digest_pow = 1 << np.arange(hash_m)
    target = np.tile(marginal / (1 << hash_m), (1 << hash_m, 1))
    dist_sum = 0.0
    for seed in seeds:
        digests = ((umat @ seed.matrix.T) & 1) @ digest_pow
        per_digest = np.zeros(((1 << hash_m), laws.shape[1]))
        np.add.at(per_digest, digests, laws / ncw)
        dist_sum += float(np.abs(per_digest - target).sum())
    lhs = dist_sum / len(seeds)
    rhs = 2.0 * 2.0 ** (0.5 * (hash_m - h_min))
    return LhlResult(lhs=lhs, rhs=rhs, h_min=h_min, n_seeds=len(seeds))


def smooth_entropy_search(p: ClassicalDistribution, eps: float,
                          proposals: int, rng: np.random.Generator) -> float:
    """Best min-entropy found by random perturbations inside the distance ball.

    Proposals remove random mass patterns (total at most eps, pointwise at
    most the available mass), including threshold-shaped ones; the search can
    approach but never legitimately exceed the analytic smoothing optimum.
    """
    if p.size > 1 << 12:
        raise ValueError("search oracle limited to support <= 2^12")
    mass = p.mass
    best_max = float(mass.max())  # eps = 0 proposal: the distribution itself
    batch = 1024
    done = 0
    top = float(mass.max())
    while done < proposals:
        b = min(batch, proposals - done)
        done += b
        kind = rng.integers(0, 2)
        if kind == 0:
            # random nonnegative removal directions, scaled to the budget
            w = rng.random((b, mass.size)) ** 4
            w = np.minimum(mass, eps * w / w.sum(axis=1, keepdims=True))
        else:
            # random cap levels, removal proportional to the overshoot
            t = rng.random((b, 1)) * top
            over = np.maximum(mass - t, 0.0)
            tot = over.sum(axis=1, keepdims=True)
            scale = np.minimum(1.0, eps / np.where(tot > 0, tot, 1.0))
            w = over * scale
        q = mass - w
        best_max = min(best_max, float(q.max(axis=1).min()))
    return -float(np.log2(best_max))
