"""Channel regimes: honest n-fold BSC, adversarial channels, typicality.

Adversarial channels are explicit finite probability tables at desk scale
(dense laws over 2^n outputs, or over a finite view space), plus named
analytic families for larger n. The entropic-constraint checks quantify only
over a channel's representative inputs: a universally quantified condition
can be falsified but never proven by an artifact, and the analytic families
declare the symmetry that makes one representative sufficient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp, xlogy

from .entropy import (ClassicalDistribution, JointDistribution,
                      smooth_cond_min_entropy, smooth_min_entropy)
from .gf2 import BitString

__all__ = [
    "UsncParams",
    "AliceChannel",
    "BobChannel",
    "CheckReport",
    "bsc_transmit",
    "typical_membership",
    "typicality_tail_exact",
    "check_c2",
    "check_c3",
    "bsc_law_dense",
]

_DENSE_N_LIMIT = 20


@dataclass(frozen=True)
class UsncParams:
    """Channel model parameters (p, eps_a, l_a, eps_b, l_b) at block length n."""

    n: int
    p: float
    eps_a: float
    l_a: float
    eps_b: float
    l_b: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need n >= 1")
        if not 0.0 < self.p < 0.5:
            raise ValueError("need 0 < p < 1/2")
        for name in ("eps_a", "eps_b"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError("%s must be in [0, 1]" % name)
        for name in ("l_a", "l_b"):
            if getattr(self, name) < 0.0:
                raise ValueError("%s must be nonnegative" % name)


def bsc_transmit(x: BitString, p: float, rng: np.random.Generator) -> BitString:
    """Flip each bit of x independently with probability p.

    Honest use keeps 0 < p < 1/2 (enforced by the parameter types); the
    primitive itself accepts the closed range so attack channels can run at
    p = 0 (noiseless) or p = 1/2 (uniform output).
    """
    if not 0.0 <= p <= 0.5:
        raise ValueError("need 0 <= p <= 1/2")
    flips = (rng.random(len(x)) < p).astype(np.uint8)
    return BitString._wrap(np.bitwise_xor(x.bits, flips))


def typical_membership(x: BitString, z: BitString, p: float,
                       eps: float) -> bool:
    """n(p - eps) <= HD(x, z) <= n(p + eps), inclusive real-valued bounds."""
    if len(x) != len(z):
        raise ValueError("length mismatch")
    n = len(x)
    d = int(np.count_nonzero(x.bits != z.bits))
    return n * (p - eps) <= d <= n * (p + eps)


def typicality_tail_exact(n: int, p: float, eps: float) -> float:
    """Exact probability that BSC noise weight falls outside the window.

    Binomial(n, p) mass at weights w with w < n(p-eps) or w > n(p+eps),
    summed in log space; independent of the transmitted string by symmetry.
    """
    if not 1 <= n <= 10 ** 6:
        raise ValueError("need 1 <= n <= 10^6")
    if not 0.0 < p < 0.5 or eps < 0.0:
        raise ValueError("need 0 < p < 1/2 and eps >= 0")
    w = np.arange(n + 1, dtype=np.float64)
    outside = (w < n * (p - eps)) | (w > n * (p + eps))
    if not outside.any():
        return 0.0
    w = w[outside]
    logpmf = (gammaln(n + 1) - gammaln(w + 1) - gammaln(n - w + 1)
              + xlogy(w, p) + xlogy(n - w, 1.0 - p))
    return float(np.exp(logsumexp(logpmf)))


def bsc_law_dense(n: int, center: BitString, p: float) -> ClassicalDistribution:
    """Dense output law of BSC(p) noise around ``center``, over all 2^n strings."""
    if n > _DENSE_N_LIMIT:
        raise ValueError("dense laws limited to n <= %d" % _DENSE_N_LIMIT)
    z = np.arange(1 << n, dtype=np.uint32)
    d = np.bitwise_count(z ^ np.uint32(center.to_int())).astype(np.float64)
    if p == 0.0:
        mass = (d == 0).astype(np.float64)
    else:
        mass = np.exp(xlogy(d, p) + xlogy(n - d, 1.0 - p))
    return ClassicalDistribution(mass)


class AliceChannel:
    """Dishonest-sender channel: input label -> distribution over n-bit outputs.

    ``certified`` is set by check_c2 and consumed by the adversary harness so
    bound comparisons only involve constraint-satisfying channels.
    """

    def __init__(self, n: int, labels, law_fn, sample_fn, name: str = "",
                 symmetric: bool = False):
        self.n = n
        self.labels = list(labels)
        self._law_fn = law_fn
        self._sample_fn = sample_fn
        self.name = name
        self.symmetric = symmetric  # output-law entropy independent of label
        self.certified = False

    def law(self, label) -> ClassicalDistribution:
        return self._law_fn(label)

    def sample(self, label, rng: np.random.Generator) -> BitString:
        return self._sample_fn(label, rng)

    def check_labels(self):
        """Labels the entropy check must cover (one suffices under symmetry)."""
        return self.labels[:1] if self.symmetric else self.labels

    @classmethod
    def from_table(cls, n: int, table: dict, name: str = "table") -> "AliceChannel":
        laws = dict(table)

        def sample(label, rng):
            mass = laws[label].mass
            idx = rng.choice(mass.size, p=mass / mass.sum())
            return BitString.from_int(int(idx), n)

        return cls(n, laws.keys(), laws.__getitem__, sample, name=name)

    @classmethod
    def honest_bsc(cls, n: int, p: float) -> "AliceChannel":
        """The honest channel wrapped as an adversarial object.

        Labels are n-bit inputs; translation invariance of the noise makes
        the output-law entropy label-independent, so certification checks a
        single representative.
        """

        def law(label: BitString):
            return bsc_law_dense(n, label, p)

        def sample(label: BitString, rng):
            return bsc_transmit(label, p, rng)

        return cls(n, [BitString.zeros(n)], law, sample,
                   name="bsc(p=%g)" % p, symmetric=True)

    @classmethod
    def centered_bsc(cls, n: int, center: BitString, spread: float,
                     label: str = "attack") -> "AliceChannel":
        """Single-label channel: BSC(spread) noise around a fixed string."""

        def law(_label):
            return bsc_law_dense(n, center, spread)

        def sample(_label, rng):
            return bsc_transmit(center, spread, rng)

        return cls(n, [label], law, sample,
                   name="centered_bsc(spread=%g)" % spread, symmetric=True)


class BobChannel:
    """Dishonest-receiver view channel: n-bit input -> distribution over views."""

    def __init__(self, n: int, view_size: int, law_fn, sample_fn,
                 name: str = "", symmetric: bool = False):
        self.n = n
        self.view_size = view_size
        self._law_fn = law_fn
        self._sample_fn = sample_fn
        self.name = name
        self.symmetric = symmetric
        self.certified = False

    def law(self, x: BitString) -> ClassicalDistribution:
        return self._law_fn(x)

    def sample(self, x: BitString, rng: np.random.Generator) -> int:
        return self._sample_fn(x, rng)

    def joint_with_uniform_input(self) -> JointDistribution:
        """Joint (input, view) mass under a uniform n-bit input."""
        if self.n + int(np.log2(self.view_size)) > _DENSE_N_LIMIT:
            raise ValueError("joint too large to enumerate")
        size = 1 << self.n
        mass = np.empty((size, self.view_size))
        for xi in range(size):
            mass[xi] = self.law(BitString.from_int(xi, self.n)).mass
        return JointDistribution(mass / size)

    @classmethod
    def bsc_view(cls, n: int, p_b: float) -> "BobChannel":
        """View = transmitted string through BSC(p_b); p_b = 0 is the identity."""

        def law(x: BitString):
            return bsc_law_dense(n, x, p_b)

        def sample(x: BitString, rng):
            return bsc_transmit(x, p_b, rng).to_int()

        return cls(n, 1 << n, law, sample, name="bsc_view(p_b=%g)" % p_b,
                   symmetric=True)

    @classmethod
    def constant_view(cls, n: int) -> "BobChannel":
        """View independent of the input (a single dummy symbol)."""
        dist = ClassicalDistribution(np.ones(1))
        return cls(n, 1, lambda x: dist, lambda x, rng: 0,
                   name="constant_view", symmetric=True)


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    achieved: float
    required: float
    witness: object = None

    def __str__(self):
        status = "pass" if self.passed else "VIOLATION"
        extra = "" if self.witness is None else " at %r" % (self.witness,)
        return "%s: achieved %.6g, required %.6g%s" % (
            status, self.achieved, self.required, extra)


def check_c2(ch: AliceChannel, params: UsncParams) -> CheckReport:
    """Verify the dishonest-sender floor: every output law keeps
    smooth min-entropy >= l_a at smoothing eps_a; sets ch.certified."""
    if ch.n > _DENSE_N_LIMIT:
        raise ValueError("exact check needs n <= %d" % _DENSE_N_LIMIT)
    worst = np.inf
    witness = None
    for label in ch.check_labels():
        h = smooth_min_entropy(ch.law(label), params.eps_a)
        if h < worst:
            worst, witness = h, label
    passed = bool(worst >= params.l_a)
    ch.certified = passed
    return CheckReport(passed=passed, achieved=float(worst),
                       required=params.l_a,
                       witness=None if passed else witness)


def check_c3(ch: BobChannel, params: UsncParams) -> CheckReport:
    """Verify the dishonest-receiver floor: smooth conditional min-entropy of
    a uniform input given the view is >= l_b at smoothing eps_b."""
    joint = ch.joint_with_uniform_input()
    h = smooth_cond_min_entropy(joint, params.eps_b)
    passed = bool(h >= params.l_b)
    ch.certified = passed
    return CheckReport(passed=passed, achieved=float(h), required=params.l_b)
