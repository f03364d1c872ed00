"""Commit and reveal phases of the string commitment protocol.

Commit: the sender draws a hash seed S, a mask Mbar, and a coset C'
(uniform syndrome), masks the message, lifts it to a uniform codeword
preimage X, and transmits X + x_C' through the noisy channel while S, Mbar,
C' travel noiselessly. Reveal: the sender announces (M, X); the receiver
outputs M unconditionally and accepts iff X is a codeword, the stored channel
output is typical for X + x_C', and the hash of X matches M + Mbar.
Consumers must gate on the flag, not on the returned message.

Runs derive per-run randomness from (master_seed, run_index), so Monte Carlo
results are identical for any worker partitioning.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .channel import bsc_transmit, typical_membership
from .gf2 import BitString, CosetId, LinearCode
from .hashing import HashSeed, hash_codeword, preimage_sample, sample_seed

__all__ = [
    "ACC",
    "REJ",
    "CommitConfig",
    "CommitWire",
    "Opening",
    "CommitmentTranscript",
    "AliceCommitState",
    "BscTransmission",
    "NoiselessTransmission",
    "alice_commit",
    "bob_receive",
    "alice_reveal",
    "bob_verify",
    "run_honest",
    "HonestRun",
    "estimate_completeness",
    "CompletenessEstimate",
    "transcript_to_json",
    "transcript_from_json",
]

ACC = "acc"
REJ = "rej"


@dataclass(frozen=True)
class CommitConfig:
    """Protocol instance: code, digest length, channel noise, window width."""

    code: LinearCode
    hash_m: int
    p: float
    eps: float

    def __post_init__(self):
        if self.code.d_claimed is None:
            raise ValueError("protocol code needs a (possibly unverified) distance")
        if not self.code.d_claimed < self.code.n / 2:
            raise ValueError("code distance must be < n/2")
        if not 1 <= self.hash_m <= self.code.k:
            raise ValueError("need 1 <= hash_m <= k")
        if not 0.0 < self.p < 0.5:
            raise ValueError("need 0 < p < 1/2")
        if not 0.0 < self.eps < 0.5 - self.p:
            raise ValueError("need 0 < eps < 1/2 - p")

    @property
    def n(self) -> int:
        return self.code.n


@dataclass(frozen=True)
class CommitWire:
    """Noiseless part of the commit message: (S, Mbar, C')."""

    seed: HashSeed
    mbar: BitString
    coset: CosetId


@dataclass(frozen=True)
class Opening:
    m: BitString
    x: BitString


@dataclass(frozen=True)
class CommitmentTranscript:
    """What the receiver stores: (S, Mbar, C', Z), plus the opening if revealed."""

    seed: HashSeed
    mbar: BitString
    coset: CosetId
    z: BitString
    opening: Opening | None = None


@dataclass(frozen=True)
class AliceCommitState:
    m: BitString
    x: BitString


class BscTransmission:
    """Honest noisy leg of the commit phase."""

    def __init__(self, p: float):
        self.p = p

    def transmit(self, x: BitString, rng: np.random.Generator) -> BitString:
        return bsc_transmit(x, self.p, rng)


class NoiselessTransmission:
    """Test double: the receiver sees exactly what was sent."""

    def transmit(self, x: BitString, rng: np.random.Generator) -> BitString:
        return x


def alice_commit(m: BitString, cfg: CommitConfig, rng: np.random.Generator,
                 transmission=None):
    """Commit phase; returns (sender state, noiseless wire, channel output).

    The transmitted string is the masked-codeword lift X + x_C'; its syndrome
    always equals C', and the seed hash of X always equals m + Mbar.
    """
    if len(m) != cfg.hash_m:
        raise ValueError("message length %d != hash_m=%d" % (len(m), cfg.hash_m))
    if transmission is None:
        transmission = BscTransmission(cfg.p)
    code = cfg.code
    seed = sample_seed(code.k, cfg.hash_m, rng)
    mbar = BitString.random(cfg.hash_m, rng)
    coset = code.random_coset(rng)
    masked = m ^ mbar
    x = preimage_sample(seed, code, masked, rng)
    xbar = x ^ code.coset_representative(coset)
    z = transmission.transmit(xbar, rng)
    return (AliceCommitState(m=m, x=x),
            CommitWire(seed=seed, mbar=mbar, coset=coset),
            z)


def bob_receive(wire: CommitWire, z: BitString,
                cfg: CommitConfig) -> CommitmentTranscript:
    """Store the commitment; rejects malformed wires."""
    if not isinstance(wire, CommitWire):
        raise ValueError("malformed wire")
    if wire.seed.k != cfg.code.k or wire.seed.m != cfg.hash_m:
        raise ValueError("seed shape %dx%d does not match the configuration"
                         % (wire.seed.m, wire.seed.k))
    if len(wire.mbar) != cfg.hash_m:
        raise ValueError("mask length mismatch")
    if len(wire.coset) != cfg.code.n - cfg.code.k:
        raise ValueError("coset syndrome length mismatch")
    if len(z) != cfg.n:
        raise ValueError("channel output length %d != n=%d" % (len(z), cfg.n))
    return CommitmentTranscript(seed=wire.seed, mbar=wire.mbar,
                                coset=wire.coset, z=z)


def alice_reveal(state: AliceCommitState) -> Opening:
    return Opening(m=state.m, x=state.x)


def bob_verify(t: CommitmentTranscript, m: BitString, x: BitString,
               cfg: CommitConfig) -> str:
    """Deterministic accept test: codeword, typical window, digest match."""
    code = cfg.code
    if len(x) != cfg.n or len(m) != cfg.hash_m:
        return REJ
    if not code.contains(x):
        return REJ
    sent = x ^ code.coset_representative(t.coset)
    if not typical_membership(sent, t.z, cfg.p, cfg.eps):
        return REJ
    if hash_codeword(t.seed, code, x) != (m ^ t.mbar):
        return REJ
    return ACC


@dataclass(frozen=True)
class HonestRun:
    m_hat: BitString
    flag: str
    transcript: CommitmentTranscript


def run_honest(m: BitString, cfg: CommitConfig,
               rng: np.random.Generator) -> HonestRun:
    """Commit + reveal with both parties honest; m_hat always equals m."""
    state, wire, z = alice_commit(m, cfg, rng)
    t = bob_receive(wire, z, cfg)
    opening = alice_reveal(state)
    flag = bob_verify(t, opening.m, opening.x, cfg)
    return HonestRun(m_hat=opening.m, flag=flag,
                     transcript=replace(t, opening=opening))


@dataclass(frozen=True)
class CompletenessEstimate:
    reject_rate: float
    wilson_low: float
    wilson_high: float
    worst_message_rate: float
    trials: int


def estimate_completeness(cfg: CommitConfig, trials: int,
                          master_seed: int) -> CompletenessEstimate:
    """Monte Carlo rejection-rate estimate over uniformly sampled messages.

    The acceptance probability is message-independent (the noise weight test
    does not see the message, and the other two tests pass identically on
    honest runs), so the pooled rate is the operative estimate; the worst
    per-message observed rate is tracked as a cross-check. The interval is a
    two-sided 99% Wilson interval on the pooled rate.
    """
    if trials < 10 ** 3:
        raise ValueError("need trials >= 1000")
    rejects = 0
    per_message: dict[bytes, list[int]] = {}
    for i in range(trials):
        rng = np.random.default_rng([master_seed, i])
        m = BitString.random(cfg.hash_m, rng)
        run = run_honest(m, cfg, rng)
        bad = run.flag != ACC
        rejects += bad
        cell = per_message.setdefault(m.bits.tobytes(), [0, 0])
        cell[0] += bad
        cell[1] += 1
    rate = rejects / trials
    low, high = _wilson_99(rejects, trials)
    worst = max((c[0] / c[1] for c in per_message.values()), default=0.0)
    return CompletenessEstimate(reject_rate=rate, wilson_low=low,
                                wilson_high=high, worst_message_rate=worst,
                                trials=trials)


def _wilson_99(successes: int, trials: int):
    z = 2.5758293035489004  # two-sided 99%
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = phat + z * z / (2 * trials)
    half = z * math.sqrt(phat * (1 - phat) / trials
                         + z * z / (4 * trials * trials))
    return max(0.0, (center - half) / denom), min(1.0, (center + half) / denom)


# ---------------------------------------------------------------------------
# Transcript JSON codec (hex-encoded bit strings, replayable)
# ---------------------------------------------------------------------------


def _bits_to_hex(b: BitString) -> dict:
    return {"len": len(b), "hex": np.packbits(b.bits).tobytes().hex()}


def _bits_from_hex(obj) -> BitString:
    try:
        nbits = int(obj["len"])
        raw = bytes.fromhex(obj["hex"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError("malformed bit-string field: %r" % (obj,)) from exc
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8))
    if bits.size < nbits or bits.size - nbits >= 8:
        raise ValueError("bit-string length does not match payload")
    return BitString(bits[:nbits])


def transcript_to_json(t: CommitmentTranscript) -> str:
    obj = {
        "seed": {"m": t.seed.m, "k": t.seed.k,
                 "hex": np.packbits(t.seed.matrix.ravel()).tobytes().hex()},
        "mbar": _bits_to_hex(t.mbar),
        "coset": _bits_to_hex(t.coset.syndrome),
        "z": _bits_to_hex(t.z),
        "opening": None if t.opening is None else {
            "m": _bits_to_hex(t.opening.m),
            "x": _bits_to_hex(t.opening.x),
        },
    }
    return json.dumps(obj, indent=2, sort_keys=True)


def transcript_from_json(text: str) -> CommitmentTranscript:
    obj = json.loads(text)
    try:
        seed_obj = obj["seed"]
        m, k = int(seed_obj["m"]), int(seed_obj["k"])
        raw = np.unpackbits(
            np.frombuffer(bytes.fromhex(seed_obj["hex"]), dtype=np.uint8))
        if raw.size < m * k:
            raise ValueError("seed payload too short")
        seed = HashSeed(raw[: m * k].reshape(m, k))
        mbar = _bits_from_hex(obj["mbar"])
        coset = CosetId(_bits_from_hex(obj["coset"]))
        z = _bits_from_hex(obj["z"])
        opening = obj["opening"]
    except KeyError as exc:
        raise ValueError("transcript missing field %s" % exc) from exc
    if opening is not None:
        opening = Opening(m=_bits_from_hex(opening["m"]),
                          x=_bits_from_hex(opening["x"]))
    return CommitmentTranscript(seed=seed, mbar=mbar, coset=coset, z=z,
                                opening=opening)
