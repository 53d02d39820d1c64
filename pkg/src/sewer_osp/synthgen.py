"""Random synthetic sewer networks.

A network is a Galton-Watson tree grown from the outfall: each manhole draws
its number of immediate upstream neighbours from a branching distribution.
The tree is conditioned to have exactly ``n`` nodes, which is sampled
directly: draw ``n`` child counts summing to ``n - 1``, rotate them with the
cycle lemma into a valid breadth-first sequence, and attach children in that
order.

Any tree has mean in-degree ``(n - 1) / n``, so the empirical child-count
histogram reproduces the configured distribution only when its mean is close
to one; otherwise it follows the size-conditioned (exponentially tilted) law.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .network import SewerNetwork

MAX_SUM_REJECTIONS = 1_000_000


@dataclass(frozen=True)
class BranchingDistribution:
    """Probabilities of a manhole having 0, 1, 2, ... upstream neighbours."""

    probs: tuple[float, ...]

    def __post_init__(self):
        p = tuple(float(v) for v in self.probs)
        object.__setattr__(self, "probs", p)
        if not p or any(v < 0 for v in p):
            raise ValueError("probabilities must be non-negative and non-empty")
        if abs(sum(p) - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {sum(p)!r}, not 1")

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.probs)), self.probs))

    def to_json(self) -> str:
        return json.dumps({str(k): v for k, v in enumerate(self.probs)})

    @classmethod
    def from_mapping(cls, mapping: dict) -> "BranchingDistribution":
        items = {int(k): float(v) for k, v in mapping.items()}
        if any(k < 0 for k in items):
            raise ValueError("child counts must be non-negative")
        probs = [0.0] * (max(items) + 1)
        for k, v in items.items():
            probs[k] = v
        return cls(tuple(probs))

    @classmethod
    def load(cls, path) -> "BranchingDistribution":
        return cls.from_mapping(json.loads(Path(path).read_text()))


DEFAULT_DISTRIBUTION = BranchingDistribution((0.5, 0.3, 0.15, 0.05))


@dataclass(frozen=True)
class SynthConfig:
    n: int
    seed: int = 0
    distribution: BranchingDistribution = DEFAULT_DISTRIBUTION

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")


def _tilt(probs: np.ndarray, target_mean: float) -> np.ndarray:
    """Reweight ``p_k`` to ``p_k t^k`` so the mean equals ``target_mean``."""
    k = np.arange(len(probs))
    support = probs > 0

    def mean_at(log_t):
        w = np.where(support, np.log(np.where(support, probs, 1.0)) + k * log_t, -np.inf)
        w = np.exp(w - w.max())
        return float(np.dot(k, w) / w.sum()) - target_mean

    log_t = brentq(mean_at, -50.0, 50.0, xtol=1e-14)
    w = np.where(support, np.log(np.where(support, probs, 1.0)) + k * log_t, -np.inf)
    w = np.exp(w - w.max())
    return w / w.sum()


def _child_counts(n: int, probs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    q = _tilt(probs, (n - 1) / n)
    k = np.arange(len(q))
    for _ in range(MAX_SUM_REJECTIONS):
        counts = rng.multinomial(n, q)
        if int(np.dot(k, counts)) == n - 1:
            return rng.permutation(np.repeat(k, counts))
    raise RuntimeError("could not draw a child-count sequence of the right total")


def generate_intree(cfg: SynthConfig) -> SewerNetwork:
    """Single in-tree with exactly ``cfg.n`` nodes; node 0 is the outfall."""
    n = cfg.n
    probs = np.asarray(cfg.distribution.probs)
    if n == 1:
        return SewerNetwork(n=1, edges=np.zeros((0, 2), np.int64), coords=np.zeros((1, 2)))
    if probs[0] == 0 or probs[0] == 1 or len(probs) < 2:
        raise ValueError("cannot grow: distribution needs both P(0) > 0 and some P(k >= 1) > 0")
    rng = np.random.default_rng(cfg.seed)
    seq = _child_counts(n, probs, rng)
    walk = np.cumsum(seq - 1)
    start = int(np.argmin(walk)) + 1  # cycle lemma: first minimum
    seq = np.roll(seq, -start)

    parent = np.full(n, -1, dtype=np.int64)
    depth = np.zeros(n, dtype=np.int64)
    nxt = 1
    for node in range(n):
        c = int(seq[node])
        parent[nxt:nxt + c] = node
        depth[nxt:nxt + c] = depth[node] + 1
        nxt += c
    edges = np.column_stack([np.arange(1, n), parent[1:]])

    coords = np.zeros((n, 2))
    for d in np.unique(depth):
        layer = np.flatnonzero(depth == d)
        coords[layer, 0] = np.arange(len(layer)) - (len(layer) - 1) / 2
        coords[layer, 1] = -d
    return SewerNetwork(n=n, edges=edges, coords=coords)


def fit_branching_distribution(net: SewerNetwork) -> BranchingDistribution:
    """Empirical histogram of immediate-upstream counts."""
    hist = np.bincount(net.in_degrees(), minlength=1).astype(float)
    return BranchingDistribution(tuple(hist / hist.sum()))
