"""Gillespie simulation of the de Bruijn process.

Rates are converted to floats here and nowhere else; ``float(Fraction)`` is
correctly rounded, so each rate carries relative error at most 2**-53.
Self-loops are dropped: they cancel in the generator and would only add
wasted events.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .words import RateSystem, Word, shift_append, word_index, words_of_length

_BATCH = 1 << 16


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based Philox stream keyed by ``(seed, stream)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stream])))


@dataclass
class JumpTable:
    """Per-state exit rate, non-self targets and cumulative jump probabilities."""

    words: list[Word]
    exit_rate: list[float]
    targets: list[list[int]]
    cumulative: list[list[float]]

    @classmethod
    def build(cls, R: RateSystem) -> JumpTable:
        words = list(words_of_length(R.n, R.L))
        exit_rate, targets, cumulative = [], [], []
        for u in words:
            outs = []
            for a in R.letters():
                v = shift_append(u, a)
                if v != u:
                    outs.append((word_index(v, R.n), float(R.beta(v))))
            total = sum(r for _, r in outs)
            acc, cum = 0.0, []
            for _, r in outs:
                acc += r
                cum.append(acc / total)
            cum[-1] = 1.0
            exit_rate.append(total)
            targets.append([i for i, _ in outs])
            cumulative.append(cum)
        return cls(words, exit_rate, targets, cumulative)

    def jump_probabilities(self, state: int) -> dict[int, float]:
        probs, prev = {}, 0.0
        for target, c in zip(self.targets[state], self.cumulative[state]):
            probs[target] = c - prev
            prev = c
        return probs


def gillespie_step(w: Word, R: RateSystem, rng: np.random.Generator, table: JumpTable | None = None) -> tuple[float, Word]:
    """One exponential dwell in ``w`` followed by a rate-proportional jump.

    ``rng`` is advanced in place; two generators in the same state give the
    same step.
    """
    table = table or JumpTable.build(R)
    s = word_index(w, R.n)
    dwell = rng.standard_exponential() / table.exit_rate[s]
    k = bisect.bisect_right(table.cumulative[s], rng.random())
    k = min(k, len(table.targets[s]) - 1)
    return float(dwell), table.words[table.targets[s][k]]


@dataclass
class Trajectory:
    initial: Word
    steps: list[tuple[float, Word]] = field(default_factory=list)

    @property
    def total_time(self) -> float:
        return sum(d for d, _ in self.steps)


def simulate_trajectory(R: RateSystem, seed: int, n_steps: int, start: Word | None = None, stream: int = 0) -> Trajectory:
    table = JumpTable.build(R)
    rng = make_rng(seed, stream)
    w = tuple(start) if start is not None else table.words[0]
    traj = Trajectory(w)
    for _ in range(n_steps):
        dwell, w = gillespie_step(w, R, rng, table)
        traj.steps.append((dwell, w))
    return traj


@dataclass
class EmpiricalMeasure:
    occupation: dict[Word, float]
    total_time: float

    def distribution(self) -> dict[Word, float]:
        return {w: t / self.total_time for w, t in self.occupation.items()}

    def merge(self, other: EmpiricalMeasure) -> EmpiricalMeasure:
        occ = dict(self.occupation)
        for w, t in other.occupation.items():
            occ[w] = occ.get(w, 0.0) + t
        return EmpiricalMeasure(occ, self.total_time + other.total_time)


def simulate_measure(
    R: RateSystem,
    seed: int,
    total_time: float,
    burn_in: float = 0.0,
    stream: int = 0,
) -> EmpiricalMeasure:
    """Time-weighted occupation over ``[burn_in, total_time]``.

    The chain starts in the lexicographically first word.
    """
    if not total_time > burn_in >= 0:
        raise ValueError(f"need total_time > burn_in >= 0, got {total_time}, {burn_in}")
    table = JumpTable.build(R)
    rng = make_rng(seed, stream)
    exit_rate, targets, cumulative = table.exit_rate, table.targets, table.cumulative
    occ = [0.0] * len(table.words)
    state, t = 0, 0.0
    expo = rng.standard_exponential(_BATCH).tolist()
    unif = rng.random(_BATCH).tolist()
    pos = 0
    while True:
        if pos == _BATCH:
            expo = rng.standard_exponential(_BATCH).tolist()
            unif = rng.random(_BATCH).tolist()
            pos = 0
        t_next = t + expo[pos] / exit_rate[state]
        lo = t if t > burn_in else burn_in
        hi = t_next if t_next < total_time else total_time
        if hi > lo:
            occ[state] += hi - lo
        if t_next >= total_time:
            break
        cum = cumulative[state]
        k = bisect.bisect_right(cum, unif[pos])
        if k == len(cum):
            k -= 1
        state = targets[state][k]
        t = t_next
        pos += 1
    return EmpiricalMeasure(dict(zip(table.words, occ)), total_time - burn_in)


def simulate_many(R: RateSystem, seed: int, total_time: float, burn_in: float, trajectories: int = 1) -> EmpiricalMeasure:
    """Merge independent runs, one Philox stream per trajectory index."""
    if trajectories < 1:
        raise ValueError("need at least one trajectory")
    measure = simulate_measure(R, seed, total_time, burn_in, stream=0)
    for k in range(1, trajectories):
        measure = measure.merge(simulate_measure(R, seed, total_time, burn_in, stream=k))
    return measure


def total_variation(p: Mapping, q: Mapping) -> float:
    if set(p) != set(q):
        raise ValueError("distributions are defined on different supports")
    return 0.5 * sum(abs(float(p[k]) - float(q[k])) for k in p)
