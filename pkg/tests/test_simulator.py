import statistics

import numpy as np
import pytest

from debruijn.simulator import (
    EmpiricalMeasure,
    JumpTable,
    gillespie_step,
    make_rng,
    simulate_many,
    simulate_measure,
    simulate_trajectory,
    total_variation,
)
from debruijn.stationary import stationary_vector
from debruijn.words import parse_word

W = parse_word


class TestStep:
    def test_forced_jump(self, R0):
        rng = make_rng(1)
        table = JumpTable.build(R0)
        dwells = []
        for _ in range(2000):
            dwell, nxt = gillespie_step(W("11"), R0, rng, table)
            assert nxt == W("12")
            dwells.append(dwell)
        # exit rate from 11 is beta(12) = x_{2,1} = 3
        assert abs(statistics.fmean(dwells) - 1 / 3) < 0.03

    def test_jump_probabilities(self, R0):
        table = JumpTable.build(R0)
        probs = table.jump_probabilities(1)
        assert probs == pytest.approx({2: 1 / 6, 3: 5 / 6})
        rng = make_rng(2)
        hits = sum(gillespie_step(W("12"), R0, rng, table)[1] == W("22") for _ in range(6000))
        assert abs(hits / 6000 - 5 / 6) < 0.02

    def test_same_state_same_step(self, R0):
        a, b = make_rng(5, 1), make_rng(5, 1)
        assert gillespie_step(W("21"), R0, a) == gillespie_step(W("21"), R0, b)

    def test_no_self_loops(self, R0):
        traj = simulate_trajectory(R0, 3, 500)
        prev = traj.initial
        for _, w in traj.steps:
            assert w != prev and w[:-1] == prev[1:]
            prev = w


class TestMeasure:
    def test_deterministic(self, R0):
        a = simulate_measure(R0, 7, 500.0, 10.0)
        b = simulate_measure(R0, 7, 500.0, 10.0)
        assert a == b
        assert a != simulate_measure(R0, 8, 500.0, 10.0)

    def test_occupation_fills_window(self, R0):
        m = simulate_measure(R0, 0, 300.0, 50.0)
        assert m.total_time == 250.0
        assert sum(m.occupation.values()) == pytest.approx(250.0)
        assert sum(m.distribution().values()) == pytest.approx(1.0)

    @pytest.mark.parametrize("total,burn", [(10.0, 10.0), (5.0, 6.0), (10.0, -1.0)])
    def test_bad_window(self, R0, total, burn):
        with pytest.raises(ValueError):
            simulate_measure(R0, 0, total, burn)

    def test_merge(self):
        a = EmpiricalMeasure({(1,): 1.0, (2,): 3.0}, 4.0)
        b = EmpiricalMeasure({(1,): 2.0, (2,): 2.0}, 4.0)
        m = a.merge(b)
        assert m.total_time == 8.0 and m.occupation == {(1,): 3.0, (2,): 5.0}

    def test_streams_are_independent(self, R0):
        many = simulate_many(R0, 4, 200.0, 0.0, trajectories=3)
        assert many.total_time == 600.0
        first = simulate_measure(R0, 4, 200.0, 0.0, stream=0)
        assert many.occupation != first.occupation

    def test_converges(self, R0):
        exact = stationary_vector(R0)
        tv = total_variation(simulate_measure(R0, 11, 2e4, 100.0).distribution(), exact)
        assert tv < 0.02


class TestTotalVariation:
    def test_examples(self):
        assert total_variation({1: 0.5, 2: 0.5}, {1: 0.5, 2: 0.5}) == 0
        assert total_variation({1: 1.0, 2: 0.0}, {1: 0.0, 2: 1.0}) == 1
        assert total_variation({1: 0.25, 2: 0.75}, {1: 0.5, 2: 0.5}) == 0.25

    def test_support_mismatch(self):
        with pytest.raises(ValueError):
            total_variation({1: 1.0}, {2: 1.0})


def test_rng_is_philox():
    assert isinstance(make_rng(0).bit_generator, np.random.Philox)
