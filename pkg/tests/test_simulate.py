import csv
import inspect
import io
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from partmon.game import TIE, Game, GameError, build_dueling_game, build_mab_game, dueling_action
from partmon.simulate import (
    SUMMARY_HEADER,
    TRACE_HEADER,
    DuelingBernoulli,
    DuelingExp3,
    EnvironmentMismatch,
    Policy,
    PolicySpec,
    Scripted,
    Stochastic,
    UniformPolicy,
    account,
    batch,
    format_decimal,
    product_distribution,
    run,
    streams,
    summarize,
    write_summary,
    write_trace_rows,
)

F = Fraction
K3 = build_dueling_game(3)
ENV3 = DuelingBernoulli((F(9, 10), F(1, 2), F(1, 2)))


class Fixed(Policy):
    name = "fixed"

    def __init__(self, action):
        self.action = action

    def choose(self, t):
        return self.action


def recompute(game, actions, outcomes):
    """Regret after every round, from scratch in Fractions."""
    totals = [F(0)] * game.n_actions
    learner = F(0)
    out = []
    for a, o in zip(actions, outcomes):
        for i in range(game.n_actions):
            totals[i] += game.gain[i][o]
        learner += game.gain[a][o]
        out.append(max(totals) - learner)
    return out


def test_replay_determinism():
    a = run(K3, ENV3, UniformPolicy(), 500, seed=11, run_index=3)
    b = run(K3, ENV3, UniformPolicy(), 500, seed=11, run_index=3)
    assert np.array_equal(a.actions, b.actions) and np.array_equal(a.outcomes, b.outcomes)
    assert a.regret == b.regret
    c = run(K3, ENV3, UniformPolicy(), 500, seed=11, run_index=4)
    assert not np.array_equal(a.outcomes, c.outcomes)


def test_environment_stream_independent_of_policy():
    a = run(K3, ENV3, UniformPolicy(), 300, seed=5)
    b = run(K3, ENV3, DuelingExp3(0.3), 300, seed=5)
    assert np.array_equal(a.outcomes, b.outcomes)


def test_horizon_one():
    tr = run(K3, ENV3, UniformPolicy(), 1, seed=0)
    assert tr.horizon == 1 and len(tr.actions) == 1
    assert tr.regret == recompute(K3, tr.actions.tolist(), tr.outcomes.tolist())[-1]
    with pytest.raises(ValueError):
        run(K3, ENV3, UniformPolicy(), 0, seed=0)


def test_scripted_best_action_has_zero_regret():
    game = build_mab_game(2)
    script = Scripted(tuple([2, 3, 2, 0, 3, 2, 1] * 10))  # arm 1 earns 5 per block, arm 2 earns 3
    tr = run(game, script, Fixed(0), 70, seed=0)
    assert tr.regret == 0 and tr.best_action == 0
    assert tr.cumulative_gain == tr.best_fixed_gain == 50


def test_best_action_tie_break_lowest_index():
    game = build_mab_game(2)
    tr = account(game, np.array([0, 1]), np.array([3, 0]))
    assert tr.best_action == 0 and tr.regret == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 200))
def test_exact_recomputation(seed, T):
    tr = run(K3, ENV3, DuelingExp3(0.2), T, seed=seed)
    expected = recompute(K3, tr.actions.tolist(), tr.outcomes.tolist())
    got = [F(int(v), tr.scale) for v in tr.cum_regret_scaled.tolist()]
    assert got == expected
    assert tr.regret == expected[-1]
    assert tr.cumulative_gain == sum(K3.gain[a][o] for a, o in zip(tr.actions.tolist(), tr.outcomes.tolist()))


def test_accounting_chunks_agree():
    # longer than one accounting chunk
    tr = run(K3, ENV3, UniformPolicy(), 70_000, seed=2)
    best = max(sum(K3.gain[i][o] for o in tr.outcomes.tolist()) for i in range(K3.n_actions))
    mine = sum(K3.gain[a][o] for a, o in zip(tr.actions.tolist(), tr.outcomes.tolist()))
    assert tr.regret == best - mine


def test_policy_interface_hides_outcomes():
    params = list(inspect.signature(Policy.observe).parameters)
    assert params == ["self", "action", "symbol"]
    assert list(inspect.signature(Policy.choose).parameters) == ["self", "t"]


class Spy(Policy):
    """Plays a self-duel and guesses the outcome from whatever it sees."""

    name = "spy"

    def init(self, game, rng):
        super().init(game, rng)
        self.guesses = []
        self.seen = []

    def choose(self, t):
        # any deterministic function of the history is as good as another here
        self.guesses.append(sum(map(ord, "".join(self.seen[-3:]))) % 4)
        return 0

    def observe(self, action, symbol):
        self.seen.append(symbol)


def test_information_hiding_spy_at_chance():
    game = build_dueling_game(2)
    env = Stochastic((F(1, 4),) * 4)
    spy = Spy()
    tr = run(game, env, spy, 4000, seed=9)
    assert set(spy.seen) == {TIE}
    hits = sum(g == o for g, o in zip(spy.guesses, tr.outcomes.tolist()))
    # chance is 1/4; a 5-sigma band
    assert abs(hits / 4000 - 0.25) < 5 * math.sqrt(0.25 * 0.75 / 4000)


def test_uniform_policy_frequencies():
    tr = run(K3, ENV3, UniformPolicy(), 60_000, seed=1)
    counts = np.bincount(tr.actions, minlength=K3.n_actions) / 60_000
    assert np.all(np.abs(counts - 1 / 6) < 0.01)


def test_stochastic_sampling_frequencies():
    q = (F(1, 2), F(1, 3), F(1, 6), F(0))
    env = Stochastic(q)
    out = env.sample(build_mab_game(2), streams(3)[0], 60_000)
    freq = np.bincount(out, minlength=4) / 60_000
    assert freq[3] == 0
    assert np.all(np.abs(freq - np.array([float(v) for v in q])) < 0.01)


def test_dueling_bernoulli_marginals():
    out = ENV3.sample(K3, streams(4)[0], 50_000)
    bits = [(out >> (2 - k)) & 1 for k in range(3)]
    assert abs(bits[0].mean() - 0.9) < 0.01 and abs(bits[1].mean() - 0.5) < 0.01


def test_product_distribution():
    env = product_distribution([F(1, 2), F(1, 4)])
    assert env.q == (F(3, 8), F(1, 8), F(3, 8), F(1, 8))


def test_environment_errors():
    with pytest.raises(EnvironmentMismatch):
        Stochastic((F(1, 2), F(1, 3)))
    with pytest.raises(EnvironmentMismatch):
        DuelingBernoulli((F(3, 2),))
    with pytest.raises(EnvironmentMismatch):
        run(K3, DuelingBernoulli((F(1, 2),) * 2), UniformPolicy(), 5, seed=0)
    with pytest.raises(EnvironmentMismatch):
        run(build_mab_game(2), ENV3, UniformPolicy(), 5, seed=0)
    with pytest.raises(EnvironmentMismatch):
        run(K3, Scripted((0, 1)), UniformPolicy(), 5, seed=0)
    with pytest.raises(EnvironmentMismatch):
        run(K3, Scripted((99,) * 5), UniformPolicy(), 5, seed=0)
    with pytest.raises(EnvironmentMismatch):
        run(K3, Stochastic((F(1),)), UniformPolicy(), 5, seed=0)


def test_seed_range():
    with pytest.raises(ValueError):
        streams(-1)


# --- DuelingExp3 --------------------------------------------------------------------

def test_dexp3_gamma_validation():
    for bad in (0, -0.1, 1.5):
        with pytest.raises(ValueError):
            DuelingExp3(bad)
    with pytest.raises(ValueError):
        PolicySpec("nope").build()


def test_dexp3_needs_dueling_game():
    with pytest.raises(GameError):
        run(build_mab_game(2), Stochastic((F(1, 4),) * 4), DuelingExp3(), 5, seed=0)


def test_dexp3_gamma_one_is_uniform():
    pol = DuelingExp3(1.0)
    pol.init(K3, streams(0)[1])
    pol.logw = [5.0, -3.0, 0.7]
    assert pol._probs() == [1 / 3] * 3
    tr = run(K3, DuelingBernoulli((F(1), F(0), F(0))), DuelingExp3(1.0), 30_000, seed=3)
    counts = np.bincount(tr.actions, minlength=6) / 30_000
    # two independent uniform draws: self-duels 1/9, mixed duels 2/9
    selfs = [dueling_action(K3, i, i) for i in (1, 2, 3)]
    for a in range(6):
        assert abs(counts[a] - (1 / 9 if a in selfs else 2 / 9)) < 0.01


def test_dexp3_concentrates_on_best_arm():
    gamma = 0.1
    env = DuelingBernoulli((F(1), F(0), F(0)))
    trace_p = []

    class Probe(DuelingExp3):
        def choose(self, t):
            a = super().choose(t)
            trace_p.append(self.probs[0])
            return a

    run(K3, env, Probe(gamma), 6000, seed=1)
    early, late = np.mean(trace_p[:500]), np.mean(trace_p[-500:])
    limit = 1 - gamma * 2 / 3
    assert early < late
    assert abs(late - limit) < 0.01


def test_dexp3_beats_uniform():
    uni = batch(K3, ENV3, PolicySpec("uniform"), 4000, 10, seed=1)
    exp = batch(K3, ENV3, PolicySpec("dexp3"), 4000, 10, seed=1)
    assert exp.mean < uni.mean / 2


# --- batches and CSV -----------------------------------------------------------------

def test_batch_single_run_equals_trace():
    s = batch(K3, ENV3, PolicySpec("uniform"), 300, 1, seed=8)
    tr = run(K3, ENV3, UniformPolicy(), 300, seed=8, run_index=0)
    assert s.regrets == (tr.regret,) and s.mean == tr.regret
    assert math.isnan(s.stderr)


def test_batch_deterministic_and_worker_independent():
    a = batch(K3, ENV3, PolicySpec("dexp3", 0.2), 400, 4, seed=3)
    b = batch(K3, ENV3, PolicySpec("dexp3", 0.2), 400, 4, seed=3, workers=2)
    assert a == b


def test_summarize():
    s = summarize([F(1), F(3)])
    assert s.mean == 2 and s.stderr == pytest.approx(1.0)
    with pytest.raises(ValueError):
        batch(K3, ENV3, PolicySpec("uniform"), 10, 0, seed=0)


@pytest.mark.parametrize(
    "value, digits, text",
    [(F(5, 2), 3, "2.500"), (F(-1, 2), 2, "-0.50"), (F(1, 3), 4, "0.3333"),
     (F(2, 3), 4, "0.6667"), (F(1, 8), 2, "0.12"), (F(3, 8), 2, "0.38"), (F(7), 0, "7")],
)
def test_format_decimal(value, digits, text):
    assert format_decimal(value, digits) == text


def test_csv_output():
    tr = run(K3, ENV3, UniformPolicy(), 5, seed=0)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_HEADER)
    write_trace_rows(w, 0, tr, K3, digits=3)
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert rows[0] == ["run", "t", "action", "outcome", "symbol", "cum_gain", "cum_regret"]
    assert [r[1] for r in rows[1:]] == ["1", "2", "3", "4", "5"]
    assert rows[-1][6] == format_decimal(tr.regret, 3)
    assert all(r[2] in K3.actions and r[3] in K3.outcomes for r in rows[1:])
    out = io.StringIO()
    write_summary(out, summarize([tr.regret]), digits=3)
    assert out.getvalue().splitlines() == [",".join(SUMMARY_HEADER), f"0,{format_decimal(tr.regret, 3)}"]


def test_custom_game_with_rational_gains():
    game = Game("thirds", ["a", "b"], ["x", "y"], ["s"], [[F(1, 3), 0], [0, F(2, 7)]], [[0, 0], [0, 0]])
    tr = run(game, Stochastic((F(1, 2), F(1, 2))), UniformPolicy(), 500, seed=4)
    assert tr.scale == 21
    assert tr.regret == recompute(game, tr.actions.tolist(), tr.outcomes.tolist())[-1]
    assert Counter(tr.symbols(game)) == {"s": 500}
