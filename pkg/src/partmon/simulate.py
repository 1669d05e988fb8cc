"""Round-by-round play of a game against an oblivious environment.

Each round the environment's outcome is fixed before the policy acts, the
policy picks an action without seeing it, and only the feedback symbol is
passed back. Regret is measured against the best fixed action on the
realized outcome sequence and kept exact: gains are scaled to integers by
their common denominator and converted back to fractions at the end.

Randomness: run ``r`` of seed ``s`` uses ``SeedSequence(s, spawn_key=(r,))``,
spawned into an environment stream and a policy stream, each driving a
Philox counter-based generator. Environment draws therefore do not depend on
the policy, so different policies see the same outcomes for the same
``(s, r)``.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np

from .game import Game, GameError, dueling_action, dueling_arms

MAX_SEED = 2**64 - 1
_CHUNK = 1 << 15


class EnvironmentMismatch(GameError):
    """Environment does not fit the game."""


def streams(seed: int, run_index: int = 0) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent (environment, policy) generators for one run."""
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    env_ss, pol_ss = np.random.SeedSequence(seed, spawn_key=(run_index,)).spawn(2)
    return (
        np.random.Generator(np.random.Philox(env_ss)),
        np.random.Generator(np.random.Philox(pol_ss)),
    )


def _exact_draws(rng: np.random.Generator, den: int, size: int) -> np.ndarray:
    if den > 2**63 - 1:
        raise ValueError("probability denominators must fit in 63 bits")
    return rng.integers(0, den, size=size, dtype=np.int64)


@dataclass(frozen=True)
class Stochastic:
    """i.i.d. outcomes from a distribution ``q`` over the outcome set."""

    q: tuple[Fraction, ...]

    def __post_init__(self):
        q = tuple(Fraction(v) for v in self.q)
        if any(v < 0 for v in q) or sum(q) != 1:
            raise EnvironmentMismatch("q must be a probability vector summing to exactly 1")
        object.__setattr__(self, "q", q)

    def check(self, game: Game) -> None:
        if len(self.q) != game.n_outcomes:
            raise EnvironmentMismatch(
                f"distribution has {len(self.q)} entries, game has {game.n_outcomes} outcomes"
            )

    def sample(self, game: Game, rng: np.random.Generator, T: int) -> np.ndarray:
        den = math.lcm(*(v.denominator for v in self.q))
        cum = np.cumsum([int(v * den) for v in self.q])
        u = _exact_draws(rng, den, T)
        return np.searchsorted(cum, u, side="right").astype(np.int64)


@dataclass(frozen=True)
class Scripted:
    """A fixed outcome sequence, played from the start."""

    outcomes: tuple[int, ...]

    def check(self, game: Game) -> None:
        bad = [o for o in self.outcomes if not 0 <= o < game.n_outcomes]
        if bad:
            raise EnvironmentMismatch(f"scripted outcome {bad[0]} out of range")

    def sample(self, game: Game, rng: np.random.Generator, T: int) -> np.ndarray:
        if len(self.outcomes) < T:
            raise EnvironmentMismatch(
                f"script has {len(self.outcomes)} outcomes, horizon is {T}"
            )
        return np.asarray(self.outcomes[:T], dtype=np.int64)


@dataclass(frozen=True)
class DuelingBernoulli:
    """Arm ``k`` independently has gain 1 with probability ``means[k]``.

    Draw order: all ``T`` bits of arm 1, then arm 2, and so on, each bit
    ``u < num`` with ``u`` uniform on ``[0, den)``.
    """

    means: tuple[Fraction, ...]

    def __post_init__(self):
        means = tuple(Fraction(v) for v in self.means)
        if any(not 0 <= v <= 1 for v in means):
            raise EnvironmentMismatch("means must lie in [0, 1]")
        object.__setattr__(self, "means", means)

    def check(self, game: Game) -> None:
        try:
            K = dueling_arms(game)
        except GameError:
            raise EnvironmentMismatch("DuelingBernoulli needs a dueling game") from None
        if K != len(self.means):
            raise EnvironmentMismatch(f"{len(self.means)} means for a {K}-armed game")

    def sample(self, game: Game, rng: np.random.Generator, T: int) -> np.ndarray:
        K = len(self.means)
        idx = np.zeros(T, dtype=np.int64)
        for k, mu in enumerate(self.means):
            bits = _exact_draws(rng, mu.denominator, T) < mu.numerator
            idx |= bits.astype(np.int64) << (K - 1 - k)
        return idx


def product_distribution(means: Sequence[Fraction]) -> Stochastic:
    """Independent Bernoulli arms as an exact distribution over ``2**K`` outcomes."""
    means = [Fraction(v) for v in means]
    K = len(means)
    q = [Fraction(0)] * (2**K)
    for idx in range(2**K):
        p = Fraction(1)
        for k in range(K):
            bit = (idx >> (K - 1 - k)) & 1
            p *= means[k] if bit else 1 - means[k]
        q[idx] = p
    return Stochastic(tuple(q))


class Policy:
    """Learner interface.

    ``init`` receives the public game description and the policy's random
    stream. ``choose`` is called with the round index only; whatever history
    the policy needs it records in ``observe``, which receives the action it
    played and the feedback symbol, never the outcome or the gain.
    """

    name = "policy"

    def init(self, game: Game, rng: np.random.Generator) -> None:
        self.n_actions = game.n_actions
        self.rng = rng

    def choose(self, t: int) -> int:
        raise NotImplementedError

    def observe(self, action: int, symbol: str) -> None:
        pass


class UniformPolicy(Policy):
    name = "uniform"

    def init(self, game, rng):
        super().init(game, rng)
        self._buf: list[int] = []

    def choose(self, t):
        if not self._buf:
            self._buf = self.rng.integers(0, self.n_actions, size=4096).tolist()[::-1]
        return self._buf.pop()


#: Default exploration rate for :class:`DuelingExp3`.
DEFAULT_GAMMA = 0.05


class DuelingExp3(Policy):
    """Exponential weights over arms fed by relative feedback.

    Both arms of a duel are drawn independently from the smoothed weights
    ``p = (1 - gamma) w / sum(w) + gamma / K``. The winner of a decisive
    duel is credited ``1 / (2 p_winner)``; ties credit nobody. Log-weights
    grow by ``gamma / K`` times the credit.
    """

    name = "dexp3"

    def __init__(self, gamma: float = DEFAULT_GAMMA):
        if not 0 < gamma <= 1:
            raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
        self.gamma = float(gamma)

    def init(self, game, rng):
        super().init(game, rng)
        self.K = K = dueling_arms(game)
        self.eta = self.gamma / K
        self.logw = [0.0] * K
        self.table = [[dueling_action(game, a + 1, b + 1) for b in range(K)] for a in range(K)]
        self._u: list[float] = []
        self.probs = [1.0 / K] * K

    def _probs(self):
        top = max(self.logw)
        w = [math.exp(x - top) for x in self.logw]
        s = sum(w)
        g, K = self.gamma, self.K
        return [(1 - g) * x / s + g / K for x in w]

    def _draw(self, p):
        if not self._u:
            self._u = self.rng.random(8192).tolist()[::-1]
        u = self._u.pop()
        acc = 0.0
        for k, pk in enumerate(p):
            acc += pk
            if u < acc:
                return k
        return len(p) - 1

    def choose(self, t):
        p = self.probs = self._probs()
        a = self._draw(p)
        b = self._draw(p)
        self.pair = (min(a, b), max(a, b))
        return self.table[a][b]

    def observe(self, action, symbol):
        lo, hi = self.pair
        if symbol == "■":
            winner = lo
        elif symbol == "□":
            winner = hi
        else:
            return
        self.logw[winner] += self.eta / (2.0 * self.probs[winner])


@dataclass(frozen=True)
class PolicySpec:
    """Picklable recipe for a fresh policy per run."""

    name: str
    gamma: float | None = None

    def build(self) -> Policy:
        if self.name == "uniform":
            return UniformPolicy()
        if self.name == "dexp3":
            return DuelingExp3(DEFAULT_GAMMA if self.gamma is None else self.gamma)
        raise ValueError(f"unknown policy {self.name!r}")


@dataclass(frozen=True)
class RegretTrace:
    """Realized play of one run.

    Per-round arrays hold integers scaled by ``scale`` (the common gain
    denominator); the summary fields are exact fractions.
    """

    horizon: int
    actions: np.ndarray
    outcomes: np.ndarray
    scale: int
    cum_gain_scaled: np.ndarray = field(repr=False)
    cum_regret_scaled: np.ndarray = field(repr=False)
    cumulative_gain: Fraction
    best_fixed_gain: Fraction
    best_action: int
    regret: Fraction

    def symbols(self, game: Game) -> list[str]:
        fb, alphabet = game.feedback, game.alphabet
        return [alphabet[fb[i][j]] for i, j in zip(self.actions.tolist(), self.outcomes.tolist())]


def gain_scale(game: Game) -> tuple[int, np.ndarray]:
    scale = math.lcm(*(v.denominator for row in game.gain for v in row))
    G = [[int(v * scale) for v in row] for row in game.gain]
    big = max(abs(v) for row in G for v in row)
    return scale, np.array(G, dtype=np.int64 if big < 2**31 else object)


def account(game: Game, actions: np.ndarray, outcomes: np.ndarray) -> RegretTrace:
    """Exact regret bookkeeping for a realized action/outcome sequence."""
    T = len(actions)
    scale, G = gain_scale(game)
    if G.dtype != object and T * int(np.abs(G).max(initial=0)) >= 2**62:
        G = G.astype(object)
    dtype = G.dtype
    cum_gain = np.empty(T, dtype=dtype)
    cum_regret = np.empty(T, dtype=dtype)
    totals = np.zeros(game.n_actions, dtype=dtype)
    learner = 0
    for start in range(0, T, _CHUNK):
        stop = min(T, start + _CHUNK)
        o = outcomes[start:stop]
        per_action = np.cumsum(G[:, o], axis=1) + totals[:, None]
        lg = np.cumsum(G[actions[start:stop], o]) + learner
        cum_gain[start:stop] = lg
        cum_regret[start:stop] = per_action.max(axis=0) - lg
        totals = per_action[:, -1].copy()
        learner = lg[-1]
    best_action = int(np.argmax(totals))
    total = Fraction(int(learner), scale)
    best = Fraction(int(totals[best_action]), scale)
    return RegretTrace(
        horizon=T,
        actions=actions,
        outcomes=outcomes,
        scale=scale,
        cum_gain_scaled=cum_gain,
        cum_regret_scaled=cum_regret,
        cumulative_gain=total,
        best_fixed_gain=best,
        best_action=best_action,
        regret=best - total,
    )


def run(game: Game, env, policy: Policy, T: int, seed: int, run_index: int = 0) -> RegretTrace:
    """Play ``T`` rounds; fully determined by the arguments."""
    if T < 1:
        raise ValueError("horizon must be at least 1")
    env.check(game)
    env_rng, pol_rng = streams(seed, run_index)
    outcomes = env.sample(game, env_rng, T)
    policy.init(game, pol_rng)
    fb, alphabet, n = game.feedback, game.alphabet, game.n_actions
    actions = np.empty(T, dtype=np.int64)
    choose, observe = policy.choose, policy.observe
    for t, j in enumerate(outcomes.tolist()):
        i = choose(t)
        if not 0 <= i < n:
            raise ValueError(f"policy {policy.name} chose invalid action {i} at round {t}")
        actions[t] = i
        observe(i, alphabet[fb[i][j]])
    return account(game, actions, outcomes)


@dataclass(frozen=True)
class BatchSummary:
    regrets: tuple[Fraction, ...]
    mean: Fraction
    stderr: float

    @property
    def runs(self) -> int:
        return len(self.regrets)


def summarize(regrets: Sequence[Fraction]) -> BatchSummary:
    regrets = tuple(regrets)
    n = len(regrets)
    mean = sum(regrets, Fraction(0)) / n
    if n < 2:
        return BatchSummary(regrets, mean, float("nan"))
    var = sum(((r - mean) ** 2 for r in regrets), Fraction(0)) / (n - 1)
    return BatchSummary(regrets, mean, math.sqrt(var / n))


def _one(args):
    game, env, spec, T, seed, r = args
    return run(game, env, spec.build(), T, seed, r)


def batch(
    game: Game,
    env,
    spec: PolicySpec,
    T: int,
    runs: int,
    seed: int,
    workers: int = 1,
    on_trace: Callable[[int, RegretTrace], None] | None = None,
) -> BatchSummary:
    """``runs`` seeded replications; run ``r`` uses stream ``(seed, r)``.

    ``on_trace`` is called in run order whatever the worker count.
    """
    if runs < 1:
        raise ValueError("runs must be at least 1")
    env.check(game)
    jobs = [(game, env, spec, T, seed, r) for r in range(runs)]
    regrets = []

    def collect(traces: Iterable[RegretTrace]):
        for r, tr in enumerate(traces):
            regrets.append(tr.regret)
            if on_trace is not None:
                on_trace(r, tr)

    if workers > 1 and runs > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            collect(pool.map(_one, jobs))
    else:
        collect(map(_one, jobs))
    return summarize(regrets)


def format_decimal(value: Fraction, digits: int = 10) -> str:
    """Fixed-point rendering, rounded half-even at ``digits`` places."""
    value = Fraction(value)
    unit = 10**digits
    if unit % value.denominator == 0:
        n = value.numerator * (unit // value.denominator)
        sign = "-" if n < 0 else ""
        whole, frac = divmod(abs(n), unit)
        return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"
    with localcontext() as ctx:
        ctx.prec = max(50, len(str(abs(value.numerator))) + digits + 10)
        d = Decimal(value.numerator) / Decimal(value.denominator)
        return str(d.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN))


TRACE_HEADER = ["run", "t", "action", "outcome", "symbol", "cum_gain", "cum_regret"]
SUMMARY_HEADER = ["run", "regret"]


def write_trace_rows(
    writer, run_index: int, trace: RegretTrace, game: Game, digits: int = 10
) -> None:
    """Rows of one run; ``t`` counts from 1, cumulative values include round ``t``.

    Actions and outcomes are written by label.
    """
    symbols = trace.symbols(game)
    alabels, olabels = game.actions, game.outcomes
    scale = trace.scale
    for t, (a, o, s, cg, cr) in enumerate(
        zip(
            trace.actions.tolist(),
            trace.outcomes.tolist(),
            symbols,
            trace.cum_gain_scaled.tolist(),
            trace.cum_regret_scaled.tolist(),
        ),
        start=1,
    ):
        writer.writerow(
            [
                run_index,
                t,
                alabels[a],
                olabels[o],
                s,
                format_decimal(Fraction(int(cg), scale), digits),
                format_decimal(Fraction(int(cr), scale), digits),
            ]
        )


def write_summary(fh: TextIO, summary: BatchSummary, digits: int = 10) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    for r, reg in enumerate(summary.regrets):
        w.writerow([r, format_decimal(reg, digits)])
