"""Finite partial-monitoring games with exact rational gains.

A game is a pair of ``|N| x |M|`` matrices over actions ``N`` and outcomes
``M``: a gain matrix of :class:`~fractions.Fraction` and a feedback matrix of
indices into a symbol alphabet. Losses are never stored; ``loss = -gain``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

Rational = Fraction

#: Duel feedback: first arm lost, tie, first arm won.
LOSS, TIE, WIN = "□", "◇", "■"
DUELING_ALPHABET = (LOSS, TIE, WIN)

MAX_ARMS = 16


class GameError(ValueError):
    """Invalid game data."""


@dataclass(frozen=True)
class Game:
    name: str
    actions: tuple[str, ...]
    outcomes: tuple[str, ...]
    alphabet: tuple[str, ...]
    gain: tuple[tuple[Fraction, ...], ...]
    feedback: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for attr in ("actions", "outcomes", "alphabet"):
            object.__setattr__(self, attr, tuple(str(s) for s in getattr(self, attr)))
        object.__setattr__(
            self, "gain", tuple(tuple(Fraction(v) for v in row) for row in self.gain)
        )
        object.__setattr__(
            self, "feedback", tuple(tuple(int(v) for v in row) for row in self.feedback)
        )
        n, m = len(self.actions), len(self.outcomes)
        if n < 1 or m < 1:
            raise GameError("a game needs at least one action and one outcome")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise GameError("alphabet symbols must be distinct")
        for label, mat in (("gain", self.gain), ("feedback", self.feedback)):
            if len(mat) != n:
                raise GameError(f"{label} matrix has {len(mat)} rows, expected {n}")
            for i, row in enumerate(mat):
                if len(row) != m:
                    raise GameError(
                        f"{label} row {i} has {len(row)} columns, expected {m}"
                    )
        used = set()
        for i, row in enumerate(self.feedback):
            for j, s in enumerate(row):
                if not 0 <= s < len(self.alphabet):
                    raise GameError(f"feedback[{i}][{j}] = {s} is not a symbol index")
                used.add(s)
        unused = [self.alphabet[s] for s in range(len(self.alphabet)) if s not in used]
        if unused:
            raise GameError(f"alphabet symbols never used: {unused}")

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    @property
    def n_outcomes(self) -> int:
        return len(self.outcomes)

    @property
    def is_dueling(self) -> bool:
        return self.alphabet == DUELING_ALPHABET

    def loss(self, i: int) -> tuple[Fraction, ...]:
        return tuple(-g for g in self.gain[i])

    def symbol(self, i: int, m: int) -> str:
        return self.alphabet[self.feedback[i][m]]

    def feedback_symbols(self) -> tuple[tuple[str, ...], ...]:
        return tuple(tuple(self.alphabet[s] for s in row) for row in self.feedback)

    def action_index(self, label: str) -> int:
        try:
            return self.actions.index(label)
        except ValueError:
            raise GameError(f"unknown action {label!r}") from None

    @classmethod
    def from_symbols(cls, name, actions, outcomes, gain, feedback, alphabet=None) -> "Game":
        """Build a game from a feedback matrix of symbol strings.

        Without an explicit ``alphabet`` symbols are ordered by first
        occurrence in row-major order.
        """
        if alphabet is None:
            alphabet = []
            for row in feedback:
                for s in row:
                    if s not in alphabet:
                        alphabet.append(s)
        alphabet = tuple(alphabet)
        lookup = {s: k for k, s in enumerate(alphabet)}
        try:
            fb = tuple(tuple(lookup[s] for s in row) for row in feedback)
        except KeyError as exc:
            raise GameError(f"feedback symbol {exc.args[0]!r} not in alphabet") from None
        return cls(name, tuple(actions), tuple(outcomes), alphabet, gain, fb)


class ActionPair(NamedTuple):
    """Unordered duel between two arms, stored with ``first <= second``."""

    first: int
    second: int

    @classmethod
    def of(cls, i: int, j: int) -> "ActionPair":
        return cls(min(i, j), max(i, j))

    def label(self, K: int) -> str:
        if K <= 9:
            return f"{self.first}{self.second}"
        return f"{self.first},{self.second}"


def outcome_bits(index: int, K: int) -> tuple[int, ...]:
    """Binary gains ``(m_1, ..., m_K)`` of an outcome; big-endian in ``index``."""
    return tuple((index >> (K - 1 - k)) & 1 for k in range(K))


def outcome_index(bits: Sequence[int]) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | (1 if b else 0)
    return idx


def outcome_label(index: int, K: int) -> str:
    return "".join(str(b) for b in outcome_bits(index, K))


def dueling_pairs(K: int) -> list[ActionPair]:
    """All duels ``(i, j)`` with ``1 <= i <= j <= K`` in lexicographic order."""
    return [ActionPair(i, j) for i in range(1, K + 1) for j in range(i, K + 1)]


def _check_arms(K: int) -> None:
    if not isinstance(K, int) or not 2 <= K <= MAX_ARMS:
        raise GameError(f"arm count must be an integer in [2, {MAX_ARMS}], got {K!r}")


def build_dueling_game(K: int) -> Game:
    """Utility-based dueling bandit with ``K`` binary-gain arms.

    Actions are the ``K(K+1)/2`` unordered pairs, outcomes the ``2**K`` gain
    vectors. Playing ``(i, j)`` earns ``(m_i + m_j) / 2`` and reveals only
    the duel result: ``□`` if ``m_i < m_j``, ``◇`` on a tie, ``■`` if
    ``m_i > m_j``.
    """
    _check_arms(K)
    pairs = dueling_pairs(K)
    outcomes = [outcome_bits(m, K) for m in range(2**K)]
    half = Fraction(1, 2)
    gain = []
    feedback = []
    for i, j in pairs:
        gain.append(tuple((bits[i - 1] + bits[j - 1]) * half for bits in outcomes))
        row = []
        for bits in outcomes:
            a, b = bits[i - 1], bits[j - 1]
            row.append(0 if a < b else 1 if a == b else 2)
        feedback.append(tuple(row))
    return Game(
        name=f"dueling-K{K}",
        actions=tuple(p.label(K) for p in pairs),
        outcomes=tuple(outcome_label(m, K) for m in range(2**K)),
        alphabet=DUELING_ALPHABET,
        gain=tuple(gain),
        feedback=tuple(feedback),
    )


def dueling_arms(game: Game) -> int:
    """Recover ``K`` from a game with the dueling layout."""
    if not game.is_dueling:
        raise GameError(f"{game.name} is not a dueling game")
    K = game.n_outcomes.bit_length() - 1
    if 2**K != game.n_outcomes or game.n_actions != K * (K + 1) // 2:
        raise GameError(f"{game.name} does not have the dueling layout")
    return K


def dueling_action(game: Game, i: int, j: int) -> int:
    """Row index of the duel between arms ``i`` and ``j`` (either order)."""
    K = dueling_arms(game)
    a, b = min(i, j), max(i, j)
    if not 1 <= a <= b <= K:
        raise GameError(f"arms ({i}, {j}) out of range for K={K}")
    # rows before arm a: sum_{t<a} (K - t + 1)
    return (a - 1) * K - (a - 1) * (a - 2) // 2 + (b - a)


def build_mab_game(K: int) -> Game:
    """``K``-armed bandit with binary gains; the feedback is the gain itself."""
    _check_arms(K)
    outcomes = [outcome_bits(m, K) for m in range(2**K)]
    gain = tuple(tuple(Fraction(bits[i]) for bits in outcomes) for i in range(K))
    feedback = tuple(tuple(bits[i] for bits in outcomes) for i in range(K))
    return Game(
        name=f"mab-K{K}",
        actions=tuple(str(i + 1) for i in range(K)),
        outcomes=tuple(outcome_label(m, K) for m in range(2**K)),
        alphabet=("0", "1"),
        gain=gain,
        feedback=feedback,
    )


def _strictly_increasing(values: Sequence[Fraction]) -> bool:
    return all(a < b for a, b in zip(values, values[1:]))


def build_pricing_game(prices: Sequence, valuations: Sequence) -> Game:
    """Posted-price selling over finite price and valuation grids.

    Price ``x`` against valuation ``y`` sells (gain ``x``) iff ``x <= y``;
    the seller only learns whether the sale happened.
    """
    prices = [Fraction(p) for p in prices]
    valuations = [Fraction(v) for v in valuations]
    if not prices or not valuations:
        raise GameError("prices and valuations must be non-empty")
    if not _strictly_increasing(prices) or not _strictly_increasing(valuations):
        raise GameError("prices and valuations must be strictly increasing")
    if any(not 0 < p <= 1 for p in prices):
        raise GameError("prices must lie in (0, 1]")
    if any(not 0 <= v <= 1 for v in valuations):
        raise GameError("valuations must lie in [0, 1]")
    gain = tuple(tuple(x if x <= y else Fraction(0) for y in valuations) for x in prices)
    symbols = tuple(tuple("sold" if x <= y else "not sold" for y in valuations) for x in prices)
    alphabet = tuple(s for s in ("sold", "not sold") if any(s in row for row in symbols))
    return Game.from_symbols(
        name="pricing",
        actions=[str(x) for x in prices],
        outcomes=[str(y) for y in valuations],
        gain=gain,
        feedback=symbols,
        alphabet=alphabet,
    )
