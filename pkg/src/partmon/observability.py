"""Signal matrices, observability tests and the four-way classification.

Loss differences are tested for membership in the row space of stacked
signal matrices: the stack of every action for global observability, the
stack over a neighborhood set for local observability. Every positive answer
comes with a coefficient vector that reproduces the difference exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .game import (
    DUELING_ALPHABET,
    LOSS,
    TIE,
    WIN,
    Game,
    GameError,
    dueling_action,
    dueling_arms,
)
from .geometry import CellReport, NeighborReport, cell_decomposition, neighbor_pairs
from .linalg import combine, in_row_space

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class SignalMatrix:
    """0/1 incidence of the symbols an action can emit against outcomes."""

    action: int
    symbols: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    def row(self, symbol: str) -> tuple[int, ...]:
        return self.entries[self.symbols.index(symbol)]


def signal_matrix(game: Game, i: int) -> SignalMatrix:
    """Signal matrix of action ``i``.

    Rows follow alphabet order for dueling games (``□ ◇ ■``) and order of
    first occurrence along the feedback row otherwise.
    """
    row = game.feedback_symbols()[i]
    if game.is_dueling:
        symbols = tuple(s for s in DUELING_ALPHABET if s in row)
    else:
        symbols = tuple(dict.fromkeys(row))
    entries = tuple(tuple(int(s == sym) for s in row) for sym in symbols)
    return SignalMatrix(i, symbols, entries)


def stack_signal_matrices(mats: Sequence[SignalMatrix]) -> tuple[tuple[int, ...], ...]:
    rows: list[tuple[int, ...]] = []
    width = None
    for s in mats:
        for r in s.entries:
            if width is None:
                width = len(r)
            elif len(r) != width:
                raise ValueError(
                    f"signal matrix of action {s.action} has {len(r)} columns, expected {width}"
                )
            rows.append(r)
    return tuple(rows)


def loss_difference(game: Game, i: int, j: int) -> Vector:
    """``l_i - l_j``, which is ``g_j - g_i``."""
    return tuple(b - a for a, b in zip(game.gain[i], game.gain[j]))


@dataclass(frozen=True)
class ObservabilityResult:
    observable: bool
    certificate: Vector | None
    support: tuple[int, ...]  # actions whose signal rows were stacked, in order


def _test(game: Game, i: int, j: int, support: Sequence[int]) -> ObservabilityResult:
    stack = stack_signal_matrices([signal_matrix(game, k) for k in support])
    ok, cert = in_row_space(stack, loss_difference(game, i, j))
    return ObservabilityResult(ok, cert, tuple(support))


def global_observability(game: Game, i: int, j: int) -> ObservabilityResult:
    return _test(game, i, j, range(game.n_actions))


def local_observability(
    game: Game, i: int, j: int, neighbors: NeighborReport
) -> ObservabilityResult:
    """Test over the neighborhood set of the neighbor pair ``(i, j)``.

    Raises ``KeyError`` when ``(i, j)`` is not a neighbor pair.
    """
    return _test(game, i, j, neighbors.neighborhood(i, j))


def certificate_holds(game: Game, result: ObservabilityResult, i: int, j: int) -> bool:
    if not result.observable:
        return False
    stack = stack_signal_matrices([signal_matrix(game, k) for k in result.support])
    return combine(result.certificate, stack) == loss_difference(game, i, j)


@dataclass(frozen=True)
class PairObservability:
    first: int
    second: int
    globally: ObservabilityResult
    locally: ObservabilityResult | None = None


@dataclass(frozen=True)
class ObservabilityReport:
    pairs: tuple[PairObservability, ...]

    def get(self, i: int, j: int) -> PairObservability:
        for p in self.pairs:
            if {p.first, p.second} == {i, j}:
                return p
        raise KeyError((i, j))


class Verdict(enum.Enum):
    TRIVIAL = "Trivial"
    EASY = "Easy"
    HARD = "Hard"
    HOPELESS = "Hopeless"


#: CLI exit codes per verdict.
EXIT_CODES = {Verdict.TRIVIAL: 10, Verdict.EASY: 11, Verdict.HARD: 12, Verdict.HOPELESS: 13}


@dataclass(frozen=True)
class Classification:
    """Verdict with its evidence.

    ``evidence`` is the dominant action for Trivial, the offending pair for
    Hopeless and Hard, and every locally observable neighbor pair for Easy.
    """

    verdict: Verdict
    evidence: tuple
    cells: CellReport | None = None
    neighbors: NeighborReport | None = None
    observability: ObservabilityReport | None = field(default=None)


def dominant_action(game: Game) -> int | None:
    """Lowest action whose gain row dominates every other row entrywise."""
    for i, gi in enumerate(game.gain):
        if all(all(a >= b for a, b in zip(gi, gj)) for gj in game.gain):
            return i
    return None


def classify_reports(
    game: Game, cells: CellReport, neighbors: NeighborReport | None
) -> tuple[Verdict, tuple, ObservabilityReport]:
    """Decide Hopeless / Easy / Hard from precomputed geometry.

    Pairs are visited in lexicographic order, so the evidence is the first
    failing pair. ``neighbors`` is only consulted when every strongly Pareto
    pair is globally observable.
    """
    sp = cells.strongly_pareto()
    global_support = list(range(game.n_actions))
    stack = stack_signal_matrices([signal_matrix(game, k) for k in global_support])
    glob: dict[tuple[int, int], ObservabilityResult] = {}
    hopeless = None
    for i, j in combinations(sp, 2):
        ok, cert = in_row_space(stack, loss_difference(game, i, j))
        glob[(i, j)] = ObservabilityResult(ok, cert, tuple(global_support))
        if not ok and hopeless is None:
            hopeless = (i, j)
    if hopeless is not None:
        report = ObservabilityReport(tuple(PairObservability(i, j, r) for (i, j), r in glob.items()))
        return Verdict.HOPELESS, hopeless, report

    local: dict[tuple[int, int], ObservabilityResult] = {}
    hard = None
    for p in neighbors.pairs:
        res = local_observability(game, p.first, p.second, neighbors)
        local[(p.first, p.second)] = res
        if not res.observable and hard is None:
            hard = (p.first, p.second)
    report = ObservabilityReport(
        tuple(PairObservability(i, j, r, local.get((i, j))) for (i, j), r in glob.items())
    )
    if hard is not None:
        return Verdict.HARD, hard, report
    return Verdict.EASY, tuple(local), report


def classify(game: Game) -> Classification:
    """Place ``game`` in the Trivial / Easy / Hard / Hopeless hierarchy."""
    dom = dominant_action(game)
    if dom is not None:
        return Classification(Verdict.TRIVIAL, (dom,))
    cells = cell_decomposition(game)
    neighbors = neighbor_pairs(game, cells)
    verdict, evidence, report = classify_reports(game, cells, neighbors)
    return Classification(verdict, evidence, cells, neighbors, report)


DEFAULT_DUELING_ENCODING = {LOSS: Fraction(0), TIE: Fraction(1, 2), WIN: Fraction(1)}


def default_encoding(game: Game) -> dict[str, Fraction]:
    """``□ -> 0, ◇ -> 1/2, ■ -> 1`` for duels; numeric symbols map to their
    value; anything else maps to its alphabet position."""
    if game.is_dueling:
        return dict(DEFAULT_DUELING_ENCODING)
    try:
        return {s: Fraction(s) for s in game.alphabet}
    except ValueError:
        return {s: Fraction(k) for k, s in enumerate(game.alphabet)}


@dataclass(frozen=True)
class FeedexpCheck:
    feasible: bool
    B: tuple[Vector, ...] | None
    conflict: tuple[int, int] | None
    failing_row: int | None = None


def column_conflict(game: Game) -> tuple[int, int] | None:
    """Lexicographically first outcome pair with identical feedback columns
    but different gain columns.

    Such a pair makes ``B H = G`` unsolvable under every symbol encoding.
    """
    groups: dict[tuple[int, ...], list[int]] = {}
    for m in range(game.n_outcomes):
        groups.setdefault(tuple(row[m] for row in game.feedback), []).append(m)
    best = None
    for cols in groups.values():
        for a, b in combinations(cols, 2):
            if any(row[a] != row[b] for row in game.gain):
                if best is None or (a, b) < best:
                    best = (a, b)
                break
    return best


def feedexp_precondition(
    game: Game, encoding: Mapping[str, Fraction] | None = None
) -> FeedexpCheck:
    """Is there a matrix ``B`` with ``B H = G`` for the encoded feedback ``H``?

    Solved row by row: row ``i`` of ``B`` exists iff ``g_i`` lies in the row
    space of ``H``. The encoding-free column conflict is reported either way.
    """
    if encoding is None:
        encoding = default_encoding(game)
    missing = [s for s in game.alphabet if s not in encoding]
    if missing:
        raise GameError(f"encoding has no value for symbols {missing}")
    H = [[Fraction(encoding[s]) for s in row] for row in game.feedback_symbols()]
    conflict = column_conflict(game)
    B = []
    for i, g in enumerate(game.gain):
        ok, coeffs = in_row_space(H, g)
        if not ok:
            return FeedexpCheck(False, None, conflict, i)
        B.append(coeffs)
    return FeedexpCheck(True, tuple(B), conflict)


def point_local_witness(game: Game) -> tuple[Vector, tuple[int, ...]]:
    """Point mass on the all-ones outcome and the actions optimal there.

    Every arm has gain 1 at that outcome, so every duel earns the maximum.
    """
    K = dueling_arms(game)
    m = game.n_outcomes
    q = tuple(Fraction(int(k == m - 1)) for k in range(m))
    values = [sum((a * b for a, b in zip(g, q)), Fraction(0)) for g in game.gain]
    best = max(values)
    optimal = tuple(i for i, v in enumerate(values) if v == best)
    assert len(optimal) == K * (K + 1) // 2 and best == 1
    return q, optimal


def duel_rows(game: Game, i: int, j: int) -> tuple[Vector, Vector]:
    """``([m_i > m_j], [m_i < m_j])`` over outcomes, read from signal matrices.

    For ``i > j`` the stored action is ``(j, i)``, whose win/loss rows are
    swapped relative to the ordered duel.
    """
    s = signal_matrix(game, dueling_action(game, i, j))
    win = s.row(WIN) if WIN in s.symbols else (0,) * game.n_outcomes
    lose = s.row(LOSS) if LOSS in s.symbols else (0,) * game.n_outcomes
    if i > j:
        win, lose = lose, win
    return tuple(map(Fraction, win)), tuple(map(Fraction, lose))


def duel_certificate(game: Game, a: tuple[int, int], b: tuple[int, int]) -> dict[int, dict[str, Fraction]]:
    """Explicit ``g_a - g_b`` as a combination of duel signal rows.

    Uses ``g_(i,k) - g_(k,j) = (m_i - m_j) / 2 = 1/2 ([m_i > m_j] - [m_i < m_j])``
    and its two-step telescoping when the duels share no arm. Returns
    ``{action: {symbol: coefficient}}`` over stored (normalized) actions.
    """
    K = dueling_arms(game)
    (i, j), (ip, jp) = a, b
    # g_a - g_b = 1/2 (m_i + m_j - m_ip - m_jp): pair arms off so each term is a duel
    plus, minus = [i, j], [ip, jp]
    for x in list(plus):
        if x in minus:
            plus.remove(x)
            minus.remove(x)
    out: dict[int, dict[str, Fraction]] = {}
    half = Fraction(1, 2)
    for x, y in zip(plus, minus):
        if not (1 <= x <= K and 1 <= y <= K):
            raise GameError("arm out of range")
        act = dueling_action(game, x, y)
        w, l = (WIN, LOSS) if x < y else (LOSS, WIN)
        coeffs = out.setdefault(act, {})
        coeffs[w] = coeffs.get(w, Fraction(0)) + half
        coeffs[l] = coeffs.get(l, Fraction(0)) - half
    return out


def expand_duel_certificate(game: Game, cert: Mapping[int, Mapping[str, Fraction]]) -> Vector:
    total = [Fraction(0)] * game.n_outcomes
    for act, coeffs in cert.items():
        s = signal_matrix(game, act)
        for sym, c in coeffs.items():
            for m, v in enumerate(s.row(sym)):
                if v:
                    total[m] += c
    return tuple(total)


def proof_support_gaps(game: Game, neighbors: NeighborReport) -> list[tuple[int, int, tuple[int, ...]]]:
    """Neighbor pairs whose explicit duel certificate uses actions outside
    the neighborhood set, as ``(i, j, outside_actions)``."""
    K = dueling_arms(game)
    pairs = [(x, y) for x in range(1, K + 1) for y in range(x, K + 1)]
    gaps = []
    for p in neighbors.pairs:
        cert = duel_certificate(game, pairs[p.first], pairs[p.second])
        outside = tuple(sorted(a for a in cert if a not in p.neighborhood))
        if outside:
            gaps.append((p.first, p.second, outside))
    return gaps
