import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from partmon.game import Game, build_dueling_game, build_mab_game, build_pricing_game, dueling_action
from partmon.geometry import (
    CellStatus,
    cell_constraints,
    cell_decomposition,
    in_cell,
    is_simplex_point,
    neighbor_pairs,
    polytope_dimension,
    to_dot,
)
from partmon.lp import dot

F = Fraction
PRICING = build_pricing_game([F(1, 3), F(2, 3), 1], [0, F(1, 2), 1])


def unit(n, k, sign=1):
    return tuple(F(sign if i == k else 0) for i in range(n))


# --- polytope_dimension -------------------------------------------------------

def test_dimension_of_square():
    ineqs = [(unit(2, 0), 0), (unit(2, 1), 0), (unit(2, 0, -1), -1), (unit(2, 1, -1), -1)]
    dim, w = polytope_dimension([], ineqs)
    assert dim == 2
    assert all(dot(a, w) > b for a, b in ineqs)


def test_dimension_of_segment_via_implicit_equality():
    # x >= 0, y >= 0, x + y <= 1, y <= 0  ->  segment on the x axis
    ineqs = [(unit(2, 0), 0), (unit(2, 1), 0), ((-1, -1), -1), (unit(2, 1, -1), 0)]
    dim, w = polytope_dimension([], ineqs)
    assert dim == 1
    assert w[1] == 0 and 0 < w[0] < 1


def test_dimension_of_point_and_empty():
    assert polytope_dimension([((1, 0), 2), ((0, 1), 3)], [])[0] == 0
    assert polytope_dimension([], [(unit(1, 0), 1), (unit(1, 0, -1), 0)]) == (-1, None)


def test_dimension_needs_nvars_without_rows():
    with pytest.raises(ValueError):
        polytope_dimension([], [])
    assert polytope_dimension([], [], nvars=3) == (3, (0, 0, 0))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 3)), min_size=1, max_size=4))
def test_box_dimension(spans):
    # box lo_k <= x_k <= lo_k + w_k; zero widths collapse a coordinate
    n = len(spans)
    ineqs = []
    for k, (lo, w) in enumerate(spans):
        ineqs.append((unit(n, k), F(lo)))
        ineqs.append((unit(n, k, -1), F(-(lo + w))))
    dim, wit = polytope_dimension([], ineqs)
    assert dim == sum(1 for _, w in spans if w > 0)
    for k, (lo, w) in enumerate(spans):
        assert lo <= wit[k] <= lo + w
        if w > 0:
            assert lo < wit[k] < lo + w


# --- independent grid oracle ------------------------------------------------

def simplex_grid(m, D):
    """All points of the simplex with coordinates in (1/D)Z."""
    def rec(k, left):
        if k == m - 1:
            yield (left,)
            return
        for v in range(left + 1):
            for rest in rec(k + 1, left - v):
                yield (v,) + rest
    for p in rec(0, D):
        yield tuple(F(v, D) for v in p)


def affine_dim(points):
    points = list(points)
    if not points:
        return -1
    base = points[0]
    return oracles.rank([[a - b for a, b in zip(p, base)] for p in points[1:]]) if len(points) > 1 else 0


@pytest.mark.parametrize(
    "game, D", [(build_mab_game(2), 12), (build_dueling_game(2), 12), (PRICING, 12)],
    ids=["mab2", "dueling2", "pricing"],
)
def test_cells_and_faces_match_grid_oracle(game, D):
    # every cell vertex here has denominator dividing D, so grid points
    # span the same affine hull as the cell
    grid = list(simplex_grid(game.n_outcomes, D))
    cells = cell_decomposition(game)
    for c in cells.cells:
        pts = [q for q in grid if in_cell(game, c.action, q)]
        assert c.dim == affine_dim(pts), game.actions[c.action]
    nb = neighbor_pairs(game, cells)
    sp = cells.strongly_pareto()
    for i, j in combinations(sp, 2):
        if game.gain[i] == game.gain[j]:
            continue
        face = [q for q in grid if in_cell(game, i, q) and in_cell(game, j, q)]
        assert nb.are_neighbors(i, j) == (affine_dim(face) == game.n_outcomes - 2)
        if nb.are_neighbors(i, j):
            hood = {k for k in range(game.n_actions) if all(in_cell(game, k, q) for q in face)}
            assert set(nb.neighborhood(i, j)) == hood


def test_mab2_face_has_three_affinely_independent_points():
    g = build_mab_game(2)
    face = [q for q in simplex_grid(4, 2) if in_cell(g, 0, q) and in_cell(g, 1, q)]
    # q(10) = q(01) on the simplex: e.g. delta(00), delta(11), (01+10)/2
    assert affine_dim(face) == 2
    nb = neighbor_pairs(g, cell_decomposition(g))
    assert nb.are_neighbors(0, 1) and nb.neighborhood(0, 1) == (0, 1)


# --- dueling structure ----------------------------------------------------------

@pytest.mark.parametrize("K", [2, 3, 4])
def test_dueling_cell_structure(K):
    g = build_dueling_game(K)
    m = g.n_outcomes
    cells = cell_decomposition(g)
    selfs = {dueling_action(g, i, i) for i in range(1, K + 1)}
    for c in cells.cells:
        if c.action in selfs:
            assert c.status is CellStatus.STRONGLY_PARETO and c.dim == m - 1
        else:
            assert c.status is CellStatus.DEGENERATE and c.dim == m - 2
    nb = neighbor_pairs(g, cells)
    expected = {(dueling_action(g, i, i), dueling_action(g, j, j))
                for i in range(1, K + 1) for j in range(i + 1, K + 1)}
    assert {(p.first, p.second) for p in nb.pairs} == expected
    for i in range(1, K + 1):
        for j in range(i + 1, K + 1):
            hood = nb.neighborhood(dueling_action(g, i, i), dueling_action(g, j, j))
            assert set(hood) == {dueling_action(g, i, i), dueling_action(g, i, j), dueling_action(g, j, j)}


def test_witnesses_are_valid():
    for g in (build_dueling_game(3), build_mab_game(3), PRICING):
        cells = cell_decomposition(g)
        for c in cells.cells:
            if c.witness is None:
                assert c.status is CellStatus.NON_PARETO
                continue
            assert is_simplex_point(c.witness) and in_cell(g, c.action, c.witness)
            if c.status is CellStatus.STRONGLY_PARETO:
                lp = cell_constraints(g, c.action)
                # full-dimensional cell: the witness is strict on every nonzero row
                for a, b in lp.inequalities:
                    if any(a):
                        assert dot(a, c.witness) > b
        nb = neighbor_pairs(g, cells)
        for p in nb.pairs:
            w = p.witness
            assert is_simplex_point(w)
            assert in_cell(g, p.first, w) and in_cell(g, p.second, w)
            assert dot(g.gain[p.first], w) == dot(g.gain[p.second], w)


def test_neighbor_relation_symmetric():
    g = build_dueling_game(3)
    nb = neighbor_pairs(g, cell_decomposition(g))
    for i in range(g.n_actions):
        for j in range(g.n_actions):
            assert nb.are_neighbors(i, j) == nb.are_neighbors(j, i)
    with pytest.raises(KeyError):
        nb.get(1, 2)


def test_cover_property_seeded():
    rng = random.Random(20240601)
    for g in (build_dueling_game(3), build_mab_game(2), PRICING):
        for _ in range(200):
            raw = [rng.randint(0, 20) for _ in range(g.n_outcomes)]
            raw[rng.randrange(g.n_outcomes)] += 1
            q = tuple(F(v, sum(raw)) for v in raw)
            best = max(range(g.n_actions), key=lambda i: (dot(g.gain[i], q), -i))
            assert in_cell(g, best, q)


def test_duplicates_and_non_pareto():
    g = Game("dup", ["a", "b", "c", "d"], ["x", "y"], ["s", "t"],
             [[1, 0], [1, 0], [0, 1], [0, 0]], [[0, 1], [0, 1], [0, 0], [1, 1]])
    cells = cell_decomposition(g)
    assert [c.status for c in cells.cells] == [CellStatus.STRONGLY_PARETO] * 3 + [CellStatus.NON_PARETO]
    nb = neighbor_pairs(g, cells)
    assert nb.duplicate_groups == ((0, 1),)
    assert [(p.first, p.second) for p in nb.pairs] == [(0, 2)]
    assert nb.neighborhood(0, 2) == (0, 1, 2)


def test_pricing_structure():
    cells = cell_decomposition(PRICING)
    assert [c.status for c in cells.cells] == [
        CellStatus.STRONGLY_PARETO, CellStatus.DEGENERATE, CellStatus.STRONGLY_PARETO
    ]
    assert cells.cells[1].witness == (1, 0, 0)


def test_dot_output():
    g = build_dueling_game(3)
    cells = cell_decomposition(g)
    text = to_dot(g, cells, neighbor_pairs(g, cells))
    assert text.startswith('graph "dueling-K3" {')
    assert text.count("[label=") == 6 + 3
    assert text.count("style=solid") == 3 and text.count("style=dashed") == 3
    assert text.count(" -- ") == 3
