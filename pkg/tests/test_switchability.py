import numpy as np
import pytest

from coevo.games import FIXTURE_MARKED, subtraction_nim
from coevo.switchability import (
    ForeignEdge,
    TooLarge,
    depth,
    exact_switchability,
    is_switcher,
    is_switcher_by_enumeration,
    switchability_profile,
    upper_bound_switchability,
)
from helpers import random_game

FIG2_SWITCHER = frozenset((b, 6) for b in range(1, 6))


def test_depth_empty(fig1):
    assert depth(fig1, frozenset()) == 0


def test_depth_fig2_layer(fig2):
    assert depth(fig2, FIG2_SWITCHER) == 1


def test_depth_shared_head(fig3_top):
    # Both edges end at the marked vertex, so no path can use them both.
    assert depth(fig3_top, frozenset({(3, 5), (4, 5)})) == 1


def test_depth_stacked(fig1):
    assert depth(fig1, frozenset({(0, 1), (1, 2), (2, 3)})) == 3


def test_foreign_edge(fig1):
    with pytest.raises(ForeignEdge):
        depth(fig1, {(1, 4)})
    with pytest.raises(ForeignEdge):
        is_switcher(fig1, {(4, 0)}, 0)


def test_is_switcher_fig2(fig2):
    assert is_switcher(fig2, FIG2_SWITCHER, 6)
    assert not is_switcher(fig2, FIG2_SWITCHER, 7)


def test_empty_set_switches_only_unavoidable(fig1):
    assert is_switcher(fig1, frozenset(), 0)  # the root is on every path
    assert is_switcher(fig1, frozenset(), 4)  # so is the only sink
    for v in (1, 2, 3):
        assert not is_switcher(fig1, frozenset(), v)


def test_fig3_bottom_blue_set(fig3_bottom):
    blue = frozenset({(0, 3), (5, 9), (6, 9)})
    assert depth(fig3_bottom, blue) == 2
    assert is_switcher(fig3_bottom, blue, 9)
    # Shift the target one column left and the same set fails.
    assert not is_switcher(fig3_bottom, blue, 6)


def test_exact_on_marked_vertices(fig3_top, fig3_bottom):
    top = exact_switchability(fig3_top, FIXTURE_MARKED["fig3_top"])
    assert top.exact == 1
    bottom = exact_switchability(fig3_bottom, FIXTURE_MARKED["fig3_bottom"], edge_limit=32)
    assert bottom.exact == 2
    for report, g in ((top, fig3_top), (bottom, fig3_bottom)):
        assert report.method == "exact_search"
        assert is_switcher(g, report.witness, report.vertex)
        assert depth(g, report.witness) == report.exact


def test_root_switchability_zero(fig1, fig2):
    assert exact_switchability(fig1, fig1.root).exact == 0
    assert exact_switchability(fig2, fig2.root).exact == 0


def test_fig1_profile(fig1):
    profile = switchability_profile(fig1, mode="exact")
    assert {v: r.exact for v, r in profile.reports.items()} == {
        0: 0,
        1: 1,
        2: 1,
        3: 2,
        4: 0,
    }
    assert profile.s_bar == 2
    assert profile.s_hat == 1  # critical positions are the root and b
    assert profile.mode_used == "exact_search"


def test_fig4_chain_growth(fig4):
    profile = switchability_profile(fig4, mode="exact")
    values = {v: r.exact for v, r in profile.reports.items()}
    for i in range(8):
        assert values[i] == i
    assert values[8] == 0  # on every path to the unique sink
    assert values[9] == 0


def test_fig2_marked(fig2):
    assert exact_switchability(fig2, FIXTURE_MARKED["fig2"]).exact == 1


def test_witnesses_valid_across_random_graphs():
    rng = np.random.default_rng(31)
    for _ in range(25):
        g = random_game(rng, n_max=7)
        if g.edge_count > 20:
            continue
        for v in range(g.n):
            report = exact_switchability(g, v)
            assert report.exact is not None
            assert report.exact <= report.upper_bound
            assert is_switcher(g, report.witness, v)
            assert depth(g, report.witness) == report.exact


def test_upper_bound():
    g = subtraction_nim(12, 3)
    assert upper_bound_switchability(g, g.root) == 0
    for v in range(12):
        assert upper_bound_switchability(g, v) == -(-(11 - v) // 3)


def test_upper_bound_chomp_row_by_row():
    from coevo.games import chomp

    g = chomp(3)
    assert all(upper_bound_switchability(g, v) <= 3 for v in range(g.n))


def test_root_path_edges_always_switch():
    # The edge set of any shortest root-to-v path forces a visit to v.
    rng = np.random.default_rng(43)
    for _ in range(30):
        g = random_game(rng)
        v = int(rng.integers(g.n))
        parents = {g.root: None}
        queue = [g.root]
        while queue:
            u = queue.pop(0)
            if u == v:
                break
            for w in g.succ[u]:
                if w not in parents:
                    parents[w] = u
                    queue.append(w)
        path_edges = set()
        node = v
        while parents[node] is not None:
            path_edges.add((parents[node], node))
            node = parents[node]
        assert is_switcher(g, frozenset(path_edges), v)
        assert depth(g, path_edges) == len(path_edges) == upper_bound_switchability(g, v)


def test_nim_construction_is_depth1_switcher():
    g = subtraction_nim(12, 3)
    for v in range(12):
        literal = frozenset((v + i, v) for i in range(1, 3) if v + i <= 11)
        assert depth(g, literal) <= 1
        assert is_switcher(g, literal, v)
        # The widened window (one more in-edge) also works at depth 1.
        widened = frozenset((v + i, v) for i in range(1, 4) if v + i <= 11)
        assert depth(g, widened) <= 1
        assert is_switcher(g, widened, v)


def test_nim_profile_all_at_most_one():
    g = subtraction_nim(8, 2)
    profile = switchability_profile(g, mode="exact")
    assert all(r.exact <= 1 for r in profile.reports.values())
    assert profile.s_bar <= 1


def test_forced_reachability_matches_enumeration():
    rng = np.random.default_rng(37)
    for _ in range(120):
        g = random_game(rng, n_min=3, n_max=9)
        edge_list = list(g.edges())
        for _ in range(3):
            take = rng.random(len(edge_list)) < 0.3
            edges = frozenset(e for e, keep in zip(edge_list, take) if keep)
            v = int(rng.integers(g.n))
            assert is_switcher(g, edges, v) == is_switcher_by_enumeration(g, edges, v)


def test_too_large(fig3_bottom):
    with pytest.raises(TooLarge):
        exact_switchability(fig3_bottom, 9)  # 21 edges over the default budget


def test_hybrid_profile_falls_back():
    g = subtraction_nim(40, 2)
    profile = switchability_profile(g, mode="hybrid")
    assert profile.mode_used == "path_bound"
    assert all(r.exact is None for r in profile.reports.values())
    assert profile.s_bar == upper_bound_switchability(g, 0)


def test_exact_le_bound_everywhere():
    rng = np.random.default_rng(41)
    for _ in range(20):
        g = random_game(rng, n_max=8)
        if g.edge_count > 20:
            continue
        for v in range(g.n):
            report = exact_switchability(g, v)
            assert report.exact <= upper_bound_switchability(g, v)
