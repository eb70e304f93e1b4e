"""Edge-set depth, forced visits, and per-vertex switchability.

An edge set ``A`` constrains play: whenever the current vertex has an
outgoing ``A``-edge, a compatible continuation must follow one of them;
otherwise any move is allowed. ``A`` is a v-switcher when every maximal
compatible path from the root contains ``v``. The switchability of ``v``
is the smallest possible depth (maximum number of ``A``-edges met along a
single directed path) of such a set, and it lower-bounds how often
border-restricted self-play visits ``v``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from . import grundy as _grundy
from .graphs import GameGraph, Unreachable


class ForeignEdge(ValueError):
    pass


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class SwitchabilityReport:
    vertex: int
    exact: int | None
    upper_bound: int
    witness: frozenset[tuple[int, int]] | None
    method: str  # "exact_search" or "path_bound"

    @property
    def value(self) -> int:
        return self.exact if self.exact is not None else self.upper_bound


@dataclass(frozen=True)
class SwitchabilityProfile:
    reports: dict[int, SwitchabilityReport]
    s_bar: int  # max over all vertices
    s_hat: int  # max over critical positions (0 when there are none)
    mode_used: str


def _check_edges(g: GameGraph, edges: Iterable[tuple[int, int]]) -> frozenset:
    edges = frozenset(edges)
    for u, w in edges:
        if not (0 <= u < g.n) or w not in g.succ[u]:
            raise ForeignEdge(f"({u}, {w}) is not an edge of the graph")
    return edges


def depth(g: GameGraph, edges: Iterable[tuple[int, int]]) -> int:
    """Maximum number of ``edges`` members met along one directed path."""
    edges = _check_edges(g, edges)
    best = [0] * g.n
    for u in g.reverse_topo:
        m = 0
        for w in g.succ[u]:
            c = best[w] + ((u, w) in edges)
            if c > m:
                m = c
        best[u] = m
    return max(best, default=0)


def is_switcher(g: GameGraph, edges: Iterable[tuple[int, int]], v: int) -> bool:
    """Forced-graph reachability test, linear in the graph size.

    Constrained vertices keep only their ``A``-successors; a set fails to
    be a v-switcher exactly when some sink other than ``v`` stays
    reachable from the root without expanding ``v``.
    """
    edges = _check_edges(g, edges)
    forced: dict[int, list[int]] = {}
    for u, w in edges:
        forced.setdefault(u, []).append(w)

    seen = [False] * g.n
    seen[g.root] = True
    stack = [g.root]
    while stack:
        u = stack.pop()
        if u == v:
            continue
        allowed = forced.get(u) or g.succ[u]
        if not allowed:
            return False  # maximal compatible path ends here, missing v
        for w in allowed:
            if not seen[w]:
                seen[w] = True
                stack.append(w)
    return True


def compatible_sink_paths(
    g: GameGraph, edges: Iterable[tuple[int, int]]
) -> Iterator[tuple[int, ...]]:
    """Every maximal compatible path, by direct recursion on the
    inductive definition. Exponential; only for validating the
    reachability formulation on tiny graphs."""
    edges = _check_edges(g, edges)
    forced: dict[int, list[int]] = {}
    for u, w in edges:
        forced.setdefault(u, []).append(w)

    def rec(path: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        u = path[-1]
        nexts = forced.get(u) or g.succ[u]
        if not nexts:
            yield path
            return
        for w in nexts:
            yield from rec(path + (w,))

    yield from rec((g.root,))


def is_switcher_by_enumeration(
    g: GameGraph, edges: Iterable[tuple[int, int]], v: int
) -> bool:
    return all(v in path for path in compatible_sink_paths(g, edges))


def upper_bound_switchability(g: GameGraph, v: int) -> int:
    """Shortest root-to-v path length; its edge set is always a v-switcher."""
    if v == g.root:
        return 0
    dist = {g.root: 0}
    queue = deque([g.root])
    while queue:
        u = queue.popleft()
        for w in g.succ[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                if w == v:
                    return dist[w]
                queue.append(w)
    raise Unreachable(v)


# ---------------------------------------------------------------------------
# Exact search.
#
# Any switcher contains a sub-switcher with at most one outgoing edge per
# vertex (keep one chosen edge per constrained vertex: the forced paths
# only shrink, and depth cannot grow on a subset). The minimum over these
# "functional" assignments therefore equals the minimum over all edge
# sets, and assignments with the same forced graph collapse to one
# candidate. Vertices with a single successor are never assigned: doing
# so leaves compatible paths unchanged and can only add depth.

_CANDIDATE_LIMIT = 500_000


@lru_cache(maxsize=8)
def _candidates_by_depth(
    g: GameGraph,
) -> tuple[tuple[int, tuple[tuple[int, int], ...]], ...]:
    branching = [v for v in g.interior if len(g.succ[v]) > 1]
    count = 1
    for v in branching:
        count *= len(g.succ[v]) + 1
        if count > _CANDIDATE_LIMIT:
            raise TooLarge(
                f"{count}+ candidate edge sets; lower the edge budget or use bounds"
            )
    option_lists = [[None, *g.succ[v]] for v in branching]
    out = []
    for picks in itertools.product(*option_lists):
        chosen = {v: w for v, w in zip(branching, picks) if w is not None}
        # Depth of the assignment, counting chosen edges along any path.
        best = [0] * g.n
        for u in g.reverse_topo:
            m = 0
            pick = chosen.get(u)
            for w in g.succ[u]:
                c = best[w] + (1 if w == pick else 0)
                if c > m:
                    m = c
            best[u] = m
        d = max(best, default=0)
        out.append((d, tuple(sorted(chosen.items()))))
    out.sort(key=lambda item: item[0])
    return tuple(out)


def exact_switchability(
    g: GameGraph, v: int, edge_limit: int = 20
) -> SwitchabilityReport:
    """Smallest witness depth by iterative deepening over candidate sets.

    Candidates are scanned in depth order (enumeration order breaks
    ties, so the witness is deterministic). The shortest root path
    guarantees a hit for every reachable vertex; the path-bound fallback
    only covers defensive completeness.
    """
    if g.edge_count > edge_limit:
        raise TooLarge(f"{g.edge_count} edges exceeds the search budget {edge_limit}")
    ub = upper_bound_switchability(g, v)
    for d, assignment in _candidates_by_depth(g):
        if d > ub:
            break
        edges = frozenset(assignment)
        if is_switcher(g, edges, v):
            return SwitchabilityReport(
                vertex=v, exact=d, upper_bound=ub, witness=edges, method="exact_search"
            )
    return SwitchabilityReport(
        vertex=v, exact=None, upper_bound=ub, witness=None, method="path_bound"
    )


def switchability_profile(
    g: GameGraph,
    mode: str = "hybrid",
    edge_limit: int = 20,
    gd: _grundy.GrundyData | None = None,
) -> SwitchabilityProfile:
    """Per-vertex reports plus the two aggregates used by runtime budgets."""
    if mode not in ("exact", "bound", "hybrid"):
        raise ValueError(f"unknown mode {mode!r}")
    use_exact = mode == "exact" or (mode == "hybrid" and g.edge_count <= edge_limit)
    reports = {}
    for v in range(g.n):
        if use_exact:
            reports[v] = exact_switchability(g, v, edge_limit=edge_limit)
        else:
            reports[v] = SwitchabilityReport(
                vertex=v,
                exact=None,
                upper_bound=upper_bound_switchability(g, v),
                witness=None,
                method="path_bound",
            )
    if gd is None:
        gd = _grundy.grundy_values(g)
    s_bar = max(r.value for r in reports.values())
    s_hat = max((reports[v].value for v in gd.critical), default=0)
    return SwitchabilityProfile(
        reports=reports,
        s_bar=s_bar,
        s_hat=s_hat,
        mode_used="exact_search" if use_exact else "path_bound",
    )
