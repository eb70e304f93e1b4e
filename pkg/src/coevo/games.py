"""Benchmark game constructors, figure fixtures, and the heap-strategy codec.

Every generator materialises the full explicit graph with documented
position-to-integer encodings, so vertex ids are stable across runs and
platforms. Generation refuses graphs above ``MAX_VERTICES`` vertices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .graphs import GameGraph, Strategy, build_graph, load_game

MAX_VERTICES = 2**22


class BadParams(ValueError):
    pass


class UnknownFixture(ValueError):
    pass


class BadLength(ValueError):
    pass


class BadChar(ValueError):
    pass


class IllegalMove(ValueError):
    pass


@dataclass(frozen=True)
class GameSpec:
    """Family name plus its integer parameters; buildable on demand."""

    family: str
    params: dict

    def build(self) -> GameGraph:
        if self.family == "subtraction_nim":
            return subtraction_nim(self.params["n"], self.params["k"])
        if self.family == "silver_dollar":
            return silver_dollar(self.params["m"], self.params["k"])
        if self.family == "turning_turtles":
            return turning_turtles(self.params["m"])
        if self.family == "chomp":
            return chomp(self.params["m"])
        if self.family == "fixture":
            return fixture(self.params["name"])
        if self.family == "custom":
            return load_game(self.params["path"])
        raise BadParams(f"unknown family {self.family!r}")

    def params_string(self) -> str:
        return ";".join(f"{k}={self.params[k]}" for k in sorted(self.params))


def _guard_size(n: int) -> None:
    if n > MAX_VERTICES:
        raise BadParams(f"{n} positions exceeds the desk-scale limit of {MAX_VERTICES}")


def subtraction_nim(n: int, k: int) -> GameGraph:
    """One heap of ``n-1`` items; each turn removes between 1 and ``k``.

    Vertex ``v`` is the heap size, the root is ``n-1`` and 0 is the sink.
    Successors are listed as ``v-1, v-2, ..., v-k`` (smallest subtraction
    first); this order is the canonical one for models and codecs.
    """
    if n < 1 or k < 1:
        raise BadParams("subtraction_nim needs n >= 1 and k >= 1")
    _guard_size(n)
    adjacency = {v: [v - j for j in range(1, k + 1) if v - j >= 0] for v in range(n)}
    labels = {v: str(v) for v in range(n)}
    return build_graph(adjacency, root=n - 1, labels=labels)


def silver_dollar(m: int, k: int, start: tuple[int, ...] | None = None) -> GameGraph:
    """``k`` coins on a strip of ``m`` squares, each moving only leftwards.

    A position is the strictly increasing tuple of occupied squares
    (1-based). A move slides one coin to any square strictly between its
    left neighbour (or square 0) and itself; the game ends with the coins
    packed on squares ``1..k``. By default the coins start on the
    rightmost ``k`` squares, making every one of the ``C(m, k)`` positions
    reachable; a custom ``start`` keeps only the positions pointwise <= it.

    Ids are assigned by lexicographic order of the reachable position
    tuples, so the sink ``(1, .., k)`` is always id 0. Moves are listed by
    coin from left to right, target squares ascending.
    """
    if k < 1 or m < k:
        raise BadParams("silver_dollar needs m >= k >= 1")
    if start is None:
        start = tuple(range(m - k + 1, m + 1))
    else:
        start = tuple(start)
        if len(start) != k or list(start) != sorted(set(start)):
            raise BadParams("start must be a strictly increasing k-tuple")
        if start[0] < 1 or start[-1] > m:
            raise BadParams("start squares must lie in 1..m")
    _guard_size(comb(m, k))

    positions = [
        combo
        for combo in itertools.combinations(range(1, m + 1), k)
        if all(c <= s for c, s in zip(combo, start))
    ]
    index = {combo: i for i, combo in enumerate(positions)}
    adjacency: dict[int, list[int]] = {}
    labels = {}
    for combo, i in index.items():
        moves = []
        for coin in range(k):
            lower = combo[coin - 1] if coin > 0 else 0
            for target in range(lower + 1, combo[coin]):
                nxt = combo[:coin] + (target,) + combo[coin + 1 :]
                moves.append(index[nxt])
        adjacency[i] = moves
        labels[i] = ",".join(map(str, combo))
    return build_graph(adjacency, root=index[start], labels=labels)


def turning_turtles(m: int) -> GameGraph:
    """Row of ``m`` coins, all heads initially.

    A move turns one heads coin ``i`` to tails and optionally flips any
    coin left of it (in either direction). A position is the set of heads
    coins, encoded directly as an ``m``-bit mask, so vertex ids are the
    masks themselves: the root is ``2^m - 1`` and the sink is 0. Moves are
    listed by chosen coin ascending, the no-extra-flip move first, then
    flips of coins ``1..i-1``. The mask's binary value drops with every
    move, which is the acyclicity witness.
    """
    if m < 1:
        raise BadParams("turning_turtles needs m >= 1")
    _guard_size(2**m)
    adjacency: dict[int, list[int]] = {}
    labels = {}
    for mask in range(2**m):
        moves = []
        for i in range(1, m + 1):
            bit = 1 << (i - 1)
            if not mask & bit:
                continue
            base = mask & ~bit
            moves.append(base)
            for j in range(1, i):
                moves.append(base ^ (1 << (j - 1)))
        adjacency[mask] = moves
        heads = [str(i) for i in range(1, m + 1) if mask & (1 << (i - 1))]
        labels[mask] = "{" + ",".join(heads) + "}"
    return build_graph(adjacency, root=2**m - 1, labels=labels)


def chomp(m: int) -> GameGraph:
    """Square Chomp on an ``m x m`` board with a poison lower-left square.

    Positions are staircase boards: non-increasing row-length tuples
    ``(r1 >= r2 >= ... >= rm)`` counted from the bottom row, excluding the
    empty board. A move at a present cell ``(i, j)`` truncates every row
    ``i`` and above to at most ``j-1``; the move at ``(1, 1)``, which
    would empty the board, is fatal and therefore removed, leaving the
    poison-only board ``(1, 0, .., 0)`` as the sink. Ids follow the
    lexicographic order of the row tuples (the sink is id 0, the full
    board is id n-1); moves are listed by row then column ascending.
    """
    if m < 1:
        raise BadParams("chomp needs m >= 1")
    _guard_size(comb(2 * m, m) - 1)

    def staircases(rows: int, cap: int):
        if rows == 0:
            yield ()
            return
        for first in range(cap + 1):
            for rest in staircases(rows - 1, first):
                yield (first,) + rest

    positions = sorted(t for t in staircases(m, m) if any(t))
    index = {t: i for i, t in enumerate(positions)}
    adjacency: dict[int, list[int]] = {}
    labels = {}
    for rows, i in index.items():
        moves = []
        for row in range(1, m + 1):
            for col in range(1, rows[row - 1] + 1):
                if row == 1 and col == 1:
                    continue
                nxt = tuple(
                    rows[r] if r < row - 1 else min(rows[r], col - 1) for r in range(m)
                )
                moves.append(index[nxt])
        adjacency[i] = moves
        labels[i] = ",".join(map(str, rows))
    return build_graph(adjacency, root=index[tuple([m] * m)], labels=labels)


# ---------------------------------------------------------------------------
# Paper-figure style fixtures with pinned vertex numbering.

#: Vertex singled out in each fixture's diagram, where one exists.
FIXTURE_MARKED = {"fig2": 6, "fig3_top": 5, "fig3_bottom": 9, "fig4": 8}

FIXTURE_NAMES = ("fig1", "fig2", "fig3_top", "fig3_bottom", "fig4", "chain3")


def fixture(name: str) -> GameGraph:
    """Small hand-built graphs used as ground-truth test beds.

    fig1: five positions v0,a,b,c,d (ids 0..4) with Grundy values
        1,0,2,1,0 and two critical positions.
    fig2: root fanning out to a layer of five, each with a choice
        between vertex u (id 6) and vertex w (id 7).
    fig3_top: chain 0..7 with skip edges, isomorphic to the heap game
        with n=8, k=2; marked vertex 5.
    fig3_bottom: root plus a 3-row, 4-column grid (column-major ids,
        bottom row first); marked vertex 9 sits in the top row, column 3.
    fig4: chain 0..7 where every chain vertex can drop to vertex 8,
        which leads to the single sink 9. Late chain vertices need
        deeper switchers even though the game is easy.
    chain3: a forced line of four vertices; the lone strategy wins.
    """
    if name == "fig1":
        names = {0: "v0", 1: "a", 2: "b", 3: "c", 4: "d"}
        return build_graph(
            {0: [1, 2, 4], 1: [2], 2: [3, 4], 3: [4], 4: []}, root=0, labels=names
        )
    if name == "fig2":
        adjacency: dict[int, list[int]] = {0: [1, 2, 3, 4, 5]}
        for b in range(1, 6):
            adjacency[b] = [6, 7]
        adjacency[6] = []
        adjacency[7] = []
        labels = {0: "v0", 6: "u", 7: "w"}
        labels.update({b: f"b{b}" for b in range(1, 6)})
        return build_graph(adjacency, root=0, labels=labels)
    if name == "fig3_top":
        adjacency = {v: [w for w in (v + 1, v + 2) if w <= 7] for v in range(8)}
        labels = {0: "v0", 5: "v"}
        return build_graph(adjacency, root=0, labels=labels)
    if name == "fig3_bottom":
        def vid(col: int, row: int) -> int:
            return 1 + 3 * (col - 1) + row

        adjacency = {0: [vid(1, 0), vid(1, 1), vid(1, 2)]}
        for col in range(1, 4):
            adjacency[vid(col, 0)] = [vid(col + 1, 0), vid(col + 1, 1)]
            adjacency[vid(col, 1)] = [vid(col + 1, 0), vid(col + 1, 2)]
            adjacency[vid(col, 2)] = [vid(col + 1, 1), vid(col + 1, 2)]
        for row in range(3):
            adjacency[vid(4, row)] = []
        labels = {0: "v0", vid(3, 2): "v"}
        return build_graph(adjacency, root=0, labels=labels)
    if name == "fig4":
        adjacency = {v: [v + 1, 8] for v in range(7)}
        adjacency[7] = [8]
        adjacency[8] = [9]
        adjacency[9] = []
        labels = {0: "v0", 8: "u", 9: "w"}
        return build_graph(adjacency, root=0, labels=labels)
    if name == "chain3":
        return build_graph({0: [1], 1: [2], 2: [3], 3: []}, root=0)
    raise UnknownFixture(f"unknown fixture {name!r}")


# ---------------------------------------------------------------------------
# Strategy codec for the heap game.

def nim_decode(payload: str, n: int, k: int) -> Strategy:
    """String of length ``n-1`` to a strategy; entry ``i`` (1-based,
    leftmost first) is the amount subtracted at heap size ``i``."""
    if len(payload) != n - 1:
        raise BadLength(f"need {n - 1} characters, got {len(payload)}")
    choice = {}
    for i in range(1, n):
        ch = payload[i - 1]
        if not ch.isdigit() or not 1 <= int(ch) <= k:
            raise BadChar(f"character {ch!r} at position {i} outside 1..{k}")
        amount = int(ch)
        if amount > i:
            raise IllegalMove(f"cannot subtract {amount} from heap {i}")
        choice[i] = i - amount
    return Strategy(choice)


def nim_encode(x: Strategy, n: int, k: int) -> str:
    """Inverse of :func:`nim_decode`."""
    chars = []
    for i in range(1, n):
        if i not in x.choice:
            raise BadLength(f"strategy has no choice at heap {i}")
        amount = i - x.choice[i]
        if not 1 <= amount <= k:
            raise IllegalMove(f"choice at heap {i} subtracts {amount}")
        chars.append(str(amount))
    return "".join(chars)


def nim_strategy_codec(direction: str, n: int, k: int, payload):
    """Dispatch wrapper: ``direction`` is ``"encode"`` or ``"decode"``."""
    if direction == "decode":
        return nim_decode(payload, n, k)
    if direction == "encode":
        return nim_encode(payload, n, k)
    raise ValueError(f"direction must be 'encode' or 'decode', got {direction!r}")
