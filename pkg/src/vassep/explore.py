"""Bounded-exact reachability: post*/pre* under a norm box, shortest runs, run streams.

Every configuration on an explored run, endpoints included, must have norm at
most ``SearchBounds.norm_bound``.  A search reports ``pruned=True`` whenever
some successor was cut by a bound, so an unpruned answer is exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional

from .core import AnchoredTransition, Configuration, Run, Vass, norm, vadd, vsub


@dataclass(frozen=True)
class SearchBounds:
    norm_bound: int
    length_bound: Optional[int] = None
    node_budget: Optional[int] = None

    def __post_init__(self):
        for name in ("norm_bound", "length_bound", "node_budget"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} must be nonnegative")

    def to_json(self) -> dict:
        return {"norm": self.norm_bound, "length": self.length_bound, "nodes": self.node_budget}


class Reach(enum.Enum):
    REACHABLE = "Reachable"
    EXHAUSTED = "Exhausted"
    UNKNOWN = "NotReachableWithinBounds"


@dataclass(frozen=True)
class ReachVerdict:
    kind: Reach
    run: Optional[Run] = None
    explored: int = 0

    @property
    def reachable(self) -> bool:
        return self.kind is Reach.REACHABLE


def _successors(vass: Vass, c: Configuration, forward: bool):
    if forward:
        for t, effect, dst in vass.outgoing(c.state):
            vec = vadd(c.vec, effect)
            if min(vec) >= 0:
                yield t, Configuration(dst, vec)
    else:
        for t, effect, src in vass.incoming(c.state):
            vec = vsub(c.vec, effect)
            if min(vec) >= 0:
                yield t, Configuration(src, vec)


def _bfs(vass: Vass, start: Configuration, bounds: SearchBounds, forward: bool = True,
         goal: Optional[Configuration] = None):
    """Level-order search.  Returns (parents, pruned, found).

    ``parents`` maps each visited configuration to ``(previous, transition)``;
    the start maps to None.  Processing levels in discovery order and
    transitions in index order makes every recorded path the
    lexicographically least among the shortest ones.
    """
    limit = bounds.norm_bound
    if norm(start.vec) > limit:
        return {}, True, False
    parents: dict = {start: None}
    if goal is not None and start == goal:
        return parents, False, True
    frontier = [start]
    depth = 0
    expanded = 0
    pruned = False
    while frontier:
        if bounds.length_bound is not None and depth >= bounds.length_bound:
            for c in frontier:
                if any(nxt not in parents for _, nxt in _successors(vass, c, forward)):
                    return parents, True, False
            return parents, pruned, False
        nxt_frontier = []
        for pos, c in enumerate(frontier):
            if bounds.node_budget is not None and expanded >= bounds.node_budget:
                return parents, True, False
            expanded += 1
            for t, nxt in _successors(vass, c, forward):
                if nxt in parents:
                    continue
                if max(nxt.vec) > limit:
                    pruned = True
                    continue
                parents[nxt] = (c, t)
                if goal is not None and nxt == goal:
                    return parents, pruned, True
                nxt_frontier.append(nxt)
        frontier = nxt_frontier
        depth += 1
    return parents, pruned, False


def post_bounded(vass: Vass, c: Configuration, bounds: SearchBounds) -> tuple[frozenset, bool]:
    """Configurations reachable from ``c`` inside the bounds, plus the pruned flag."""
    vass.check_config(c)
    parents, pruned, _ = _bfs(vass, c, bounds, forward=True)
    return frozenset(parents), pruned


def pre_bounded(vass: Vass, c: Configuration, bounds: SearchBounds) -> tuple[frozenset, bool]:
    """Configurations that reach ``c`` inside the bounds, plus the pruned flag."""
    vass.check_config(c)
    parents, pruned, _ = _bfs(vass, c, bounds, forward=False)
    return frozenset(parents), pruned


def _path(parents: dict, end: Configuration) -> list:
    steps = []
    c = end
    while parents[c] is not None:
        prev, t = parents[c]
        steps.append(AnchoredTransition(prev, t, c))
        c = prev
    steps.reverse()
    return steps


def run_to(parents: dict, source: Configuration, end: Configuration) -> Run:
    """Witness run to ``end`` recorded in a forward search tree rooted at ``source``."""
    return Run(source, tuple(_path(parents, end)))


def shortest_run(vass: Vass, s: Configuration, t: Configuration, bounds: SearchBounds) -> ReachVerdict:
    vass.check_config(s)
    vass.check_config(t)
    parents, pruned, found = _bfs(vass, s, bounds, forward=True, goal=t)
    if found:
        return ReachVerdict(Reach.REACHABLE, run_to(parents, s, t), len(parents))
    if pruned:
        return ReachVerdict(Reach.UNKNOWN, None, len(parents))
    return ReachVerdict(Reach.EXHAUSTED, None, len(parents))


def enumerate_runs(vass: Vass, s: Configuration, bounds: SearchBounds) -> Iterator[Run]:
    """Yield every nonempty run from ``s`` within the bounds.

    Runs come out by increasing length and, within one length, in
    lexicographic order of their transition-index sequences.  Without a
    length bound the stream may be infinite.
    """
    vass.check_config(s)
    limit = bounds.norm_bound
    if norm(s.vec) > limit:
        return
    level = [((), s)]
    length = 0
    while level and (bounds.length_bound is None or length < bounds.length_bound):
        nxt_level = []
        for steps, c in level:
            for t, nxt in _successors(vass, c, True):
                if max(nxt.vec) > limit:
                    continue
                ext = steps + (AnchoredTransition(c, t, nxt),)
                yield Run(s, ext)
                nxt_level.append((ext, nxt))
        level = nxt_level
        length += 1
