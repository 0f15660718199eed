"""Separator checking and the dual run/separator procedure.

A separator for ``(V, s, t)`` is a semilinear set containing ``s``, avoiding
``t`` and closed under every transition.  ``decide_dual`` alternates one
run-length tier with one separator-size tier until either side succeeds.
"""

from __future__ import annotations

import enum
import os
import time
from dataclasses import dataclass, field
from typing import Optional

from .core import Configuration, Run, Vass, norm, vadd
from .errors import BudgetExhausted, RunExists
from .explore import SearchBounds, _bfs, _successors, run_to
from .semilinear import (Invariance, LinearSet, SemilinearConfigSet, check_invariance, linear_sets_of_size,
                         member, member_config, points_in_box)


class Status(enum.Enum):
    VERIFIED = "Verified"
    REFUTED = "Refuted"
    UNKNOWN = "UnknownWithinBounds"


@dataclass(frozen=True)
class SeparatorCheck:
    kind: Status
    axiom: Optional[str] = None      # "source", "target" or "invariance" when refuted
    witness: object = None
    detail: str = ""


def is_separator(vass: Vass, s: Configuration, t: Configuration, sep: SemilinearConfigSet,
                 bound: int) -> SeparatorCheck:
    vass.check_config(s)
    vass.check_config(t)
    if not member_config(s, sep):
        return SeparatorCheck(Status.REFUTED, "source", s, "source is not in the set")
    if member_config(t, sep):
        return SeparatorCheck(Status.REFUTED, "target", t, "target is in the set")
    inv = check_invariance(vass, sep, bound)
    if inv.kind is Invariance.REFUTED:
        return SeparatorCheck(Status.REFUTED, "invariance", inv.witness, inv.detail)
    if inv.kind is Invariance.UNKNOWN:
        return SeparatorCheck(Status.UNKNOWN, None, None, inv.detail)
    return SeparatorCheck(Status.VERIFIED)


class Outcome(enum.Enum):
    RUN_FOUND = "RunFound"
    SEPARATOR_FOUND = "SeparatorFound"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class SeparatorVerdict:
    kind: Outcome
    run: Optional[Run] = None
    separator: Optional[SemilinearConfigSet] = None
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DualSchedule:
    """Budgets for ``decide_dual``.

    ``box`` is the norm bound of the region used to steer the separator
    search and to refute candidate invariants; it never limits the run search.
    """

    max_run_length: int = 20
    max_separator_size: int = 6
    box: int = 12
    time_budget_ms: Optional[int] = None

    def to_json(self) -> dict:
        return {"max_run_length": self.max_run_length, "max_separator_size": self.max_separator_size,
                "box": self.box, "time_budget_ms": self.time_budget_ms}


def _budget_from_env() -> Optional[int]:
    raw = os.environ.get("VSL_BUDGET_MS")
    if not raw:
        return None
    try:
        return max(0, int(raw))
    except ValueError:
        return None


class _Deadline:
    def __init__(self, ms: Optional[int]):
        self.ms = ms
        self.end = None

    def start(self):
        self.end = None if self.ms is None else time.monotonic() + self.ms / 1000

    def check(self):
        if self.end is not None and time.monotonic() > self.end:
            raise BudgetExhausted(f"tier exceeded {self.ms} ms")


class SeparatorSearch:
    """Exact search for small separators steered by a bounded region.

    Any separator contains ``s`` and, with every configuration it contains,
    all successors.  Inside the norm box this yields a growing set of
    configurations that must be covered; the search picks the first
    uncovered one and branches over every linear set that contains it, stays
    clear of the configurations in the box that reach ``t``, and fits the size
    budget.  Each covering collection is then checked with ``is_separator``.

    The search finds every separator of a given size whose components all
    meet the covered region.
    """

    def __init__(self, vass: Vass, s: Configuration, t: Configuration, box: int,
                 deadline: Optional[_Deadline] = None):
        vass.check_config(s)
        vass.check_config(t)
        self.vass, self.s, self.t, self.box = vass, s, t, box
        self.deadline = deadline or _Deadline(None)
        parents, _, found = _bfs(vass, s, SearchBounds(box), True, goal=t)
        if found:
            raise RunExists(run_to(parents, s, t))
        pre, _, _ = _bfs(vass, t, SearchBounds(box), False)
        self.bad = set(pre)
        self._candidates: dict = {}
        self._box_points: dict = {}
        self._ok: dict = {}
        self._succ_cache: dict = {}
        self.unknown: list[SemilinearConfigSet] = []

    # candidate components

    def _acceptable(self, q: str, ls: LinearSet) -> bool:
        key = (q, ls)
        if key not in self._ok:
            pts = self._points(q, ls)
            ok = not any(Configuration(q, v) in self.bad for v in pts)
            if ok and q == self.t.state and member(self.t.vec, ls):
                ok = False
            self._ok[key] = ok
        return self._ok[key]

    def _points(self, q: str, ls: LinearSet):
        key = (q, ls)
        if key not in self._box_points:
            self._box_points[key] = frozenset(points_in_box(ls, self.box))
        return self._box_points[key]

    def candidates(self, c: Configuration, limit: int) -> list[tuple[str, LinearSet]]:
        """Acceptable linear sets of size <= limit containing ``c``, smallest first."""
        out = []
        for size in range(limit + 1):
            key = (c, size)
            if key not in self._candidates:
                found = []
                for ls in linear_sets_of_size(self.vass.dim, size):
                    self.deadline.check()
                    if member(c.vec, ls) and self._acceptable(c.state, ls):
                        found.append((c.state, ls))
                self._candidates[key] = found
            out.extend(self._candidates[key])
        return out

    # search

    def _succ(self, c: Configuration) -> tuple:
        out = self._succ_cache.get(c)
        if out is None:
            out = tuple(nxt for _, nxt in _successors(self.vass, c, True) if max(nxt.vec) <= self.box)
            self._succ_cache[c] = out
        return out

    def _missing(self, covered: set):
        # smallest in-box successor of a covered configuration that is not
        # covered itself; branching there keeps the candidate lists short
        missing = {nxt for c in covered for nxt in self._succ(c) if nxt not in covered}
        return min(missing, key=lambda c: (norm(c.vec), c.state, c.vec), default=None)

    def collections(self, max_size: int) -> list[SemilinearConfigSet]:
        """Every covering collection of size <= max_size, canonical and de-duplicated."""
        results: dict = {}
        seen: set = set()

        def go(comps: tuple, size: int):
            key = frozenset(comps)
            if key in seen:
                return
            seen.add(key)
            self.deadline.check()
            if not any(q == self.s.state and member(self.s.vec, ls) for q, ls in comps):
                need = self.s
            else:
                covered = {Configuration(q, v) for q, ls in comps for v in self._points(q, ls)}
                need = self._missing(covered)
            if need is None:
                if _has_redundant_point(comps):
                    return
                sep = SemilinearConfigSet(comps).canonical()
                results[tuple(sep.components)] = sep
                return
            for cand in self.candidates(need, max_size - size):
                if cand not in comps:
                    go(tuple(sorted(comps + (cand,), key=_comp_key)), size + cand[1].size)

        go((), 0)
        return sorted(results.values(), key=lambda sep: (sep.size, [_comp_key(c) for c in sep.components]))

    def separators_of_size(self, size: int, collections=None):
        """Split the covering collections of exactly ``size`` into verified ones and the rest."""
        pool = collections if collections is not None else self.collections(size)
        verified, unknown = [], []
        for sep in pool:
            if sep.size != size:
                continue
            check = is_separator(self.vass, self.s, self.t, sep, self.box)
            if check.kind is Status.VERIFIED:
                verified.append(sep)
            elif check.kind is Status.UNKNOWN:
                unknown.append(sep)
        return verified, unknown


def _has_redundant_point(comps) -> bool:
    # a size-0 component whose point another component already contains
    return any(ls.size == 0 and any(q2 == q and ls2 != ls and member(ls.base, ls2) for q2, ls2 in comps)
               for q, ls in comps)


def _comp_key(comp):
    q, ls = comp
    return (q, ls.base, ls.periods)


def minimal_separators(vass: Vass, s: Configuration, t: Configuration, size_budget: int,
                       box: Optional[int] = None) -> list[SemilinearConfigSet]:
    """All verified separators of the least size that has any, up to ``size_budget``.

    Raises ``RunExists`` when ``t`` is reachable inside the box and
    ``BudgetExhausted`` when no separator fits the budget.
    """
    if box is None:
        box = max(size_budget, norm(s.vec), norm(t.vec)) + 2
    search = SeparatorSearch(vass, s, t, box)
    pool = search.collections(size_budget)
    for size in range(size_budget + 1):
        verified, unknown = search.separators_of_size(size, pool)
        search.unknown.extend(unknown)
        if verified:
            return verified
    raise BudgetExhausted(f"no verified separator of size <= {size_budget}")


def decide_dual(vass: Vass, s: Configuration, t: Configuration,
                schedule: DualSchedule = DualSchedule()) -> SeparatorVerdict:
    """Alternate run tiers (length i) and separator tiers (size i), i = 0, 1, 2, ...

    Deterministic: both sides are searched sequentially in a fixed order.
    A tier that overruns ``time_budget_ms`` (or ``VSL_BUDGET_MS``) ends the
    procedure with ``Undecided``.
    """
    vass.check_config(s)
    vass.check_config(t)
    ms = schedule.time_budget_ms if schedule.time_budget_ms is not None else _budget_from_env()
    deadline = _Deadline(ms)
    diagnostics: dict = {"schedule": schedule.to_json(), "run_tiers": 0, "separator_tiers": 0,
                         "unknown_candidates": []}

    parents = {s: None}
    frontier = [s]
    search: Optional[SeparatorSearch] = None
    pool: Optional[list] = None
    pool_limit = -1
    tier = 0
    try:
        while tier <= max(schedule.max_run_length, schedule.max_separator_size):
            if tier <= schedule.max_run_length:
                deadline.start()
                if tier == 0 and s == t:
                    return SeparatorVerdict(Outcome.RUN_FOUND, Run(s), None, diagnostics)
                if tier > 0:
                    nxt = []
                    for c in frontier:
                        deadline.check()
                        for tr, d in _successors(vass, c, True):
                            if d not in parents:
                                parents[d] = (c, tr)
                                if d == t:
                                    diagnostics["run_tiers"] = tier
                                    return SeparatorVerdict(Outcome.RUN_FOUND, run_to(parents, s, t),
                                                            None, diagnostics)
                                nxt.append(d)
                    frontier = nxt
                diagnostics["run_tiers"] = tier
            if tier <= schedule.max_separator_size:
                deadline.start()
                if search is None:
                    try:
                        search = SeparatorSearch(vass, s, t, schedule.box, deadline)
                    except RunExists:
                        # the run side will find it; keep alternating
                        search = False
                if search:
                    if pool is None or tier > pool_limit:
                        pool_limit = max(tier, min(schedule.max_separator_size, 2 * tier))
                        pool = search.collections(pool_limit)
                    verified, unknown = search.separators_of_size(tier, pool)
                    diagnostics["unknown_candidates"] += [sep.to_text() for sep in unknown]
                    diagnostics["separator_tiers"] = tier
                    if verified:
                        return SeparatorVerdict(Outcome.SEPARATOR_FOUND, None, verified[0], diagnostics)
            tier += 1
    except BudgetExhausted as exc:
        diagnostics["stopped"] = str(exc)
    return SeparatorVerdict(Outcome.UNDECIDED, None, None, diagnostics)
