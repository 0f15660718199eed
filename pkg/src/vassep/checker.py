"""Bounded checks of the hypotheses and conclusions of the two separator theorems.

Conditions quantifying over infinitely many runs or vectors are only tested
on samples and are labelled accordingly; nothing here claims more than the
explored region shows.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import Configuration, Run, Vass, Vector, unit, vadd, vscale, vsub
from .errors import DimensionMismatch, OverlappingSupports, PrerequisiteViolated
from .explore import Reach, SearchBounds, _bfs, post_bounded, pre_bounded, run_to, shortest_run
from .numtheory import LinearFunction
from .semilinear import SemilinearConfigSet, proportional_periods, ratio_satisfying_periods
from .separator import Status, is_separator


class Label(enum.Enum):
    VERIFIED = "Verified"
    VERIFIED_ON_SAMPLES = "VerifiedOnSamples"
    REFUTED = "Refuted"
    UNKNOWN = "UnknownWithinBounds"
    EVIDENCE_ONLY = "EvidenceOnly"


@dataclass(frozen=True)
class ConditionResult:
    label: Label
    witness: object = None
    detail: str = ""
    pruned: Optional[bool] = None
    samples: tuple = ()
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"label": self.label.value, "detail": self.detail}
        if self.pruned is not None:
            out["pruned"] = self.pruned
        if self.samples:
            out["samples"] = [list(x) if isinstance(x, tuple) else x for x in self.samples]
        if self.evidence:
            out["evidence"] = self.evidence
        if self.witness is not None:
            out["witness"] = _witness_json(self.witness)
        return out


def _witness_json(w):
    if isinstance(w, Run):
        return {"source": str(w.source), "transitions": list(w.transitions), "target": str(w.target)}
    if isinstance(w, Configuration):
        return str(w)
    return str(w)


@dataclass(frozen=True)
class CheckReport:
    conditions: dict
    bounds: dict

    def to_json(self) -> dict:
        return {"conditions": {k: v.to_json() for k, v in self.conditions.items()}, "bounds": self.bounds}

    def __getitem__(self, key) -> ConditionResult:
        return self.conditions[key]


@dataclass(frozen=True)
class LineSpec:
    """The line ``a + N delta``; ``pair`` names the two coordinates delta may use."""

    a: Vector
    delta: Vector
    pair: tuple[int, int] = (0, 1)

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        object.__setattr__(self, "delta", tuple(self.delta))
        if len(self.a) != len(self.delta):
            raise DimensionMismatch("a and delta differ in dimension")
        if not any(self.delta):
            raise PrerequisiteViolated("delta must be nonzero")

    def point(self, n: int) -> Vector:
        return vadd(self.a, vscale(n, self.delta))


def _ge_ratio(x: int, ratio: Fraction, y: int) -> bool:
    # x >= ratio * y without leaving the integers
    return x * ratio.denominator >= ratio.numerator * y


def check_thm_simple(vass: Vass, s: Configuration, t: Configuration, q: str, line: LineSpec,
                     bounds: SearchBounds, samples_n: Sequence[int] = (0, 1, 2, 3),
                     samples_m: Sequence[int] = (1, 2),
                     certificate: Optional[SemilinearConfigSet] = None) -> CheckReport:
    """Check the four hypotheses of the simple theorem.

    (1) delta vanishes outside ``line.pair``; (2) no run from s to t, proved
    by an exhausted search or, when a search is cut by the bounds, by a
    verified separator passed as ``certificate``; (3) ``s`` reaches
    ``q(a + n delta)`` and (4) ``q(a + n delta + m e)`` reaches ``t``, where
    ``e`` is the unit vector of the second coordinate of the pair, on samples.
    """
    vass.check_config(s)
    vass.check_config(t)
    vass.state_index(q)
    if len(line.a) != vass.dim:
        raise DimensionMismatch(f"line has dimension {len(line.a)}, expected {vass.dim}")
    res = {}

    others = [j for j in range(vass.dim) if j not in line.pair and line.delta[j]]
    if others:
        res["1"] = ConditionResult(Label.REFUTED, tuple(line.delta), f"delta is nonzero at {others}")
    else:
        res["1"] = ConditionResult(Label.VERIFIED)

    verdict = shortest_run(vass, s, t, bounds)
    if verdict.kind is Reach.REACHABLE:
        res["2"] = ConditionResult(Label.REFUTED, verdict.run, "target reachable", pruned=None)
    elif verdict.kind is Reach.EXHAUSTED:
        res["2"] = ConditionResult(Label.VERIFIED, None, "search exhausted", pruned=False)
    elif certificate is not None and \
            is_separator(vass, s, t, certificate, bounds.norm_bound).kind is Status.VERIFIED:
        res["2"] = ConditionResult(Label.VERIFIED, None, "search cut by bounds; separator certificate verified",
                                   pruned=True)
    else:
        res["2"] = ConditionResult(Label.UNKNOWN, None, "search cut by bounds", pruned=True)

    res["3"] = _sampled(
        [(n, shortest_run(vass, s, Configuration(q, line.point(n)), bounds)) for n in samples_n],
        "s does not reach q(a + n delta)")
    e = unit(vass.dim, line.pair[1])
    pairs = [(n, m) for n in samples_n for m in samples_m]
    res["4"] = _sampled(
        [((n, m), shortest_run(vass, Configuration(q, vadd(line.point(n), vscale(m, e))), t, bounds))
         for n, m in pairs],
        "q(a + n delta + m e) does not reach t")
    return CheckReport(res, bounds.to_json())


def _sampled(results, failure: str) -> ConditionResult:
    samples = tuple(k for k, _ in results)
    for key, verdict in results:
        if verdict.kind is Reach.EXHAUSTED:
            return ConditionResult(Label.REFUTED, key, f"{failure} (exhausted search) at sample {key}",
                                   samples=samples)
    unknown = [key for key, verdict in results if verdict.kind is Reach.UNKNOWN]
    if unknown:
        return ConditionResult(Label.UNKNOWN, None, f"no run found within bounds at samples {unknown}",
                               samples=samples)
    return ConditionResult(Label.VERIFIED_ON_SAMPLES, None, "", samples=samples)


def _check_lins(vass: Vass, lin1: LinearFunction, lin2: LinearFunction) -> None:
    if lin1.dim != vass.dim or lin2.dim != vass.dim:
        raise DimensionMismatch("linear functions do not match the dimension")
    if set(lin1.support) & set(lin2.support):
        raise OverlappingSupports("supports of the linear functions intersect")
    if not (lin1.reduced and lin2.reduced):
        raise PrerequisiteViolated("linear functions must be reduced")


def _avoiding_run(vass: Vass, s: Configuration, goal_state: str, q: str, bounds: SearchBounds):
    # search from s for a configuration at goal_state, never passing through q
    keep = tuple(t for t in vass.transitions if q not in (t.src, t.dst))
    index = [i for i, t in enumerate(vass.transitions) if q not in (t.src, t.dst)]
    sub = Vass(vass.dim, vass.states, keep)
    parents, pruned, _ = _bfs(sub, s, bounds, True)
    for c in parents:
        if c.state == goal_state:
            run = run_to(parents, s, c)
            # map indices back to the full system
            steps = tuple(m._replace(trans=index[m.trans]) for m in run.steps)
            return Run(s, steps), pruned
    return None, pruned


def _state_path_avoiding(vass: Vass, src: str, dst: str, q: str) -> bool:
    if q in (src, dst):
        return False
    seen = {src}
    todo = [src]
    while todo:
        x = todo.pop()
        if x == dst:
            return True
        for _, _, y in vass.outgoing(x):
            if y != q and y not in seen:
                seen.add(y)
                todo.append(y)
    return False


def check_thm_advanced(vass: Vass, s: Configuration, t: Configuration, q: str,
                       lin1: LinearFunction, lin2: LinearFunction, ratio, bounds: SearchBounds,
                       u_samples: Optional[Iterable[Vector]] = None) -> CheckReport:
    """Check the four hypotheses of the linear-function theorem within bounds."""
    vass.check_config(s)
    vass.check_config(t)
    vass.state_index(q)
    _check_lins(vass, lin1, lin2)
    ratio = Fraction(ratio)
    if ratio < 0:
        raise PrerequisiteViolated("ratio must be nonnegative")
    res = {}

    post, pruned = post_bounded(vass, s, bounds)
    bad = sorted(c for c in post if c.state == q and not _ge_ratio(lin1(c.vec), ratio, lin2(c.vec)))
    if bad:
        res["1"] = ConditionResult(Label.REFUTED, bad[0], "Lin1(v) < R * Lin2(v)", pruned=pruned)
    else:
        res["1"] = ConditionResult(Label.VERIFIED if not pruned else Label.VERIFIED_ON_SAMPLES,
                                   None, "checked on every explored q(v)", pruned=pruned)

    if u_samples is None:
        u_samples = [(0,) * vass.dim] + [unit(vass.dim, i) for i in lin2.support]
    u_samples = [tuple(u) for u in u_samples]
    witness = None
    for u in u_samples:
        pre, _ = pre_bounded(vass, Configuration(t.state, vadd(t.vec, u)), bounds)
        for c in sorted(pre):
            if c.state == q:
                d = vsub(c.vec, u)
                if lin1(d) * ratio.denominator > ratio.numerator * lin2(d):
                    witness = (c, u)
                    break
        if witness:
            break
    if witness:
        res["2"] = ConditionResult(Label.REFUTED, f"{witness[0]} reaches t+{witness[1]}",
                                   "Lin1(v-u) > R * Lin2(v-u)", samples=tuple(u_samples))
    else:
        res["2"] = ConditionResult(Label.VERIFIED_ON_SAMPLES, None, "checked on every explored q(v) for each u",
                                   samples=tuple(u_samples))

    # (3): endpoints count as traversed configurations
    if not _state_path_avoiding(vass, s.state, t.state, q):
        res["3"] = ConditionResult(Label.VERIFIED, None, "every path of states passes through q")
    else:
        run, pr = _avoiding_run(vass, s, t.state, q, bounds)
        if run is not None:
            res["3"] = ConditionResult(Label.REFUTED, run, "a run reaches state(t) without visiting q")
        else:
            res["3"] = ConditionResult(Label.VERIFIED_ON_SAMPLES, None,
                                       "no run from s avoiding q found within bounds", pruned=pr)

    support = sorted(set(lin1.support) | set(lin2.support))
    counts = []
    for level in (bounds, SearchBounds(2 * bounds.norm_bound, bounds.length_bound, bounds.node_budget)):
        fwd, _ = post_bounded(vass, s, level)
        back, _ = pre_bounded(vass, t, level)
        both = {tuple(c.vec[i] for i in support) for c in fwd & back if c.state == q}
        counts.append(len(both))
    res["4"] = ConditionResult(Label.EVIDENCE_ONLY, None,
                               "distinct projections at the bound and at twice the bound",
                               evidence={"counts": counts, "growing": counts[1] > counts[0]})
    return CheckReport(res, bounds.to_json())


@dataclass(frozen=True)
class ConclusionReport:
    entries: tuple = ()

    @property
    def lacking(self) -> list[int]:
        return [e["index"] for e in self.entries if not e["matches"]]

    @property
    def fraction_ok(self) -> Fraction:
        if not self.entries:
            return Fraction(1)
        return Fraction(sum(1 for e in self.entries if e["matches"]), len(self.entries))

    def to_json(self) -> dict:
        return {"entries": list(self.entries), "lacking": self.lacking}


def verify_conclusion_simple(separators: Sequence[SemilinearConfigSet], delta: Sequence[int]) -> ConclusionReport:
    entries = []
    for k, sep in enumerate(separators):
        found = proportional_periods(sep, delta)
        entries.append({"index": k, "matches": bool(found),
                        "periods": [[ci, pi, str(r)] for ci, pi, r in found]})
    return ConclusionReport(tuple(entries))


def verify_conclusion_advanced(separators: Sequence[SemilinearConfigSet], lin1: LinearFunction,
                               lin2: LinearFunction, ratio, coords: Optional[Iterable[int]] = None) -> ConclusionReport:
    coords = None if coords is None else list(coords)
    entries = []
    for k, sep in enumerate(separators):
        found = ratio_satisfying_periods(sep, lin1, lin2, Fraction(ratio), coords)
        entries.append({"index": k, "matches": bool(found),
                        "periods": [[ci, pi, list(p)] for ci, pi, p in found]})
    return ConclusionReport(tuple(entries))
