"""The embedding order on runs, domination search and pumping.

``rho <= rho'`` (target-anchored) holds when the steps of ``rho`` can be
matched, in order, to steps of ``rho'`` carrying the same transition with
componentwise larger configurations, the last step of ``rho`` being matched to
the last step of ``rho'``.  The source-anchored variant instead pins the first
step to the first step.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import Configuration, Run, Vass, replay, vleq, vsub, validate_run
from .errors import PrerequisiteViolated, VassError


class Anchor(enum.Enum):
    TARGET = "target"
    SOURCE = "source"


@dataclass(frozen=True)
class RunEmbedding:
    indices: tuple[int, ...]
    anchor: Anchor = Anchor.TARGET


class SpliceError(VassError):
    """An amalgamated run failed replay; indicates a bug, never a user error."""


def config_leq(c1: Configuration, c2: Configuration) -> bool:
    return c1.state == c2.state and len(c1.vec) == len(c2.vec) and vleq(c1.vec, c2.vec)


def _step_leq(m, m2) -> bool:
    return m.trans == m2.trans and vleq(m.src.vec, m2.src.vec) and m.src.state == m2.src.state


def _greedy(small, big, start: int, stop: int) -> Optional[list[int]]:
    # earliest matching of small into big[start:stop]
    out = []
    pos = start
    for m in small:
        while pos < stop and not _step_leq(m, big[pos]):
            pos += 1
        if pos >= stop:
            return None
        out.append(pos)
        pos += 1
    return out


def find_embedding(rho: Run, rho2: Run, anchor: Anchor = Anchor.TARGET) -> Optional[RunEmbedding]:
    """Lexicographically least embedding of ``rho`` into ``rho2`` (0-based indices).

    Earliest-first matching is complete here: whether a step can be matched
    at a position does not depend on how earlier steps were matched.  A run
    without steps embeds when its single configuration is dominated by the
    anchored endpoint of ``rho2``.
    """
    small, big = rho.steps, rho2.steps
    if not small:
        ok = (config_leq(rho.target, rho2.target) if anchor is Anchor.TARGET
              else config_leq(rho.source, rho2.source))
        return RunEmbedding((), anchor) if ok else None
    if len(small) > len(big):
        return None
    if anchor is Anchor.TARGET:
        if not _step_leq(small[-1], big[-1]):
            return None
        head = _greedy(small[:-1], big, 0, len(big) - 1)
        return None if head is None else RunEmbedding(tuple(head) + (len(big) - 1,), anchor)
    if not _step_leq(small[0], big[0]):
        return None
    tail = _greedy(small[1:], big, 1, len(big))
    return None if tail is None else RunEmbedding((0,) + tuple(tail), anchor)


def is_embedding(rho: Run, rho2: Run, emb: RunEmbedding) -> bool:
    idx = emb.indices
    if len(idx) != len(rho.steps) or any(b <= a for a, b in zip(idx, idx[1:])):
        return False
    if not idx:
        return find_embedding(rho, rho2, emb.anchor) is not None
    if idx[0] < 0 or idx[-1] >= len(rho2.steps):
        return False
    if emb.anchor is Anchor.TARGET and idx[-1] != len(rho2.steps) - 1:
        return False
    if emb.anchor is Anchor.SOURCE and idx[0] != 0:
        return False
    return all(_step_leq(m, rho2.steps[i]) for m, i in zip(rho.steps, idx))


def find_domination(runs: Sequence[Run], anchor: Anchor = Anchor.TARGET) -> Optional[tuple[int, int]]:
    """Smallest pair ``(i, j)``, ordered by j then i, with ``runs[i]`` embedded in ``runs[j]``."""
    if runs:
        if anchor is Anchor.TARGET:
            ends = {r.source for r in runs}
        else:
            ends = {r.target for r in runs}
        if len(ends) > 1:
            raise PrerequisiteViolated(f"runs must share their {'source' if anchor is Anchor.TARGET else 'target'}")
    for j in range(1, len(runs)):
        for i in range(j):
            if find_embedding(runs[i], runs[j], anchor) is not None:
                return i, j
    return None


def _surplus(rho: Run, other: Run) -> tuple[int, ...]:
    if other.target.state != rho.target.state:
        raise PrerequisiteViolated("targets are in different states")
    delta = vsub(other.target.vec, rho.target.vec)
    if min(delta, default=0) < 0:
        raise PrerequisiteViolated("target surplus is not a nonnegative vector")
    return delta


def _check_pair(rho: Run, other: Run, emb: RunEmbedding) -> None:
    if other.source != rho.source:
        raise PrerequisiteViolated("runs must share their source")
    if emb.anchor is not Anchor.TARGET or not is_embedding(rho, other, emb):
        raise PrerequisiteViolated("not a target-anchored embedding")
    _surplus(rho, other)


def _splice(vass: Vass, rho: Run, rho1: Run, rho2: Run,
            emb1: RunEmbedding, emb2: RunEmbedding) -> tuple[Run, RunEmbedding]:
    trans1, trans2 = rho1.transitions, rho2.transitions
    if not rho.steps:
        seq = trans1 + trans2
        matched: tuple[int, ...] = ()
    else:
        seq = []
        matched = []
        prev1 = prev2 = -1
        for i1, i2 in zip(emb1.indices, emb2.indices):
            seq.extend(trans1[prev1 + 1:i1])   # rho1's own excess block
            seq.extend(trans2[prev2 + 1:i2])   # rho2's excess block, shifted by rho1's surplus
            matched.append(len(seq))
            seq.append(trans1[i1])
            prev1, prev2 = i1, i2
        matched = tuple(matched)
    try:
        out = replay(vass, rho.source, seq)
    except VassError as exc:
        raise SpliceError(f"spliced run does not replay: {exc}") from exc
    emb = RunEmbedding(matched, Anchor.TARGET)
    if validate_run(vass, out) is not None or not is_embedding(rho, out, emb):
        raise SpliceError("spliced run is not valid")
    return out, emb


def amalgamate(vass: Vass, rho: Run, rho1: Run, rho2: Run,
               emb1: RunEmbedding, emb2: RunEmbedding) -> Run:
    """Run from src(rho) dominating ``rho`` whose target carries both surpluses.

    The steps of ``rho2`` that are not matched by ``emb2`` are inserted into
    ``rho1`` in front of the corresponding matched steps of ``emb1``.
    """
    _check_pair(rho, rho1, emb1)
    _check_pair(rho, rho2, emb2)
    return _splice(vass, rho, rho1, rho2, emb1, emb2)[0]


def pump_run(vass: Vass, rho: Run, rho2: Run, emb: RunEmbedding, n: int) -> Run:
    """Run from src(rho) to trg(rho) + n * (trg(rho2) - trg(rho))."""
    if n < 0:
        raise PrerequisiteViolated("pumping count must be nonnegative")
    _check_pair(rho, rho2, emb)
    if n == 0:
        return rho
    current, cur_emb = rho2, emb
    for _ in range(n - 1):
        current, cur_emb = _splice(vass, rho, current, rho2, cur_emb, emb)
    return current
