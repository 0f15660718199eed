"""VASS data model: systems, configurations, anchored transitions and runs.

Counters are plain Python ints, so values never overflow.  Transitions live
in an indexed tuple and runs refer to them by index; two anchored transitions
use "the same transition" exactly when their indices agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import DimensionMismatch, NegativeCounter, ParseError, UnknownState, WrongState

Vector = tuple[int, ...]


def vadd(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(k: int, v: Sequence[int]) -> Vector:
    return tuple(k * a for a in v)


def vleq(u: Sequence[int], v: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(u, v))


def norm(v: Sequence[int]) -> int:
    """Maximum absolute coordinate (0 for the empty vector)."""
    return max((abs(a) for a in v), default=0)


def unit(dim: int, i: int, k: int = 1) -> Vector:
    return tuple(k if j == i else 0 for j in range(dim))


class Transition(NamedTuple):
    src: str
    effect: Vector
    dst: str


class Configuration(NamedTuple):
    state: str
    vec: Vector

    def __str__(self) -> str:
        return " ".join([self.state, *map(str, self.vec)])

    @classmethod
    def parse(cls, text: str) -> "Configuration":
        parts = text.split()
        if not parts:
            raise ParseError("empty configuration")
        try:
            vec = tuple(int(x) for x in parts[1:])
        except ValueError as exc:
            raise ParseError(f"bad configuration {text!r}") from exc
        if any(x < 0 for x in vec):
            raise ParseError(f"negative counter in configuration {text!r}")
        return cls(parts[0], vec)


def config(state: str, *values: int) -> Configuration:
    return Configuration(state, tuple(values))


@dataclass(frozen=True)
class Vass:
    dim: int
    states: tuple[str, ...]
    transitions: tuple[Transition, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _outgoing: dict = field(init=False, repr=False, compare=False, hash=False)
    _incoming: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionMismatch("dimension must be positive")
        states = tuple(self.states)
        if len(set(states)) != len(states):
            raise ValueError("duplicate state identifiers")
        for name in states:
            if not name or any(ch.isspace() for ch in name) or name.startswith("#"):
                raise ValueError(f"invalid state name {name!r}")
        trans = tuple(Transition(t[0], tuple(int(x) for x in t[1]), t[2]) for t in self.transitions)
        known = set(states)
        out: dict[str, list] = {q: [] for q in states}
        inc: dict[str, list] = {q: [] for q in states}
        for i, t in enumerate(trans):
            if t.src not in known or t.dst not in known:
                raise UnknownState(f"transition {i} mentions an unknown state")
            if len(t.effect) != self.dim:
                raise DimensionMismatch(f"transition {i} has effect of length {len(t.effect)}")
            out[t.src].append((i, t.effect, t.dst))
            inc[t.dst].append((i, t.effect, t.src))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "transitions", trans)
        object.__setattr__(self, "_index", {q: i for i, q in enumerate(states)})
        object.__setattr__(self, "_outgoing", {q: tuple(v) for q, v in out.items()})
        object.__setattr__(self, "_incoming", {q: tuple(v) for q, v in inc.items()})

    def state_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownState(name) from None

    def outgoing(self, state: str):
        """(index, effect, dst) triples leaving ``state``, in index order."""
        return self._outgoing[state]

    def incoming(self, state: str):
        """(index, effect, src) triples entering ``state``, in index order."""
        return self._incoming[state]

    def check_config(self, c: Configuration) -> None:
        if c.state not in self._index:
            raise UnknownState(c.state)
        if len(c.vec) != self.dim:
            raise DimensionMismatch(f"configuration {c} has {len(c.vec)} counters, expected {self.dim}")
        if any(x < 0 for x in c.vec):
            raise ValueError(f"configuration {c} has a negative counter")

    def with_transitions(self, extra: Iterable[Transition], states: Iterable[str] = ()) -> "Vass":
        return Vass(self.dim, self.states + tuple(states), self.transitions + tuple(extra))

    # text format

    def to_text(self) -> str:
        lines = [f"dim {self.dim}"]
        lines += [f"state {q}" for q in self.states]
        lines += [" ".join(["trans", t.src, t.dst, *map(str, t.effect)]) for t in self.transitions]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Vass":
        dim = None
        states: list[str] = []
        trans: list[Transition] = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, *rest = line.split()
            try:
                if dim is None:
                    if head != "dim" or len(rest) != 1:
                        raise ParseError(f"line {lineno}: expected 'dim D' first")
                    dim = int(rest[0])
                elif head == "state" and len(rest) == 1:
                    states.append(rest[0])
                elif head == "trans" and len(rest) == 2 + dim:
                    trans.append(Transition(rest[0], tuple(int(x) for x in rest[2:]), rest[1]))
                else:
                    raise ParseError(f"line {lineno}: cannot parse {raw!r}")
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
        if dim is None:
            raise ParseError("missing 'dim' declaration")
        try:
            return cls(dim, tuple(states), tuple(trans))
        except (ValueError, UnknownState, DimensionMismatch) as exc:
            raise ParseError(str(exc)) from exc


class AnchoredTransition(NamedTuple):
    src: Configuration
    trans: int
    trg: Configuration


@dataclass(frozen=True)
class Run:
    """A run given by its source and its anchored steps.

    A run may have no steps; it then goes from ``source`` to itself.
    """

    source: Configuration
    steps: tuple[AnchoredTransition, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def target(self) -> Configuration:
        return self.steps[-1].trg if self.steps else self.source

    @property
    def transitions(self) -> tuple[int, ...]:
        return tuple(m.trans for m in self.steps)

    def configurations(self) -> tuple[Configuration, ...]:
        """All configurations visited, source and target included."""
        return (self.source,) + tuple(m.trg for m in self.steps)


def fire(vass: Vass, c: Configuration, t: int) -> Configuration:
    """Fire transition ``t`` in configuration ``c``."""
    src, effect, dst = vass.transitions[t]
    if c.state != src:
        raise WrongState(src, c.state)
    vec = vadd(c.vec, effect)
    for i, x in enumerate(vec):
        if x < 0:
            raise NegativeCounter(i)
    return Configuration(dst, vec)


def replay(vass: Vass, source: Configuration, transitions: Iterable[int]) -> Run:
    """Build the run obtained by firing ``transitions`` in order from ``source``."""
    steps = []
    c = source
    for t in transitions:
        nxt = fire(vass, c, t)
        steps.append(AnchoredTransition(c, t, nxt))
        c = nxt
    return Run(source, tuple(steps))


def run_effect(run: Run) -> Vector:
    total = (0,) * len(run.source.vec)
    for m in run.steps:
        total = vadd(total, vsub(m.trg.vec, m.src.vec))
    return total


class Violation(NamedTuple):
    index: int
    reason: str


def validate_run(vass: Vass, run: Run) -> Optional[Violation]:
    """Return the first broken invariant of ``run`` or None if the run is valid.

    Index -1 refers to the source configuration of a run.
    """
    if run.source.state not in vass._index or len(run.source.vec) != vass.dim:
        return Violation(-1, "source is not a configuration of this VASS")
    if any(x < 0 for x in run.source.vec):
        return Violation(-1, "source has a negative counter")
    prev = run.source
    for i, (src, t, trg) in enumerate(run.steps):
        if src != prev:
            return Violation(i, "step does not start where the previous one ended")
        if not 0 <= t < len(vass.transitions):
            return Violation(i, f"no transition with index {t}")
        tsrc, effect, tdst = vass.transitions[t]
        if src.state != tsrc or trg.state != tdst:
            return Violation(i, "states do not match the transition endpoints")
        if len(trg.vec) != vass.dim or any(x < 0 for x in trg.vec):
            return Violation(i, "target is not a valid configuration")
        if vadd(src.vec, effect) != trg.vec:
            return Violation(i, "target differs from source plus effect")
        prev = trg
    return None
