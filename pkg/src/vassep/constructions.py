"""Generators: the U_n / V_n family, small fixtures, gadgets and the V^q modification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import Configuration, Transition, Vass, Vector, unit
from .errors import InvalidSchedule, OverlappingSupports, PrerequisiteViolated
from .numtheory import LinearFunction, zero_set


@dataclass(frozen=True)
class Construction:
    """A generated VASS with its named configurations and metadata."""

    vass: Vass
    configs: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def sidecar(self) -> dict:
        out = {name: str(c) for name, c in self.configs.items()}
        for key, value in self.meta.items():
            out[key] = list(value) if isinstance(value, tuple) else value
        return out


@dataclass(frozen=True)
class FractionSchedule:
    """Fractions ``f_1 < ... < f_n``, each ``a_i / b_i`` in lowest terms."""

    fractions: tuple[Fraction, ...]
    compliant: bool = True

    def __post_init__(self):
        object.__setattr__(self, "fractions", tuple(Fraction(f) for f in self.fractions))

    @classmethod
    def default(cls, n: int = 1) -> "FractionSchedule":
        # only n = 1 is pinned down: f_1 = 1 + 1/4
        if n != 1:
            raise InvalidSchedule("a default schedule is only available for n = 1")
        return cls((Fraction(5, 4),))

    @property
    def n(self) -> int:
        return len(self.fractions)

    def pair(self, i: int) -> tuple[int, int]:
        f = self.fractions[i - 1]
        return f.numerator, f.denominator

    @property
    def f(self) -> Fraction:
        out = Fraction(1)
        for i, fi in enumerate(self.fractions, 1):
            out *= fi ** (2 ** i)
        return out

    @property
    def big_n(self) -> int:
        return math.prod(fi.denominator ** (2 ** i) for i, fi in enumerate(self.fractions, 1))

    def validate(self) -> None:
        fs = self.fractions
        n = len(fs)
        if n < 1:
            raise InvalidSchedule("at least one fraction is needed")
        if any(fi <= 1 for fi in fs):
            raise InvalidSchedule("every fraction must exceed 1")
        if not self.compliant:
            return
        if any(a >= b for a, b in zip(fs, fs[1:])):
            raise InvalidSchedule("fractions must increase strictly")
        if fs[-1] != 1 + Fraction(1, 4 ** n):
            raise InvalidSchedule(f"the last fraction must be 1 + 1/4^{n}")
        limit = 4 ** (n * n + n)
        if any(max(fi.numerator, fi.denominator) > limit for fi in fs):
            raise InvalidSchedule("a fraction exceeds the description size bound")
        f = self.f
        if max(f.numerator, f.denominator) > limit ** 2:
            raise InvalidSchedule("the product exceeds the description size bound")


def _cfg(state: str, dim: int = 4) -> Configuration:
    return Configuration(state, (0,) * dim)


def build_un(sched: Optional[FractionSchedule] = None) -> Construction:
    """The 4-VASS U_n; an accepting run ends in ``p0`` with all counters zero."""
    sched = sched or FractionSchedule.default()
    sched.validate()
    n = sched.n
    f = sched.f
    states = ["q_in", "q_init"]
    trans = [("q_in", (1, 1, 0, 0), "q_init"),
             ("q_init", (1, 1, 0, 0), "q_init"),
             ("q_init", (0, 0, 0, 2 ** n), f"p{n}")]
    for i in range(n, 0, -1):
        ai, bi = sched.pair(i)
        states += [f"p{i}", f"q{i}"]
        trans += [(f"p{i}", (0, -1, 1, 0), f"p{i}"),
                  (f"p{i}", (0, 0, 0, 0), f"q{i}"),
                  (f"q{i}", (0, ai, -bi, 0), f"q{i}"),
                  (f"q{i}", (0, 0, 0, -1), f"p{i}")]
        step = (0, 0, 0, 2 ** (i - 1)) if i > 1 else (0, 0, 0, 0)
        trans.append((f"p{i}", step, f"p{i - 1}"))
    states.append("p0")
    trans.append(("p0", (-f.denominator, -f.numerator, 0, 0), "p0"))
    vass = Vass(4, tuple(states), tuple(Transition(*t) for t in trans))
    configs = {"s": _cfg("q_in"), "accept": _cfg("p0")}
    meta = {"n": n, "f": str(f), "N": sched.big_n,
            "fractions": [str(x) for x in sched.fractions]}
    return Construction(vass, configs, meta)


def build_vn(sched: Optional[FractionSchedule] = None) -> Construction:
    """U_n followed by a decrement of x2 and a loop decrementing x2.

    The line used with the simple theorem lives in state ``p{n-1}``.
    Entering that state adds ``2^(n-1)`` to x4, so for n >= 2 the line is
    anchored at the first reachable point ``(N, N f_n^(2^n), 0, 2^(n-1))``;
    for n = 1 the final loop at ``p0`` also reaches the origin.
    """
    sched = sched or FractionSchedule.default()
    un = build_un(sched)
    n = sched.n
    v = un.vass.with_transitions([Transition("p0", (0, -1, 0, 0), "q_out"),
                                  Transition("q_out", (0, -1, 0, 0), "q_out")], states=["q_out"])
    big_n = sched.big_n
    fn_pow = sched.fractions[-1] ** (2 ** n)
    second = big_n * fn_pow
    assert second.denominator == 1
    delta = (big_n, int(second), 0, 0)
    a = (0, 0, 0, 0) if n == 1 else (big_n, int(second), 0, 2 ** (n - 1))
    configs = {"s": _cfg("q_in"), "t": _cfg("q_out")}
    meta = dict(un.meta, q=f"p{n - 1}", delta=delta, a=a)
    return Construction(v, configs, meta)


def toy_slope() -> Construction:
    """Two counters; ``q`` climbs along (1,2) and ``qt`` can only shrink.

    From ``q(n, 2n)`` the target ``qt(0,0)`` is out of reach, while any point
    strictly above the line reaches it.
    """
    v = Vass(2, ("q", "qt"), (Transition("q", (1, 2), "q"),
                              Transition("q", (0, -1), "qt"),
                              Transition("qt", (-1, -2), "qt"),
                              Transition("qt", (0, -1), "qt")))
    return Construction(v, {"s": Configuration("q", (0, 0)), "t": Configuration("qt", (0, 0))},
                        {"q": "q", "a": (0, 0), "delta": (1, 2)})


def toy_slope_reachable() -> Construction:
    """The toy slope started above its line, where the target is reachable."""
    base = toy_slope()
    return Construction(base.vass, {"s": Configuration("q", (0, 1)), "t": Configuration("qt", (0, 0))}, {})


def ratio_toy() -> Construction:
    """A 2-VASS keeping ``x2 = 2 x1`` between ``q`` and ``qt``; ``s`` reaches ``t``."""
    v = Vass(2, ("q", "qt"), (Transition("q", (1, 2), "q"),
                              Transition("q", (0, 0), "qt"),
                              Transition("qt", (-1, -2), "qt")))
    return Construction(v, {"s": Configuration("q", (0, 0)), "t": Configuration("qt", (0, 0))},
                        {"q": "q", "lin1": (1, 0), "lin2": (0, 1), "ratio": "1/2"})


def parity(step: int = 2) -> Construction:
    v = Vass(1, ("q",), (Transition("q", (step,), "q"),))
    return Construction(v, {"s": Configuration("q", (0,))}, {})


def build_gadget_b() -> Construction:
    """Adds (3,0,0) once, then any number of (0,1,3): produces triples (3, k, 3k)."""
    v = Vass(3, ("b_in", "b_loop"), (Transition("b_in", (3, 0, 0), "b_loop"),
                                     Transition("b_loop", (0, 1, 3), "b_loop")))
    return Construction(v, {"s": Configuration("b_in", (0, 0, 0))}, {})


def build_zero_test_gadget(bound: int) -> Construction:
    """Zero-test gadget over counters (a, abar, y, z) for a counter bounded by ``bound``.

    It takes 2 from y and then runs a loop with effect (1,-1,-1) on (a, abar, z)
    followed by a loop with effect (-1,1,-1).  With ``a + abar == bound`` the
    total decrease of z is at most ``2 * bound``, reached only from and back
    to ``(a, abar) == (0, bound)``.
    """
    if bound < 1:
        raise PrerequisiteViolated("the bound must be positive")
    v = Vass(4, ("zt_in", "zt_first", "zt_second", "zt_out"),
             (Transition("zt_in", (0, 0, -2, 0), "zt_first"),
              Transition("zt_first", (1, -1, 0, -1), "zt_first"),
              Transition("zt_first", (0, 0, 0, 0), "zt_second"),
              Transition("zt_second", (-1, 1, 0, -1), "zt_second"),
              Transition("zt_second", (0, 0, 0, 0), "zt_out")))
    return Construction(v, {"s": Configuration("zt_in", (0, bound, 2, 2 * bound))}, {"B": bound})


def add_decrement_loop(vass: Vass, q: str, i: int) -> Vass:
    vass.state_index(q)
    if not 0 <= i < vass.dim:
        raise PrerequisiteViolated(f"no coordinate {i}")
    return vass.with_transitions([Transition(q, unit(vass.dim, i, -1), q)])


def modification_loops(dim: int, lin1: LinearFunction, lin2: LinearFunction) -> list[Vector]:
    """Loop effects added at the distinguished state, in insertion order, without repeats."""
    if lin1.dim != dim or lin2.dim != dim:
        raise PrerequisiteViolated("linear functions do not match the dimension")
    if not (lin1.reduced and lin2.reduced):
        raise PrerequisiteViolated("linear functions must be reduced")
    s1, s2 = set(lin1.support), set(lin2.support)
    if s1 & s2:
        raise OverlappingSupports(f"supports share coordinates {sorted(s1 & s2)}")
    effects: list[Vector] = [unit(dim, i, -1) for i in sorted(s2)]
    for i in range(dim):
        if i not in s1 and i not in s2:
            effects += [unit(dim, i, 1), unit(dim, i, -1)]
    effects += zero_set(lin1) + zero_set(lin2)
    out = []
    for e in effects:
        if e not in out:
            out.append(e)
    return out


def modify_vass(vass: Vass, q: str, lin1: LinearFunction, lin2: LinearFunction) -> Vass:
    """``vass`` plus loops at ``q`` that may raise Lin1/Lin2 but never lower it."""
    vass.state_index(q)
    loops = modification_loops(vass.dim, lin1, lin2)
    return vass.with_transitions([Transition(q, e, q) for e in loops])


def named(kind: str, **kw) -> Construction:
    """Generator lookup used by the command line."""
    if kind == "un":
        return build_un(_schedule(kw.get("fractions"), kw.get("n", 1)))
    if kind == "vn":
        return build_vn(_schedule(kw.get("fractions"), kw.get("n", 1)))
    if kind == "toy-slope":
        return toy_slope()
    if kind == "ratio-toy":
        return ratio_toy()
    if kind == "gadget-b":
        return build_gadget_b()
    if kind == "zero-test":
        return build_zero_test_gadget(int(kw.get("bound", 2)))
    raise PrerequisiteViolated(f"unknown construction {kind!r}")


def _schedule(fractions: Optional[Sequence[str]], n: int) -> FractionSchedule:
    if fractions:
        return FractionSchedule(tuple(Fraction(x) for x in fractions))
    return FractionSchedule.default(n)
