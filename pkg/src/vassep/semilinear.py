"""Linear and semilinear sets of configurations.

A linear set is ``b + N p_1 + ... + N p_k`` with nonnegative integer base and
periods.  A ``SemilinearConfigSet`` is a finite union of state-tagged linear
sets; its size is the sum of the norms of all bases and periods.
"""

from __future__ import annotations

import enum
import itertools
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .core import Configuration, Vass, Vector, norm, vadd, vsub
from .errors import DimensionMismatch, ParseError
from .numtheory import LinearFunction


@dataclass(frozen=True)
class LinearSet:
    base: Vector
    periods: tuple[Vector, ...] = ()

    def __post_init__(self):
        base = tuple(int(x) for x in self.base)
        periods = tuple(tuple(int(x) for x in p) for p in self.periods)
        if any(x < 0 for x in base) or any(x < 0 for p in periods for x in p):
            raise ValueError("linear sets use nonnegative vectors")
        if any(len(p) != len(base) for p in periods):
            raise DimensionMismatch("periods and base differ in dimension")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "periods", tuple(p for p in periods if any(p)))

    @property
    def dim(self) -> int:
        return len(self.base)

    @property
    def size(self) -> int:
        return norm(self.base) + sum(norm(p) for p in self.periods)

    def canonical(self) -> "LinearSet":
        return LinearSet(self.base, tuple(sorted(set(self.periods))))

    def __str__(self) -> str:
        parts = [str(self.base)] + [f"N{p}" for p in self.periods]
        return " + ".join(parts)


def member_witness(v: Sequence[int], ls: LinearSet) -> Optional[tuple[int, ...]]:
    """Coefficients ``n`` with ``base + sum(n_i p_i) == v``, or None.

    Depth-first over the coefficients; ``n_i`` never exceeds
    ``(v - base)[j] // p_i[j]`` for any coordinate ``j`` where ``p_i`` is positive.
    """
    v = tuple(v)
    if len(v) != ls.dim:
        raise DimensionMismatch("vector and linear set differ in dimension")
    rest = vsub(v, ls.base)
    if min(rest, default=0) < 0:
        return None
    periods = ls.periods
    k = len(periods)
    # coordinates that some period at position >= i can still change
    reach = [set() for _ in range(k + 1)]
    for i in range(k - 1, -1, -1):
        reach[i] = reach[i + 1] | {j for j, x in enumerate(periods[i]) if x}
    coeffs = [0] * k

    def dfs(i: int, r: Vector) -> bool:
        if i == k:
            return not any(r)
        if any(x and j not in reach[i] for j, x in enumerate(r)):
            return False
        p = periods[i]
        top = min(r[j] // x for j, x in enumerate(p) if x)
        for n in range(top, -1, -1):
            coeffs[i] = n
            if dfs(i + 1, tuple(a - n * b for a, b in zip(r, p))):
                return True
        coeffs[i] = 0
        return False

    return tuple(coeffs) if dfs(0, rest) else None


def member(v: Sequence[int], ls: LinearSet) -> bool:
    return _member_cached(tuple(v), ls)


@lru_cache(maxsize=1 << 18)
def _member_cached(v: Vector, ls: LinearSet) -> bool:
    return member_witness(v, ls) is not None


def in_monoid(v: Sequence[int], periods: Sequence[Vector]) -> bool:
    """Is ``v`` a nonnegative integer combination of ``periods``?"""
    return member(v, LinearSet((0,) * len(v), tuple(periods)))


def points_in_box(ls: LinearSet, bound: int) -> set[Vector]:
    """All members of ``ls`` with norm at most ``bound``."""
    if max(ls.base, default=0) > bound:
        return set()
    # periods are nonnegative, so norms only grow along the search
    out = {ls.base}
    todo = [ls.base]
    periods = ls.periods
    while todo:
        v = todo.pop()
        for p in periods:
            w = tuple(a + b for a, b in zip(v, p))
            if w not in out and max(w) <= bound:
                out.add(w)
                todo.append(w)
    return out


@dataclass(frozen=True)
class SemilinearConfigSet:
    components: tuple[tuple[str, LinearSet], ...] = ()

    def __post_init__(self):
        comps = tuple((q, ls) for q, ls in self.components)
        dims = {ls.dim for _, ls in comps}
        if len(dims) > 1:
            raise DimensionMismatch("components differ in dimension")
        object.__setattr__(self, "components", comps)

    @property
    def size(self) -> int:
        return sum(ls.size for _, ls in self.components)

    @property
    def dim(self) -> Optional[int]:
        return self.components[0][1].dim if self.components else None

    def at(self, state: str) -> list[LinearSet]:
        return [ls for q, ls in self.components if q == state]

    def canonical(self) -> "SemilinearConfigSet":
        comps = sorted({(q, ls.canonical()) for q, ls in self.components},
                       key=lambda c: (c[0], c[1].base, c[1].periods))
        return SemilinearConfigSet(tuple(comps))

    def check_against(self, vass: Vass) -> None:
        for q, ls in self.components:
            vass.state_index(q)
            if ls.dim != vass.dim:
                raise DimensionMismatch(f"component at {q} has dimension {ls.dim}, expected {vass.dim}")

    def __contains__(self, c: Configuration) -> bool:
        return member_config(c, self)

    def to_text(self) -> str:
        lines = []
        for q, ls in self.components:
            lines.append(f"component {q}")
            lines.append(" ".join(["base", *map(str, ls.base)]))
            lines += [" ".join(["period", *map(str, p)]) for p in ls.periods]
        return "".join(line + "\n" for line in lines)

    @classmethod
    def from_text(cls, text: str) -> "SemilinearConfigSet":
        comps = []
        state = base = None
        periods: list[Vector] = []

        def flush():
            if state is not None:
                if base is None:
                    raise ParseError(f"component {state} has no base")
                comps.append((state, LinearSet(base, tuple(periods))))

        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, *rest = line.split()
            try:
                if head == "component" and len(rest) == 1:
                    flush()
                    state, base, periods = rest[0], None, []
                elif head == "base" and state is not None and base is None:
                    base = tuple(int(x) for x in rest)
                elif head == "period" and base is not None:
                    p = tuple(int(x) for x in rest)
                    if len(p) != len(base):
                        raise ParseError(f"line {lineno}: period has the wrong dimension")
                    if not any(p):
                        raise ParseError(f"line {lineno}: zero period")
                    periods.append(p)
                else:
                    raise ParseError(f"line {lineno}: cannot parse {raw!r}")
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
        flush()
        try:
            return cls(tuple(comps))
        except (ValueError, DimensionMismatch) as exc:
            raise ParseError(str(exc)) from exc


def member_config(c: Configuration, s: SemilinearConfigSet) -> bool:
    return any(q == c.state and len(c.vec) == ls.dim and member(c.vec, ls) for q, ls in s.components)


def proportional_periods(s: SemilinearConfigSet, delta: Sequence[int]) -> list[tuple[int, int, Fraction]]:
    """Periods equal to ``r * delta`` for a positive rational ``r``.

    Returns ``(component index, period index, r)`` triples.
    """
    delta = tuple(delta)
    if not any(delta):
        raise ValueError("delta must be nonzero")
    pivot = next(j for j, x in enumerate(delta) if x)
    out = []
    for ci, (_, ls) in enumerate(s.components):
        if ls.dim != len(delta):
            continue
        for pi, p in enumerate(ls.periods):
            if all(p[j] * delta[pivot] == delta[j] * p[pivot] for j in range(len(delta))):
                r = Fraction(p[pivot], delta[pivot])
                if r > 0:
                    out.append((ci, pi, r))
    return out


def ratio_satisfying_periods(s: SemilinearConfigSet, lin1: LinearFunction, lin2: LinearFunction,
                             ratio: Fraction, coords: Optional[Iterable[int]] = None) -> list[tuple[int, int, Vector]]:
    """Periods with ``lin1(p) == ratio * lin2(p)`` and a nonzero projection on ``coords``.

    ``coords`` defaults to the union of both supports.
    """
    ratio = Fraction(ratio)
    if ratio < 0:
        raise ValueError("ratio must be nonnegative")
    idx = set(coords) if coords is not None else set(lin1.support) | set(lin2.support)
    out = []
    for ci, (_, ls) in enumerate(s.components):
        for pi, p in enumerate(ls.periods):
            if lin1(p) * ratio.denominator != ratio.numerator * lin2(p):
                continue
            if any(p[j] for j in idx if j < len(p)):
                out.append((ci, pi, p))
    return out


# invariance


class Invariance(enum.Enum):
    VERIFIED = "Verified"
    REFUTED = "Refuted"
    UNKNOWN = "UnknownWithinBounds"


@dataclass(frozen=True)
class InvarianceVerdict:
    kind: Invariance
    witness: Optional[tuple[Configuration, int, Configuration]] = None
    detail: str = ""


def _refute(vass: Vass, s: SemilinearConfigSet, bound: int):
    for q, ls in s.components:
        for v in sorted(points_in_box(ls, bound)):
            c = Configuration(q, v)
            for t, effect, dst in vass.outgoing(q):
                w = vadd(v, effect)
                if min(w) < 0:
                    continue
                nxt = Configuration(dst, w)
                if not member_config(nxt, s):
                    return c, t, nxt
    return None


def _minimal_lifts(start: Vector, periods: Sequence[Vector]) -> list[tuple[int, ...]]:
    """Minimal coefficient vectors ``n`` with ``start + sum(n_i p_i) >= 0``."""
    need = {j: -x for j, x in enumerate(start) if x < 0}
    k = len(periods)
    if not need:
        return [(0,) * k]
    ranges = []
    for p in periods:
        top = max((-(-need[j] // p[j]) for j in need if p[j] > 0), default=0)
        ranges.append(range(top + 1))
    ok = []
    for n in itertools.product(*ranges):
        v = list(start)
        for c, p in zip(n, periods):
            if c:
                for j in need:
                    v[j] += c * p[j]
        if all(v[j] >= 0 for j in need):
            ok.append(n)
    ok.sort(key=sum)
    minimal: list[tuple[int, ...]] = []
    for n in ok:
        if not any(all(a <= b for a, b in zip(m, n)) for m in minimal):
            minimal.append(n)
    return minimal


def _covered(base: Vector, periods: tuple[Vector, ...], targets: Sequence[LinearSet], depth: int) -> bool:
    """Sufficient test for ``base + N periods`` being inside the union of ``targets``."""
    for ls in targets:
        if member(base, ls) and all(in_monoid(p, ls.periods) for p in periods):
            return True
    if depth <= 0 or not periods:
        return False
    # split N p_j into {0} and p_j + N p_j
    for j, p in enumerate(periods):
        others = periods[:j] + periods[j + 1:]
        if _covered(base, others, targets, depth - 1) and _covered(vadd(base, p), periods, targets, depth - 1):
            return True
    return False


def verify_invariance(vass: Vass, s: SemilinearConfigSet, depth: int = 3) -> tuple[bool, str]:
    """Sound but incomplete syntactic proof that ``s`` is closed under every transition."""
    for q, ls in s.components:
        for t, effect, dst in vass.outgoing(q):
            targets = s.at(dst)
            start = vadd(ls.base, effect)
            for n in _minimal_lifts(start, ls.periods):
                shifted = start
                for c, p in zip(n, ls.periods):
                    if c:
                        shifted = vadd(shifted, tuple(c * x for x in p))
                if not _covered(shifted, ls.periods, targets, depth):
                    return False, f"cannot show {q}({ls}) stays inside the set after transition {t}"
    return True, ""


def check_invariance(vass: Vass, s: SemilinearConfigSet, bound: int, depth: int = 3) -> InvarianceVerdict:
    """Two tiers: exhaustive refutation over members of norm <= bound, then a syntactic proof."""
    s.check_against(vass)
    bad = _refute(vass, s, bound)
    if bad is not None:
        return InvarianceVerdict(Invariance.REFUTED, bad, f"{bad[2]} is outside the set")
    ok, why = verify_invariance(vass, s, depth)
    if ok:
        return InvarianceVerdict(Invariance.VERIFIED)
    return InvarianceVerdict(Invariance.UNKNOWN, None, why)


# enumeration


def _vectors_of_norm(dim: int, n: int) -> list[Vector]:
    return [v for v in itertools.product(range(n + 1), repeat=dim) if max(v, default=0) == n]


def linear_sets_of_size(dim: int, size: int) -> list[LinearSet]:
    """Every canonical linear set of exactly this size, in a fixed order."""
    out = []
    for bn in range(size + 1):
        bases = _vectors_of_norm(dim, bn)
        for periods in _period_sets(dim, size - bn, 1):
            for b in bases:
                out.append(LinearSet(b, periods))
    return out


def _period_sets(dim: int, total: int, smallest: int):
    # sets of distinct nonzero periods, grouped by norm in increasing order
    if total == 0:
        yield ()
        return
    for n in range(smallest, total + 1):
        pool = _vectors_of_norm(dim, n)
        for count in range(1, total // n + 1):
            for chosen in itertools.combinations(pool, count):
                for rest in _period_sets(dim, total - n * count, n + 1):
                    yield tuple(sorted(chosen + rest))


def enumerate_semilinear(states: Sequence[str], dim: int, size_budget: int) -> Iterator[SemilinearConfigSet]:
    """Every set of distinct state-tagged canonical linear sets with total size <= budget.

    Sets are produced by nondecreasing size; the empty set comes first.
    """
    if size_budget < 0:
        raise ValueError("size budget must be nonnegative")
    comps = [(ls.size, q, ls) for size in range(size_budget + 1)
             for q in states for ls in linear_sets_of_size(dim, size)]

    def choose(start: int, remaining: int, acc: tuple):
        # indices strictly increase, so each set of components appears once;
        # zero-size components sort first and may pad an exact sum
        if remaining == 0:
            yield acc
        for i in range(start, len(comps)):
            size, q, ls = comps[i]
            if size > remaining:
                break
            yield from choose(i + 1, remaining - size, acc + ((q, ls),))

    for total in range(size_budget + 1):
        for chosen in choose(0, total, ()):
            yield SemilinearConfigSet(chosen)
