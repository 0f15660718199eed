"""Nonnegative Bezout decompositions, linear functions and zero-step paths."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .core import Vector, vadd, vsub
from .errors import BudgetExhausted, PrerequisiteViolated


def gcd_list(a: Sequence[int]) -> int:
    if not a:
        raise ValueError("gcd of an empty list")
    return math.gcd(*a)


def ext_gcd(a: Sequence[int]) -> tuple[int, list[int]]:
    """Return ``(g, x)`` with ``sum(a[i] * x[i]) == g == gcd(a)``."""
    g, coeffs = 0, []
    for value in a:
        # invariant: g == sum(a[i] * coeffs[i]) over the prefix seen so far
        old_r, r = g, value
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        g = old_r
        coeffs = [c * old_s for c in coeffs] + [old_t]
    return g, coeffs


@lru_cache(maxsize=256)
def _representable_table(a: tuple[int, ...], limit: int) -> tuple[int, ...]:
    # table[s] = index of a last coefficient used to reach s, -1 if unreachable
    table = [-1] * (limit + 1)
    table[0] = len(a)
    for s in range(1, limit + 1):
        for i, ai in enumerate(a):
            if ai <= s and table[s - ai] != -1:
                table[s] = i
                break
    return tuple(table)


def _small_solution(a: tuple[int, ...], target: int, limit: int) -> Optional[list[int]]:
    table = _representable_table(a, limit)
    if table[target] == -1:
        return None
    b = [0] * len(a)
    s = target
    while s:
        i = table[s]
        b[i] += 1
        s -= a[i]
    return b


def bezout_nonneg(a: Sequence[int], target: int) -> Optional[list[int]]:
    """Nonnegative ``b`` with ``sum(a[i] * b[i]) == target``, or None if none exists.

    At or above ``k * (M*M - M)`` (``M = max(a)``) every multiple of the gcd is
    reachable; there an integer solution from the extended Euclidean
    algorithm is repaired by trading ``a[i]`` units of a coefficient that is at
    least ``M`` for ``a[j]`` units of a negative one.  Below that threshold a
    table of representable sums decides exactly.
    """
    if target < 0:
        raise ValueError("target must be nonnegative")
    a = tuple(int(x) for x in a)
    if any(x < 0 for x in a):
        raise ValueError("coefficients must be nonnegative")
    if not a:
        return [] if target == 0 else None
    nz = [i for i, x in enumerate(a) if x > 0]
    if not nz:
        return [0] * len(a) if target == 0 else None
    g = gcd_list(a)
    if target % g:
        return None
    k, m = len(a), max(a)
    threshold = k * (m * m - m)
    if target < threshold:
        return _small_solution(a, target, threshold)

    _, x = ext_gcd(a)
    b = [c * (target // g) for c in x]
    while True:
        neg = [i for i in nz if b[i] < 0]
        if not neg:
            break
        i = neg[0]
        # such a j exists because target >= threshold (counting argument)
        j = next(j for j in nz if b[j] >= m)
        count = min(-(-(-b[i]) // a[j]), b[j] // a[i])
        b[i] += count * a[j]
        b[j] -= count * a[i]
    for i in range(k):
        if a[i] == 0:
            b[i] = 0
    return b


@dataclass(frozen=True)
class LinearFunction:
    """``x -> sum(coeffs[i] * x[i])`` with nonnegative integer coefficients."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if any(c < 0 for c in coeffs):
            raise ValueError("coefficients must be nonnegative")
        if not any(coeffs):
            raise ValueError("a linear function needs a nonzero coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, x: Sequence[int]) -> int:
        return sum(c * v for c, v in zip(self.coeffs, x))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coeffs) if c)

    @property
    def max_coeff(self) -> int:
        return max(self.coeffs)

    @property
    def reduced(self) -> bool:
        return gcd_list(self.coeffs) == 1

    def threshold(self) -> int:
        """Value above which equal-valued points are connected by zero steps."""
        return len(self.support) * self.max_coeff ** 3

    def __str__(self) -> str:
        return " + ".join(f"{c}*x{i + 1}" if c != 1 else f"x{i + 1}" for i, c in enumerate(self.coeffs) if c)


def reduce(lin: LinearFunction) -> tuple[LinearFunction, int]:
    g = gcd_list(lin.coeffs)
    return LinearFunction(tuple(c // g for c in lin.coeffs)), g


def _zero_vector(n: Sequence[int], i: int, j: int, dim: int) -> Vector:
    # n_j e_i - n_i e_j
    v = [0] * dim
    v[i] += n[j]
    v[j] -= n[i]
    return tuple(v)


def zero_set(lin: LinearFunction) -> list[Vector]:
    """Vectors ``n_j e_i - n_i e_j`` for ordered pairs of distinct support coordinates."""
    out = []
    seen = set()
    for i in lin.support:
        for j in lin.support:
            if i != j:
                v = _zero_vector(lin.coeffs, i, j, lin.dim)
                if v not in seen:
                    seen.add(v)
                    out.append(v)
    return out


@dataclass(frozen=True)
class StepPath:
    points: tuple[Vector, ...]

    @property
    def steps(self) -> tuple[Vector, ...]:
        return tuple(vsub(b, a) for a, b in zip(self.points, self.points[1:]))

    def __len__(self) -> int:
        return len(self.points) - 1


# Local problems work on the support only: n is a tuple of positive coefficients
# with gcd 1, and steps are recorded as (i, j, count) meaning count times
# n_j e_i - n_i e_j.


def _lin(n, x) -> int:
    return sum(a * b for a, b in zip(n, x))


def _bfs_local(n: tuple[int, ...], u: list[int], v: list[int], budget: int):
    # the level set {x >= 0 : n.x = c} is finite, so this search is exact
    start, goal = tuple(u), tuple(v)
    parent = {start: None}
    queue = deque([start])
    k = len(n)
    while queue:
        x = queue.popleft()
        if x == goal:
            moves = []
            while parent[x] is not None:
                x, move = parent[x]
                moves.append(move)
            moves.reverse()
            return moves
        for i in range(k):
            for j in range(k):
                if i != j and x[j] >= n[i]:
                    y = list(x)
                    y[i] += n[j]
                    y[j] -= n[i]
                    y = tuple(y)
                    if y not in parent:
                        if len(parent) >= budget:
                            raise BudgetExhausted("zero-step search exceeded its node budget")
                        parent[y] = (x, (i, j, 1))
                        queue.append(y)
    return None


def _apply(n, x: list[int], move) -> None:
    i, j, count = move
    x[i] += count * n[j]
    x[j] -= count * n[i]


def _connect(n: tuple[int, ...], u: list[int], v: list[int], budget: int):
    """Moves taking ``u`` to ``v`` for a reduced, all-positive ``n``; None if impossible."""
    k = len(n)
    if k == 1:
        return [] if u == v else None
    m = max(n)
    total = _lin(n, v)
    if total < k * m ** 3:
        return _bfs_local(n, u, v, budget)

    def rest_gcd(j):
        return math.gcd(*(n[i] for i in range(k) if i != j))

    heavy = [j for j in range(k) if total - n[j] * v[j] >= (k - 1) * m ** 3]
    if not heavy:
        return _bfs_local(n, u, v, budget)
    # prefer a coordinate whose removal keeps the remaining coefficients coprime
    j = min(heavy, key=lambda c: (rest_gcd(c) != 1, c))
    others = [i for i in range(k) if i != j]

    x = list(u)
    moves = []
    # move mass onto coordinate j until every other coordinate is below n_j
    for i in others:
        c = x[i] // n[j]
        if c:
            move = (j, i, c)
            _apply(n, x, move)
            moves.append(move)

    surplus = x[j] - v[j]
    g = rest_gcd(j)
    sub_n = tuple(n[i] // g for i in others)
    if g == 1:
        residues = [0] * len(others)
    else:
        # choose residues so the remaining coordinates end up congruent to v mod g
        inv = pow(n[j], -1, g)
        residues = [(inv * (v[i] - x[i])) % g for i in others]
    rest = surplus - sum(n[i] * r for i, r in zip(others, residues))
    sol = None
    if rest >= 0 and rest % (g * g) == 0:
        sol = bezout_nonneg(sub_n, rest // (g * g))
    if sol is None:
        return _bfs_local(n, u, v, budget)
    for pos, i in enumerate(others):
        c = residues[pos] + g * sol[pos]
        if c:
            move = (i, j, c)
            _apply(n, x, move)
            moves.append(move)
    assert x[j] == v[j]

    if g == 1:
        sub_u = [x[i] for i in others]
        sub_v = [v[i] for i in others]
        offset = [0] * len(others)
    else:
        offset = [v[i] % g for i in others]
        sub_u = [(x[i] - r) // g for i, r in zip(others, offset)]
        sub_v = [(v[i] - r) // g for i, r in zip(others, offset)]
    sub = _connect(sub_n, sub_u, sub_v, budget)
    if sub is None:
        return _bfs_local(n, u, v, budget)
    # a local step of the scaled problem is one step of the original one
    for a, b, c in sub:
        moves.append((others[a], others[b], c))
    return moves


def zero_run_path(lin: LinearFunction, u: Sequence[int], v: Sequence[int],
                  budget: int = 200_000) -> Optional[StepPath]:
    """Path from ``u`` to ``v`` whose steps all lie in ``zero_set(lin)``.

    Above the value ``|supp| * M**3`` a path is constructed by induction on
    the support: fill one coordinate from the others, hand back the exact
    excess through a nonnegative Bezout combination, and recurse.  Below it
    (or when a subproblem falls below it) an exhaustive search over the
    finite level set decides; None means no path exists.
    """
    u, v = tuple(u), tuple(v)
    if len(u) != lin.dim or len(v) != lin.dim:
        raise PrerequisiteViolated("dimension mismatch")
    if min(u + v) < 0:
        raise PrerequisiteViolated("points must be nonnegative")
    if not lin.reduced:
        raise PrerequisiteViolated("linear function is not reduced")
    if lin(u) != lin(v):
        raise PrerequisiteViolated("points have different values")
    supp = lin.support
    if any(u[i] != v[i] for i in range(lin.dim) if i not in supp):
        raise PrerequisiteViolated("points differ outside the support")
    if u == v:
        return StepPath((u,))

    n =tuple(lin.coeffs[i] for i in supp)
    moves = _connect(n, [u[i] for i in supp], [v[i] for i in supp], budget)
    if moves is None:
        return None
    points = [u]
    x = list(u)
    for i, j, count in moves:
        step = _zero_vector(lin.coeffs, supp[i], supp[j], lin.dim)
        for _ in range(count):
            x = list(vadd(x, step))
            points.append(tuple(x))
    path = StepPath(tuple(points))
    if points[-1] != v or any(min(p) < 0 for p in points):
        raise AssertionError("zero-step path construction went wrong")
    return path
