import itertools

import pytest
from hypothesis import given, settings, strategies as st

from vassep.constructions import build_un, toy_slope
from vassep.core import Transition, Vass, config, fire, validate_run
from vassep.errors import NegativeCounter, WrongState
from vassep.explore import Reach, SearchBounds, enumerate_runs, post_bounded, pre_bounded, shortest_run

from fixtures import loop_vass


def test_post_parity_pruned():
    post, pruned = post_bounded(loop_vass((2,)), config("q", 0), SearchBounds(5))
    assert post == {config("q", 0), config("q", 2), config("q", 4)} and pruned


def test_post_decreasing_chain_exhausted():
    post, pruned = post_bounded(loop_vass((-1,)), config("q", 3), SearchBounds(10))
    assert post == {config("q", k) for k in range(4)} and not pruned


def test_post_u1_contains_line_point():
    u = build_un()
    post, _ = post_bounded(u.vass, u.configs["s"], SearchBounds(30))
    assert config("p0", 16, 25, 0, 0) in post


def test_pre_parity():
    pre, pruned = pre_bounded(loop_vass((2,)), config("q", 4), SearchBounds(10))
    assert pre == {config("q", 4), config("q", 2), config("q", 0)} and not pruned


def test_pre_without_transitions():
    v = Vass(1, ("q",), ())
    assert pre_bounded(v, config("q", 3), SearchBounds(5)) == ({config("q", 3)}, False)


def _backward_oracle(vass, target, bound):
    # fixed point over the whole box, independent of the search order
    box = [config(q, x, y) for q in vass.states for x in range(bound + 1) for y in range(bound + 1)]
    reach = {target}
    changed = True
    while changed:
        changed = False
        for c in box:
            if c in reach:
                continue
            for t in vass.outgoing(c.state):
                i = t[0]
                try:
                    d = fire(vass, c, i)
                except (NegativeCounter, WrongState):
                    continue
                if d in reach:
                    reach.add(c)
                    changed = True
                    break
    return reach


def test_pre_toy_slope_matches_box_fixed_point():
    toy = toy_slope()
    pre, pruned = pre_bounded(toy.vass, toy.configs["t"], SearchBounds(8))
    assert pruned
    assert pre == _backward_oracle(toy.vass, toy.configs["t"], 8)
    # the q_t part is exactly y >= 2x and the q part is y >= 2x + 1 inside the box
    assert {c.vec for c in pre if c.state == "qt"} == {(x, y) for x in range(9) for y in range(9) if y >= 2 * x}
    assert {c.vec for c in pre if c.state == "q"} == {(x, y) for x in range(9) for y in range(9) if y >= 2 * x + 1}


def test_shortest_parity():
    v = loop_vass((2,))
    r = shortest_run(v, config("q", 0), config("q", 4), SearchBounds(10))
    assert r.kind is Reach.REACHABLE and len(r.run) == 2 and validate_run(v, r.run) is None
    assert shortest_run(v, config("q", 0), config("q", 3), SearchBounds(10)).kind is Reach.UNKNOWN


def test_exhausted_needs_no_pruning():
    v = loop_vass((-1,))
    assert shortest_run(v, config("q", 5), config("q", 7), SearchBounds(10)).kind is Reach.EXHAUSTED
    # with the +2 loop the box always cuts the search, so the answer stays open
    v2 = Vass(1, ("q",), (Transition("q", (2,), "q"), Transition("q", (-1,), "q")))
    assert shortest_run(v2, config("q", 0), config("q", 3), SearchBounds(10)).kind is Reach.REACHABLE


def test_shortest_same_endpoints_is_empty_run():
    r = shortest_run(loop_vass((1,)), config("q", 2), config("q", 2), SearchBounds(3))
    assert r.kind is Reach.REACHABLE and len(r.run) == 0


def test_length_bound_marks_pruned():
    v = loop_vass((1,))
    assert shortest_run(v, config("q", 0), config("q", 5), SearchBounds(10, 3)).kind is Reach.UNKNOWN
    assert shortest_run(v, config("q", 0), config("q", 5), SearchBounds(10, 5)).kind is Reach.REACHABLE


def test_node_budget_marks_pruned():
    v = loop_vass((1,))
    assert shortest_run(v, config("q", 0), config("q", 9), SearchBounds(10, None, 3)).kind is Reach.UNKNOWN


def test_start_outside_box():
    post, pruned = post_bounded(loop_vass((1,)), config("q", 9), SearchBounds(5))
    assert post == frozenset() and pruned


def _all_sequences(vass, s, bound, length):
    out = []
    for n in range(1, length + 1):
        for seq in itertools.product(range(len(vass.transitions)), repeat=n):
            c = s
            try:
                for i in seq:
                    c = fire(vass, c, i)
                    if max(c.vec) > bound:
                        raise NegativeCounter(-1)
            except (NegativeCounter, WrongState):
                continue
            out.append(seq)
    return out


def test_enumerate_parity():
    runs = list(enumerate_runs(loop_vass((2,)), config("q", 0), SearchBounds(10, 2)))
    assert [r.transitions for r in runs] == [(0,), (0, 0)]


def test_enumerate_blocked_decrement():
    runs = list(enumerate_runs(loop_vass((1,), (-1,)), config("q", 0), SearchBounds(10, 1)))
    assert [r.transitions for r in runs] == [(0,)]


def test_enumerate_toy_slope_matches_brute_force():
    toy = toy_slope()
    runs = list(enumerate_runs(toy.vass, toy.configs["s"], SearchBounds(50, 4)))
    expected = _all_sequences(toy.vass, toy.configs["s"], 50, 4)
    assert [r.transitions for r in runs] == sorted(expected, key=lambda s: (len(s), s))
    assert all(validate_run(toy.vass, r) is None for r in runs)


@st.composite
def small_vass(draw):
    n = draw(st.integers(1, 3))
    states = tuple(f"s{i}" for i in range(n))
    trans = draw(st.lists(st.tuples(st.sampled_from(states), st.tuples(st.integers(-2, 2), st.integers(-2, 2)),
                                    st.sampled_from(states)), min_size=1, max_size=5))
    return Vass(2, states, tuple(Transition(*t) for t in trans))


@settings(max_examples=60, deadline=None)
@given(small_vass(), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_shortest_run_agrees_with_enumeration(v, a, b, c, d):
    s, t = config(v.states[0], a, b), config(v.states[-1], c, d)
    bounds = SearchBounds(5, 5)
    r = shortest_run(v, s, t, bounds)
    lengths = [len(x) for x in enumerate_runs(v, s, bounds) if x.target == t]
    if s == t:
        assert r.kind is Reach.REACHABLE and len(r.run) == 0
    elif lengths:
        assert r.kind is Reach.REACHABLE and len(r.run) == min(lengths)
        assert validate_run(v, r.run) is None
    else:
        assert r.kind is not Reach.REACHABLE
    post, pruned = post_bounded(v, s, SearchBounds(5))
    if not pruned:
        for c in post:
            for i, effect, dst in v.outgoing(c.state):
                vec = tuple(x + y for x, y in zip(c.vec, effect))
                if min(vec) >= 0:
                    assert config(dst, *vec) in post


def test_witnesses_are_deterministic():
    toy = toy_slope()
    a = shortest_run(toy.vass, config("q", 0, 3), toy.configs["t"], SearchBounds(20))
    b = shortest_run(toy.vass, config("q", 0, 3), toy.configs["t"], SearchBounds(20))
    assert a.run == b.run and a.run.transitions == (1, 3, 3)
