import pytest
from hypothesis import given, strategies as st

from vassep.core import (AnchoredTransition, Configuration, Run, Transition, Vass, config, fire, norm, replay,
                         run_effect, validate_run)
from vassep.constructions import build_un
from vassep.errors import DimensionMismatch, NegativeCounter, ParseError, UnknownState, WrongState

from fixtures import loop_vass


def test_fire_adds_effect():
    assert fire(loop_vass((2,)), config("q", 0), 0) == config("q", 2)


def test_fire_negative_counter():
    with pytest.raises(NegativeCounter) as info:
        fire(loop_vass((-1,)), config("q", 0), 0)
    assert info.value.index == 0


def test_fire_wrong_state():
    v = Vass(1, ("p", "q"), (Transition("p", (1,), "q"),))
    with pytest.raises(WrongState):
        fire(v, config("q", 0), 0)


def test_fire_initial_phase_loop_of_u1():
    u = build_un().vass
    loop = next(i for i, t in enumerate(u.transitions) if t.src == t.dst == "q_init")
    assert u.transitions[loop].effect == (1, 1, 0, 0)
    assert fire(u, config("q_init", 3, 3, 0, 0), loop) == config("q_init", 4, 4, 0, 0)


def test_vass_invariants():
    with pytest.raises(UnknownState):
        Vass(1, ("q",), (Transition("q", (1,), "r"),))
    with pytest.raises(DimensionMismatch):
        Vass(2, ("q",), (Transition("q", (1,), "q"),))
    with pytest.raises(ValueError):
        Vass(1, ("q", "q"), ())


@pytest.mark.parametrize("effects,expected", [
    ([(1, -1)], (1, -1)),
    ([(0, 0)] * 3, (0, 0)),
    ([(1, 2), (0, -1)], (1, 1)),
])
def test_run_effect_examples(effects, expected):
    v = Vass(2, ("q",), tuple(Transition("q", e, "q") for e in dict.fromkeys(effects)))
    index = {e: i for i, e in enumerate(dict.fromkeys(effects))}
    run = replay(v, config("q", 5, 5), [index[e] for e in effects])
    assert run_effect(run) == expected


def test_validate_accepts_replayed_run():
    v = loop_vass((1,), (-1,))
    assert validate_run(v, replay(v, config("q", 0), [0, 0, 1])) is None


def test_validate_reports_broken_chain():
    v = loop_vass((1,))
    good = replay(v, config("q", 0), [0, 0, 0])
    steps = list(good.steps)
    steps[2] = AnchoredTransition(config("q", 7), 0, config("q", 8))
    bad = validate_run(v, Run(good.source, tuple(steps)))
    assert bad is not None and bad.index == 2


def test_validate_reports_negative_and_wrong_effect():
    v = loop_vass((1,))
    run = Run(config("q", 0), (AnchoredTransition(config("q", 0), 0, config("q", 2)),))
    assert validate_run(v, run).index == 0
    run = Run(config("q", 0), (AnchoredTransition(config("q", 0), 3, config("q", 1)),))
    assert "no transition" in validate_run(v, run).reason


def test_empty_run_targets_source():
    run = Run(config("q", 4))
    assert run.target == config("q", 4) and len(run) == 0 and run_effect(run) == (0,)


def test_text_format_roundtrip_and_comments():
    text = "# a comment\ndim 2\nstate p\nstate q  # trailing\ntrans p q 1 -2\ntrans q q 0 3\n"
    v = Vass.from_text(text)
    assert v.transitions == (Transition("p", (1, -2), "q"), Transition("q", (0, 3), "q"))
    assert Vass.from_text(v.to_text()).to_text() == v.to_text()


@pytest.mark.parametrize("text", ["", "state q\n", "dim 1\nstate q\ntrans q q 1 2\n", "dim 1\ntrans q r 1\n",
                                  "dim x\n"])
def test_text_format_errors(text):
    with pytest.raises(ParseError):
        Vass.from_text(text)


def test_configuration_serialisation():
    c = Configuration.parse("p_0 16 25 0 0")
    assert c == config("p_0", 16, 25, 0, 0) and str(c) == "p_0 16 25 0 0"
    with pytest.raises(ParseError):
        Configuration.parse("q -1")


effects = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=4)


@st.composite
def random_run(draw):
    eff = draw(effects)
    v = Vass(2, ("a", "b"), tuple(Transition(draw(st.sampled_from("ab")), e, draw(st.sampled_from("ab")))
                                  for e in eff))
    c = Configuration(draw(st.sampled_from("ab")), (draw(st.integers(0, 6)), draw(st.integers(0, 6))))
    seq = []
    for _ in range(draw(st.integers(0, 8))):
        options = [i for i, t in enumerate(v.transitions)
                   if t.src == c.state and min(x + d for x, d in zip(c.vec, t.effect)) >= 0]
        if not options:
            break
        i = draw(st.sampled_from(options))
        c = fire(v, c, i)
        seq.append(i)
    return v, draw(st.just(None)) or replay(v, Configuration(*_source(v, seq, c)), seq)


def _source(v, seq, end):
    # walk the sequence backwards from its end to recover the start
    vec = end.vec
    state = end.state
    for i in reversed(seq):
        t = v.transitions[i]
        vec = tuple(x - d for x, d in zip(vec, t.effect))
        state = t.src
    return state, vec


@given(random_run())
def test_effect_is_target_minus_source(vr):
    v, run = vr
    assert validate_run(v, run) is None
    assert run_effect(run) == tuple(b - a for a, b in zip(run.source.vec, run.target.vec))
    for m in run.steps:
        assert tuple(b - a for a, b in zip(m.src.vec, m.trg.vec)) == v.transitions[m.trans].effect


def test_norm():
    assert norm((3, -7, 2)) == 7 and norm(()) == 0
