"""Shared systems used across the test files.

``SEPARATOR_INSTANCES`` lists every (system, s, t) on which some test expects a
separator.  Tests that produce separators draw their instances from here so
the soundness cross-check in the acceptance suite sees all of them.
"""

from vassep.constructions import modify_vass, parity, ratio_toy, toy_slope
from vassep.core import Configuration, Transition, Vass, config
from vassep.numtheory import LinearFunction


def loop_vass(*effects, dim=1):
    return Vass(dim, ("q",), tuple(Transition("q", tuple(e), "q") for e in effects))


PARITY = parity().vass
TOY = toy_slope()
RATIO = ratio_toy()
RATIO_MODIFIED = modify_vass(RATIO.vass, "q", LinearFunction((1, 0)), LinearFunction((0, 1)))

# (name, vass, s, t, size budget, box)
SEPARATOR_INSTANCES = [
    ("parity-3", PARITY, config("q", 0), config("q", 3), 4, 12),
    ("parity-1", PARITY, config("q", 0), config("q", 1), 4, 12),
    ("parity-from-1", PARITY, config("q", 1), config("q", 4), 4, 12),
    ("toy-slope", TOY.vass, TOY.configs["s"], TOY.configs["t"], 9, 11),
    ("ratio-modified", RATIO_MODIFIED, RATIO.configs["s"], Configuration("qt", (0, 1)), 8, 6),
]

# bounds used when cross-checking that no run exists
CROSS_CHECK_NORM = 40


_separator_cache: dict = {}


def separators_for(name):
    """Least-size separators of a registered instance, computed once per session."""
    if name not in _separator_cache:
        from vassep.separator import minimal_separators
        _, vass, s, t, budget, box = next(x for x in SEPARATOR_INSTANCES if x[0] == name)
        _separator_cache[name] = minimal_separators(vass, s, t, budget, box)
    return _separator_cache[name]


def instance(name):
    return next(x for x in SEPARATOR_INSTANCES if x[0] == name)


_u1_cache: dict = {}


def u1_explored(bound=60):
    """Forward and backward bounded sets of U_1 around its accepting configuration."""
    if bound not in _u1_cache:
        from vassep.constructions import build_un
        from vassep.explore import SearchBounds, post_bounded, pre_bounded
        u = build_un()
        post, _ = post_bounded(u.vass, u.configs["s"], SearchBounds(bound))
        pre, _ = pre_bounded(u.vass, u.configs["accept"], SearchBounds(bound))
        _u1_cache[bound] = (u, post, pre)
    return _u1_cache[bound]
