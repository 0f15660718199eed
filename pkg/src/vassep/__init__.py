"""Reachability, separators and run orders for vector addition systems with states."""

from .core import (AnchoredTransition, Configuration, Run, Transition, Vass, config, fire, replay,
                   run_effect, validate_run)
from .errors import VassError

__version__ = "0.1.0"

__all__ = ["AnchoredTransition", "Configuration", "Run", "Transition", "Vass", "VassError", "config",
           "fire", "replay", "run_effect", "validate_run", "__version__"]
