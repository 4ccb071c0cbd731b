"""Named step laws used in tests, demos and the command line."""
from __future__ import annotations

from .step_dist import StepDistribution

__all__ = ["BATTERY", "SUBCRITICAL", "get_law"]

BATTERY = {
    # subcritical: top atom below one half
    "u3": StepDistribution([(-1, 1 / 3), (0, 1 / 3), (1, 1 / 3)]),
    "skew3": StepDistribution([(-1, 0.5), (0, 0.2), (1, 0.3)]),
    "bern04": StepDistribution([(0, 0.6), (1, 0.4)]),
    # critical and supercritical
    "fair": StepDistribution([(0, 0.5), (1, 0.5)]),
    "pm1_06": StepDistribution([(-1, 0.4), (1, 0.6)]),
    "bern075": StepDistribution([(0, 0.25), (1, 0.75)]),
}

SUBCRITICAL = ("u3", "skew3", "bern04")


def get_law(name):
    try:
        return BATTERY[name]
    except KeyError:
        raise KeyError(f"unknown law {name!r}; known: {', '.join(BATTERY)}") from None
