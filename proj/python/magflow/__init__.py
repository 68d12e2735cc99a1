"""Magnetic flows on a genus-2 hyperbolic surface.

Thin wrapper over the compiled core: helicity, Mane critical value bounds,
flow trajectories, and disk Radon transforms.
"""

from ._magflow import *  # noqa: F401,F403
from ._magflow import __version__  # noqa: F401
