"""Feedback-driven adaptive data-dropout scheduling for iterative training."""

from adadrop._core import *  # noqa: F401,F403
from adadrop._core import __version__  # noqa: F401
