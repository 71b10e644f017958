"""Rank-order contest engine.

Computes applicant effort equilibria under rank-based reward schedules,
reports stakeholder welfare and group access, and searches reward-schedule
families for designs that optimize school, welfare, or planner objectives,
optionally under an access-gap cap.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
