"""Situated language comprehension for an instructable tabletop agent.

The package couples a small simulated tabletop world with a comprehension
pipeline that grounds words in percepts, spatial relations, and task
knowledge, resolves referring expressions against attention and dialog
context, and learns verb argument defaults from instruction.
"""

from tabletalk.world import WorldObject, Location, WorldState, load_scenario
from tabletalk.session import Session

__all__ = ["WorldObject", "Location", "WorldState", "load_scenario", "Session"]

__version__ = "0.1.0"
