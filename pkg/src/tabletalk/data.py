"""Access to the shipped data files."""

from importlib import resources
from pathlib import Path


def data_path(name: str) -> Path:
    return Path(resources.files("tabletalk") / "data" / name)


SCENARIOS = {
    "two-object": "scenario_two_object.json",
    "clarification": "scenario_clarification.json",
    "tasks": "scenario_tasks.json",
    "1": "scenario_ambiguity_1.json",
    "2": "scenario_ambiguity_2.json",
    "3": "scenario_ambiguity_3.json",
    "4": "scenario_ambiguity_4.json",
}


def scenario_path(key: str) -> Path:
    if key in SCENARIOS:
        return data_path(SCENARIOS[key])
    return Path(key)
