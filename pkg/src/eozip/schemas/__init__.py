"""JSON schemas for the command-line outputs."""

import json
from importlib import resources


def load(name: str) -> dict:
    return json.loads(resources.files(__name__).joinpath(f"{name}.json").read_text())
