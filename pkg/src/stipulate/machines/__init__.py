"""Machine description files shipped with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

NAMES = ("accept", "loop", "p4", "pr")


def path(name: str) -> Path:
    """Filesystem path of a shipped ``<name>.tm`` file."""
    return Path(str(resources.files(__name__).joinpath(f"{name}.tm")))
