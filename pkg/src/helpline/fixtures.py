"""Access to the data files shipped with the package."""

from __future__ import annotations

from pathlib import Path

_ROOT = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> Path:
    path = _ROOT / name
    if not path.exists():
        raise FileNotFoundError(f"no shipped fixture named {name!r}")
    return path
