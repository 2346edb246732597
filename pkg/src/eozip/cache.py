"""On-disk cache for oracle reports.

One JSON file per (g, p, r, version).  Writes go to a temporary file in the
same directory and are moved into place with ``os.replace``, so readers never
see a partial file.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from . import __version__


def cache_path(cache_dir: str | os.PathLike, g: int, p: int, r: int | None = None) -> Path:
    return Path(cache_dir) / f"oracle-g{g}-p{p}-r{r or 0}-v{__version__}.json"


def load(cache_dir, g: int, p: int, r: int | None = None) -> dict | None:
    path = cache_path(cache_dir, g, p, r)
    try:
        data = json.loads(path.read_text())
    except (FileNotFoundError, json.JSONDecodeError):
        return None
    if data.get("toolkit_version") != __version__:
        return None
    return data


def store(cache_dir, g: int, p: int, payload: dict, r: int | None = None) -> Path:
    path = cache_path(cache_dir, g, p, r)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = dict(payload, toolkit_version=__version__)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path
