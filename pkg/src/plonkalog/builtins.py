"""The fixture library: signatures, algebras, matrices, systems and calculi.

Fixtures are ordinary definition files shipped in ``plonkalog/data``; the
environment variable ``PLONKALOG_BUILTIN_DIR`` points the loader elsewhere.
"""

from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path

from .errors import UnknownName

ENV_VAR = "PLONKALOG_BUILTIN_DIR"


def builtin_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(__file__).with_name("data")


@lru_cache(maxsize=4)
def _workspace(directory: str):
    from .textformat import Workspace

    ws = Workspace(builtins=False)
    for path in sorted(Path(directory).glob("*.plk")):
        ws.load_text(path.read_text(encoding="utf-8"), str(path), builtin=True)
    return ws


def builtin_workspace():
    return _workspace(str(builtin_dir()))


def builtin(name: str, kind: str = None):
    """Look up a fixture by name, optionally restricted to one block kind."""
    ws = builtin_workspace()
    if kind is not None:
        return ws.get(kind, name)
    try:
        return ws.lookup(name)
    except UnknownName:
        raise UnknownName(f"no built-in named {name!r}") from None


def catalog() -> dict:
    """``{kind: [names]}`` for every non-empty kind."""
    ws = builtin_workspace()
    from .textformat import KINDS

    return {k: ws.names(k) for k in KINDS if ws.names(k)}
