"""Deterministic Pokémon battle engine and single-elimination LLM tournament harness.

The heavy lifting happens in the native ``_core`` module; this wrapper turns its
JSON payloads into plain Python objects.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Iterable, Sequence

from . import _core
from ._core import ConfigError, DexError, DigestMismatch, IncompleteLog, NoLogs, StorageError

__all__ = [
    "ConfigError",
    "DexError",
    "DigestMismatch",
    "IncompleteLog",
    "NoLogs",
    "StorageError",
    "damage",
    "default_dex_path",
    "load_dex",
    "parse_action_response",
    "parse_team_response",
    "pick_frequency",
    "replay",
    "report",
    "run_tournament",
    "simulate",
]


def default_dex_path() -> Path:
    # Installed wheels carry the dex next to the module; source builds fall back
    # to the repository copy the core was compiled against.
    bundled = Path(__file__).with_name("data") / "dex.json"
    if "POKELEAGUE_DEX" not in os.environ and bundled.exists():
        return bundled
    return Path(_core.default_dex_path())


def load_dex(path: str | os.PathLike[str] | None = None) -> _core.Dex:
    return _core.load_dex(Path(path) if path is not None else default_dex_path())


def damage(dex: _core.Dex, attacker: str, defender: str, move: str, *, weather: str = "None",
           crit: bool = False, roll: int = 100) -> tuple[int, float, bool]:
    return _core.damage(dex, attacker, defender, move, weather, crit, roll)


def simulate(dex: _core.Dex, a: str = "greedy", b: str = "random", *, seed: int = 1, count: int = 1,
             turn_cap: int = 500) -> list[dict[str, Any]]:
    return json.loads(_core.simulate(dex, a, b, seed, count, turn_cap))


def run_tournament(config: str | os.PathLike[str], output_dir: str | os.PathLike[str] | None = None) -> dict[str, Any]:
    out = Path(output_dir) if output_dir is not None else None
    return json.loads(_core.run_tournament(Path(config), default_dex_path(), out))


def replay(dex: _core.Dex, log: str | os.PathLike[str]) -> dict[str, Any]:
    return json.loads(_core.replay(dex, Path(log)))


def parse_team_response(text: str, pool_size: int) -> dict[str, Any]:
    return json.loads(_core.parse_team_response(text, pool_size))


def parse_action_response(text: str, legal: Sequence[dict[str, Any]]) -> dict[str, Any]:
    return json.loads(_core.parse_action_response(text, json.dumps(list(legal))))


def report(log_dir: str | os.PathLike[str]) -> dict[str, Any]:
    return json.loads(_core.report(Path(log_dir)))


def pick_frequency(teams: Iterable[Sequence[str]]) -> dict[str, int]:
    return dict(_core.pick_frequency([list(t) for t in teams]))
