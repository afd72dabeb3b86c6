from __future__ import annotations

import copy
import os
from functools import lru_cache

import yaml

CONFIG_ENV = "PIRARRAY_CONFIG"

DEFAULTS: dict = {
    "verifier": {
        "exact_limit": 20,
        "node_budget": 10_000_000,
        "lower_bound_max_size": 2,
    },
    "constructions": {"max_servers": 1_000_000},
    "emulator": {"word_bits": 64, "seed": 0, "trials": 100},
    "bounds": {"decimals": 6},
    "logging": {"level": "INFO"},
}


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in (override or {}).items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = val
    return out


def _cfg_path() -> str:
    return os.environ.get(CONFIG_ENV) or os.path.join(os.path.dirname(os.path.dirname(__file__)), "config.yaml")


@lru_cache(maxsize=None)
def _load_file(path: str) -> dict:
    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as f:
            return yaml.safe_load(f) or {}
    return {}


def load_cfg(path: str | None = None) -> dict:
    """Config file merged over the built-in defaults, key by key."""
    return _merge(DEFAULTS, _load_file(path or _cfg_path()))
