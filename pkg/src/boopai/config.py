"""YAML configuration for weights, search parameters, and match specs.

A config file may contain any of three sections; every field is optional
and falls back to the package defaults::

    weights:
      count: 0.25
      center: 0.5
      border: -0.1
      large_owned: 2.0
      align2: {all_small: 0.8, mixed: 1.2, all_large: 4.0}
      align3: {all_small: 2.5, mixed: 3.0, all_large: 4.5}

    search:
      playout_length: 20
      preselect: 5
      discount: 0.9
      c_explore: 1.4142135623730951
      budget_s: 1.0          # or budget_iters: 200
      budget_iters: null

    match:
      agent_a: mcts+SEP
      agent_b: vanilla
      games: 50
      seat_policy: alternate   # or fixed
      base_seed: 0
      jobs: 1
      ply_cap: 1000

The ``weights``/``search`` sections apply to both agents unless a CLI
flag overrides them.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path
from typing import Optional, Union

import yaml

from .arena import MatchSpec, SeatPolicy
from .heuristic import DEFAULT_WEIGHTS, AlignmentWeights, HeuristicWeights
from .search import AgentConfig, SearchParams, parse_agent_spec


class ConfigError(Exception):
    pass


def load_config(path: Union[str, Path]) -> dict:
    try:
        obj = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    if obj is None:
        return {}
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return obj


def weights_from_config(obj: Optional[dict]) -> HeuristicWeights:
    if not obj:
        return DEFAULT_WEIGHTS
    known = {f.name for f in dataclasses.fields(HeuristicWeights)}
    unknown = set(obj) - known
    if unknown:
        raise ConfigError(f"unknown weight fields: {sorted(unknown)}")
    kwargs: dict = {}
    for name in ("count", "center", "border", "large_owned"):
        if name in obj:
            kwargs[name] = float(obj[name])
    for name in ("align2", "align3"):
        if name in obj:
            try:
                kwargs[name] = AlignmentWeights(**{
                    k: float(v) for k, v in obj[name].items()
                })
            except TypeError as exc:
                raise ConfigError(f"bad {name} table: {exc}") from exc
    return dataclasses.replace(DEFAULT_WEIGHTS, **kwargs)


def search_params_from_config(obj: Optional[dict]) -> SearchParams:
    if not obj:
        return SearchParams()
    known = {f.name for f in dataclasses.fields(SearchParams)}
    unknown = set(obj) - known
    if unknown:
        raise ConfigError(f"unknown search fields: {sorted(unknown)}")
    try:
        return dataclasses.replace(SearchParams(), **obj)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad search parameters: {exc}") from exc


def agent_from_config(
    spec: str,
    config: Optional[dict] = None,
    seed: Optional[int] = None,
) -> AgentConfig:
    """Agent from a spec string plus the shared weights/search sections."""
    config = config or {}
    try:
        return parse_agent_spec(
            spec,
            params=search_params_from_config(config.get("search")),
            weights=weights_from_config(config.get("weights")),
            seed=seed,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def match_spec_from_config(
    config: dict,
    agent_a: Optional[str] = None,
    agent_b: Optional[str] = None,
    **overrides,
) -> MatchSpec:
    section = dict(config.get("match") or {})
    config_a = section.pop("agent_a", None)
    config_b = section.pop("agent_b", None)
    a_spec = agent_a or config_a
    b_spec = agent_b or config_b
    if not a_spec or not b_spec:
        raise ConfigError("both agents must be given (flags or config 'match' section)")
    if "seat_policy" in section:
        try:
            section["seat_policy"] = SeatPolicy(section["seat_policy"])
        except ValueError as exc:
            raise ConfigError(f"bad seat_policy: {exc}") from exc
    section.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return MatchSpec(
            agent_a=agent_from_config(a_spec, config),
            agent_b=agent_from_config(b_spec, config),
            **section,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad match spec: {exc}") from exc
