"""Run configuration: one YAML file per experiment, validated with line numbers."""
from __future__ import annotations

import copy
import os
import dataclasses as dc
from pathlib import Path
from typing import Any, Mapping

import yaml

from ..measure import measure_from_spec

OUT_ENV = "JUMPCALC_OUT"

TOP_LEVEL = {
    "experiment", "seed", "replicas", "T", "eps", "measure", "functional", "field",
    "identities", "oracle", "tolerances", "workers", "out", "chaos", "cho", "volterra",
}


class ConfigError(ValueError):
    """Invalid configuration; the message carries ``file:line`` when known."""


@dc.dataclass
class ExperimentConfig:
    experiment: str
    seed: int
    replicas: int
    T: float = 1.0
    eps: float = 0.0
    measure: dict = dc.field(default_factory=lambda: {"kind": "standard-poisson"})
    functional: dict | None = None
    field: dict | None = None
    identities: list[str] = dc.field(default_factory=list)
    oracle: dict[str, float] = dc.field(default_factory=dict)
    tolerances: dict[str, float] = dc.field(default_factory=lambda: {"pathwise": 1e-10, "sigma": 3.0})
    workers: int = 1
    out: str = "results"
    chaos: dict = dc.field(default_factory=dict)
    cho: dict = dc.field(default_factory=dict)
    volterra: dict = dc.field(default_factory=dict)

    def to_dict(self) -> dict:
        return copy.deepcopy(self.__dict__)

    def with_overrides(self, seed: int | None = None, replicas: int | None = None,
                       out: str | None = None) -> "ExperimentConfig":
        d = self.to_dict()
        if seed is not None:
            d["seed"] = _seed(seed, "--seed")
        if replicas is not None:
            d["replicas"] = _positive_int(replicas, "--replicas")
        if out is not None:
            d["out"] = out
        return ExperimentConfig(**d)


# --------------------------------------------------------------------------


def _line_of(node: yaml.Node | None, path: tuple[str, ...]) -> int | None:
    cur = node
    for key in path:
        if not isinstance(cur, yaml.MappingNode):
            break
        for k, v in cur.value:
            if k.value == key:
                cur = v
                break
        else:
            break
    return None if cur is None else cur.start_mark.line + 1


def _seed(v: Any, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < 2 ** 64:
        raise ValueError(f"{what} must be an unsigned 64-bit integer")
    return v


def _positive_int(v: Any, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v <= 0:
        raise ValueError(f"{what} must be a positive integer")
    return v


def _real(v: Any, what: str, lo: float | None = None, strict: bool = False) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"{what} must be a number")
    v = float(v)
    if lo is not None and (v <= lo if strict else v < lo):
        raise ValueError(f"{what} must be {'>' if strict else '>='} {lo}")
    return v


def _str_list(v: Any, what: str) -> list[str]:
    if not isinstance(v, list):
        raise ValueError(f"{what} must be a list")
    return [str(x) for x in v]


def _mapping(v: Any, what: str) -> dict:
    if not isinstance(v, Mapping):
        raise ValueError(f"{what} must be a mapping")
    return dict(v)


def validate(data: Any, node: yaml.Node | None = None, source: str = "<config>") -> ExperimentConfig:
    """Check a parsed document and build the config; errors name the offending line."""

    def fail(path: tuple[str, ...], msg: str):
        line = _line_of(node, path) if node is not None else None
        where = f"{source}:{line}" if line else source
        raise ConfigError(f"{where}: {msg}")

    if not isinstance(data, Mapping):
        fail((), "top level must be a mapping")
    unknown = sorted(set(data) - TOP_LEVEL)
    if unknown:
        fail((unknown[0],), f"unknown key {unknown[0]!r}")
    for key in ("experiment", "seed", "replicas"):
        if key not in data:
            fail((), f"missing required key {key!r}")

    out: dict[str, Any] = {}
    checks = {
        "experiment": lambda v: str(v),
        "seed": lambda v: _seed(v, "seed"),
        "replicas": lambda v: _positive_int(v, "replicas"),
        "T": lambda v: _real(v, "T", 0.0, strict=True),
        "eps": lambda v: _real(v, "eps", 0.0),
        "workers": lambda v: _positive_int(v, "workers"),
        "out": lambda v: str(v),
        "measure": lambda v: _mapping(v, "measure"),
        "functional": lambda v: _mapping(v, "functional"),
        "field": lambda v: _mapping(v, "field"),
        "oracle": lambda v: {str(k): _real(x, f"oracle.{k}") for k, x in _mapping(v, "oracle").items()},
        "tolerances": lambda v: {str(k): _real(x, f"tolerances.{k}", 0.0, strict=True)
                                 for k, x in _mapping(v, "tolerances").items()},
        "chaos": lambda v: _mapping(v, "chaos"),
        "cho": lambda v: _mapping(v, "cho"),
        "volterra": lambda v: _mapping(v, "volterra"),
        "identities": lambda v: _str_list(v, "identities"),
    }
    for key, check in checks.items():
        if key in data:
            try:
                out[key] = check(data[key])
            except (ValueError, TypeError) as exc:
                fail((key,), str(exc))

    if "measure" in out:
        try:
            m = measure_from_spec(out["measure"])
        except (ValueError, KeyError, TypeError) as exc:
            fail(("measure",), f"bad measure: {exc}")
        if m.infinite_activity and out.get("eps", 0.0) == 0.0:
            fail(("eps",) if "eps" in data else ("measure",),
                 "infinite-activity measures need a positive eps")

    from .identities import REGISTRY  # late import: identities depend on config

    for name in out.get("identities", []):
        if name not in REGISTRY:
            fail(("identities",), f"unknown identity {name!r}; known: {', '.join(REGISTRY)}")

    if "tolerances" in out:
        out["tolerances"] = {"pathwise": 1e-10, "sigma": 3.0, **out["tolerances"]}
    env_out = os.environ.get(OUT_ENV)
    if env_out:
        out["out"] = env_out
    return ExperimentConfig(**out)


def loads(text: str, source: str = "<string>") -> ExperimentConfig:
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = f":{mark.line + 1}" if mark is not None else ""
        raise ConfigError(f"{source}{line}: {getattr(exc, 'problem', exc)}") from None
    return validate(data, node, source)


def load(path: str | os.PathLike) -> ExperimentConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"{p}: cannot read config ({exc.strerror})") from None
    return loads(text, str(p))
