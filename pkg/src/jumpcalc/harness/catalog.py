"""Named functionals and fields that a config file may select.

Closures stay inside the library; the CLI only sees these names and their
parameters, which keeps every run serialisable.
"""
from __future__ import annotations

import math
from typing import Mapping

import numpy as np

from ..chaos import ProductKernel, chaos_functional
from ..measure import JumpMeasure, Region
from ..operators import (Functional, RandomField, constant, constant_field, count,
                         count_before_field, deterministic_field, exp_price, linear,
                         path_functional)

FUNCTIONALS = ("constant", "count", "path", "exp-price", "linear", "chaos")
FIELDS = ("constant", "count-before", "polynomial", "functional-times")


def _region(spec: Mapping | None, T: float) -> Region | None:
    if spec is None:
        return None
    return Region(float(spec.get("t_min", 0.0)), float(spec.get("t_max", T)),
                  float(spec.get("x_inner", 0.0)), float(spec.get("x_outer", math.inf)))


def build_functional(spec: Mapping, m: JumpMeasure, T: float, eps: float) -> Functional:
    name = spec.get("name")
    if name == "constant":
        return constant(float(spec.get("c", 1.0)))
    if name == "count":
        region = _region(spec.get("region"), T)
        if region is not None:
            return count(region, m)
        # sampled configurations live on the window, so the plain length is the count
        return Functional(len, "n", m.mass(Region.theta(T, eps)))
    if name == "path":
        return path_functional(float(spec.get("t", T)), m, eps)
    if name == "exp-price":
        return exp_price(float(spec.get("s0", 1.0)), float(spec.get("r", 0.0)), m, T, eps,
                         spec.get("t"))
    if name == "linear":
        a, b = float(spec.get("a", 1.0)), float(spec.get("b", 0.0))
        return linear(lambda s, x: (a + b * s) * x, f"({a}+{b}s)x")
    if name == "chaos":
        g = ProductKernel(tuple(_region(r, T) for r in spec["factors"]))
        return chaos_functional(g, m)
    raise ValueError(f"unknown functional {name!r}; known: {', '.join(FUNCTIONALS)}")


def build_field(spec: Mapping, m: JumpMeasure, T: float, eps: float) -> RandomField:
    name = spec.get("name")
    if name == "constant":
        return constant_field(float(spec.get("c", 1.0)))
    if name == "count-before":
        return count_before_field()
    if name == "polynomial":
        a, b, c = (float(spec.get(k, 0.0)) for k in ("a", "b", "c"))
        return deterministic_field(lambda s, x: a + b * s + c * x, f"{a}+{b}s+{c}x")
    if name == "functional-times":
        G = build_functional(spec["functional"], m, T, eps)
        a, b = float(spec.get("a", 1.0)), float(spec.get("b", 0.0))
        return deterministic_field(lambda s, x: a + b * s) * G
    raise ValueError(f"unknown field {name!r}; known: {', '.join(FIELDS)}")


def random_functional_spec(rng: np.random.Generator, T: float) -> dict:
    """A random catalog functional; every choice is piecewise polynomial in the added time."""
    kind = rng.integers(5)
    if kind == 0:
        return {"name": "count"}
    if kind == 1:
        return {"name": "path", "t": float(rng.uniform(0.2, 1.0) * T)}
    if kind == 2:
        return {"name": "exp-price", "s0": float(rng.uniform(0.5, 2.0)),
                "r": float(rng.uniform(0.0, 0.1)), "t": float(rng.uniform(0.2, 1.0) * T)}
    if kind == 3:
        return {"name": "linear", "a": float(rng.normal()), "b": float(rng.normal())}
    lo = float(rng.uniform(0.0, 0.5) * T)
    return {"name": "count", "region": {"t_min": lo, "t_max": lo + 0.5 * T}}


def random_field_spec(rng: np.random.Generator, T: float) -> dict:
    kind = rng.integers(4)
    if kind == 0:
        return {"name": "constant", "c": float(rng.normal())}
    if kind == 1:
        return {"name": "count-before"}
    if kind == 2:
        return {"name": "polynomial", "a": float(rng.normal()), "b": float(rng.normal()),
                "c": float(rng.normal())}
    return {"name": "functional-times", "functional": random_functional_spec(rng, T),
            "a": float(rng.normal()), "b": float(rng.normal())}
