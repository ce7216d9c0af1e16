"""Jump configurations: the sample points of the canonical space.

A configuration is a finite, duplicate-free set of ``(time, size)`` jump
points kept in (time, size) order. The empty configuration plays the role of
the distinguished element with no jumps.
"""
from __future__ import annotations

import csv
import io
from typing import Iterable, Iterator

import numpy as np

from .measure import JumpMeasure

Point = tuple[float, float]

__all__ = ["JumpConfiguration", "EMPTY", "add_point", "remove_point", "project",
           "path_value", "restrict_before"]


class JumpConfiguration:
    """Immutable sorted set of jump points.

    Point equality is exact floating-point equality on both coordinates.
    """

    __slots__ = ("_points", "_times", "_sizes")

    def __init__(self, points: Iterable[Point] = ()):
        pts = sorted({(float(t), float(x)) for t, x in points})
        for t, x in pts:
            if x == 0.0:
                raise ValueError("jump sizes must be nonzero")
            if t < 0.0 or t != t:
                raise ValueError(f"invalid jump time {t}")
        self._points = tuple(pts)
        self._times = None
        self._sizes = None

    @classmethod
    def _from_sorted(cls, pts: tuple[Point, ...]) -> "JumpConfiguration":
        obj = cls.__new__(cls)
        obj._points = pts
        obj._times = None
        obj._sizes = None
        return obj

    @classmethod
    def from_arrays(cls, times, sizes) -> "JumpConfiguration":
        return cls(zip(np.asarray(times, float).tolist(), np.asarray(sizes, float).tolist()))

    @property
    def points(self) -> tuple[Point, ...]:
        return self._points

    @property
    def times(self) -> np.ndarray:
        if self._times is None:
            self._times = np.fromiter((p[0] for p in self._points), float, len(self._points))
        return self._times

    @property
    def sizes(self) -> np.ndarray:
        if self._sizes is None:
            self._sizes = np.fromiter((p[1] for p in self._points), float, len(self._points))
        return self._sizes

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self._points)

    def __contains__(self, theta) -> bool:
        return (float(theta[0]), float(theta[1])) in self._points

    def __eq__(self, other) -> bool:
        return isinstance(other, JumpConfiguration) and self._points == other._points

    def __hash__(self) -> int:
        return hash(self._points)

    def __repr__(self) -> str:
        return f"JumpConfiguration({list(self._points)!r})"

    @property
    def is_empty(self) -> bool:
        return not self._points

    def union(self, other: "JumpConfiguration") -> "JumpConfiguration":
        return JumpConfiguration(self._points + other._points)

    def filter(self, keep) -> "JumpConfiguration":
        return JumpConfiguration._from_sorted(tuple(p for p in self._points if keep(p)))

    # serialisation -------------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for t, x in self._points:
            w.writerow([repr(t), repr(x)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "JumpConfiguration":
        rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
        return cls((float(t), float(x)) for t, x in rows)


EMPTY = JumpConfiguration()


def add_point(w: JumpConfiguration, theta: Point) -> JumpConfiguration:
    """Insert ``theta``; a point already present leaves ``w`` unchanged."""
    t, x = float(theta[0]), float(theta[1])
    if x == 0.0:
        raise ValueError("cannot add a jump of size 0")
    if t < 0.0:
        raise ValueError("jump times are nonnegative")
    pts = w.points
    p = (t, x)
    # bisect on tuples keeps (time, size) order
    lo, hi = 0, len(pts)
    while lo < hi:
        mid = (lo + hi) // 2
        if pts[mid] < p:
            lo = mid + 1
        else:
            hi = mid
    if lo < len(pts) and pts[lo] == p:
        return w
    return JumpConfiguration._from_sorted(pts[:lo] + (p,) + pts[lo:])


def remove_point(w: JumpConfiguration, theta: Point) -> JumpConfiguration:
    """Drop ``theta`` if present, else return ``w`` unchanged."""
    p = (float(theta[0]), float(theta[1]))
    pts = w.points
    if p not in pts:
        return w
    i = pts.index(p)
    return JumpConfiguration._from_sorted(pts[:i] + pts[i + 1:])


def project(w: JumpConfiguration, m: int) -> JumpConfiguration:
    """Keep the points with time <= m and |size| > 1/m."""
    if m < 1:
        raise ValueError("projection level must be >= 1")
    cut = 1.0 / m
    return w.filter(lambda p: p[0] <= m and abs(p[1]) > cut)


def restrict_before(w: JumpConfiguration, s: float) -> JumpConfiguration:
    """The points with time strictly before ``s``."""
    return w.filter(lambda p: p[0] < s)


def path_value(w: JumpConfiguration, t: float, m: JumpMeasure, eps: float) -> float:
    """``J_t``: sum of sizes up to time t minus the small-jump compensator."""
    jumps = sum(x for s, x in w.points if s <= t)
    return jumps - m.compensator(t, eps)
