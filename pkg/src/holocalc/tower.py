"""The compactified naturals as a tower of finite levels.

Level i is the finite set {0, ..., i, oo}; the transition map from level j
down to level i keeps points <= i and collapses everything else to oo.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["INFINITY", "TowerPoint", "level_points", "project"]


@dataclass(frozen=True)
class TowerPoint:
    """A point of some level: a natural number or the point at infinity (index None)."""

    index: int | None

    def __post_init__(self):
        if self.index is not None and self.index < 0:
            raise ValueError("finite tower points need a nonnegative index")

    @classmethod
    def finite(cls, n: int) -> "TowerPoint":
        return cls(n)

    @classmethod
    def infinity(cls) -> "TowerPoint":
        return cls(None)

    @property
    def is_infinity(self) -> bool:
        return self.index is None

    def __repr__(self) -> str:
        return "oo" if self.index is None else f"pt({self.index})"


INFINITY = TowerPoint(None)


def _check_member(x: TowerPoint, level: int) -> None:
    if level < 0:
        raise ValueError("levels are indexed by nonnegative integers")
    if not x.is_infinity and x.index > level:
        raise ValueError(f"point outside level: {x!r} not in level {level}")


def project(j: int, i: int, x: TowerPoint) -> TowerPoint:
    """Transition map from level j to level i <= j."""
    if i < 0 or j < i:
        raise ValueError("projection requires j >= i >= 0")
    _check_member(x, j)
    if x.is_infinity or x.index > i:
        return INFINITY
    return x


def level_points(i: int) -> list[TowerPoint]:
    """The i+2 points of level i, finite part first, infinity last."""
    if i < 0:
        raise ValueError("levels are indexed by nonnegative integers")
    return [TowerPoint.finite(n) for n in range(i + 1)] + [INFINITY]
