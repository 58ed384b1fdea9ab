"""Axis-aligned rectangles with optionally open sides."""

from __future__ import annotations

from dataclasses import dataclass

from ._validation import InvalidArgumentError


@dataclass(frozen=True)
class Rect:
    """Rectangle ``[x0, x1] x [y0, y1]``.

    Each side can be made open with the ``open_*`` flags; a closed rectangle
    with ``x0 == x1`` or ``y0 == y1`` is a segment or point.
    """

    x0: float
    x1: float
    y0: float
    y1: float
    open_left: bool = False
    open_right: bool = False
    open_bottom: bool = False
    open_top: bool = False

    def __post_init__(self):
        if not (self.x0 <= self.x1 and self.y0 <= self.y1):
            raise InvalidArgumentError(f"inverted rectangle {self!r}")

    @classmethod
    def from_bounds(cls, bounds) -> "Rect":
        """Build from ``(x0, y0, x1, y1)``, the CLI window order."""
        x0, y0, x1, y1 = (float(b) for b in bounds)
        return cls(x0, x1, y0, y1)

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return (self.x0, self.y0, self.x1, self.y1)

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    def is_empty(self) -> bool:
        if self.x0 == self.x1 and (self.open_left or self.open_right):
            return True
        if self.y0 == self.y1 and (self.open_bottom or self.open_top):
            return True
        return False

    def contains_point(self, x: float, y: float) -> bool:
        ok_x = (x > self.x0 if self.open_left else x >= self.x0) and (
            x < self.x1 if self.open_right else x <= self.x1
        )
        ok_y = (y > self.y0 if self.open_bottom else y >= self.y0) and (
            y < self.y1 if self.open_top else y <= self.y1
        )
        return ok_x and ok_y

    def meets_closed(self, a0: float, a1: float, b0: float, b1: float) -> bool:
        """Whether the closed rectangle ``[a0,a1] x [b0,b1]`` meets this one."""
        if self.is_empty():
            return False
        ok_x = (a1 > self.x0 if self.open_left else a1 >= self.x0) and (
            a0 < self.x1 if self.open_right else a0 <= self.x1
        )
        if not ok_x:
            return False
        return (b1 > self.y0 if self.open_bottom else b1 >= self.y0) and (
            b0 < self.y1 if self.open_top else b0 <= self.y1
        )

    def inside_closed(self, a0: float, a1: float, b0: float, b1: float) -> bool:
        """Whether this rectangle is a subset of ``[a0,a1] x [b0,b1]``."""
        if self.is_empty():
            return True
        return a0 <= self.x0 and self.x1 <= a1 and b0 <= self.y0 and self.y1 <= b1

    def within(self, other: "Rect") -> bool:
        return self.inside_closed(other.x0, other.x1, other.y0, other.y1)
