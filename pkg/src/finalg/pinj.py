"""Partial injective transformations of a finite point set.

Maps act on the right: ``compose(f, g)`` first applies ``f`` and then ``g``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

UNDEFINED = -1


@dataclass(frozen=True)
class PartialInjection:
    """A partial one-to-one self-map of ``{0, ..., degree - 1}``.

    ``targets[x]`` is the image of ``x`` or ``UNDEFINED``.
    """

    targets: tuple[int, ...]

    def __post_init__(self):
        n = len(self.targets)
        if n < 1:
            raise ValueError("degree must be positive")
        seen = set()
        for x, y in enumerate(self.targets):
            if y == UNDEFINED:
                continue
            if not 0 <= y < n:
                raise ValueError(f"target {y} of point {x} out of range for degree {n}")
            if y in seen:
                raise ValueError(f"point {y} is hit twice; map is not injective")
            seen.add(y)

    @classmethod
    def from_dict(cls, degree: int, mapping: Mapping[int, int]) -> "PartialInjection":
        targets = [UNDEFINED] * degree
        for x, y in mapping.items():
            if not 0 <= x < degree:
                raise ValueError(f"source point {x} out of range for degree {degree}")
            targets[x] = y
        return cls(tuple(targets))

    @property
    def degree(self) -> int:
        return len(self.targets)

    def __call__(self, x: int) -> int | None:
        y = self.targets[x]
        return None if y == UNDEFINED else y

    def __mul__(self, other: "PartialInjection") -> "PartialInjection":
        return compose(self, other)

    def as_dict(self) -> dict[int, int]:
        return {x: y for x, y in enumerate(self.targets) if y != UNDEFINED}

    def __str__(self):
        return "{" + ", ".join(f"{x}→{y}" for x, y in self.as_dict().items()) + "}"

    def sort_key(self):
        # rank descending, then targets with undefined points sorting last
        n = self.degree
        return (-rank(self), tuple(n if y == UNDEFINED else y for y in self.targets))


def compose(f: PartialInjection, g: PartialInjection) -> PartialInjection:
    if f.degree != g.degree:
        raise ValueError(f"degree mismatch: {f.degree} vs {g.degree}")
    gt = g.targets
    return PartialInjection(tuple(UNDEFINED if y == UNDEFINED else gt[y] for y in f.targets))


def invert(f: PartialInjection) -> PartialInjection:
    targets = [UNDEFINED] * f.degree
    for x, y in enumerate(f.targets):
        if y != UNDEFINED:
            targets[y] = x
    return PartialInjection(tuple(targets))


def domain(f: PartialInjection) -> frozenset[int]:
    return frozenset(x for x, y in enumerate(f.targets) if y != UNDEFINED)


def image(f: PartialInjection) -> frozenset[int]:
    return frozenset(y for y in f.targets if y != UNDEFINED)


def rank(f: PartialInjection) -> int:
    return sum(1 for y in f.targets if y != UNDEFINED)


def identity_map(n: int) -> PartialInjection:
    return PartialInjection(tuple(range(n)))


def empty_map(n: int) -> PartialInjection:
    return PartialInjection((UNDEFINED,) * n)


def partial_identity(n: int, points: Iterable[int]) -> PartialInjection:
    return PartialInjection.from_dict(n, {x: x for x in points})


def is_idempotent(f: PartialInjection) -> bool:
    return all(y == UNDEFINED or x == y for x, y in enumerate(f.targets))
