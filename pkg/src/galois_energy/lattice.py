"""Energies and Pareto fronts.

An energy is a fixed-length vector whose components are naturals extended
with infinity, ordered component-wise.  This order makes the energy set a
bounded join-semilattice: suprema of finite sets exist (component-wise
maximum) and every subset has minimal elements, so upward-closed sets are
represented by the finite antichain of their minima (a Pareto front).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DimensionMismatch

INF = math.inf

Component = int | float  # a natural number, or INF


def _check_component(c: Component) -> None:
    if isinstance(c, int) and not isinstance(c, bool):
        if c >= 0:
            return
    elif isinstance(c, float) and c == INF:
        return
    raise ValueError(f"energy component must be a natural or inf, got {c!r}")


@dataclass(frozen=True)
class Energy:
    """An immutable vector of extended naturals."""

    components: tuple[Component, ...]

    def __post_init__(self) -> None:
        for c in self.components:
            _check_component(c)

    @property
    def dimension(self) -> int:
        return len(self.components)

    @property
    def is_finite(self) -> bool:
        return all(c != INF for c in self.components)

    @classmethod
    def of(cls, *components: Component) -> Energy:
        return cls(tuple(components))

    @classmethod
    def zero(cls, dimension: int) -> Energy:
        return cls((0,) * dimension)

    @classmethod
    def parse(cls, text: str) -> Energy:
        """Parse the textual rendering, e.g. ``"0,2,0,10"`` or ``"inf,3"``."""
        parts = [p.strip() for p in text.split(",")]
        comps: list[Component] = []
        for p in parts:
            if p == "inf":
                comps.append(INF)
            else:
                try:
                    comps.append(int(p))
                except ValueError:
                    raise ValueError(f"bad energy component {p!r} in {text!r}") from None
        return cls(tuple(comps))

    def render(self) -> str:
        """Comma-separated components, ``inf`` for infinity."""
        return ",".join("inf" if c == INF else str(c) for c in self.components)

    def __str__(self) -> str:
        return self.render()

    def __le__(self, other: Energy) -> bool:
        return leq(self, other)


def _require_same_dimension(a: Energy, b: Energy) -> None:
    if a.dimension != b.dimension:
        raise DimensionMismatch(f"dimension {a.dimension} vs {b.dimension}")


def leq(a: Energy, b: Energy) -> bool:
    """Component-wise order; every value is below infinity."""
    _require_same_dimension(a, b)
    return all(x <= y for x, y in zip(a.components, b.components))


def sup2(a: Energy, b: Energy) -> Energy:
    """Least upper bound: component-wise maximum (infinity absorbs)."""
    _require_same_dimension(a, b)
    return Energy(tuple(max(x, y) for x, y in zip(a.components, b.components)))


@dataclass(frozen=True)
class ParetoFront:
    """A finite antichain of energies, canonically sorted.

    Represents the upward-closed set of all energies dominating some
    element.  Elements are kept in ascending lexicographic order of their
    components so equal fronts compare and render identically.
    Construct through :func:`minimize`, which establishes the antichain
    property; the constructor only checks cheap shape invariants.
    """

    elements: tuple[Energy, ...]

    def __post_init__(self) -> None:
        dims = {e.dimension for e in self.elements}
        if len(dims) > 1:
            raise DimensionMismatch(f"mixed dimensions in front: {sorted(dims)}")
        keys = [e.components for e in self.elements]
        if keys != sorted(set(keys)):
            raise ValueError("front elements must be unique and lexicographically sorted")

    @classmethod
    def empty(cls) -> ParetoFront:
        return cls(())

    @property
    def is_empty(self) -> bool:
        return not self.elements

    def __iter__(self) -> Iterator[Energy]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def render(self) -> str:
        return "; ".join(e.render() for e in self.elements)


def minimize(energies: Iterable[Energy]) -> ParetoFront:
    """Keep exactly the minimal elements, preserving the upward closure.

    Pairwise dominance filter, quadratic in the number of candidates.
    """
    unique = {e.components: e for e in energies}
    items = list(unique.values())
    if items:
        dims = {e.dimension for e in items}
        if len(dims) > 1:
            raise DimensionMismatch(f"mixed dimensions: {sorted(dims)}")
    minimal = [
        e
        for e in items
        if not any(o.components != e.components and leq(o, e) for o in items)
    ]
    minimal.sort(key=lambda e: e.components)
    return ParetoFront(tuple(minimal))


def member_upward(front: ParetoFront, e: Energy) -> bool:
    """Is ``e`` in the upward closure of the front?"""
    return any(leq(m, e) for m in front)
