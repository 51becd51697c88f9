"""Exact arithmetic on the free rank-3 step-2 Carnot group.

Points are pairs (x, y) where x is a 3-vector and y stores the strict
upper triangle (y12, y13, y23) of a skew-symmetric matrix.  All group
operations are low-degree polynomials, so everything here is exact up to
floating-point rounding; no integrators are involved.
"""
from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "GroupElement",
    "DilationWeights",
    "identity",
    "multiply",
    "inverse",
    "dilate",
    "flow_const",
]


@dataclass(frozen=True)
class GroupElement:
    """A group point in exponential coordinates.

    ``y`` stores (y12, y13, y23); entries y_ji with j > i are never stored,
    only derived as negatives.
    """

    x: tuple[float, float, float]
    y: tuple[float, float, float]

    @staticmethod
    def of(x, y) -> "GroupElement":
        x = tuple(float(v) for v in x)
        y = tuple(float(v) for v in y)
        if len(x) != 3 or len(y) != 3:
            raise ValueError("GroupElement needs a 3-vector x and a 3-vector y")
        return GroupElement(x, y)


@dataclass(frozen=True)
class DilationWeights:
    """Strictly positive anisotropic scaling weights (c1, c2, c3)."""

    c: tuple[float, float, float]

    def __post_init__(self):
        if len(self.c) != 3:
            raise ValueError("DilationWeights needs exactly 3 entries")
        if any(ci <= 0.0 for ci in self.c):
            raise ValueError(f"dilation weights must be strictly positive, got {self.c}")


def identity() -> GroupElement:
    return GroupElement((0.0, 0.0, 0.0), (0.0, 0.0, 0.0))


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    """Group product: first layers add, second layer picks up x x'^T - x' x^T."""
    ax, bx = a.x, b.x
    w12 = ax[0] * bx[1] - ax[1] * bx[0]
    w13 = ax[0] * bx[2] - ax[2] * bx[0]
    w23 = ax[1] * bx[2] - ax[2] * bx[1]
    return GroupElement(
        (ax[0] + bx[0], ax[1] + bx[1], ax[2] + bx[2]),
        (a.y[0] + b.y[0] + w12, a.y[1] + b.y[1] + w13, a.y[2] + b.y[2] + w23),
    )


def inverse(g: GroupElement) -> GroupElement:
    """Group inverse: componentwise negation (the commutator term cancels)."""
    return GroupElement(
        (-g.x[0], -g.x[1], -g.x[2]),
        (-g.y[0], -g.y[1], -g.y[2]),
    )


def dilate(w: DilationWeights, g: GroupElement) -> GroupElement:
    """Anisotropic scaling x_i -> c_i x_i, y_ij -> c_i c_j y_ij (an automorphism)."""
    c1, c2, c3 = w.c
    return GroupElement(
        (c1 * g.x[0], c2 * g.x[1], c3 * g.x[2]),
        (c1 * c2 * g.y[0], c1 * c3 * g.y[1], c2 * c3 * g.y[2]),
    )


def flow_const(g: GroupElement, u, t: float) -> GroupElement:
    """Endpoint of the constant-control trajectory from g with control u for time t.

    Equals right translation by (t*u, 0): along the flow the rates
    x_i u_j - x_j u_i are constant in time, so the endpoint is exact.
    """
    if t < 0:
        raise ValueError(f"duration must be nonnegative, got {t}")
    u = tuple(float(v) for v in u)
    if len(u) != 3:
        raise ValueError("control must be a 3-vector")
    if any(ui < 0 for ui in u):
        raise ValueError(f"controls must be componentwise nonnegative, got {u}")
    return multiply(g, GroupElement((t * u[0], t * u[1], t * u[2]), (0.0, 0.0, 0.0)))
