"""Uniform sampling axes and small finite-difference helpers.

A periodic axis samples one full period with the right endpoint excluded,
so plain rectangle sums integrate trigonometric data exactly below the
Nyquist frequency and ``np.roll`` implements the wrap.  A non-periodic
axis is used for marching coordinates where the endpoints matter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Axis:
    lo: float
    step: float
    num: int
    periodic: bool = True

    def __post_init__(self):
        if self.step <= 0.0:
            raise ValueError("axis step must be positive")
        if self.num < 1:
            raise ValueError("axis needs at least one sample")

    @property
    def points(self) -> np.ndarray:
        return self.lo + self.step * np.arange(self.num)

    @property
    def period(self) -> float:
        return self.step * self.num

    @staticmethod
    def centered(radius: float, num: int, periodic: bool = True) -> "Axis":
        """Axis covering [-radius, radius) with `num` samples."""
        return Axis(-radius, 2.0 * radius / num, num, periodic)

    @staticmethod
    def for_period(period: float, num: int) -> "Axis":
        """Periodic axis covering [0, period)."""
        return Axis(0.0, period / num, num, True)


def mesh(axes) -> list[np.ndarray]:
    return list(np.meshgrid(*[ax.points for ax in axes], indexing="ij"))


def centered_diff(values: np.ndarray, axis_index: int, axis: Axis) -> np.ndarray:
    """Second-order first derivative along one axis.

    Periodic axes wrap; bounded axes fall back to one-sided second-order
    stencils at the two ends.
    """
    if axis.num < 3:
        raise ValueError("need at least 3 samples for centered differences")
    if axis.periodic:
        return (np.roll(values, -1, axis_index) - np.roll(values, 1, axis_index)) / (2.0 * axis.step)
    return np.gradient(values, axis.step, axis=axis_index, edge_order=2)


def second_diff(values: np.ndarray, axis_index: int) -> np.ndarray:
    """Raw second difference f[i+1] - 2 f[i] + f[i-1] with periodic wrap."""
    return np.roll(values, -1, axis_index) - 2.0 * values + np.roll(values, 1, axis_index)


def periodic_shift(values: np.ndarray, axis_index: int, shift_in_steps: float) -> np.ndarray:
    """Resample f at points displaced by a constant offset, wrapping around.

    `shift_in_steps` is the displacement divided by the axis step.  Off-grid
    offsets are resolved by linear interpolation between the two bracketing
    samples, which costs O(step^2 * |f''|) in accuracy.
    """
    k = math.floor(shift_in_steps)
    w = shift_in_steps - k
    rolled = np.roll(values, -k, axis_index)
    if w == 0.0:
        return rolled
    return (1.0 - w) * rolled + w * np.roll(values, -(k + 1), axis_index)


def cell_volume(axes) -> float:
    vol = 1.0
    for ax in axes:
        vol *= ax.step
    return vol
