"""Heisenberg group arithmetic and its phase-space representation on grids.

Group elements are (s, x, y) with s real and x, y in R^n, multiplying as

    (s, x, y) (s', x', y') = (s + s' + w(x, y; x', y') / 2, x + x', y + y')

where w(x, y; x', y') = x.y' - x'.y is the symplectic form.  The coadjoint
action on dual coordinates (hbar, q, p) is (hbar, q + hbar y, p - hbar x);
its orbits are the hyperplanes of fixed hbar != 0 together with the single
points at hbar = 0.

For hbar != 0 the group acts on complex functions over a sampled (q, p)
box by

    [rho(s, x, y) f](q, p) = exp(-2 pi i (hbar s + q.x + p.y))
                             f(q - hbar y / 2, p + hbar x / 2),

realized here with periodic linear interpolation for the off-grid shifts.
At hbar = 0 the action collapses to the one-dimensional characters
exp(-2 pi i (q.x + p.y)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grids import Axis, centered_diff, mesh, periodic_shift, second_diff

TWO_PI = 2.0 * math.pi


@dataclass
class HeisenbergElement:
    s: float
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.x = np.atleast_1d(np.asarray(self.x, dtype=float))
        self.y = np.atleast_1d(np.asarray(self.y, dtype=float))
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise ValueError("x and y must be 1-d vectors of equal length")
        self.s = float(self.s)

    @property
    def n(self) -> int:
        return len(self.x)


def h_identity(n: int) -> HeisenbergElement:
    return HeisenbergElement(0.0, np.zeros(n), np.zeros(n))


def symplectic_form(x, y, x2, y2) -> float:
    """w(x, y; x', y') = x.y' - x'.y."""
    x, y, x2, y2 = (np.atleast_1d(np.asarray(v, dtype=float)) for v in (x, y, x2, y2))
    if not (x.shape == y.shape == x2.shape == y2.shape):
        raise ValueError("symplectic form needs four vectors of equal length")
    return float(x @ y2 - x2 @ y)


def h_mul(g1: HeisenbergElement, g2: HeisenbergElement) -> HeisenbergElement:
    if g1.n != g2.n:
        raise ValueError("group elements of different dimension")
    s = g1.s + g2.s + 0.5 * symplectic_form(g1.x, g1.y, g2.x, g2.y)
    return HeisenbergElement(s, g1.x + g2.x, g1.y + g2.y)


def h_inv(g: HeisenbergElement) -> HeisenbergElement:
    # w(x, y; -x, -y) = 0, so the central part just flips sign
    return HeisenbergElement(-g.s, -g.x, -g.y)


@dataclass
class CoadjointPoint:
    hbar: float
    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        self.q = np.atleast_1d(np.asarray(self.q, dtype=float))
        self.p = np.atleast_1d(np.asarray(self.p, dtype=float))
        if self.q.shape != self.p.shape:
            raise ValueError("q and p must have equal length")
        self.hbar = float(self.hbar)


def coadjoint(g: HeisenbergElement, pt: CoadjointPoint) -> CoadjointPoint:
    """(hbar, q, p) -> (hbar, q + hbar y, p - hbar x).

    hbar is fixed, so orbits are full (q, p) planes for hbar != 0 and
    single points for hbar = 0.  The (q, p) increments depend only on the
    abelianized (x, y) part, hence left and right composition act alike.
    """
    if g.n != len(pt.q):
        raise ValueError("dimension mismatch between group element and point")
    return CoadjointPoint(pt.hbar, pt.q + pt.hbar * g.y, pt.p - pt.hbar * g.x)


def character_rep(q, p, g: HeisenbergElement) -> complex:
    """One-dimensional character exp(-2 pi i (q.x + p.y)); s drops out."""
    q = np.atleast_1d(np.asarray(q, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    return complex(np.exp(-2j * math.pi * (q @ g.x + p @ g.y)))


@dataclass
class GridFunction:
    """Complex samples over a rectangular periodic (q, p) box.

    Axes are ordered q_1 .. q_n, p_1 .. p_n; `values` has one dimension per
    axis.
    """

    q_axes: tuple[Axis, ...]
    p_axes: tuple[Axis, ...]
    values: np.ndarray

    def __post_init__(self):
        self.q_axes = tuple(self.q_axes)
        self.p_axes = tuple(self.p_axes)
        if len(self.q_axes) != len(self.p_axes):
            raise ValueError("need as many q axes as p axes")
        shape = tuple(ax.num for ax in self.q_axes + self.p_axes)
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != shape:
            raise ValueError(f"sample shape {self.values.shape} != grid shape {shape}")

    @property
    def n(self) -> int:
        return len(self.q_axes)

    @property
    def axes(self) -> tuple[Axis, ...]:
        return self.q_axes + self.p_axes

    def meshes(self) -> tuple[list[np.ndarray], list[np.ndarray]]:
        grids = mesh(self.axes)
        return grids[: self.n], grids[self.n :]

    @classmethod
    def from_callable(cls, q_axes, p_axes, fn) -> "GridFunction":
        grids = mesh(tuple(q_axes) + tuple(p_axes))
        n = len(q_axes)
        return cls(tuple(q_axes), tuple(p_axes), np.asarray(fn(grids[:n], grids[n:]), dtype=complex))

    def copy_with(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(self.q_axes, self.p_axes, values)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0


def vacuum(hbar: float, q_axes, p_axes) -> GridFunction:
    """Gaussian ground vector exp(-2 pi (|q|^2 + |p|^2) / hbar)."""
    if hbar <= 0:
        raise ValueError("vacuum needs hbar > 0")
    return GridFunction.from_callable(
        q_axes,
        p_axes,
        lambda qs, ps: np.exp(-TWO_PI * (sum(q * q for q in qs) + sum(p * p for p in ps)) / hbar),
    )


def rho_apply(hbar: float, g: HeisenbergElement, f: GridFunction) -> GridFunction:
    """Apply rho(g) at hbar != 0 to sampled f.

    The shifted lookup points q - hbar y / 2, p + hbar x / 2 generally fall
    off-grid and are resolved by periodic linear interpolation, so the
    representation property holds only up to an interpolation error budget
    (see :func:`interpolation_error_budget`).
    """
    if hbar == 0:
        raise ValueError("hbar = 0 has no grid action; use character_rep")
    if g.n != f.n:
        raise ValueError("dimension mismatch between group element and grid")
    out = f.values
    for j, ax in enumerate(f.q_axes):
        shift = -hbar * g.y[j] / 2.0
        if shift != 0.0:
            out = periodic_shift(out, j, shift / ax.step)
    for j, ax in enumerate(f.p_axes):
        shift = hbar * g.x[j] / 2.0
        if shift != 0.0:
            out = periodic_shift(out, f.n + j, shift / ax.step)
    qs, ps = f.meshes()
    phase_arg = hbar * g.s
    phase_arg = phase_arg + sum(q * xj for q, xj in zip(qs, g.x))
    phase_arg = phase_arg + sum(p * yj for p, yj in zip(ps, g.y))
    return f.copy_with(np.exp(-2j * math.pi * phase_arg) * out)


def derived_rep_apply(hbar: float, kind: str, f: GridFunction, j: int = 0) -> GridFunction:
    """Generators of the derived action: S, X_j or Y_j.

        S   -> -2 pi i hbar f
        X_j ->  hbar d/dp_j f + (i/2) q_j f
        Y_j -> -hbar d/dq_j f + (i/2) p_j f

    Derivatives are centered second-order differences with periodic wrap.
    """
    if kind == "S":
        return f.copy_with(-2j * math.pi * hbar * f.values)
    if not 0 <= j < f.n:
        raise ValueError(f"direction {j} outside 0..{f.n - 1}")
    qs, ps = f.meshes()
    if kind == "X":
        dp = centered_diff(f.values, f.n + j, f.p_axes[j])
        return f.copy_with(hbar * dp + 0.5j * qs[j] * f.values)
    if kind == "Y":
        dq = centered_diff(f.values, j, f.q_axes[j])
        return f.copy_with(-hbar * dq + 0.5j * ps[j] * f.values)
    raise ValueError("kind must be 'S', 'X' or 'Y'")


def cauchy_riemann_apply(hbar: float, j: int, f: GridFunction) -> GridFunction:
    """Annihilation-type operator (hbar/2)(d/dp_j + i d/dq_j) + 2 pi (p_j + i q_j).

    Its numerical kernel (up to the finite-difference error) is spanned by
    the Gaussian :func:`vacuum` and its shifts: for f = exp(-2 pi (q^2+p^2)/hbar)
    the derivative term contributes -2 pi (p + i q) f exactly.
    """
    if hbar == 0:
        raise ValueError("hbar must be nonzero")
    if not 0 <= j < f.n:
        raise ValueError(f"direction {j} outside 0..{f.n - 1}")
    qs, ps = f.meshes()
    dq = centered_diff(f.values, j, f.q_axes[j])
    dp = centered_diff(f.values, f.n + j, f.p_axes[j])
    out = 0.5 * hbar * (dp + 1j * dq) + TWO_PI * (ps[j] + 1j * qs[j]) * f.values
    return f.copy_with(out)


def interpolation_error_budget(f: GridFunction) -> float:
    """Upper estimate of the periodic linear-interpolation error for f.

    Linear interpolation at a constant fractional offset errs by at most
    step^2 |f''| / 8 per axis; |f''| step^2 is estimated by the maximum raw
    second difference of the samples.
    """
    total = 0.0
    for axis_index in range(f.values.ndim):
        total += float(np.max(np.abs(second_diff(f.values, axis_index)))) / 8.0
    return total
