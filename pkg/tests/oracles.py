"""Independent numerical oracles shared by the test modules.

Nothing here calls the bracket kernels under test: mollified masses are
brute-force Gauss-Hermite quadratures of the defining integrals with
delta atoms replaced by narrow Gaussians, and the exponential oracle sums
the Clifford power series term by term.
"""
import math
from functools import lru_cache
from itertools import product

import numpy as np

from pmech.clifford import CliffordElement


@lru_cache(maxsize=None)
def _hermgauss(nodes):
    x, w = np.polynomial.hermite.hermgauss(nodes)
    return x, w / math.sqrt(math.pi)


def mollified_pair_mass(center_a, center_b, kernel, phase, sigma, nodes=20):
    """Total mass of a pairwise atom product with Gaussian-mollified deltas.

    center_a, center_b: coordinate tuples of the two atoms (the second atom
    enters through the convolution variables u = coords - coords').
    kernel: scalar -> scalar applied to the phase value.
    phase: callable(avars, bvars) -> array, the bilinear form evaluated on
    the first atom's variables and the convolution variables.

    Integrates kernel(phase) against unit-mass Gaussians of width sigma
    centered at the two atoms, over all 2 * len(center) dimensions.
    """
    center_a = [float(c) for c in center_a]
    center_b = [float(c) for c in center_b]
    t, w = _hermgauss(nodes)
    scale = math.sqrt(2.0) * sigma
    axes = [c + scale * t for c in center_a] + [c + scale * t for c in center_b]
    grids = np.meshgrid(*axes, indexing="ij", sparse=True)
    avars = grids[: len(center_a)]
    bvars = grids[len(center_a):]
    full_shape = (nodes,) * len(axes)
    values = np.broadcast_to(kernel(phase(avars, bvars)), full_shape)
    # contract one leading axis with the Gauss-Hermite weights at a time
    for _ in range(len(axes)):
        values = np.tensordot(values, w, axes=([0], [0]))
    return complex(values)


def mollified_star_mass(xa, ya, xb, yb, hbar, sigma, nodes=20):
    """Mollified twisted-convolution mass for scalar-position atoms (n = 1)."""

    def phase(avars, bvars):
        xp, yp = avars
        u, v = bvars
        return u * yp - v * xp

    return mollified_pair_mass(
        (xa, ya), (xb, yb), lambda t: np.exp(1j * math.pi * hbar * t), phase, sigma, nodes
    )


def mollified_bracket_mass(xa, ya, xb, yb, hbar, sigma, nodes=20):
    """Mollified bracket mass with the sine kernel, scalar positions (n = 1)."""

    def phase(avars, bvars):
        xp, yp = avars
        u, v = bvars
        return u * yp - v * xp

    if hbar == 0.0:
        kern = lambda t: 4.0 * math.pi ** 2 * t
    else:
        kern = lambda t: (4.0 * math.pi / hbar) * np.sin(math.pi * hbar * t)
    return mollified_pair_mass((xa, ya), (xb, yb), kern, phase, sigma, nodes)


def mollified_field_mass(xa, ya, xb, yb, h_j, j, sigma, nodes=10):
    """Mollified channel-j bracket mass; x scalar, y a vector of length n+1."""
    ya = list(ya)
    yb = list(yb)

    def phase(avars, bvars):
        xp = avars[0]
        yp = avars[1:]
        u = bvars[0]
        v = bvars[1:]
        return u * yp[j] - v[j] * xp

    if h_j == 0.0:
        kern = lambda t: 4.0 * math.pi ** 2 * t
    else:
        kern = lambda t: (4.0 * math.pi / h_j) * np.sin(math.pi * h_j * t)
    return mollified_pair_mass([xa] + ya, [xb] + yb, kern, phase, sigma, nodes)


def richardson(value_fn, sigma):
    """Second-order Richardson extrapolation in sigma^2 toward sigma -> 0."""
    m1 = value_fn(sigma)
    m2 = value_fn(sigma / 2.0)
    return (4.0 * m2 - m1) / 3.0


def series_exp(m: CliffordElement, terms: int = 40) -> CliffordElement:
    """exp(m) by direct power-series summation."""
    out = CliffordElement.scalar(m.signature, 1.0)
    power = CliffordElement.scalar(m.signature, 1.0)
    for k in range(1, terms):
        power = power * m * (1.0 / k)
        out = out + power
    return out


def character_derivative(atoms, Q, P, dq=0, dp=0):
    """Pointwise value of (d/dq)^dq (d/dp)^dp of a sum of plane-wave atoms.

    atoms: iterable of (coeff, x, y) with scalar x, y (dimension 1); each
    atom is coeff * exp(-2 pi i (Q x + P y)), so derivatives only scale.
    """
    out = np.zeros(np.broadcast(Q, P).shape, dtype=complex)
    for coeff, x, y in atoms:
        term = coeff * np.exp(-2j * math.pi * (Q * x + P * y))
        out += term * (-2j * math.pi * x) ** dq * (-2j * math.pi * y) ** dp
    return out


_STENCILS = {
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
}


def monomial_stencil(degree: int, eps: float):
    """Offsets and weights approximating t^degree from samples of
    exp(-2 pi i t s) at s = k eps, accurate to O(eps^2).

    Uses t^m = (-2 pi i)^(-m) (d/ds)^m exp(-2 pi i t s) | s=0 with central
    difference stencils for the m-th derivative.
    """
    if degree == 0:
        return [(0.0, 1.0)]
    entries = _STENCILS[degree]
    factor = (-2j * math.pi) ** (-degree) / eps ** degree
    return [(k * eps, w * factor) for k, w in entries]
