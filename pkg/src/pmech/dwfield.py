"""Covariant scalar-field machinery with polymomenta.

A scalar field q(u^0, u^1) on flat 1+1 space-time with diagonal metric eta
and Lagrangian density L = eta^mumu (d_mu q)^2 / 2 - V(q) carries one
polymomentum per direction, p^mu = eta^mumu d_mu q, and the covariant
Hamiltonian

    H = p^mu d_mu q - L = eta^mumu (p^mu)^2 / 2 + V(q).

The first-order field equations split into the gradient block
d_mu q = dH/dp^mu and the divergence equation sum_mu d_mu p^mu = -dH/dq;
eliminating the momenta gives back the Euler-Lagrange equation
box q + V'(q) = 0.

The Clifford-paired form of the dynamics replaces the time derivative by
the symmetric pairing with the Dirac operator D = e_j d_j,

    <D, f> = -(e_j d_j f + d_j f e_j) / 2,

whose action on the combined polymomenta p = sum_k e_k p^k produces the
divergence equation with the constant C = sum_j e_j e_j in place of -1:
sum_j d_j p^j = C dH/dq.  :func:`residual_check` measures both equations
on computed trajectories; :func:`rescaled_hamiltonian` supplies the
generator whose flow satisfies the C-form exactly against the physical H.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .clifford import CliffordElement, Signature, center_constant
from .galilean import CliffordGridFunction
from .grids import Axis, centered_diff

FieldMonomialKey = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class LagrangianSpec:
    """Scalar-field Lagrangian: fixed quadratic kinetic term plus potential.

    `potential` lists the coefficients c_k of V(q) = sum_k c_k q^k.
    """

    signature: Signature
    potential: tuple[float, ...]

    def __init__(self, signature: Signature, potential):
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "potential", tuple(float(c) for c in potential))

    @property
    def dim(self) -> int:
        return self.signature.dim


@dataclass(frozen=True)
class DWHamiltonian:
    """H(q, p^0 .. p^n) = sum_mu eta^mumu (p^mu)^2 / 2 + V(q)."""

    signature: Signature
    potential: tuple[float, ...]
    source: LagrangianSpec | None = None

    def potential_value(self, q: np.ndarray) -> np.ndarray:
        out = np.zeros_like(np.asarray(q, dtype=float))
        for k, c in enumerate(self.potential):
            if c:
                out = out + c * np.asarray(q, dtype=float) ** k
        return out

    def dV(self, q: np.ndarray) -> np.ndarray:
        """V'(q) = dH/dq."""
        q = np.asarray(q, dtype=float)
        out = np.zeros_like(q)
        for k, c in enumerate(self.potential):
            if k and c:
                out = out + k * c * q ** (k - 1)
        return out

    def dH_dp(self, mu: int, p_mu: np.ndarray) -> np.ndarray:
        return self.signature.diag[mu] * np.asarray(p_mu, dtype=float)

    def monomials(self) -> dict[FieldMonomialKey, float]:
        """Closed-form monomial map (q-degree, p-multidegree) -> coefficient."""
        dim = self.signature.dim
        out: dict[FieldMonomialKey, float] = {}
        for mu, eta in enumerate(self.signature.diag):
            dp = [0] * dim
            dp[mu] = 2
            out[(0, tuple(dp))] = 0.5 * eta
        for k, c in enumerate(self.potential):
            if c:
                key = (k, (0,) * dim)
                out[key] = out.get(key, 0.0) + c
        return out


def legendre(L: LagrangianSpec) -> DWHamiltonian:
    """Polymomenta transform of the scalar-field Lagrangian.

    p^mu = dL/d(d_mu q) = eta^mumu d_mu q inverts to d_mu q = eta^mumu p^mu
    since eta^mumu = +-1, giving H = eta^mumu (p^mu)^2 / 2 + V(q).  The
    signature's +-1 entries keep every direction nondegenerate.
    """
    return DWHamiltonian(L.signature, L.potential, source=L)


def rescaled_hamiltonian(H: DWHamiltonian) -> DWHamiltonian:
    """Generator whose flow satisfies sum_j d_j p^j = C dH/dq with the original H.

    The kinetic part is untouched (the gradient block must stay the
    physical one); the potential is scaled by -C with C = sum_j eta^jj, so
    its flow's divergence -dV_gen/dq equals C V'(q).
    """
    C = center_constant(H.signature)
    return DWHamiltonian(
        H.signature, tuple(-C * c for c in H.potential), source=H.source
    )


@dataclass
class FieldState:
    """Sampled trajectory block: q and polymomenta on a (u^0, u^1) grid.

    Row index is the marching coordinate u^0 (step dt, not periodic), the
    column index is periodic space (Axis `space`).
    """

    t0: float
    dt: float
    space: Axis
    q: np.ndarray
    p0: np.ndarray
    p1: np.ndarray

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        self.p0 = np.asarray(self.p0, dtype=float)
        self.p1 = np.asarray(self.p1, dtype=float)
        if not (self.q.shape == self.p0.shape == self.p1.shape):
            raise ValueError("q, p0, p1 must share one shape")
        if self.q.ndim != 2 or self.q.shape[1] != self.space.num:
            raise ValueError("arrays must be (time, space) with space matching the axis")
        if self.dt <= 0:
            raise ValueError("dt must be positive")

    @property
    def nt(self) -> int:
        return self.q.shape[0] - 1

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.q.shape[0])

    @classmethod
    def initial(cls, space: Axis, q0, p0, dt: float, t0: float = 0.0) -> "FieldState":
        """Single-slice state holding the marching boundary data q(0), p^0(0)."""
        q0 = np.asarray(q0, dtype=float)[None, :]
        p0 = np.asarray(p0, dtype=float)[None, :]
        return cls(t0, dt, space, q0, p0, np.zeros_like(q0))

    def to_csv(self, path) -> None:
        """One row per grid point: u0, u1, q, p0, p1."""
        xs = self.space.points
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["u0", "u1", "q", "p0", "p1"])
            for i, t in enumerate(self.times):
                for k, x in enumerate(xs):
                    writer.writerow(
                        [f"{t:.12g}", f"{x:.12g}", f"{self.q[i, k]:.12g}",
                         f"{self.p0[i, k]:.12g}", f"{self.p1[i, k]:.12g}"]
                    )

    def metadata(self) -> dict:
        return {
            "t0": self.t0,
            "dt": self.dt,
            "steps": self.nt,
            "space": {"lo": self.space.lo, "step": self.space.step, "num": self.space.num},
        }


def _laplacian(q_row: np.ndarray, dx: float) -> np.ndarray:
    return (np.roll(q_row, -1) - 2.0 * q_row + np.roll(q_row, 1)) / dx ** 2


def _dx_centered(rows: np.ndarray, dx: float) -> np.ndarray:
    return (np.roll(rows, -1, axis=-1) - np.roll(rows, 1, axis=-1)) / (2.0 * dx)


def dw_integrate(H: DWHamiltonian, init: FieldState, steps: int, dt: float | None = None) -> FieldState:
    """March the first-order field equations in u^0 by staggered leapfrog.

    The gradient block supplies d_0 q = eta^00 p^0 and the spatial
    polymomentum is enforced as the constraint p^1 = eta^11 d_1 q each
    step, which makes the scheme equivalent to the second-order equation
    eta^00 (d_0^2 q) + eta^11 (d_1^2 q) + V'(q) = 0 with periodic space.

    p^0 is stored synchronized to integer steps (midpoint average of the
    staggered values), so centered time differences of q reproduce
    eta^00 p^0 exactly on interior slices.  Configurations with
    dt > dx are rejected: that is the stability bound of the explicit
    stencil in the wave-type case.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    dt = init.dt if dt is None else float(dt)
    dx = init.space.step
    if dt <= 0:
        raise ValueError("dt must be positive")
    if dt > dx * (1.0 + 1e-12):
        raise ValueError(f"rejected configuration: dt = {dt} exceeds the stability bound dx = {dx}")
    eta0 = H.signature.diag[0]
    eta1 = H.signature.diag[1]

    def accel(q_row):
        # d_0 p^0 = -dH/dq - d_1 p^1 with p^1 = eta^11 d_1 q
        return -H.dV(q_row) - eta1 * _laplacian(q_row, dx)

    q = np.empty((steps + 1, init.space.num))
    p0 = np.empty_like(q)
    q[0] = init.q[-1]
    p0[0] = init.p0[-1]
    half = p0[0] + 0.5 * dt * accel(q[0])
    prev_half = None
    for nstep in range(1, steps + 1):
        q[nstep] = q[nstep - 1] + dt * eta0 * half
        prev_half = half
        half = half + dt * accel(q[nstep])
        if nstep < steps:
            p0[nstep] = 0.5 * (prev_half + half)
    # final slice: synchronize from the last staggered value
    p0[steps] = prev_half + 0.5 * dt * accel(q[steps])
    p1 = eta1 * _dx_centered(q, dx)
    return FieldState(init.t0, dt, init.space, q, p0, p1)


def energy_functional(state: FieldState, H: DWHamiltonian) -> np.ndarray:
    """Discrete integral of (p^0)^2 / 2 + (d_1 q)^2 / 2 + V(q) per time slice.

    This is the conserved functional of the wave-type case (time-positive
    metric entry); the staggered scheme keeps it bounded to O(dt^2).
    """
    dx = state.space.step
    d1q = _dx_centered(state.q, dx)
    density = 0.5 * state.p0 ** 2 + 0.5 * d1q ** 2 + H.potential_value(state.q)
    return density.sum(axis=1) * dx


def state_axes(state: FieldState):
    time_axis = Axis(state.t0, state.dt, state.q.shape[0], periodic=False)
    return (time_axis, state.space), ("u0", "u1")


def combined_polymomenta(state: FieldState, sig: Signature) -> CliffordGridFunction:
    """Pointwise Clifford field p = sum_k e_k p^k on the (u^0, u^1) grid."""
    if sig.dim != 2:
        raise ValueError("combined polymomenta implemented for 1+1 grids")
    axes, labels = state_axes(state)
    return CliffordGridFunction(axes, labels, sig, {(0,): state.p0, (1,): state.p1})


def dirac_pairing(f: CliffordGridFunction) -> CliffordGridFunction:
    """Symmetric pairing <D, f> = -(e_j d_j f + d_j f e_j) / 2.

    Centered differences along every axis (one-sided second order at
    non-periodic ends).  For scalar-valued f this reduces to
    -sum_j e_j d_j f; on a vector field sum_k e_k g^k the anticommutation
    relation collapses it to -sum_j eta^jj d_j g^j.
    """
    if len(f.axes) != f.signature.dim:
        raise ValueError("need one grid axis per Clifford generator")
    out = CliffordGridFunction.zero(f.axes, f.labels, f.signature)
    for j, axis in enumerate(f.axes):
        df_comps = {
            blade: centered_diff(arr, j, axis) for blade, arr in f.comps.items()
        }
        df = CliffordGridFunction(f.axes, f.labels, f.signature, df_comps)
        ej = CliffordElement.generator(f.signature, j)
        out = out + (-0.5) * (df.mul_element(ej, "left") + df.mul_element(ej, "right"))
    return out


def _interior_l2(arr: np.ndarray, dx: float, dt: float) -> float:
    return float(np.sqrt(np.sum(arr ** 2) * dx * dt))


@dataclass
class ResidualReport:
    """Residual norms of the Clifford-paired field equations on a state.

    `gradient_components[j]` is the normalized interior L2 mismatch of
    d_j q against dH/dp^j extracted from the e_j component of the paired
    equation; `hamilton_components` are the same mismatches computed
    directly from the gradient block, and `pairing_match` is the largest
    pointwise disagreement between the two routes (structurally zero up to
    rounding).  `divergence_residual` measures sum_j d_j p^j - C dH/dq
    with C = `center`.
    """

    gradient_components: tuple[float, ...]
    hamilton_components: tuple[float, ...]
    pairing_match: float
    divergence_residual: float
    center: float
    scale: float


def residual_check(state: FieldState, H: DWHamiltonian, sig: Signature) -> ResidualReport:
    """Measure both Clifford-paired equations on a computed trajectory.

    All derivatives are centered second-order on interior time slices;
    norms are discrete L2 normalized by the scale of the fields entering
    each equation.
    """
    if sig.dim != 2:
        raise ValueError("residual check implemented for 1+1 grids")
    dt, dx = state.dt, state.space.step
    if state.nt < 2:
        raise ValueError("need at least two time steps for interior residuals")
    C = center_constant(sig)

    interior = slice(1, -1)
    d0q = (state.q[2:] - state.q[:-2]) / (2.0 * dt)
    d1q = _dx_centered(state.q, dx)[interior]
    dHdp0 = H.dH_dp(0, state.p0[interior])
    dHdp1 = H.dH_dp(1, state.p1[interior])
    hamilton = (d0q - dHdp0, d1q - dHdp1)

    # same residuals through the Dirac pairing of the scalar field q
    axes, labels = state_axes(state)
    qfield = CliffordGridFunction(axes, labels, sig, {(): state.q})
    paired = dirac_pairing(qfield)
    rhs_comps = {(0,): -dHdp0_full(H, state), (1,): -dHdp1_full(H, state)}
    pairing_resid = []
    for j in range(2):
        lhs = paired.component((j,))[interior]
        rhs = rhs_comps[(j,)][interior]
        pairing_resid.append(lhs - rhs)
    match = max(
        float(np.max(np.abs(pairing_resid[j] + hamilton[j]))) for j in range(2)
    )

    qscale = max(_interior_l2(state.q[interior], dx, dt), 1e-300)
    grad_norms = tuple(_interior_l2(r, dx, dt) / qscale for r in pairing_resid)
    ham_norms = tuple(_interior_l2(r, dx, dt) / qscale for r in hamilton)

    d0p0 = (state.p0[2:] - state.p0[:-2]) / (2.0 * dt)
    d1p1 = _dx_centered(state.p1, dx)[interior]
    rhs39 = C * H.dV(state.q[interior])
    lhs39 = d0p0 + d1p1
    scale = max(
        _interior_l2(d0p0, dx, dt) + _interior_l2(d1p1, dx, dt) + _interior_l2(rhs39, dx, dt),
        1e-300,
    )
    div_resid = _interior_l2(lhs39 - rhs39, dx, dt) / scale

    return ResidualReport(
        gradient_components=grad_norms,
        hamilton_components=ham_norms,
        pairing_match=match,
        divergence_residual=div_resid,
        center=C,
        scale=scale,
    )


def dHdp0_full(H: DWHamiltonian, state: FieldState) -> np.ndarray:
    return H.dH_dp(0, state.p0)


def dHdp1_full(H: DWHamiltonian, state: FieldState) -> np.ndarray:
    return H.dH_dp(1, state.p1)


def plane_wave_state(
    H: DWHamiltonian, space: Axis, k: float, amplitude: float, dt: float
) -> tuple[FieldState, float]:
    """Initial slice of the traveling wave cos(k u^1 - w u^0) and its frequency.

    For the time-positive metric diag(+1, -1) and V = m^2 q^2 / 2 the
    dispersion relation is w^2 = k^2 + m^2; the returned state carries
    q(0, x) and the matching p^0(0, x) = eta^00 d_0 q(0, x).
    """
    m2 = 2.0 * H.potential[2] if len(H.potential) > 2 else 0.0
    w = math.sqrt(k * k + m2)
    xs = space.points
    q0 = amplitude * np.cos(k * xs)
    dq_dt = amplitude * w * np.sin(k * xs)
    p0 = H.signature.diag[0] * dq_dt
    return FieldState.initial(space, q0, p0, dt), w


def plane_wave_solution(space: Axis, k: float, w: float, amplitude: float, t: float) -> np.ndarray:
    return amplitude * np.cos(k * space.points - w * t)
