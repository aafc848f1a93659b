"""Step-2 nilpotent group with multidimensional center and Clifford values.

Group points are (s, x, y) with x real and s, y in R^{n+1}; the law twists
each central component separately,

    (s, x, y)(s', x', y')_j = s_j + s_j' + (x y_j' - x' y_j) / 2,

so at n = 0 the group is the one-dimensional Heisenberg group.  Because
the center is (n+1)-dimensional, scalar-valued irreducible representations
see only one central direction at a time; the machinery here instead uses
values in the Clifford algebra over e_0 .. e_n, pairing central direction
j with generator e_j.

The module provides the Gaussian vacuum and coherent states, the
Segal-Bargmann-type inner product with its channel projections P_j, and
the Clifford-valued field brackets with their classical (all channels at
h = 0) and quantum (all h_j != 0) representations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clifford import (
    Blade,
    CliffordElement,
    Signature,
    blade_exp,
    merge_blades,
)
from .grids import Axis, cell_volume, centered_diff, mesh

TWO_PI = 2.0 * math.pi
FOUR_PI_SQ = 4.0 * math.pi ** 2


# ---------------------------------------------------------------------------
# group arithmetic
# ---------------------------------------------------------------------------


@dataclass
class GalileanElement:
    s: np.ndarray
    x: float
    y: np.ndarray

    def __post_init__(self):
        self.s = np.atleast_1d(np.asarray(self.s, dtype=float))
        self.y = np.atleast_1d(np.asarray(self.y, dtype=float))
        self.x = float(self.x)
        if self.s.shape != self.y.shape or self.s.ndim != 1:
            raise ValueError("s and y must be 1-d vectors of equal length")

    @property
    def n(self) -> int:
        return len(self.s) - 1


def g_identity(n: int) -> GalileanElement:
    return GalileanElement(np.zeros(n + 1), 0.0, np.zeros(n + 1))


def g_mul(g1: GalileanElement, g2: GalileanElement) -> GalileanElement:
    if g1.n != g2.n:
        raise ValueError("group elements of different dimension")
    s = g1.s + g2.s + 0.5 * (g1.x * g2.y - g2.x * g1.y)
    return GalileanElement(s, g1.x + g2.x, g1.y + g2.y)


def g_inv(g: GalileanElement) -> GalileanElement:
    return GalileanElement(-g.s, -g.x, -g.y)


@dataclass
class PlanckTuple:
    """Tuple (h_0 .. h_n) of channel constants; zero entries are flagged."""

    h: np.ndarray

    def __post_init__(self):
        self.h = np.atleast_1d(np.asarray(self.h, dtype=float))
        if self.h.ndim != 1:
            raise ValueError("h must be a 1-d vector")

    @property
    def n(self) -> int:
        return len(self.h) - 1

    def zero_channels(self) -> list[int]:
        return [j for j, v in enumerate(self.h) if v == 0.0]


# ---------------------------------------------------------------------------
# Clifford-valued grid functions
# ---------------------------------------------------------------------------


class CliffordGridFunction:
    """Clifford-valued samples over a rectangular box.

    Components are stored per blade as real or complex arrays sharing one
    shape.  `labels` names the axes; group-function grids use
    ("s0", .., "sn", "x", "y0", .., "yn") and field grids use ("u0", "u1").
    """

    __slots__ = ("axes", "labels", "signature", "comps")

    def __init__(self, axes, labels, signature: Signature, comps: dict[Blade, np.ndarray]):
        self.axes = tuple(axes)
        self.labels = tuple(labels)
        if len(self.axes) != len(self.labels):
            raise ValueError("one label per axis required")
        self.signature = signature
        shape = tuple(ax.num for ax in self.axes)
        self.comps = {}
        for blade, arr in comps.items():
            arr = np.asarray(arr)
            if arr.shape != shape:
                raise ValueError(f"component {blade} has shape {arr.shape}, grid is {shape}")
            self.comps[tuple(blade)] = arr

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(ax.num for ax in self.axes)

    def component(self, blade: Blade = ()) -> np.ndarray:
        arr = self.comps.get(tuple(blade))
        if arr is None:
            return np.zeros(self.shape)
        return arr

    def axis_index(self, label: str) -> int:
        return self.labels.index(label)

    def value_at(self, index: tuple[int, ...]) -> CliffordElement:
        return CliffordElement(
            self.signature, {b: complex(arr[index]) for b, arr in self.comps.items()}
        )

    def max_abs(self) -> float:
        return max(
            (float(np.max(np.abs(arr))) for arr in self.comps.values() if arr.size),
            default=0.0,
        )

    # -- linear structure ------------------------------------------------

    def _like(self, comps) -> "CliffordGridFunction":
        return CliffordGridFunction(self.axes, self.labels, self.signature, comps)

    def __add__(self, other: "CliffordGridFunction") -> "CliffordGridFunction":
        if self.axes != other.axes or self.signature != other.signature:
            raise ValueError("incompatible grid functions")
        out = {b: arr.copy() for b, arr in self.comps.items()}
        for blade, arr in other.comps.items():
            out[blade] = out.get(blade, 0.0) + arr
        return self._like(out)

    def __sub__(self, other: "CliffordGridFunction") -> "CliffordGridFunction":
        return self + (-1.0) * other

    def __rmul__(self, scalar) -> "CliffordGridFunction":
        return self._like({b: scalar * arr for b, arr in self.comps.items()})

    def conjugate(self) -> "CliffordGridFunction":
        """Clifford conjugation per sample (grade-dependent sign flip)."""
        out = {}
        for blade, arr in self.comps.items():
            k = len(blade)
            out[blade] = ((-1) ** (k * (k + 1) // 2)) * arr
        return self._like(out)

    def mul_element(self, c: CliffordElement, side: str = "right") -> "CliffordGridFunction":
        """Pointwise product with a constant element on the given side."""
        if c.signature != self.signature:
            raise ValueError("signature mismatch")
        diag = self.signature.diag
        out: dict[Blade, np.ndarray] = {}
        for bf, arr in self.comps.items():
            for bc, v in c.coeffs.items():
                pair = (bf, bc) if side == "right" else (bc, bf)
                blade, sign = merge_blades(*pair, diag)
                term = (sign * v) * arr
                out[blade] = out.get(blade, 0.0) + term
        return self._like(out)

    def pointwise_mul(self, other: "CliffordGridFunction") -> "CliffordGridFunction":
        """Full pointwise Clifford product (self on the left)."""
        if self.axes != other.axes or self.signature != other.signature:
            raise ValueError("incompatible grid functions")
        diag = self.signature.diag
        out: dict[Blade, np.ndarray] = {}
        for b1, a1 in self.comps.items():
            for b2, a2 in other.comps.items():
                blade, sign = merge_blades(b1, b2, diag)
                out[blade] = out.get(blade, 0.0) + sign * (a1 * a2)
        return self._like(out)

    @classmethod
    def zero(cls, axes, labels, signature: Signature) -> "CliffordGridFunction":
        return cls(axes, labels, signature, {})


def group_grid_axes(h: PlanckTuple, s_samples: int, xy_radius: float, xy_samples: int):
    """Axes and labels for a group-function grid adapted to the tuple h.

    Each central axis s_j spans one period 1 / |h_j| of its channel
    character so that plain sample means integrate the characters exactly;
    the (x, y) box is a centered cube that must contain the Gaussian mass
    of the states being sampled.
    """
    axes = []
    labels = []
    for j, hj in enumerate(h.h):
        if hj == 0.0:
            raise ValueError("group grids need all h_j nonzero")
        axes.append(Axis.for_period(1.0 / abs(hj), s_samples))
        labels.append(f"s{j}")
    axes.append(Axis.centered(xy_radius, xy_samples))
    labels.append("x")
    for l in range(h.n + 1):
        axes.append(Axis.centered(xy_radius, xy_samples))
        labels.append(f"y{l}")
    return tuple(axes), tuple(labels)


def _s_indices(f: CliffordGridFunction) -> list[int]:
    return [i for i, lab in enumerate(f.labels) if lab.startswith("s")]


def _xy_axes(f: CliffordGridFunction) -> list[Axis]:
    return [ax for ax, lab in zip(f.axes, f.labels) if not lab.startswith("s")]


def _channel_character(f: CliffordGridFunction, j: int, h_j: float, sign: float):
    """cos / sin arrays of exp(sign * 2 pi e_j h_j s_j) broadcast over the grid."""
    i = f.axis_index(f"s{j}")
    pts = f.axes[i].points
    shape = [1] * len(f.axes)
    shape[i] = len(pts)
    arg = TWO_PI * h_j * pts.reshape(shape)
    return np.cos(arg), sign * np.sin(arg)


def _mul_character(
    f: CliffordGridFunction, j: int, cos_arr, sin_arr, side: str
) -> dict[Blade, np.ndarray]:
    """Components of f times (cos + e_j sin) on the given side."""
    diag = f.signature.diag
    out: dict[Blade, np.ndarray] = {}
    ej = (j,)
    for blade, arr in f.comps.items():
        out[blade] = out.get(blade, 0.0) + arr * cos_arr
        pair = (blade, ej) if side == "right" else (ej, blade)
        nblade, sign = merge_blades(*pair, diag)
        out[nblade] = out.get(nblade, 0.0) + (sign * arr) * sin_arr
    return out


def _s_mean(comps: dict[Blade, np.ndarray], s_idx: list[int], keepdims: bool):
    return {b: arr.mean(axis=tuple(s_idx), keepdims=keepdims) for b, arr in comps.items()}


# ---------------------------------------------------------------------------
# vacuum and coherent states
# ---------------------------------------------------------------------------


def vacuum_eval(h: PlanckTuple, g: GalileanElement, signature: Signature) -> CliffordElement:
    """Vacuum vector at a single group point.

    v(s, x, y) = sum_j exp(2 pi h_j (-e_j s_j - (x^2 + |y|^2) / 4)),
    one Gaussian-weighted phase term per central direction.
    """
    if signature.dim != h.n + 1 or g.n != h.n:
        raise ValueError("dimension mismatch")
    r2 = g.x ** 2 + float(g.y @ g.y)
    out = CliffordElement.zero(signature)
    for j, hj in enumerate(h.h):
        out = out + blade_exp(-0.5 * math.pi * hj * r2, j, -TWO_PI * hj * g.s[j], signature)
    return out


def coherent_eval(
    h: PlanckTuple, g: GalileanElement, gp: GalileanElement, signature: Signature
) -> CliffordElement:
    """Left shift of the vacuum by g, evaluated at gp.

    Equals vacuum_eval(h, g^{-1} gp): the central argument becomes
    s_j' - s_j - (x y_j' - x' y_j) / 2 and the radial part depends only on
    (x' - x, y' - y).
    """
    if g.n != gp.n or g.n != h.n:
        raise ValueError("dimension mismatch")
    r2 = (gp.x - g.x) ** 2 + float((gp.y - g.y) @ (gp.y - g.y))
    out = CliffordElement.zero(signature)
    for j, hj in enumerate(h.h):
        sigma = gp.s[j] - g.s[j] - 0.5 * (g.x * gp.y[j] - gp.x * g.y[j])
        out = out + blade_exp(-0.5 * math.pi * hj * r2, j, -TWO_PI * hj * sigma, signature)
    return out


def sample_vacuum(h: PlanckTuple, axes, labels, signature: Signature) -> CliffordGridFunction:
    """Vectorized vacuum over a group grid."""
    return sample_coherent(h, g_identity(h.n), axes, labels, signature)


def sample_coherent(
    h: PlanckTuple, g: GalileanElement, axes, labels, signature: Signature
) -> CliffordGridFunction:
    """Vectorized coherent state (left shift of the vacuum by g)."""
    grids = mesh(axes)
    by_label = dict(zip(labels, grids))
    X = by_label["x"]
    r2 = (X - g.x) ** 2
    for l in range(h.n + 1):
        r2 = r2 + (by_label[f"y{l}"] - g.y[l]) ** 2
    comps: dict[Blade, np.ndarray] = {}
    for j, hj in enumerate(h.h):
        sigma = by_label[f"s{j}"] - g.s[j] - 0.5 * (g.x * by_label[f"y{j}"] - X * g.y[j])
        radial = np.exp(-0.5 * math.pi * hj * r2)
        b = -TWO_PI * hj * sigma
        comps[()] = comps.get((), 0.0) + radial * np.cos(b)
        comps[(j,)] = comps.get((j,), 0.0) + radial * np.sin(b)
    return CliffordGridFunction(axes, labels, signature, comps)


# ---------------------------------------------------------------------------
# inner product, projections, kernel condition
# ---------------------------------------------------------------------------


def inner_product(
    h: PlanckTuple, f1: CliffordGridFunction, f2: CliffordGridFunction
) -> CliffordElement:
    """Channel-summed sesquilinear pairing of two group-grid functions.

    <f1, f2> = sum_j h_j  Int_{x,y}  mean_s(conj(f1) E_j^-) mean_s(E_j^+ f2)

    with E_j^± = exp(±2 pi e_j h_j s_j).  Central integrals are period
    means (so the channel characters are picked out exactly); the (x, y)
    integral is a rectangle-rule sum over the box, adequate once the
    integrand's Gaussian mass is inside it.  The two character factors sit
    at opposite channel frequencies; their signs are fixed so that the
    conjugated vacuum term and the vacuum term are both caught, making
    coherent states come out with unit norm at n = 0.
    """
    if f1.axes != f2.axes or f1.signature != f2.signature:
        raise ValueError("inner product needs a shared grid and signature")
    zero = PlanckTuple(h.h).zero_channels()
    if zero:
        raise ValueError(f"channels {zero} have h_j = 0; weighted pairing undefined")
    s_idx = _s_indices(f1)
    if len(s_idx) != h.n + 1:
        raise ValueError("grid does not match the channel tuple")
    xy_vol = cell_volume(_xy_axes(f1))
    conj1 = f1.conjugate()
    total = CliffordElement.zero(f1.signature)
    for j, hj in enumerate(h.h):
        cos_m, sin_m = _channel_character(f1, j, hj, -1.0)
        cos_p, sin_p = _channel_character(f1, j, hj, +1.0)
        left = _s_mean(_mul_character(conj1, j, cos_m, sin_m, "right"), s_idx, keepdims=False)
        right = _s_mean(_mul_character(f2, j, cos_p, sin_p, "left"), s_idx, keepdims=False)
        diag = f1.signature.diag
        acc: dict[Blade, complex] = {}
        for b1, a1 in left.items():
            for b2, a2 in right.items():
                blade, sign = merge_blades(b1, b2, diag)
                acc[blade] = acc.get(blade, 0.0) + sign * np.sum(a1 * a2)
        total = total + CliffordElement(
            f1.signature, {b: hj * xy_vol * v for b, v in acc.items()}
        )
    return total


def state_norm(h: PlanckTuple, f: CliffordGridFunction) -> float:
    """sqrt of the scalar part of <f, f>."""
    val = inner_product(h, f, f).scalar_part
    return math.sqrt(max(val.real if isinstance(val, complex) else val, 0.0))


def project(j: int, h_j: float, k: CliffordGridFunction) -> CliffordGridFunction:
    """Channel projection P_j: restore the exp(+2 pi e_j h_j s_j) component.

    [P_j k](s, x, y) = exp(2 pi e_j h_j s_j) mean_s(k exp(-2 pi e_j h_j s_j)).

    The mean runs over every central axis, so characters of other channels
    are annihilated.  On combinations of channel characters whose
    coefficients commute with the matching e_j, the P_j are idempotent,
    mutually orthogonal and sum to the identity.
    """
    if h_j == 0.0:
        raise ValueError("projection undefined at h_j = 0")
    s_idx = _s_indices(k)
    cos_m, sin_m = _channel_character(k, j, h_j, -1.0)
    inner = _s_mean(_mul_character(k, j, cos_m, sin_m, "right"), s_idx, keepdims=True)
    shape = k.shape
    cos_p, sin_p = _channel_character(k, j, h_j, +1.0)
    diag = k.signature.diag
    out: dict[Blade, np.ndarray] = {}
    ej = (j,)
    for blade, arr in inner.items():
        out[blade] = out.get(blade, 0.0) + np.broadcast_to(cos_p * arr, shape).copy()
        nblade, sign = merge_blades(ej, blade, diag)
        out[nblade] = out.get(nblade, 0.0) + sign * np.broadcast_to(sin_p * arr, shape)
    return CliffordGridFunction(k.axes, k.labels, k.signature, out)


def kernel_condition(
    k: CliffordGridFunction, j: int, h_j: float, tol: float = 1e-8
) -> tuple[bool, float]:
    """Check that the two one-sided channel transforms of k coincide.

    Returns (ok, residual) where residual is the largest componentwise
    difference between mean_s(k E_j^-) and mean_s(k E_j^+).  Kernels with
    this symmetry let Clifford constants slide through the transform.
    """
    s_idx = _s_indices(k)
    cos_m, sin_m = _channel_character(k, j, h_j, -1.0)
    cos_p, sin_p = _channel_character(k, j, h_j, +1.0)
    minus = _s_mean(_mul_character(k, j, cos_m, sin_m, "right"), s_idx, keepdims=False)
    plus = _s_mean(_mul_character(k, j, cos_p, sin_p, "right"), s_idx, keepdims=False)
    blades = set(minus) | set(plus)
    resid = 0.0
    for b in blades:
        diff = minus.get(b, 0.0) - plus.get(b, 0.0)
        resid = max(resid, float(np.max(np.abs(diff))))
    return resid <= tol, resid


def channel_transform(
    k: CliffordGridFunction, j: int, h_j: float, sign: float
) -> dict[Blade, np.ndarray]:
    """mean_s(k exp(sign 2 pi e_j h_j s_j)) as blade components over (x, y)."""
    s_idx = _s_indices(k)
    cos_a, sin_a = _channel_character(k, j, h_j, sign)
    return _s_mean(_mul_character(k, j, cos_a, sin_a, "right"), s_idx, keepdims=False)


def commutant_blades(signature: Signature, j: int) -> list[Blade]:
    """Basis blades commuting with e_j: those with an even count of other indices."""
    from .clifford import enumerate_blades

    out = []
    for blade in enumerate_blades(signature):
        others = sum(1 for i in blade if i != j)
        if others % 2 == 0:
            out.append(blade)
    return out


# ---------------------------------------------------------------------------
# field observables as channel atom sums
# ---------------------------------------------------------------------------

FieldAtomKey = tuple[int, float, float, tuple[float, ...]]


class FieldCharacterSum:
    """Finite sum of channel atoms (j, h_j, coeff, x, y) with Clifford coeffs.

    Channel j pairs the central direction s_j with the generator e_j; the
    per-atom h_j is the channel frequency (0 on the classical stratum).
    Atoms at equal (j, h_j, x, y) merge by coefficient addition.
    """

    __slots__ = ("n", "signature", "atoms")

    def __init__(self, n: int, signature: Signature, atoms=None):
        if signature.dim != n + 1:
            raise ValueError("signature must have n + 1 generators")
        self.n = n
        self.signature = signature
        self.atoms: dict[FieldAtomKey, CliffordElement] = {}
        if atoms:
            for key, coeff in atoms.items():
                self._accumulate(key, coeff)

    @classmethod
    def atom(
        cls, n: int, signature: Signature, j: int, h_j: float, coeff: CliffordElement, x, y
    ) -> "FieldCharacterSum":
        key = cls._key(n, j, h_j, x, y)
        return cls(n, signature, {key: coeff})

    @staticmethod
    def _key(n: int, j: int, h_j: float, x, y) -> FieldAtomKey:
        if not 0 <= j <= n:
            raise ValueError(f"channel index {j} outside 0..{n}")
        yt = tuple(float(v) for v in np.atleast_1d(y))
        if len(yt) != n + 1:
            raise ValueError("y must have length n + 1")
        return (int(j), float(h_j), float(x), yt)

    def _accumulate(self, key: FieldAtomKey, coeff: CliffordElement) -> None:
        if coeff.signature != self.signature:
            raise ValueError("coefficient signature mismatch")
        value = self.atoms.get(key)
        value = coeff if value is None else value + coeff
        if value.is_zero():
            self.atoms.pop(key, None)
        else:
            self.atoms[key] = value

    def __len__(self) -> int:
        return len(self.atoms)

    def __add__(self, other: "FieldCharacterSum") -> "FieldCharacterSum":
        if self.n != other.n or self.signature != other.signature:
            raise ValueError("incompatible field sums")
        out = FieldCharacterSum(self.n, self.signature, dict(self.atoms))
        for key, coeff in other.atoms.items():
            out._accumulate(key, coeff)
        return out

    def __sub__(self, other: "FieldCharacterSum") -> "FieldCharacterSum":
        return self + (-1.0) * other

    def __rmul__(self, scalar) -> "FieldCharacterSum":
        return FieldCharacterSum(
            self.n, self.signature, {k: c * scalar for k, c in self.atoms.items()}
        )

    def channels(self) -> list[tuple[int, float]]:
        return sorted({(k[0], k[1]) for k in self.atoms})

    def retag(self, h: PlanckTuple) -> "FieldCharacterSum":
        """Move every atom of channel j to frequency h_j (for limit scans)."""
        out = FieldCharacterSum(self.n, self.signature)
        for (j, _, x, y), coeff in self.atoms.items():
            out._accumulate((j, float(h.h[j]), x, y), coeff)
        return out

    def max_blade_abs(self) -> float:
        return max((c.max_abs() for c in self.atoms.values()), default=0.0)

    def to_dict(self) -> dict:
        return {
            "schema": "fieldsum/1",
            "n": self.n,
            "signature": list(self.signature.diag),
            "atoms": [
                {
                    "j": k[0],
                    "h": k[1],
                    "x": k[2],
                    "y": list(k[3]),
                    "coeff": [
                        {"indices": list(b), "re": complex(v).real, "im": complex(v).imag}
                        for b, v in sorted(c.coeffs.items())
                    ],
                }
                for k, c in sorted(self.atoms.items(), key=lambda kv: kv[0])
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FieldCharacterSum":
        if data.get("schema") != "fieldsum/1":
            raise ValueError("expected schema 'fieldsum/1'")
        sig = Signature(data["signature"])
        out = cls(int(data["n"]), sig)
        for atom in data.get("atoms", []):
            coeff = CliffordElement(
                sig,
                {
                    tuple(entry["indices"]): complex(entry["re"], entry.get("im", 0.0))
                    for entry in atom["coeff"]
                },
            )
            out._accumulate(cls._key(out.n, atom["j"], atom["h"], atom["x"], atom["y"]), coeff)
        return out


def _field_kernel(h_j: float, phi_j: float) -> float:
    if h_j == 0.0:
        return FOUR_PI_SQ * phi_j
    return (4.0 * math.pi / h_j) * math.sin(math.pi * h_j * phi_j)


def _field_pairwise(a: FieldCharacterSum, b: FieldCharacterSum, kernel) -> FieldCharacterSum:
    if a.n != b.n or a.signature != b.signature:
        raise ValueError("incompatible field sums")
    out = FieldCharacterSum(a.n, a.signature)
    by_channel_a: dict[tuple[int, float], list] = {}
    for (j, h, x, y), c in a.atoms.items():
        by_channel_a.setdefault((j, h), []).append((c, x, y))
    by_channel_b: dict[tuple[int, float], list] = {}
    for (j, h, x, y), c in b.atoms.items():
        by_channel_b.setdefault((j, h), []).append((c, x, y))
    for channel, atoms_a in by_channel_a.items():
        atoms_b = by_channel_b.get(channel)
        if not atoms_b:
            continue
        j, h = channel
        ej = CliffordElement.generator(a.signature, j)
        for ca, xa, ya in atoms_a:
            for cb, xb, yb in atoms_b:
                phi_j = xb * ya[j] - xa * yb[j]
                factor = kernel(h, phi_j)
                if factor == 0.0:
                    continue
                coeff = (ca * cb * ej) * factor
                key = (j, h, xa + xb, tuple(u + v for u, v in zip(ya, yb)))
                out._accumulate(key, coeff)
    return out


def field_bracket(a: FieldCharacterSum, b: FieldCharacterSum) -> FieldCharacterSum:
    """Channel-local Clifford-valued bracket of two field observables.

    Per channel j the pairwise-atom coefficient factor is

        (4 pi / h_j) e_j sin(pi h_j phi_j)      for h_j != 0,
        4 pi^2 e_j phi_j                        for h_j = 0,

    with phi_j(a, b) = x_b y_aj - x_a y_bj and e_j multiplying the
    coefficient product on the right.  Atoms never mix channels, and the
    h_j = 0 kernel is the quadratic-order limit of the sine kernel.
    """
    return _field_pairwise(a, b, _field_kernel)


def quantum_bracket(
    a: FieldCharacterSum, b: FieldCharacterSum, h: PlanckTuple
) -> FieldCharacterSum:
    """Bracket image on a fully non-classical channel tuple (all h_j != 0).

    Computes the per-channel sine kernels directly; agrees atom for atom
    with :func:`field_bracket` on operands tagged with the same tuple.
    """
    if a.n != h.n or b.n != h.n:
        raise ValueError("tuple dimension mismatch")
    zero = h.zero_channels()
    if zero:
        raise ValueError(f"channels {zero} have h_j = 0")
    for s in (a, b):
        for (j, hj, _, _) in s.atoms:
            if hj != h.h[j]:
                raise ValueError("atom channel frequency differs from the supplied tuple")
    return _field_pairwise(
        a, b, lambda hj, phi: (4.0 * math.pi / hj) * math.sin(math.pi * hj * phi)
    )


# ---------------------------------------------------------------------------
# classical representation
# ---------------------------------------------------------------------------


class ClassicalFieldObservable:
    """Full Fourier transform of an all-classical field sum.

    A function of (q, p^0 .. p^n): sum of terms
    coeff * exp(-2 pi i (q x + p . y)) with Clifford coefficients.  Supports
    exact partial derivatives, which just scale each term.
    """

    __slots__ = ("n", "signature", "terms")

    def __init__(self, n: int, signature: Signature, terms):
        self.n = n
        self.signature = signature
        self.terms = list(terms)

    def evaluate(self, q, p) -> CliffordElement:
        """Value at scalar q and momentum vector p (length n + 1)."""
        p = np.atleast_1d(np.asarray(p, dtype=float))
        out = CliffordElement.zero(self.signature)
        for coeff, x, y in self.terms:
            phase = complex(np.exp(-2j * math.pi * (q * x + float(p @ np.asarray(y)))))
            out = out + coeff * phase
        return out

    def partial_q(self) -> "ClassicalFieldObservable":
        return ClassicalFieldObservable(
            self.n,
            self.signature,
            [(c * (-2j * math.pi * x), x, y) for c, x, y in self.terms],
        )

    def partial_p(self, j: int) -> "ClassicalFieldObservable":
        return ClassicalFieldObservable(
            self.n,
            self.signature,
            [(c * (-2j * math.pi * y[j]), x, y) for c, x, y in self.terms],
        )


def classical_rep(a: FieldCharacterSum) -> ClassicalFieldObservable:
    """Transform an all-h = 0 field sum into a function of (q, p^0 .. p^n)."""
    bad = [k for k in a.atoms if k[1] != 0.0]
    if bad:
        raise ValueError("classical representation needs every channel at h = 0")
    terms = [(c, k[2], k[3]) for k, c in a.atoms.items()]
    return ClassicalFieldObservable(a.n, a.signature, terms)


def classical_pair_bracket(
    A: ClassicalFieldObservable, B: ClassicalFieldObservable, q, p
) -> CliffordElement:
    """Pointwise sum_j (dA/dq dB/dp^j - dA/dp^j dB/dq) e_j at (q, p).

    This is the multi-momentum Poisson-type operation the h -> 0 bracket
    reduces to; e_j multiplies on the right of each product.
    """
    sig = A.signature
    out = CliffordElement.zero(sig)
    Aq = A.partial_q().evaluate(q, p)
    Bq = B.partial_q().evaluate(q, p)
    for j in range(A.n + 1):
        Apj = A.partial_p(j).evaluate(q, p)
        Bpj = B.partial_p(j).evaluate(q, p)
        ej = CliffordElement.generator(sig, j)
        out = out + (Aq * Bpj - Apj * Bq) * ej
    return out


# ---------------------------------------------------------------------------
# multi-momentum polynomials with Clifford coefficients
# ---------------------------------------------------------------------------

FieldMonomialKey = tuple[int, tuple[int, ...]]


class FieldPoly:
    """Polynomial in (q, p^0 .. p^n) with Clifford coefficients.

    Monomial keys are (q-degree, (p^0-degree, .., p^n-degree)).  The
    coefficient ring is noncommutative, so products preserve operand order.
    """

    __slots__ = ("n", "signature", "monomials")

    def __init__(self, n: int, signature: Signature, monomials=None):
        self.n = n
        self.signature = signature
        self.monomials: dict[FieldMonomialKey, CliffordElement] = {}
        if monomials:
            for key, coeff in monomials.items():
                self._accumulate(key, coeff)

    def _accumulate(self, key: FieldMonomialKey, coeff: CliffordElement) -> None:
        dq, dp = int(key[0]), tuple(int(d) for d in key[1])
        if len(dp) != self.n + 1:
            raise ValueError("momentum multidegree must have length n + 1")
        key = (dq, dp)
        value = self.monomials.get(key)
        value = coeff if value is None else value + coeff
        if value.is_zero():
            self.monomials.pop(key, None)
        else:
            self.monomials[key] = value

    @classmethod
    def coordinate_q(cls, n: int, signature: Signature) -> "FieldPoly":
        return cls(n, signature, {(1, (0,) * (n + 1)): CliffordElement.scalar(signature, 1.0)})

    @classmethod
    def coordinate_p(cls, n: int, signature: Signature, j: int) -> "FieldPoly":
        dp = [0] * (n + 1)
        dp[j] = 1
        return cls(n, signature, {(0, tuple(dp)): CliffordElement.scalar(signature, 1.0)})

    def __add__(self, other: "FieldPoly") -> "FieldPoly":
        out = FieldPoly(self.n, self.signature, dict(self.monomials))
        for key, coeff in other.monomials.items():
            out._accumulate(key, coeff)
        return out

    def __sub__(self, other: "FieldPoly") -> "FieldPoly":
        return self + other.scale(-1.0)

    def scale(self, scalar) -> "FieldPoly":
        return FieldPoly(
            self.n, self.signature, {k: c * scalar for k, c in self.monomials.items()}
        )

    def __mul__(self, other: "FieldPoly") -> "FieldPoly":
        out = FieldPoly(self.n, self.signature)
        for (qa, pa), ca in self.monomials.items():
            for (qb, pb), cb in other.monomials.items():
                key = (qa + qb, tuple(u + v for u, v in zip(pa, pb)))
                out._accumulate(key, ca * cb)
        return out

    def mul_element(self, c: CliffordElement) -> "FieldPoly":
        return FieldPoly(
            self.n, self.signature, {k: v * c for k, v in self.monomials.items()}
        )

    def partial_q(self) -> "FieldPoly":
        out = FieldPoly(self.n, self.signature)
        for (dq, dp), coeff in self.monomials.items():
            if dq:
                out._accumulate((dq - 1, dp), coeff * float(dq))
        return out

    def partial_p(self, j: int) -> "FieldPoly":
        out = FieldPoly(self.n, self.signature)
        for (dq, dp), coeff in self.monomials.items():
            if dp[j]:
                new = list(dp)
                new[j] -= 1
                out._accumulate((dq, tuple(new)), coeff * float(dp[j]))
        return out

    def coefficient(self, key: FieldMonomialKey) -> CliffordElement:
        got = self.monomials.get((int(key[0]), tuple(key[1])))
        return got if got is not None else CliffordElement.zero(self.signature)

    def __len__(self) -> int:
        return len(self.monomials)


def field_poisson_poly(a: FieldPoly, b: FieldPoly) -> FieldPoly:
    """sum_j (da/dq db/dp^j - da/dp^j db/dq) e_j on multi-momentum polynomials."""
    if a.n != b.n or a.signature != b.signature:
        raise ValueError("incompatible polynomials")
    out = FieldPoly(a.n, a.signature)
    aq = a.partial_q()
    bq = b.partial_q()
    for j in range(a.n + 1):
        ej = CliffordElement.generator(a.signature, j)
        term = aq * b.partial_p(j) - a.partial_p(j) * bq
        out = out + term.mul_element(ej)
    return out
