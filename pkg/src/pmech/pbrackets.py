"""Observables as multi-channel character sums and their bracket algebra.

An observable lives over a finite set of "Planck channels" hbar.  On each
channel it is a finite sum of delta-supported atoms (coeff, x, y), i.e. the
partial Fourier transform of a function on the Heisenberg group whose
central dependence is exp(2 pi i hbar s).  Products act channel by channel:

    star       atom kernel exp(i pi hbar phi)          twisted convolution
    commutator atom kernel 2 i sin(pi hbar phi)        vanishes at hbar = 0
    bracket    atom kernel (4 pi / hbar) sin(pi hbar phi)   for hbar != 0
               atom kernel 4 pi^2 phi                       at hbar = 0

with the bilinear phase phi(a, b) = x_b . y_a - x_a . y_b.  The hbar = 0
kernel is the hbar -> 0 limit of the others, which is exactly the Poisson
bracket of the transformed observables; the hbar != 0 kernel reproduces the
sine (Moyal) bracket.  The same two limits exist on the polynomial backend
via :func:`poisson_poly` and :func:`moyal_poly`.

Conventions (phase sign, kernel constants) are frozen in
:mod:`pmech.conventions` and pinned by quadrature oracles in the tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

FOUR_PI_SQ = 4.0 * math.pi ** 2

AtomKey = tuple[float, tuple[float, ...], tuple[float, ...]]
MonomialKey = tuple[tuple[int, ...], tuple[int, ...]]


class TruncationError(RuntimeError):
    """Raised when an evolution leaves the configured representable class."""

    def __init__(self, message: str, *, step: int, size: int, cap: int):
        super().__init__(message)
        self.step = step
        self.size = size
        self.cap = cap


@dataclass(frozen=True)
class Channel:
    """One Planck-constant fiber of an observable."""

    hbar: float
    ring: str = "complex"

    def __post_init__(self):
        if self.ring not in ("complex", "clifford"):
            raise ValueError("ring must be 'complex' or 'clifford'")


class CharacterSum:
    """Finite sum of channel atoms (hbar, coeff, x, y) in dimension n.

    Atoms at identical (hbar, x, y) are merged by coefficient addition and
    exact zeros are pruned.  Positions are compared exactly (no fuzzy
    merging), so algebraic cancellations only happen when the float
    arithmetic cancels exactly.
    """

    __slots__ = ("dimension", "atoms")

    def __init__(self, dimension: int, atoms: dict[AtomKey, complex] | None = None):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.dimension = dimension
        self.atoms: dict[AtomKey, complex] = {}
        if atoms:
            for key, coeff in atoms.items():
                self._accumulate(key, coeff)

    # -- construction ----------------------------------------------------

    @classmethod
    def atom(cls, dimension: int, hbar: float, coeff: complex, x, y) -> "CharacterSum":
        key = cls._key(dimension, hbar, x, y)
        return cls(dimension, {key: complex(coeff)})

    @classmethod
    def zero(cls, dimension: int) -> "CharacterSum":
        return cls(dimension)

    @staticmethod
    def _key(dimension: int, hbar: float, x, y) -> AtomKey:
        xt = tuple(float(v) for v in np.atleast_1d(x))
        yt = tuple(float(v) for v in np.atleast_1d(y))
        if len(xt) != dimension or len(yt) != dimension:
            raise ValueError("atom position has wrong dimension")
        return (float(hbar), xt, yt)

    def _accumulate(self, key: AtomKey, coeff: complex) -> None:
        value = self.atoms.get(key, 0j) + complex(coeff)
        if value == 0:
            self.atoms.pop(key, None)
        else:
            self.atoms[key] = value

    # -- inspection --------------------------------------------------------

    def channels(self) -> list[Channel]:
        return [Channel(h) for h in sorted({k[0] for k in self.atoms})]

    def channel_atoms(self, hbar: float) -> list[tuple[complex, tuple[float, ...], tuple[float, ...]]]:
        return [(c, k[1], k[2]) for k, c in self.atoms.items() if k[0] == hbar]

    def __len__(self) -> int:
        return len(self.atoms)

    def max_abs(self) -> float:
        return max((abs(c) for c in self.atoms.values()), default=0.0)

    # -- linear structure ---------------------------------------------------

    def __add__(self, other: "CharacterSum") -> "CharacterSum":
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch")
        out = CharacterSum(self.dimension, dict(self.atoms))
        for key, coeff in other.atoms.items():
            out._accumulate(key, coeff)
        return out

    def __sub__(self, other: "CharacterSum") -> "CharacterSum":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "CharacterSum":
        return CharacterSum(
            self.dimension, {k: scalar * c for k, c in self.atoms.items()}
        )

    def scale_channels(self, factor: Callable[[float], complex]) -> "CharacterSum":
        """Multiply every atom by a channel-dependent scalar."""
        return CharacterSum(
            self.dimension, {k: factor(k[0]) * c for k, c in self.atoms.items()}
        )

    # -- evaluation -----------------------------------------------------------

    def evaluate_channel(self, hbar: float, qs, ps) -> np.ndarray:
        """Pointwise value of the channel as sum_c c exp(-2 pi i (q.x + p.y)).

        `qs` and `ps` are sequences of n broadcastable coordinate arrays.
        """
        qs = [np.asarray(q) for q in qs]
        ps = [np.asarray(p) for p in ps]
        out = None
        for coeff, x, y in self.channel_atoms(hbar):
            arg = sum(q * xj for q, xj in zip(qs, x)) + sum(p * yj for p, yj in zip(ps, y))
            term = coeff * np.exp(-2j * math.pi * arg)
            out = term if out is None else out + term
        if out is None:
            shape = np.broadcast(*(list(qs) + list(ps))).shape
            return np.zeros(shape, dtype=complex)
        return out

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "schema": "charsum/1",
            "dimension": self.dimension,
            "channels": [{"hbar": ch.hbar, "ring": ch.ring} for ch in self.channels()],
            "atoms": [
                {"hbar": k[0], "x": list(k[1]), "y": list(k[2]), "coeff": [c.real, c.imag]}
                for k, c in sorted(self.atoms.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CharacterSum":
        if data.get("schema") != "charsum/1":
            raise ValueError("expected schema 'charsum/1'")
        out = cls(int(data["dimension"]))
        for atom in data.get("atoms", []):
            re, im = atom["coeff"]
            out._accumulate(
                cls._key(out.dimension, atom["hbar"], atom["x"], atom["y"]),
                complex(re, im),
            )
        return out


def _phi(xa, ya, xb, yb) -> float:
    """Bilinear twist phase phi(a, b) = x_b . y_a - x_a . y_b."""
    d1 = sum(u * v for u, v in zip(xb, ya))
    d2 = sum(u * v for u, v in zip(xa, yb))
    return d1 - d2


def _pairwise(a: CharacterSum, b: CharacterSum, kernel) -> CharacterSum:
    """Channelwise pairwise-atom product with coefficient factor kernel(hbar, phi)."""
    if a.dimension != b.dimension:
        raise ValueError("dimension mismatch")
    out = CharacterSum(a.dimension)
    hbars = {k[0] for k in a.atoms} & {k[0] for k in b.atoms}
    for hbar in hbars:
        for ca, xa, ya in a.channel_atoms(hbar):
            for cb, xb, yb in b.channel_atoms(hbar):
                factor = kernel(hbar, _phi(xa, ya, xb, yb))
                if factor == 0:
                    continue
                pos_x = tuple(u + v for u, v in zip(xa, xb))
                pos_y = tuple(u + v for u, v in zip(ya, yb))
                out._accumulate((hbar, pos_x, pos_y), ca * cb * factor)
    return out


def star(a: CharacterSum, b: CharacterSum) -> CharacterSum:
    """Twisted convolution: atoms multiply with phase exp(i pi hbar phi).

    At hbar = 0 the phase is 1 and this is plain convolution of atoms.
    The unit atom (coeff 1 at x = y = 0) is a two-sided identity on its
    channel.
    """
    return _pairwise(a, b, lambda h, phi: np.exp(1j * math.pi * h * phi))


def commutator(a: CharacterSum, b: CharacterSum) -> CharacterSum:
    """star(a, b) - star(b, a), computed directly with kernel 2 i sin(pi hbar phi)."""
    return _pairwise(a, b, lambda h, phi: 2j * math.sin(math.pi * h * phi))


def antiderivative(a: CharacterSum) -> CharacterSum:
    """Channelwise multiplication by 2 pi / (i hbar), the right inverse of
    the central derivative normalized so their composition is 4 pi^2.

    The hbar = 0 channel has no such scalar action (it would leave the
    character class); the bracket handles that channel via its limit kernel.
    """
    if any(k[0] == 0.0 for k in a.atoms):
        raise ValueError("antiderivative undefined on the hbar = 0 channel; use pmech_bracket")
    return a.scale_channels(lambda h: 2.0 * math.pi / (1j * h))


def _bracket_kernel(hbar: float, phi: float) -> float:
    if hbar == 0.0:
        return FOUR_PI_SQ * phi
    return (4.0 * math.pi / hbar) * math.sin(math.pi * hbar * phi)


def pmech_bracket(a: CharacterSum, b: CharacterSum) -> CharacterSum:
    """Commutator composed with the antiderivative, continuous in hbar.

    Channel kernels: (4 pi / hbar) sin(pi hbar phi) for hbar != 0 and the
    quadratic-order limit 4 pi^2 phi at hbar = 0.  The hbar = 0 channel,
    pushed through the full Fourier transform, is exactly the Poisson
    bracket of the transformed observables; fixed hbar reproduces the sine
    bracket.
    """
    return _pairwise(a, b, _bracket_kernel)


class PolyObservable:
    """Phase-space polynomial in (q_1..q_n, p_1..p_n) with exact monomials.

    Keys are (q-multidegree, p-multidegree); coefficients are complex.
    """

    __slots__ = ("dimension", "monomials")

    def __init__(self, dimension: int, monomials: dict[MonomialKey, complex] | None = None):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.dimension = dimension
        self.monomials: dict[MonomialKey, complex] = {}
        if monomials:
            for key, coeff in monomials.items():
                self._accumulate(self._norm_key(key), coeff)

    def _norm_key(self, key: MonomialKey) -> MonomialKey:
        dq, dp = tuple(int(d) for d in key[0]), tuple(int(d) for d in key[1])
        if len(dq) != self.dimension or len(dp) != self.dimension:
            raise ValueError("multidegree has wrong dimension")
        if any(d < 0 for d in dq + dp):
            raise ValueError("negative exponent")
        return (dq, dp)

    def _accumulate(self, key: MonomialKey, coeff: complex) -> None:
        value = self.monomials.get(key, 0j) + complex(coeff)
        if value == 0:
            self.monomials.pop(key, None)
        else:
            self.monomials[key] = value

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dimension: int) -> "PolyObservable":
        return cls(dimension)

    @classmethod
    def constant(cls, dimension: int, value: complex) -> "PolyObservable":
        zeros = (0,) * dimension
        return cls(dimension, {(zeros, zeros): value})

    @classmethod
    def coordinate(cls, dimension: int, which: str, j: int = 0) -> "PolyObservable":
        """The monomial q_j or p_j."""
        if which not in ("q", "p"):
            raise ValueError("which must be 'q' or 'p'")
        dq = [0] * dimension
        dp = [0] * dimension
        (dq if which == "q" else dp)[j] = 1
        return cls(dimension, {(tuple(dq), tuple(dp)): 1.0})

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: "PolyObservable") -> "PolyObservable":
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch")
        out = PolyObservable(self.dimension, dict(self.monomials))
        for key, coeff in other.monomials.items():
            out._accumulate(key, coeff)
        return out

    def __sub__(self, other: "PolyObservable") -> "PolyObservable":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "PolyObservable":
        return PolyObservable(self.dimension, {k: scalar * c for k, c in self.monomials.items()})

    def __mul__(self, other: "PolyObservable") -> "PolyObservable":
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch")
        out = PolyObservable(self.dimension)
        for (qa, pa), ca in self.monomials.items():
            for (qb, pb), cb in other.monomials.items():
                key = (
                    tuple(u + v for u, v in zip(qa, qb)),
                    tuple(u + v for u, v in zip(pa, pb)),
                )
                out._accumulate(key, ca * cb)
        return out

    def partial(self, which: str, j: int) -> "PolyObservable":
        """Exact partial derivative in q_j or p_j."""
        idx = 0 if which == "q" else 1
        out = PolyObservable(self.dimension)
        for key, coeff in self.monomials.items():
            deg = key[idx][j]
            if deg == 0:
                continue
            new = [list(key[0]), list(key[1])]
            new[idx][j] = deg - 1
            out._accumulate((tuple(new[0]), tuple(new[1])), coeff * deg)
        return out

    # -- inspection --------------------------------------------------------

    def degree(self) -> int:
        return max((sum(dq) + sum(dp) for dq, dp in self.monomials), default=0)

    def coefficient(self, key: MonomialKey) -> complex:
        return self.monomials.get(self._norm_key(key), 0j)

    def __len__(self) -> int:
        return len(self.monomials)

    def evaluate(self, qs, ps) -> np.ndarray:
        """Evaluate on broadcastable coordinate arrays (one per direction)."""
        qs = [np.asarray(q) for q in qs]
        ps = [np.asarray(p) for p in ps]
        out = None
        for (dq, dp), coeff in self.monomials.items():
            term = coeff * np.ones(np.broadcast(*(qs + ps)).shape, dtype=complex)
            for q, d in zip(qs, dq):
                if d:
                    term = term * q ** d
            for p, d in zip(ps, dp):
                if d:
                    term = term * p ** d
            out = term if out is None else out + term
        if out is None:
            return np.zeros(np.broadcast(*(qs + ps)).shape, dtype=complex)
        return out

    def to_dict(self) -> dict:
        return {
            "schema": "polyobs/1",
            "dimension": self.dimension,
            "monomials": [
                {"q": list(dq), "p": list(dp), "coeff": [c.real, c.imag]}
                for (dq, dp), c in sorted(self.monomials.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PolyObservable":
        if data.get("schema") != "polyobs/1":
            raise ValueError("expected schema 'polyobs/1'")
        out = cls(int(data["dimension"]))
        for mono in data.get("monomials", []):
            re, im = mono["coeff"]
            out._accumulate(out._norm_key((tuple(mono["q"]), tuple(mono["p"]))), complex(re, im))
        return out


TensorTerm = tuple[PolyObservable, PolyObservable, float]


def _apply_bidifferential(pairs: list[TensorTerm]) -> list[TensorTerm]:
    """One application of Pi = sum_j (d_q x d_p - d_p x d_q) on tensor terms."""
    out: list[TensorTerm] = []
    for u, v, w in pairs:
        for j in range(u.dimension):
            uq = u.partial("q", j)
            if len(uq):
                vp = v.partial("p", j)
                if len(vp):
                    out.append((uq, vp, w))
            up = u.partial("p", j)
            if len(up):
                vq = v.partial("q", j)
                if len(vq):
                    out.append((up, vq, -w))
    return out


def poisson_poly(a: PolyObservable, b: PolyObservable) -> PolyObservable:
    """sum_j (da/dq_j db/dp_j - da/dp_j db/dq_j), exact monomial arithmetic."""
    if a.dimension != b.dimension:
        raise ValueError("dimension mismatch")
    out = PolyObservable.zero(a.dimension)
    for u, v, w in _apply_bidifferential([(a, b, 1.0)]):
        out = out + w * (u * v)
    return out


def moyal_poly(hbar: float, a: PolyObservable, b: PolyObservable) -> PolyObservable:
    """Sine-kernel bracket (4 pi / hbar) sin((hbar / 4 pi) Pi) applied to (a, b).

    The series terminates on polynomials.  The leading term is the Poisson
    bracket, and for quadratic a every higher term vanishes identically, so
    the result then coincides with :func:`poisson_poly` exactly.  The scale
    hbar / 4 pi matches the character-backend kernel (4 pi / hbar)
    sin(pi hbar phi) atom for atom.
    """
    if hbar == 0:
        raise ValueError("hbar must be nonzero; use poisson_poly for the limit")
    if a.dimension != b.dimension:
        raise ValueError("dimension mismatch")
    c = hbar / (4.0 * math.pi)
    out = PolyObservable.zero(a.dimension)
    pairs: list[TensorTerm] = [(a, b, 1.0)]
    k = 0
    while pairs:
        pairs = _apply_bidifferential(pairs)
        k += 1
        if not pairs:
            break
        if k % 2 == 1:
            m = (k - 1) // 2
            coeff = ((-1.0) ** m) * c ** (k - 1) / math.factorial(k)
            for u, v, w in pairs:
                out = out + (w * coeff) * (u * v)
    return out


def evolve(
    H,
    f0,
    t_end: float,
    dt: float,
    backend: str,
    hbar: float | None = None,
    degree_cap: int = 32,
    atom_cap: int = 20000,
) -> list[tuple[float, object]]:
    """Integrate df/dt = bracket(H, f) with classic fourth-order stepping.

    backend 'poisson' and 'moyal' act on PolyObservable (moyal needs hbar),
    'pmech' on CharacterSum.  Polynomial degree (resp. atom count) growing
    past the cap raises :class:`TruncationError` carrying the offending step
    and size.  Returns the sampled trajectory [(t, observable), ...]
    including both endpoints.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if backend == "poisson":
        if not isinstance(f0, PolyObservable):
            raise ValueError("poisson backend needs PolyObservable operands")
        bracket = lambda f: poisson_poly(H, f)
    elif backend == "moyal":
        if not isinstance(f0, PolyObservable):
            raise ValueError("moyal backend needs PolyObservable operands")
        if hbar is None or hbar == 0:
            raise ValueError("moyal backend needs nonzero hbar")
        bracket = lambda f: moyal_poly(hbar, H, f)
    elif backend == "pmech":
        if not isinstance(f0, CharacterSum):
            raise ValueError("pmech backend needs CharacterSum operands")
        bracket = lambda f: pmech_bracket(H, f)
    else:
        raise ValueError("backend must be 'poisson', 'moyal' or 'pmech'")

    def check_size(f, step):
        if isinstance(f, PolyObservable):
            size = f.degree()
            cap = degree_cap
            what = "degree"
        else:
            size = len(f)
            cap = atom_cap
            what = "atom count"
        if size > cap:
            raise TruncationError(
                f"{what} {size} exceeded cap {cap} at step {step}", step=step, size=size, cap=cap
            )

    steps = max(1, int(round(t_end / dt)))
    f = f0
    trajectory = [(0.0, f)]
    for step in range(1, steps + 1):
        k1 = bracket(f)
        k2 = bracket(f + (dt / 2.0) * k1)
        k3 = bracket(f + (dt / 2.0) * k2)
        k4 = bracket(f + dt * k3)
        f = f + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        check_size(f, step)
        trajectory.append((step * dt, f))
    return trajectory
