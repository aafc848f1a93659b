"""Sparse multivector arithmetic for Clifford algebras with diagonal metric.

The algebra over generators e_0 .. e_n is fixed by a signature
eta = diag(+-1, ..., +-1) through

    e_mu e_nu + e_nu e_mu = 2 eta_mumu delta_munu,

so each generator squares to the scalar eta_mumu and distinct generators
anticommute.  (The factor 2 keeps e_mu^2 = eta_mumu; without it generators
would square to eta/2 and the trace constant sum_j e_j e_j would come out
halved, see :func:`center_constant`.)

Elements are stored sparsely as a map from sorted index tuples (blades) to
coefficients.  Products are computed by transposition counting, so inputs
with integer coefficients multiply exactly.  All values are immutable in
practice: operations return fresh elements and never mutate arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

Blade = tuple[int, ...]


@dataclass(frozen=True)
class Signature:
    """Diagonal metric entries eta_mumu, each +1 or -1."""

    diag: tuple[int, ...]

    def __init__(self, diag: Iterable[float]):
        entries = tuple(int(d) for d in diag)
        if not entries:
            raise ValueError("signature must have at least one entry")
        if any(d not in (1, -1) for d in entries):
            raise ValueError("signature entries must be +1 or -1")
        object.__setattr__(self, "diag", entries)

    @property
    def dim(self) -> int:
        return len(self.diag)


def merge_blades(b1: Blade, b2: Blade, diag: tuple[int, ...]) -> tuple[Blade, int]:
    """Product of two basis blades: resulting blade and sign in {-1, +1}.

    Generators from `b2` are inserted into `b1` one at a time; each swap past
    a larger index flips the sign, and a repeated index cancels with the
    metric factor eta_jj.
    """
    sign = 1
    out = list(b1)
    for g in b2:
        pos = len(out)
        while pos > 0 and out[pos - 1] > g:
            pos -= 1
            sign = -sign
        if pos > 0 and out[pos - 1] == g:
            sign *= diag[g]
            del out[pos - 1]
        else:
            out.insert(pos, g)
    return tuple(out), sign


class CliffordElement:
    """Multivector with sparse blade coefficients.

    Coefficients may be real or complex; the blade bookkeeping is identical.
    """

    __slots__ = ("signature", "coeffs")

    def __init__(self, signature: Signature, coeffs: Mapping[Blade, complex] | None = None):
        self.signature = signature
        cleaned: dict[Blade, complex] = {}
        if coeffs:
            for blade, value in coeffs.items():
                b = tuple(blade)
                if any(i < 0 or i >= signature.dim for i in b):
                    raise ValueError(f"blade {b} outside 0..{signature.dim - 1}")
                if tuple(sorted(set(b))) != b:
                    raise ValueError(f"blade {b} must be strictly sorted")
                if value != 0:
                    cleaned[b] = cleaned.get(b, 0) + value
        self.coeffs = cleaned

    # -- constructors -------------------------------------------------

    @classmethod
    def scalar(cls, signature: Signature, value: complex) -> "CliffordElement":
        return cls(signature, {(): value})

    @classmethod
    def generator(cls, signature: Signature, j: int) -> "CliffordElement":
        return cls(signature, {(j,): 1.0})

    @classmethod
    def zero(cls, signature: Signature) -> "CliffordElement":
        return cls(signature, {})

    # -- access --------------------------------------------------------

    def blade(self, blade: Blade) -> complex:
        return self.coeffs.get(tuple(blade), 0.0)

    @property
    def scalar_part(self) -> complex:
        return self.coeffs.get((), 0.0)

    def max_abs(self) -> float:
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_abs() <= tol

    # -- ring operations -----------------------------------------------

    def _check_compatible(self, other: "CliffordElement") -> None:
        if self.signature != other.signature:
            raise ValueError("operands carry different signatures")

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = CliffordElement.scalar(self.signature, other)
        self._check_compatible(other)
        out = dict(self.coeffs)
        for blade, value in other.coeffs.items():
            out[blade] = out.get(blade, 0) + value
        return CliffordElement(self.signature, out)

    __radd__ = __add__

    def __neg__(self):
        return CliffordElement(self.signature, {b: -v for b, v in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = CliffordElement.scalar(self.signature, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return CliffordElement(
                self.signature, {b: v * other for b, v in self.coeffs.items()}
            )
        self._check_compatible(other)
        diag = self.signature.diag
        out: dict[Blade, complex] = {}
        for b1, v1 in self.coeffs.items():
            for b2, v2 in other.coeffs.items():
                blade, sign = merge_blades(b1, b2, diag)
                out[blade] = out.get(blade, 0) + sign * v1 * v2
        return CliffordElement(self.signature, out)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    # -- involutions ----------------------------------------------------

    def reverse(self) -> "CliffordElement":
        """Reversion: order of generators inside each blade is flipped."""
        out = {}
        for blade, value in self.coeffs.items():
            k = len(blade)
            out[blade] = value * ((-1) ** (k * (k - 1) // 2))
        return CliffordElement(self.signature, out)

    def conjugate(self) -> "CliffordElement":
        """Clifford conjugation: reversion composed with e_j -> -e_j.

        Sends exp(e_j t)-type elements to exp(-e_j t), which is what the
        coherent-state inner product needs.
        """
        out = {}
        for blade, value in self.coeffs.items():
            k = len(blade)
            out[blade] = value * ((-1) ** (k * (k + 1) // 2))
        return CliffordElement(self.signature, out)

    def __repr__(self):
        if not self.coeffs:
            return "<0>"
        parts = []
        for blade in sorted(self.coeffs, key=lambda b: (len(b), b)):
            label = "1" if not blade else "e" + "".join(str(i) for i in blade)
            parts.append(f"{self.coeffs[blade]!r}*{label}")
        return "<" + " + ".join(parts) + ">"


def geometric_product(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    """Associative bilinear product with e_mu e_nu + e_nu e_mu = 2 eta_mumu."""
    return a * b


def blade_exp(a: float, j: int, b: float, signature: Signature) -> CliffordElement:
    """exp(a + e_j b) for real a, b.

    With e_j^2 = -1 this is the Euler formula e^a (cos b + e_j sin b); for
    e_j^2 = +1 the circular functions turn hyperbolic.
    """
    if not 0 <= j < signature.dim:
        raise ValueError(f"generator index {j} outside 0..{signature.dim - 1}")
    ea = math.exp(a)
    if signature.diag[j] < 0:
        return CliffordElement(signature, {(): ea * math.cos(b), (j,): ea * math.sin(b)})
    return CliffordElement(signature, {(): ea * math.cosh(b), (j,): ea * math.sinh(b)})


def center_constant(signature: Signature) -> float:
    """sum_j e_j e_j, a scalar: the trace of the diagonal metric."""
    return float(sum(signature.diag))


def enumerate_blades(signature: Signature) -> list[Blade]:
    """All 2^dim basis blades, ordered by grade then lexicographically."""
    idx = range(signature.dim)
    out: list[Blade] = []
    for k in range(signature.dim + 1):
        out.extend(combinations(idx, k))
    return out


def blade_distance(a: CliffordElement, b: CliffordElement) -> float:
    """Max absolute coefficient difference across all blades."""
    blades = set(a.coeffs) | set(b.coeffs)
    return max((abs(a.blade(bl) - b.blade(bl)) for bl in blades), default=0.0)
