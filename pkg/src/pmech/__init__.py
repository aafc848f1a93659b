"""Phase-space brackets on nilpotent groups and covariant field dynamics.

Subpackages by theme:

- :mod:`pmech.clifford`    exact multivector arithmetic, diagonal metrics
- :mod:`pmech.heisenberg`  Heisenberg group, coadjoint orbits, grid action
- :mod:`pmech.pbrackets`   character-sum observables, star product, brackets
- :mod:`pmech.galilean`    multidimensional-center group, coherent states,
                           Clifford-valued field brackets
- :mod:`pmech.dwfield`     polymomenta, covariant field march, residual checks
- :mod:`pmech.cli`         reproducible experiment harness
"""

from .clifford import (
    CliffordElement,
    Signature,
    blade_exp,
    center_constant,
    geometric_product,
)
from .conventions import CONVENTIONS_VERSION
from .heisenberg import (
    CoadjointPoint,
    GridFunction,
    HeisenbergElement,
    coadjoint,
    h_inv,
    h_mul,
    symplectic_form,
)
from .pbrackets import (
    CharacterSum,
    Channel,
    PolyObservable,
    antiderivative,
    commutator,
    evolve,
    moyal_poly,
    pmech_bracket,
    poisson_poly,
    star,
)

__version__ = "0.1.0"

__all__ = [
    "CONVENTIONS_VERSION",
    "Channel",
    "CharacterSum",
    "CliffordElement",
    "CoadjointPoint",
    "GridFunction",
    "HeisenbergElement",
    "PolyObservable",
    "Signature",
    "antiderivative",
    "blade_exp",
    "center_constant",
    "coadjoint",
    "commutator",
    "evolve",
    "geometric_product",
    "h_inv",
    "h_mul",
    "moyal_poly",
    "pmech_bracket",
    "poisson_poly",
    "star",
    "symplectic_form",
]
