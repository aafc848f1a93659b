"""Frozen normalization conventions shared by every backend.

Several of the kernels below admit competing normalizations in the
literature (sign of the twist phase, the bracket prefactor, the factor 2 in
the anticommutation relation).  Each choice here was fixed once against an
independent numerical oracle (mollified-delta quadrature for the twist
phase, symbolic Poisson brackets for the classical kernels) and is
re-verified by the test suite.  Reports emitted by the CLI embed
``CONVENTIONS_VERSION`` so that archived outputs are comparable.

See CONVENTIONS.md at the repository root for the prose version.
"""

CONVENTIONS_VERSION = "conventions/1"

CONVENTIONS = {
    "clifford_relation": "e_mu e_nu + e_nu e_mu = 2 eta_mumu delta_munu, so e_mu^2 = eta_mumu",
    "twist_phase": "star(a, b) twists atom coefficients by exp(i pi hbar phi(a, b))",
    "phase_argument": "phi(a, b) = x_b . y_a - x_a . y_b (left operand carries the primed point)",
    "commutator_kernel": "2 i sin(pi hbar phi); vanishes identically on the hbar = 0 channel",
    "antiderivative": "multiplies each hbar != 0 channel by 2 pi / (i hbar)",
    "bracket_kernel": "(4 pi / hbar) sin(pi hbar phi) for hbar != 0; 4 pi^2 phi on the hbar = 0 channel",
    "moyal_series": "(4 pi / hbar) sin((hbar / 4 pi) Pi) with Pi the Poisson bidifferential operator",
    "field_bracket_kernel": "(4 pi / h_j) e_j sin(pi h_j phi_j) per channel j; 4 pi^2 e_j phi_j at h_j = 0, e_j on the right of the coefficient product",
    "inner_product": "sum_j h_j mean_s(conj(f1) E_j^-) . mean_s(E_j^+ f2) integrated over (x, y), E_j^± = exp(±2 pi e_j h_j s_j); s-integrals are period means",
    "conjugation": "Clifford conjugation (reversion with e_j -> -e_j)",
    "blade_exponential": "exp(a + e_j b) = e^a (cos b + e_j sin b) for e_j^2 = -1, hyperbolic for e_j^2 = +1",
}


def stamp() -> dict:
    """Compact ledger block to embed into machine-readable reports."""
    return {"version": CONVENTIONS_VERSION, "entries": dict(CONVENTIONS)}
