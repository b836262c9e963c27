"""Numerical toolkit for Euclidean Jordan algebras viewed as probabilistic theories.

The package covers spectral decomposition in the simple and composite
algebras, orthogonality and frames of atoms, transition probabilities,
automorphisms and the symmetry taxonomy built on them, and a polytope
side-track for testing the (**) property on non-quadratic state spaces.
"""

from __future__ import annotations

from .algebra import CATALOG, Algebra, AlgebraKind, Element, make_algebra, parse_kind
from .automorphisms import Automorphism, haar_sample
from .convex import (
    Polytope,
    builtin_polytope,
    e_omega_value,
    make_polytope,
    polytope_automorphisms,
    polytope_bit_symmetry,
    star_star_check,
)
from .errors import ConelabError
from .logic import Frame, are_orthogonal, make_frame, orthogonality_tests
from .lp import LPProblem, lp_solve
from .spectral import SpectralDecomposition, spectral_decompose
from .symmetry import (
    BilinearForm,
    SymmetryVerdict,
    invariant_state,
    make_invariant_form,
    measure_epsilon,
    state_decomposition,
    symmetry_report,
    theorem2_form,
)
from .transition import State, atom_state, transition_probability
from .transport import transport_atom, transport_frame

__version__ = "0.1.0"

__all__ = [
    "CATALOG",
    "Algebra",
    "AlgebraKind",
    "Automorphism",
    "BilinearForm",
    "ConelabError",
    "Element",
    "Frame",
    "LPProblem",
    "Polytope",
    "SpectralDecomposition",
    "State",
    "SymmetryVerdict",
    "are_orthogonal",
    "atom_state",
    "builtin_polytope",
    "e_omega_value",
    "haar_sample",
    "invariant_state",
    "lp_solve",
    "make_algebra",
    "make_frame",
    "make_invariant_form",
    "make_polytope",
    "measure_epsilon",
    "orthogonality_tests",
    "parse_kind",
    "polytope_automorphisms",
    "polytope_bit_symmetry",
    "spectral_decompose",
    "star_star_check",
    "state_decomposition",
    "symmetry_report",
    "theorem2_form",
    "transition_probability",
    "transport_atom",
    "transport_frame",
]
