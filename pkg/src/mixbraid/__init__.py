"""Mixed braid groups B_{g,n} for links in a genus-g handlebody."""

from .diagram import (
    DiagramError,
    GeometricMixedBraid,
    MixedDiagram,
    MorseEvent,
    algebraize,
    apply_move,
    braid,
    close_algebraic,
    close_geometric,
    find_up_arcs,
    parse_diagram,
    validate,
)
from .garside import equal, normal_form
from .invariants import (
    check_axioms,
    homology_functional,
    link_invariant,
    winding_profile,
)
from .moves import (
    MoveCertificate,
    MoveStep,
    apply_l_move,
    destabilize,
    sigma_conjugate,
    stabilize,
)
from .search import SearchBudget, equivalence_search, verify_certificate
from .words import BraidWord, WordError, a_to_b, b_to_a, embed, parse_word

__version__ = "0.1.0"

__all__ = [
    "BraidWord",
    "DiagramError",
    "GeometricMixedBraid",
    "MixedDiagram",
    "MorseEvent",
    "MoveCertificate",
    "MoveStep",
    "SearchBudget",
    "WordError",
    "a_to_b",
    "algebraize",
    "apply_l_move",
    "apply_move",
    "b_to_a",
    "braid",
    "check_axioms",
    "close_algebraic",
    "close_geometric",
    "destabilize",
    "embed",
    "equal",
    "equivalence_search",
    "find_up_arcs",
    "homology_functional",
    "link_invariant",
    "normal_form",
    "parse_diagram",
    "parse_word",
    "sigma_conjugate",
    "stabilize",
    "validate",
    "verify_certificate",
    "winding_profile",
]
