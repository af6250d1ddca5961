"""First-order syntax over {K, =}, diagrams, and deciders for the dense theory."""

from .diagrams import Diagram, enumerate_diagrams, extend_diagrams, labeled_orders
from .semantics import (
    decide,
    decide_by_order_types,
    eval_finite,
    eval_in_dense,
    holds_in_diagram,
    models,
    qf_sat,
)
from .sentences import axiom_sentences, density_sentence, swap_pair_sentence
from .syntax import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    K,
    Not,
    Or,
    free_variables,
    parse,
    quantifier_depth,
    rename_bound,
)
