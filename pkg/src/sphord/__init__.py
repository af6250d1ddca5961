"""Finite and dense n-spherical orders."""

from .backforth import PartialIso, coverage_ok, is_partial_iso, run, step, verify_last_pair
from .dense import DenseOracle, WitnessRequest, density_witness, k_rel_values
from .errors import (
    ArityError,
    BudgetExceeded,
    DomainError,
    FormulaError,
    NoWitness,
    ParseError,
    SearchExhausted,
    SpectrumError,
    SphordError,
    UnboundVariable,
)
from .order import (
    AxiomReport,
    FiniteSphericalOrder,
    are_isomorphic,
    cardinality_formula,
    check_axioms,
    derive,
    enumerate_all_orders,
    is_identification,
    membership,
    relation_size,
)
from .spectra import (
    CONTINUUM,
    ExpansionSpec,
    ehrenfeucht_catalog,
    hasse,
    limit_count,
    spectrum,
)

__version__ = "0.1.0"
