"""topconv: a finite-model workbench for lattice-valued convergence groups.

Builds finite complete residuated lattices, fuzzy sets, top-filters,
convergence and uniform convergence structures, and function-space power
objects, then verifies their defining laws by exhaustive evaluation at
desk scale, reporting counterexample witnesses when a check fails.
"""

from .fuzzy import (
    Carrier,
    FiniteGroup,
    FiniteMap,
    FuzzySet,
    builtin_group,
    cyclic_group,
    klein_group,
    make_group,
)
from .lattice import ResiduatedLattice, build_boolean, build_chain, build_from_tables, verify_axioms
from .report import Budgets, CheckResult, Report
from .tfilter import TFilter, enumerate_filters, generate, point_filter
from .convergence import (
    ConvergenceStructure,
    FilterUniverse,
    complete_universe,
    discrete_structure,
    indiscrete_structure,
)
from .uniform import UniformStructure, phi_from_group, conv_from_phi
from .power import ContinuousMapSpace, build_power
from .model import ModelDocument, parse_model, emit_model
from .suites import run_suite, list_suites

__version__ = "0.1.0"
