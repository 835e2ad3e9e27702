"""Visibly pushdown transducers: execution, functionality and equivalence checks."""

from .check import (CheckOptions, DomainVerdict, EquivVerdict, NotFunctionalError,
                    check_equiv_functional, check_functional, domain_equiv, domain_height,
                    expand_on_demand, height_bound)
from .fileformat import ParseError, load_machine, parse_machine, parse_word, serialize_machine
from .fst import FunctionalityVerdict, Witness, fst_functional, fst_functional_bounded
from .model import (Fst, StructuredAlphabet, Vpa, Vpt, height, is_well_nested, matching,
                    validate)
from .oracle import brute_equiv, brute_functional, enumerate_domain
from .pumping import decompose, pump, shrink_witness
from .semantics import accepting_runs, accepts, transduce

__version__ = "0.1.0"
