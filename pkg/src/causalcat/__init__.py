"""Idempotent subunits, restriction and causal structure in finite monoidal models."""
from .report import LawReport
from .lattice import (
    ClosureOperator, CausalStructurePair, DomainError, FiniteSemilattice, MeetSemilattice,
    PowersetLattice, ThinCategory, check_closure, restrict_closure, subunits_of_thin,
    thin_from_semilattice,
)
from .causal import (
    CausalSite, causal_future, causal_past, chron_future, chron_past, complement, future_closure,
    past_closure, validate_site,
)
from .hilbfield import BaseSpace, HField, HMorphism, TAU
from .subunits import Subunit, has_support_in, recognize_subunit, subunit_leq, subunit_meet, support
from .protocol import Scenario, build_protocol, verify_teleportation

__version__ = "0.1.0"
