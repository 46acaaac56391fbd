"""Exact finite computations around monoids of cellular automata.

Groups as Cayley tables, the monoid ``End(A^G)`` of cellular automata over a
finite group, exhaustive rank searches on finite monoids, group rings over
finite fields and linear cellular automata.
"""

from .ca import CAMonoid, CellularAutomaton, FullShift, enumerate_end, full_shift, lift_ca, make_ca, project_ca
from .fields import FiniteField, galois_field, prime_field
from .group_ring import GroupRing, GroupRingElement, group_ring, perlis_walker, units_of_group_ring
from .groups import FiniteGroup, enumerate_subgroups, lattice_summary, named_group, quotient
from .laurent import LaurentPolynomial, det_over_commutative_ring, laurent_is_unit
from .linear_ca import LinearCA, linear_ca_from_groupring, linear_monoid, verify_linear_rank_formula
from .rank import FiniteMonoid, closure, rank, relative_rank, verify_rank_formula

__version__ = "0.1.0"
