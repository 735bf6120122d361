"""Topologies on finite orthomodular lattices and their ℝ³ Hilbert-lattice counterpart."""
from .lattice import (
    FiniteOml,
    LatticeError,
    NotALattice,
    NotAnOrtholattice,
    NotAPoset,
    NotOrthomodular,
    RawLatticeSpec,
    SizeLimit,
    gen_boolean,
    gen_greechie,
    gen_horizontal_sum,
    gen_mo,
    gen_product,
    validate,
)
from .lowersets import FinitePoset, LowerSet, SmashedPoset, closure_negneg, complement_neg, is_lower_set, smashed_product
from .topology import (
    RnProfile,
    TopologyReport,
    ball_at,
    ball_general,
    ball_lattice,
    is_open,
    isolated_points,
    r_at_profile,
    r_general_profile,
    topology_report,
)

__version__ = "0.1.0"
