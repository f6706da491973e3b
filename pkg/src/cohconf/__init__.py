"""Coherent configurations, Weisfeiler-Leman closure and separability certificates."""

from __future__ import annotations

from .budget import Budget, BudgetExceeded
from .builders import (
    PermGroup,
    c_scheme,
    cyclotomic_scheme,
    discrete_configuration,
    orbital_config,
    paley,
    trivial_scheme,
)
from .ccf import CCFError, CatalogError, ingest_catalog, parse_ccf, write_ccf
from .closure import coherent_closure, graph_closure, m_extension, point_extension
from .core import (
    AxiomError,
    CoherenceError,
    CoherentConfiguration,
    ConverseError,
    DiagonalError,
    from_color_matrix,
    is_fission,
)
from .couples import check_theorem_conditions
from .gf import FieldElement, FiniteField, build_field
from .iso import (
    algebraic_isomorphisms,
    automorphism_group,
    is_schurian,
    isomorphisms,
    separability_witness,
)
from .separability import analyze, exceptional_pairs, paley_wl_bound, two_separability_report

__version__ = "0.1.0"
