"""Boundary spectra of partial chord diagrams: brute-force oracle and cut-and-join engine."""

__version__ = "0.1.0"

from .errors import ChordSpectraError
from .spectra import (
    DEFAULT_POLICY,
    BackboneSpectrum,
    BoundaryClass,
    CountTable,
    CyclicPolicy,
    DiagramClass,
    LengthPointSpectrum,
    Mode,
    Spectrum,
    aggregate_N,
    canonical_tuple,
    canonicalize,
    project_spectra,
    validate_class,
)
from .tracer import Diagram, classify, trace
from .oracle import count_table, enumerate_diagrams
from .series import Monomial, Series, Truncation
from .cutjoin import solve_connected, solve_full, tables_from_parts
from .recursion import recursion_check

__all__ = [
    "__version__",
    "ChordSpectraError",
    "DEFAULT_POLICY",
    "BackboneSpectrum",
    "BoundaryClass",
    "CountTable",
    "CyclicPolicy",
    "DiagramClass",
    "LengthPointSpectrum",
    "Mode",
    "Spectrum",
    "aggregate_N",
    "canonical_tuple",
    "canonicalize",
    "project_spectra",
    "validate_class",
    "Diagram",
    "classify",
    "trace",
    "count_table",
    "enumerate_diagrams",
    "Monomial",
    "Series",
    "Truncation",
    "solve_connected",
    "solve_full",
    "tables_from_parts",
    "recursion_check",
]
