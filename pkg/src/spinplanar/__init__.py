"""Exact computations in the spin planar algebra on n spins."""

from __future__ import annotations

from .basis import BasisIndex, Family, basis_diagram, enumerate_basis, jones_projection, to_basis, unit_product
from .diagram import ClosedDiagram, Colour, Element, FlatDiagram, make_diagram, stack
from .errors import ArityError, ConfigError, SpinPlanarError, ValidationError
from .evalfun import lambda_minus, lambda_plus, pairing, tau
from .exactnum import Scalar

__all__ = [
    "ArityError",
    "BasisIndex",
    "ClosedDiagram",
    "Colour",
    "ConfigError",
    "Element",
    "Family",
    "FlatDiagram",
    "Scalar",
    "SpinPlanarError",
    "ValidationError",
    "basis_diagram",
    "enumerate_basis",
    "jones_projection",
    "lambda_minus",
    "lambda_plus",
    "make_diagram",
    "pairing",
    "stack",
    "tau",
    "to_basis",
    "unit_product",
]
