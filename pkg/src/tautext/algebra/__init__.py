"""Exact arithmetic: polynomials, number fields, cyclotomics, algebraic numbers."""
from __future__ import annotations

from .algnum import AlgNum, is_root_of_unity
from .cyclotomic import CycNum
from .newton import NewtonPolygon, newton_polygon
from .numberfield import QQ, FieldElem, NumberField
from .poly import Poly, resultant

__all__ = [
    "AlgNum", "CycNum", "FieldElem", "NewtonPolygon", "NumberField", "Poly", "QQ",
    "is_root_of_unity", "newton_polygon", "resultant",
]
