"""Exact Laurent-polynomial iteration, factor tracking and coprimeness certificates
for discrete recurrences with the Laurent property."""

from .cyclotomic import CycloElement, CycloRing, cyclo_ring
from .dsl import parse_recurrence, pretty
from .engines import (IterateStore, LatticeWindow, SystemSpec, laurent_check, simple_iterate,
                      somos4_iterate, somos4_numeric, toda1d_iterate, toda2d_iterate)
from .generic import generic_iterate
from .laurent import LaurentPoly, VariableTable, associate_equal, deg, exact_divide

__version__ = "0.1.0"
