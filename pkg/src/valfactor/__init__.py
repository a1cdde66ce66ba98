"""Exact zigzag factorization of monomial maps along valuations of maximal rational rank.

The package exposes four layers:

* :mod:`valfactor.values`     -- exact values ``sum(q_i sqrt(d_i))`` with a total order
* :mod:`valfactor.perron`     -- Jacobi-Perron steps and the transforms they induce
* :mod:`valfactor.monomaps`   -- monomial maps, blowups and inverse blowups
* :mod:`valfactor.factor`     -- adjoint-row clearing, zigzag factorization, verification
* :mod:`valfactor.uniformize` -- polynomial monomialization by Perron transforms
"""

from .errors import AlgorithmError, CapExceeded
from .factor import Arrow, Report, ZigzagCert, clear_adjoint_row, verify_zigzag, zigzag_factor
from .monomaps import MapState, MonoMap, Move, blowup, imt, relabel, replay, solve_unit_row
from .perron import (
    PerronMatrix,
    PerronStep,
    clear_to_regular,
    make_divisible,
    perron_accumulate,
    perron_step,
    type2_matrix,
)
from .uniformize import MonomialForm, Polynomial, monomialize, poly_value, substitute
from .values import EQUAL, GREATER, LESS, SurdBasis, Value, compare, floor_ratio

__version__ = "0.1.0"

__all__ = [
    "AlgorithmError",
    "CapExceeded",
    "Arrow",
    "Report",
    "ZigzagCert",
    "clear_adjoint_row",
    "verify_zigzag",
    "zigzag_factor",
    "MapState",
    "MonoMap",
    "Move",
    "blowup",
    "imt",
    "relabel",
    "replay",
    "solve_unit_row",
    "PerronMatrix",
    "PerronStep",
    "clear_to_regular",
    "make_divisible",
    "perron_accumulate",
    "perron_step",
    "type2_matrix",
    "MonomialForm",
    "Polynomial",
    "monomialize",
    "poly_value",
    "substitute",
    "EQUAL",
    "GREATER",
    "LESS",
    "SurdBasis",
    "Value",
    "compare",
    "floor_ratio",
]
