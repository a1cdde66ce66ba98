"""Monomial maps between regular local rings and their elementary moves.

A :class:`MonoMap` with rows ``A`` encodes ``x_i = prod_j y_j ** A[i][j]``.
The moves act on the columns (the ``y`` side):

* ``blowup(r, s)``  -- monoidal transform ``y_r = y'_r y'_s``, legal along the
  valuation only when ``value(y_r) > value(y_s)``; column ``s`` += column ``r``.
* ``imt(r, s)``     -- inverse monoidal transform, inserting the ring with
  ``y_r(1) = y_r y_s`` below; column ``s`` -= column ``r``.
* ``relabel(perm)`` -- new variable ``k`` is old variable ``perm[k]``.

Indices are 0-based in the Python API and 1-based in JSON documents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import intmat
from .values import Value

BLOWUP, IMT, RELABEL = "blowup", "imt", "relabel"


@dataclass(frozen=True)
class MonoMap:
    rows: tuple

    def __post_init__(self):
        rows = intmat.as_matrix(self.rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square and nonempty")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def det(self) -> int:
        return intmat.det(self.rows)

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.rows)

    def is_nonnegative(self) -> bool:
        return intmat.is_nonnegative(self.rows)

    @classmethod
    def identity(cls, n: int) -> "MonoMap":
        return cls(intmat.identity(n))


@dataclass(frozen=True)
class Move:
    kind: str
    r: Optional[int] = None
    s: Optional[int] = None
    perm: Optional[tuple] = None

    @classmethod
    def blowup(cls, r: int, s: int) -> "Move":
        return cls(BLOWUP, r, s)

    @classmethod
    def imt(cls, r: int, s: int) -> "Move":
        return cls(IMT, r, s)

    @classmethod
    def relabel(cls, perm: Sequence[int]) -> "Move":
        return cls(RELABEL, perm=tuple(perm))

    def embedded(self, index_map: Sequence[int], n: int) -> "Move":
        """The same move on ``n`` variables, variable ``k`` renamed ``index_map[k]``.

        Variables outside the image of ``index_map`` are left fixed.
        """
        if self.kind == RELABEL:
            perm = list(range(n))
            for k, p in enumerate(self.perm):
                perm[index_map[k]] = index_map[p]
            return Move.relabel(perm)
        return Move(self.kind, index_map[self.r], index_map[self.s])

    def __str__(self) -> str:
        if self.kind == RELABEL:
            return f"relabel{list(self.perm)}"
        return f"{self.kind}({self.r}, {self.s})"


@dataclass(frozen=True)
class MapState:
    """A monomial map together with the values of its ``y`` variables."""

    map: MonoMap
    weights: tuple
    log: tuple = field(default=())

    def __post_init__(self):
        if not isinstance(self.map, MonoMap):
            object.__setattr__(self, "map", MonoMap(self.map))
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "log", tuple(self.log))
        if len(self.weights) != self.map.n:
            raise ValueError("weight count does not match dimension")

    @property
    def n(self) -> int:
        return self.map.n

    @property
    def rows(self) -> tuple:
        return self.map.rows

    def x_values(self) -> list:
        return intmat.matvec(self.rows, self.weights)

    def all_positive(self) -> bool:
        return all(w.sign() > 0 for w in self.weights)


def _check_index(state: MapState, *idx: int) -> None:
    for i in idx:
        if not (isinstance(i, int) and 0 <= i < state.n):
            raise ValueError(f"index {i} out of range")


def _column_op(rows: tuple, r: int, s: int, k: int) -> tuple:
    return tuple(tuple(row[j] + k * row[r] if j == s else row[j] for j in range(len(row)))
                 for row in rows)


def solve_weights(rows: tuple, x_values: Sequence[Value]) -> tuple:
    """The unique ``w`` with ``rows @ w == x_values``."""
    inv = intmat.inverse(rows)
    return tuple(intmat.matvec(inv, x_values))


def blowup(state: MapState, r: int, s: int) -> MapState:
    _check_index(state, r, s)
    if r == s:
        raise ValueError("degenerate center")
    w = state.weights
    if not w[r] > w[s]:
        raise ValueError("not allowable along valuation")
    weights = w[:r] + (w[r] - w[s],) + w[r + 1:]
    return MapState(MonoMap(_column_op(state.rows, r, s, 1)), weights,
                    state.log + (Move.blowup(r, s),))


def imt(state: MapState, r: int, s: int) -> MapState:
    _check_index(state, r, s)
    if r == s:
        raise ValueError("degenerate center")
    if any(row[s] < row[r] for row in state.rows):
        raise ValueError("IMT not defined")
    rows = _column_op(state.rows, r, s, -1)
    weights = solve_weights(rows, state.x_values())
    if not all(x.sign() > 0 for x in weights):
        raise ValueError("valuation does not dominate IMT target")
    return MapState(MonoMap(rows), weights, state.log + (Move.imt(r, s),))


def relabel(state: MapState, perm: Sequence[int]) -> MapState:
    perm = tuple(perm)
    if sorted(perm) != list(range(state.n)):
        raise ValueError("not a permutation")
    rows = tuple(tuple(row[p] for p in perm) for row in state.rows)
    weights = tuple(state.weights[p] for p in perm)
    return MapState(MonoMap(rows), weights, state.log + (Move.relabel(perm),))


def apply_move(state: MapState, move: Move) -> MapState:
    if move.kind == BLOWUP:
        return blowup(state, move.r, move.s)
    if move.kind == IMT:
        return imt(state, move.r, move.s)
    if move.kind == RELABEL:
        return relabel(state, move.perm)
    raise ValueError(f"unknown move kind {move.kind!r}")


class ReplayError(ValueError):
    """A move's precondition failed; ``index`` is its 1-based position."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"move {index}: {reason}")
        self.index = index
        self.reason = reason


def replay(initial: MapState, moves: Sequence[Move]) -> MapState:
    state = initial
    for k, move in enumerate(moves, start=1):
        try:
            state = apply_move(state, move)
        except ValueError as exc:
            raise ReplayError(k, str(exc)) from None
    return state


def solve_unit_row(m: MonoMap) -> tuple:
    """Integer ``z`` with ``m @ z == e_1`` (first column of the inverse)."""
    if not isinstance(m, MonoMap):
        m = MonoMap(m)
    if abs(m.det) != 1:
        raise ValueError("not unimodular")
    inv = intmat.unimodular_inverse(m.rows)
    return tuple(row[0] for row in inv)


def update_unit_row(z: Sequence[int], move: Move) -> tuple:
    """Incremental update of the unit row under one move."""
    z = list(z)
    if move.kind == BLOWUP:
        z[move.r] -= z[move.s]
    elif move.kind == IMT:
        z[move.r] += z[move.s]
    elif move.kind == RELABEL:
        z = [z[p] for p in move.perm]
    else:
        raise ValueError(f"unknown move kind {move.kind!r}")
    return tuple(z)
