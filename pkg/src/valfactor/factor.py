"""Zigzag factorization of monomial maps along a valuation of maximal rational rank.

Given ``x = y ** M`` with ``M`` nonnegative and unimodular and independent
positive values for the ``y``, :func:`zigzag_factor` builds a diagram::

    R -> U_1 <- L_1 -> U_2 <- ... -> U_k <- L_k = S

where every arrow is a sequence of blowups legal along the valuation and
every ring contains ``R``.  :func:`verify_zigzag` re-checks such a diagram
from scratch by replaying its arrows.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from . import intmat
from .errors import AlgorithmError, CapExceeded
from .monomaps import (
    BLOWUP,
    RELABEL,
    MapState,
    MonoMap,
    Move,
    ReplayError,
    blowup,
    imt,
    relabel,
    replay,
    solve_unit_row,
    solve_weights,
    update_unit_row,
)
from .perron import DEFAULT_CAP
from .values import Value, rank

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Arrow:
    """Two blowup sequences meeting at an upper node."""

    left: tuple = ()
    right: tuple = ()


@dataclass(frozen=True)
class ZigzagCert:
    n: int
    input_map: MonoMap
    weights: tuple
    nodes: tuple
    arrows: tuple

    @property
    def upper_nodes(self) -> tuple:
        return self.nodes[1::2]


@dataclass(frozen=True)
class Report:
    accepted: bool
    reason: str = ""
    location: str = ""

    def __bool__(self) -> bool:
        return self.accepted

    def as_dict(self) -> dict:
        if self.accepted:
            return {"accept": True}
        return {"accept": False, "reason": self.reason, "location": self.location}


# -- adjoint row clearing ---------------------------------------------------


def _allowable_pair(z: Sequence[int]):
    n = len(z)
    for i in range(n):
        if not z[i]:
            continue
        for j in range(i + 1, n):
            if z[j] and (z[i] > 0) == (z[j] > 0):
                return i, j
    return None


def _check_factor_input(state: MapState) -> None:
    if abs(state.map.det) != 1:
        raise ValueError("not unimodular")
    if not state.map.is_nonnegative():
        raise ValueError("map has negative entries")
    if not state.all_positive():
        raise ValueError("nonpositive weight")


def clear_adjoint_row(state: MapState, cap: int = DEFAULT_CAP) -> MapState:
    """Blow up along the valuation until the unit row has at most two nonzero entries.

    At each step the lexicographically first pair of indices whose unit-row
    entries are nonzero with equal sign is blown up, the variable of larger
    value playing the role of ``r``.
    """
    _check_factor_input(state)
    z = solve_unit_row(state.map)
    for _ in range(cap):
        pair = _allowable_pair(z)
        if pair is None:
            return state
        i, j = pair
        r, s = (i, j) if state.weights[i] > state.weights[j] else (j, i)
        state = blowup(state, r, s)
        z = update_unit_row(z, state.log[-1])
    if _allowable_pair(z) is None:
        return state
    raise CapExceeded("adjoint row clearing cap exceeded")


def invariant_tuples(z0: Sequence[int], moves: Sequence[Move]) -> list:
    """``(alpha, beta, gamma, delta)`` after each prefix of an allowable blowup run."""
    zs = [tuple(z0)]
    for mv in moves:
        zs.append(update_unit_row(zs[-1], mv))
    out = []
    for l, z in enumerate(zs):
        future = {k for mv in moves[l:] for k in (mv.r, mv.s)}
        alpha = sum(1 for x in z if x)
        beta = max((abs(z[i]) for i in future), default=0)
        gamma = len(future)
        delta = sum(1 for i in future if abs(z[i]) == beta)
        out.append((alpha, beta, gamma, delta))
    return out


# -- factorization ----------------------------------------------------------


def _imt(state: MapState, r: int, s: int) -> MapState:
    try:
        return imt(state, r, s)
    except ValueError as exc:
        raise AlgorithmError(f"case analysis promised imt({r}, {s}): {exc}") from None


def _unit_column(rows, j: int) -> bool:
    return all(row[j] == int(i == 0) for i, row in enumerate(rows))


def _isolate_column(state: MapState, z: list, cap: int):
    """Descend by IMTs until some column is the first standard basis vector."""
    for _ in range(cap):
        nz = [k for k, x in enumerate(z) if x]
        if len(nz) == 1:
            (p,) = nz
            if z[p] != 1 or not _unit_column(state.rows, p):
                raise AlgorithmError("single nonzero unit-row entry without a unit column")
            return state, p
        if len(nz) != 2:
            raise AlgorithmError("unit row has more than two nonzero entries")
        p, q = nz
        if z[p] > 0 and z[q] > 0:
            for k in (p, q):
                if state.rows[0][k] * z[k] == 1:
                    if not _unit_column(state.rows, k):
                        raise AlgorithmError("positive pair without a unit column")
                    return state, k
            raise AlgorithmError("positive pair without a unit column")
        if z[p] < 0 and z[q] < 0:
            raise AlgorithmError("both unit-row entries negative")
        if z[p] > 0:
            p, q = q, p
        neg, pos = -z[p], z[q]
        m, nn = neg // pos, pos // neg
        if m == 0 and nn == 0:
            raise AlgorithmError("m = 0 without n > 0")
        if max(m, nn) > cap:
            raise CapExceeded("case loop cap exceeded")
        if m > 0:
            for _ in range(m):
                state = _imt(state, p, q)
                z[p] += z[q]
            if z[p] and (-z[p]) // z[q] != 0:
                raise AlgorithmError("m' != 0 after subtraction")
        elif neg == 1:
            for _ in range(pos - 1):
                state = _imt(state, q, p)
                z[q] += z[p]
            state = _imt(state, p, q)
            z[p] += z[q]
        else:
            for _ in range(nn):
                state = _imt(state, q, p)
                z[q] += z[p]
    raise CapExceeded("case loop cap exceeded")


def _peel2(rows: tuple, weights: tuple, cap: int) -> tuple:
    """Blowups (and possibly a swap) from the identity to a 2x2 map."""
    state = MapState(MonoMap(rows), weights)
    for _ in range(cap):
        (a, b), (c, d) = state.rows
        if (a, b, c, d) in ((1, 0, 0, 1), (0, 1, 1, 0)):
            break
        if b >= a and d >= c:
            state = _imt(state, 0, 1)
        elif a >= b and c >= d:
            state = _imt(state, 1, 0)
        else:
            raise AlgorithmError("2x2 columns not comparable")
    else:
        raise CapExceeded("2x2 peeling cap exceeded")
    moves = [Move.relabel((1, 0))] if state.rows[0][0] == 0 else []
    moves += [Move.blowup(mv.r, mv.s) for mv in reversed(state.log)]
    return tuple(moves)


def _factor(rows: tuple, weights: tuple, cap: int, depth: int = 0):
    """Returns ``(nodes, arrows)`` with node matrices relative to the source."""
    n = len(rows)
    ident = intmat.identity(n)
    if rows == ident:
        return [ident], []
    if n == 1:
        raise AlgorithmError("1x1 unimodular nonnegative map must be the identity")
    if n == 2:
        return [ident, rows, rows], [Arrow(_peel2(rows, weights, cap), ())]

    top = clear_adjoint_row(MapState(MonoMap(rows), weights), cap)
    right = top.log
    log.debug("%sn=%d: %d clearing blowups", "  " * depth, n, len(right))

    cur = MapState(top.map, top.weights)
    cur, j = _isolate_column(cur, list(solve_unit_row(cur.map)), cap)
    if sum(cur.rows[0]) - 1 > cap:
        raise CapExceeded("row clearing cap exceeded")
    for k in range(n):
        if k != j:
            for _ in range(cur.rows[0][k]):
                cur = _imt(cur, j, k)
    descent = cur.log

    perm = [j] + [k for k in range(n) if k != j]
    lower = relabel(MapState(cur.map, cur.weights), perm)
    if lower.rows[0] != ident[0] or any(row[0] for row in lower.rows[1:]):
        raise AlgorithmError("bordered form not reached")
    inv = [0] * n
    for k, p in enumerate(perm):
        inv[p] = k
    up = [] if perm == list(range(n)) else [Move.relabel(inv)]
    up += [Move.blowup(mv.r, mv.s) for mv in reversed(descent)]
    log.debug("%sn=%d: %d descent moves, recursing", "  " * depth, n, len(up))

    block = tuple(row[1:] for row in lower.rows[1:])
    sub_nodes, sub_arrows = _factor(block, lower.weights[1:], cap, depth + 1)
    index_map = list(range(1, n))
    nodes = [((1,) + (0,) * (n - 1),) + tuple((0,) + tuple(r) for r in node)
             for node in sub_nodes]
    arrows = [Arrow(tuple(mv.embedded(index_map, n) for mv in a.left),
                    tuple(mv.embedded(index_map, n) for mv in a.right))
              for a in sub_arrows]

    if not up and not right:
        return nodes, arrows
    if arrows and not arrows[-1].right:
        # previous upper node equals the last lower node: compose the arrows
        left = arrows.pop().left + tuple(up)
        nodes = nodes[:-2]
    else:
        left = tuple(up)
    nodes += [top.rows, rows]
    arrows.append(Arrow(left, tuple(right)))
    return nodes, arrows


def zigzag_factor(m, weights: Sequence[Value], cap: int = DEFAULT_CAP) -> ZigzagCert:
    """Factor ``x = y ** m`` into a zigzag of blowup sequences along the valuation."""
    if not isinstance(m, MonoMap):
        m = MonoMap(m)
    weights = tuple(weights)
    state = MapState(m, weights)
    _check_factor_input(state)
    if rank(weights) != m.n:
        raise ValueError("weights not rationally independent")
    nodes, arrows = _factor(m.rows, weights, cap)
    return ZigzagCert(m.n, m, weights, tuple(MonoMap(x) for x in nodes), tuple(arrows))


# -- verification -----------------------------------------------------------


def _reject(reason: str, location: str = "") -> Report:
    return Report(False, reason, location)


def _node_state(node: MonoMap, x_values, idx: int):
    if not node.is_nonnegative():
        return None, _reject("node not containing the source ring", f"node {idx}")
    if abs(node.det) != 1:
        return None, _reject("node map not unimodular", f"node {idx}")
    w = solve_weights(node.rows, x_values)
    if not all(x.sign() > 0 for x in w):
        return None, _reject("node not dominated by valuation", f"node {idx}")
    return MapState(node, w), None


def _replay_arrow(start: MapState, moves, target: MonoMap, where: str, node_idx: int):
    for k, mv in enumerate(moves, start=1):
        if not isinstance(mv, Move) or mv.kind not in (BLOWUP, RELABEL):
            return _reject("arrow contains a move that is not a blowup or relabel",
                           f"{where} move {k}")
    try:
        end = replay(start, moves)
    except ReplayError as exc:
        if exc.reason == "not allowable along valuation":
            return _reject("move not allowable along valuation", f"{where} move {exc.index}")
        return _reject(f"invalid move: {exc.reason}", f"{where} move {exc.index}")
    if end.rows != target.rows:
        return _reject(f"arrow replay mismatch at node {node_idx}", where)
    return None


def _verify(cert: ZigzagCert) -> Report:
    n = cert.n
    if not isinstance(n, int) or n < 1:
        return _reject("bad dimension")
    maps = [cert.input_map, *cert.nodes]
    if any(not isinstance(x, MonoMap) or x.n != n for x in maps):
        return _reject("matrix dimension mismatch")
    w = tuple(cert.weights)
    if len(w) != n or any(not isinstance(x, Value) for x in w):
        return _reject("weights malformed", "weights")
    if any(x.basis != w[0].basis for x in w):
        return _reject("incompatible value bases", "weights")
    if any(x.sign() <= 0 for x in w):
        return _reject("nonpositive weight", "weights")
    if rank(w) != n:
        return _reject("weights not rationally independent", "weights")
    if not cert.input_map.is_nonnegative() or abs(cert.input_map.det) != 1:
        return _reject("input map not nonnegative unimodular", "input")
    if len(cert.nodes) != 2 * len(cert.arrows) + 1:
        return _reject("node count does not match arrow count", "nodes")
    if cert.nodes[0].rows != intmat.identity(n):
        return _reject("first node is not the source ring", "node 0")
    if cert.nodes[-1].rows != cert.input_map.rows:
        return _reject("last node does not match input map", f"node {len(cert.nodes) - 1}")

    x_values = intmat.matvec(cert.input_map.rows, w)
    lower, bad = _node_state(cert.nodes[0], x_values, 0)
    if bad is not None:
        return bad
    for i, arrow in enumerate(cert.arrows, start=1):
        up_idx, lo_idx = 2 * i - 1, 2 * i
        nxt, bad = _node_state(cert.nodes[lo_idx], x_values, lo_idx)
        if bad is not None:
            return bad
        bad = _replay_arrow(lower, arrow.left, cert.nodes[up_idx], f"arrow {i} left", up_idx)
        if bad is None:
            bad = _replay_arrow(nxt, arrow.right, cert.nodes[up_idx], f"arrow {i} right", up_idx)
        if bad is not None:
            return bad
        _, bad = _node_state(cert.nodes[up_idx], x_values, up_idx)
        if bad is not None:
            return bad
        lower = nxt
    return Report(True)


def verify_zigzag(cert: ZigzagCert) -> Report:
    """Independent check of a zigzag certificate; never raises."""
    try:
        return _verify(cert)
    except Exception as exc:  # hostile input must never escape as an exception
        return _reject(f"malformed certificate: {exc.__class__.__name__}: {exc}")
