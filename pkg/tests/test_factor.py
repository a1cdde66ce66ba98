import dataclasses
import random
from collections import deque

import pytest

from valfactor import intmat
from valfactor.errors import CapExceeded
from valfactor.factor import (
    Arrow, ZigzagCert, clear_adjoint_row, invariant_tuples, verify_zigzag, zigzag_factor,
)
from valfactor.monomaps import MapState, MonoMap, Move, blowup, replay, solve_unit_row

from conftest import (
    ONE, R2, R3, distinct_surd_weights, mutate, oracle_accepts, random_elementary_product,
    random_walk_state,
)


def bfs_direct(target, weights, depth):
    """Is ``target`` (up to column order) reachable by at most ``depth`` allowable blowups?

    ``weights`` are the values of the target's variables; the search starts
    at the identity, whose variables carry the induced x-values.
    """
    n = len(target)
    goal = sorted(zip(*target))
    start = MapState(MonoMap.identity(n), intmat.matvec(target, weights))
    seen = {start.rows}
    queue = deque([(start, 0)])
    while queue:
        st, d = queue.popleft()
        if sorted(zip(*st.rows)) == goal:
            return True
        if d == depth:
            continue
        for r in range(n):
            for s in range(n):
                if r != s and st.weights[r] > st.weights[s]:
                    nxt = blowup(st, r, s)
                    if nxt.rows not in seen:
                        seen.add(nxt.rows)
                        queue.append((nxt, d + 1))
    return False


def count_blowups(cert):
    return sum(mv.kind == "blowup" for a in cert.arrows for mv in a.left + a.right)


# -- clear_adjoint_row ---------------------------------------------------------------

def test_clear_two_by_two_unchanged():
    st = MapState(MonoMap([[2, 1], [1, 1]]), [R2 - ONE, ONE * 2 - R2])
    assert clear_adjoint_row(st) == st


def test_clear_sparse_row_unchanged():
    st = MapState(MonoMap([[2, 1, 1], [1, 1, 1], [1, 0, 1]]), [R2, R3, ONE])
    assert solve_unit_row(st.map) == (1, 0, -1)
    assert clear_adjoint_row(st) == st


def test_clear_three_by_three_from_walks():
    # with a nonnegative map, three same-sign unit-row entries would force a
    # zero row, so the dense inputs have two entries of one sign and one of the other
    rng = random.Random(1)
    cleared = 0
    for _ in range(60):
        st = random_walk_state(rng, 3, rng.randint(3, 12), [R2, R3, ONE])
        z = solve_unit_row(st.map)
        assert not (all(x > 0 for x in z) or all(x < 0 for x in z))
        out = clear_adjoint_row(st)
        assert all(mv.kind == "blowup" for mv in out.log)
        assert sum(1 for x in solve_unit_row(out.map) if x) <= 2
        assert replay(st, out.log).rows == out.rows
        cleared += bool(out.log)
    assert cleared > 0


def test_clear_random_states_postcondition_and_monotonicity():
    rng = random.Random(7)
    dense = 0
    for _ in range(60):
        n = rng.randint(3, 5)
        st = random_walk_state(rng, n, rng.randint(0, 12))
        z0 = solve_unit_row(st.map)
        out = clear_adjoint_row(st)
        assert sum(1 for x in solve_unit_row(out.map) if x) <= 2
        assert all(mv.kind == "blowup" for mv in out.log)
        assert out.x_values() == st.x_values()
        tuples = invariant_tuples(z0, out.log)
        assert all(a >= b for a, b in zip(tuples, tuples[1:]))
        dense += bool(out.log)
    assert dense > 0


def test_invariant_tuple_values():
    # weights w0 > w1 > w2: blow up (0, 1) then (1, 2)
    moves = [Move.blowup(0, 1), Move.blowup(1, 2)]
    assert invariant_tuples((1, 1, 1), moves) == [(3, 1, 3, 3), (2, 1, 2, 2), (1, 0, 0, 0)]
    st = MapState(MonoMap([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), [R3, R2, ONE])
    assert clear_adjoint_row(st).log == ()


def test_clear_cap():
    rng = random.Random(3)
    for _ in range(50):
        st = random_walk_state(rng, 4, 12)
        steps = len(clear_adjoint_row(st).log)
        if steps >= 2:
            with pytest.raises(CapExceeded, match="adjoint row clearing cap exceeded"):
                clear_adjoint_row(st, cap=steps - 1)
            return
    pytest.fail("no state needed two clearing steps")


# -- zigzag_factor ---------------------------------------------------------------------

def test_identity_gives_empty_zigzag():
    cert = zigzag_factor(intmat.identity(3), [R2, R3, ONE])
    assert cert.arrows == () and len(cert.nodes) == 1
    assert verify_zigzag(cert)


def test_single_blowup():
    cert = zigzag_factor([[1, 1], [0, 1]], [R2, ONE])
    assert len(cert.arrows) == 1
    assert cert.arrows[0] == Arrow((Move.blowup(0, 1),), ())
    assert cert.upper_nodes[0].rows == ((1, 1), (0, 1))
    assert verify_zigzag(cert)


def test_two_by_two_swap():
    cert = zigzag_factor([[0, 1], [1, 0]], [R2, ONE])
    assert cert.arrows[0].left == (Move.relabel((1, 0)),)
    assert verify_zigzag(cert)


def test_factor_errors():
    with pytest.raises(ValueError, match="not unimodular"):
        zigzag_factor([[2, 0], [0, 1]], [R2, ONE])
    with pytest.raises(ValueError, match="negative entries"):
        zigzag_factor([[1, -1], [0, 1]], [R2, ONE])
    with pytest.raises(ValueError, match="nonpositive weight"):
        zigzag_factor([[1, 0], [0, 1]], [-R2, ONE])
    with pytest.raises(ValueError, match="rationally independent"):
        zigzag_factor([[1, 0], [0, 1]], [R2, R2 * 2])


def test_bfs_oracle_three_by_three():
    rng = random.Random(41)
    weights = [R2, R3, ONE]
    zig = 0
    for _ in range(25):
        m = random_elementary_product(rng, 3, 8)
        cert = zigzag_factor(m, weights)
        assert verify_zigzag(cert)
        has_right = any(a.right for a in cert.arrows)
        direct = bfs_direct(m, weights, 8)
        if not direct:
            # no short direct factorization: the zigzag must turn, unless its
            # direct factorization is longer than the search depth
            assert has_right or count_blowups(cert) > 8
        if not has_right and count_blowups(cert) <= 8:
            assert direct
        zig += has_right
    assert zig > 0


def test_random_certificates_verify_and_oracle_agrees():
    rng = random.Random(13)
    for _ in range(40):
        n = rng.randint(2, 5)
        m = random_elementary_product(rng, n, rng.randint(0, 10))
        w = distinct_surd_weights(rng, n)
        cert = zigzag_factor(m, w)
        assert verify_zigzag(cert)
        assert oracle_accepts(cert)
        assert len(cert.upper_nodes) <= n - 1
        for a in cert.arrows:
            assert all(mv.kind in ("blowup", "relabel") for mv in a.left + a.right)


# -- verify_zigzag ---------------------------------------------------------------------

def sample_cert():
    return zigzag_factor([[2, 1, 1], [1, 1, 1], [1, 0, 1]], [R2, R3, ONE])


def test_verify_rejects_entry_change():
    cert = sample_cert()
    assert verify_zigzag(cert)
    assert cert.arrows
    nodes = list(cert.nodes)
    rows = [list(r) for r in nodes[1].rows]
    rows[0][0] += 1
    nodes[1] = MonoMap(rows)
    rep = verify_zigzag(dataclasses.replace(cert, nodes=tuple(nodes)))
    assert not rep
    assert rep.reason == "arrow replay mismatch at node 1"
    assert rep.location == "arrow 1 left"


def test_verify_rejects_swapped_blowup():
    cert = zigzag_factor([[1, 1], [0, 1]], [R2, ONE])
    bad = dataclasses.replace(cert, arrows=(Arrow((Move.blowup(1, 0),), ()),))
    rep = verify_zigzag(bad)
    assert not rep
    assert rep.reason == "move not allowable along valuation"
    assert rep.location == "arrow 1 left move 1"


def test_verify_reasons():
    cert = zigzag_factor([[1, 1], [0, 1]], [R2, ONE])
    # x1 = y1*y2 always outweighs x2 = y2, so any positive weights accept
    assert verify_zigzag(dataclasses.replace(cert, weights=(ONE, R2)))
    assert verify_zigzag(dataclasses.replace(cert, weights=(-R2, ONE))).reason == "nonpositive weight"
    assert verify_zigzag(dataclasses.replace(cert, weights=(R2, R2 * 3))).reason \
        == "weights not rationally independent"
    assert verify_zigzag(dataclasses.replace(cert, nodes=cert.nodes[:2])).reason \
        == "node count does not match arrow count"
    imt_arrow = Arrow((Move.imt(0, 1),), ())
    assert "not a blowup" in verify_zigzag(dataclasses.replace(cert, arrows=(imt_arrow,))).reason
    assert verify_zigzag(dataclasses.replace(cert, input_map=MonoMap([[1, 2], [0, 1]]))).reason \
        == "last node does not match input map"


def test_verify_never_raises_on_garbage():
    cert = sample_cert()
    for bad in (dataclasses.replace(cert, n="3"), dataclasses.replace(cert, weights=(1, 2, 3)),
                dataclasses.replace(cert, arrows=(None,)), dataclasses.replace(cert, nodes=None),
                ZigzagCert(0, None, (), (), ())):
        rep = verify_zigzag(bad)
        assert not rep
        assert rep.reason


def test_report_dict():
    assert verify_zigzag(sample_cert()).as_dict() == {"accept": True}
    rep = verify_zigzag(dataclasses.replace(sample_cert(), weights=(ONE, ONE, ONE)))
    assert set(rep.as_dict()) == {"accept", "reason", "location"}


def test_verifier_agrees_with_oracle_on_mutations():
    rng = random.Random(77)
    kinds = set()
    for _ in range(80):
        n = rng.randint(2, 4)
        cert = zigzag_factor(random_elementary_product(rng, n, rng.randint(2, 8)),
                             distinct_surd_weights(rng, n))
        if not cert.arrows:
            continue
        label, bad = mutate(cert, rng)
        kinds.add(label)
        assert bool(verify_zigzag(bad)) == oracle_accepts(bad), label
    assert {"node_entry", "input_entry", "move_swap", "move_delete"} <= kinds
