import random
from fractions import Fraction

import pytest

from valfactor.values import SurdBasis

RADICANDS = (1, 2, 3, 5, 6, 7, 10, 11, 13, 14)
BASIS = SurdBasis(RADICANDS)


def v(*pairs):
    """``v((1, 3), (2, -2))`` is ``3 - 2*sqrt(2)`` on the shared test basis."""
    out = BASIS.zero()
    for d, c in pairs:
        out = out + BASIS.surd(d, Fraction(c))
    return out


ONE = v((1, 1))
R2 = v((2, 1))
R3 = v((3, 1))


def distinct_surd_weights(rng: random.Random, n: int) -> list:
    """Positive weights ``c_i * sqrt(d_i)`` on distinct radicands."""
    rads = rng.sample(RADICANDS, n)
    return [BASIS.surd(d, Fraction(rng.randint(1, 9), rng.randint(1, 4))) for d in rads]


def mixed_weights(rng: random.Random, n: int) -> list:
    """Positive, rationally independent weights mixing several surds each."""
    rads = rng.sample(RADICANDS, n)
    out = []
    for i in range(n):
        val = BASIS.surd(rads[i], rng.randint(2, 6))
        for d in rng.sample(rads, rng.randint(0, 2)):
            if d != rads[i]:
                val = val + BASIS.surd(d, Fraction(rng.randint(-3, 3), rng.randint(2, 5)))
        if val.sign() <= 0:
            val = -val
        out.append(val)
    from valfactor.values import rank
    assert rank(out) == n
    return out


def random_elementary_product(rng: random.Random, n: int, k: int) -> list:
    """Identity with ``k`` random column additions ``col_s += col_r``."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(k):
        r, s = rng.sample(range(n), 2)
        for row in m:
            row[s] += row[r]
    return m


def tuple_rows(m):
    return tuple(tuple(r) for r in m)


# -- acceptance reporting ---------------------------------------------------------

ACCEPTANCE_RESULTS = {}


@pytest.fixture
def acceptance_record():
    def record(number: int, title: str, passed: bool, detail: str = ""):
        ACCEPTANCE_RESULTS[number] = (title, passed, detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, passed, detail = ACCEPTANCE_RESULTS[number]
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] {number}. {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)


def random_blowup_state(rng: random.Random, n: int, k: int, weights=None):
    """State reached from the identity by ``k`` random allowable blowups."""
    from valfactor.monomaps import MapState, MonoMap, blowup
    state = MapState(MonoMap.identity(n), weights or distinct_surd_weights(rng, n))
    for _ in range(k):
        r, s = rng.sample(range(n), 2)
        if state.weights[r] < state.weights[s]:
            r, s = s, r
        state = blowup(state, r, s)
    return state


def laplace_det(m):
    """Cofactor expansion; slow but shares no code with the library."""
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * laplace_det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(len(m)) if m[0][j])


def adjugate_unit_row(m):
    """``z`` with ``m z = e_1`` from the first row of cofactors."""
    m = [list(r) for r in m]
    d = laplace_det(m)
    minors = [[row[:j] + row[j + 1:] for row in m[1:]] for j in range(len(m))]
    return tuple(Fraction((-1) ** j * laplace_det(mi), d) for j, mi in enumerate(minors)) \
        if len(m) > 1 else (Fraction(1, d),)


def random_walk_state(rng: random.Random, n: int, k: int, weights=None):
    """State reached from the identity by ``k`` random allowable blowups and IMTs."""
    from valfactor.monomaps import MapState, MonoMap, blowup, imt
    state = MapState(MonoMap.identity(n), weights or distinct_surd_weights(rng, n))
    for _ in range(k):
        options = []
        for r in range(n):
            for s in range(n):
                if r == s:
                    continue
                if state.weights[r] > state.weights[s]:
                    options.append((blowup, r, s))
                if all(row[s] >= row[r] for row in state.rows):
                    options.append((imt, r, s))
        op, r, s = rng.choice(options)
        state = op(state, r, s)
    return MapState(state.map, state.weights)


# -- an independent certificate checker ----------------------------------------------

def _solve_values(rows, x_values):
    """``w`` with ``rows @ w == x_values`` by cofactors (exact, slow)."""
    n = len(rows)
    d = laplace_det([list(r) for r in rows])
    out = []
    for j in range(n):
        # Cramer: replace column j by x and expand along that column
        acc = x_values[0] * 0
        for i in range(n):
            minor = [[rows[a][b] for b in range(n) if b != j] for a in range(n) if a != i]
            c = (-1) ** (i + j) * (laplace_det(minor) if minor else 1)
            if c:
                acc = acc + x_values[i] * Fraction(c, d)
        out.append(acc)
    return out


def oracle_accepts(cert) -> bool:
    """Re-derive a certificate's validity with plain lists and column operations."""
    from valfactor.values import rank
    n = cert.n
    if not isinstance(n, int) or n < 1:
        return False
    mats = [cert.input_map.rows] + [nd.rows for nd in cert.nodes]
    if any(len(m) != n or any(len(r) != n for r in m) for m in mats):
        return False
    w = list(cert.weights)
    if len(w) != n or any(x.sign() <= 0 for x in w) or rank(w) != n:
        return False
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    inp = [list(r) for r in cert.input_map.rows]
    if len(cert.nodes) != 2 * len(cert.arrows) + 1:
        return False
    if [list(r) for r in cert.nodes[0].rows] != ident or [list(r) for r in cert.nodes[-1].rows] != inp:
        return False
    x = [sum((w[j] * inp[i][j] for j in range(1, n)), w[0] * inp[i][0]) for i in range(n)]

    def node_weights(rows):
        if any(e < 0 for r in rows for e in r) or abs(laplace_det([list(r) for r in rows])) != 1:
            return None
        ws = _solve_values(rows, x)
        return ws if all(v.sign() > 0 for v in ws) else None

    weights = [node_weights(nd.rows) for nd in cert.nodes]
    if any(ws is None for ws in weights):
        return False

    def run(rows, ws, moves):
        rows = [list(r) for r in rows]
        ws = list(ws)
        for mv in moves:
            if mv.kind == "blowup":
                r, s = mv.r, mv.s
                if not (isinstance(r, int) and isinstance(s, int) and 0 <= r < n and 0 <= s < n) or r == s:
                    return None
                if not ws[r] > ws[s]:
                    return None
                for row in rows:
                    row[s] += row[r]
                ws[r] = ws[r] - ws[s]
            elif mv.kind == "relabel":
                if sorted(mv.perm) != list(range(n)):
                    return None
                rows = [[row[p] for p in mv.perm] for row in rows]
                ws = [ws[p] for p in mv.perm]
            else:
                return None
        return rows

    for i, arrow in enumerate(cert.arrows, start=1):
        up = [list(r) for r in cert.nodes[2 * i - 1].rows]
        if run(cert.nodes[2 * i - 2].rows, weights[2 * i - 2], arrow.left) != up:
            return False
        if run(cert.nodes[2 * i].rows, weights[2 * i], arrow.right) != up:
            return False
    return True


def mutate(cert, rng: random.Random):
    """One random single-field change of a certificate; returns ``(label, cert)``."""
    import dataclasses
    from valfactor.monomaps import MonoMap, Move
    n = cert.n
    slots = [(i, side, k) for i, a in enumerate(cert.arrows)
             for side in ("left", "right") for k in range(len(getattr(a, side)))]
    kinds = ["node_entry", "input_entry"]
    if slots:
        kinds += ["move_index", "move_swap", "move_kind", "move_delete"]

    def with_move(i, side, k, new):
        seq = list(getattr(cert.arrows[i], side))
        if new is None:
            del seq[k]
        else:
            seq[k] = new
        arrows = list(cert.arrows)
        arrows[i] = dataclasses.replace(arrows[i], **{side: tuple(seq)})
        return dataclasses.replace(cert, arrows=tuple(arrows))

    kind = rng.choice(kinds)
    if kind in ("node_entry", "input_entry"):
        if kind == "node_entry":
            idx = rng.randrange(len(cert.nodes))
            rows = [list(r) for r in cert.nodes[idx].rows]
        else:
            rows = [list(r) for r in cert.input_map.rows]
        rows[rng.randrange(n)][rng.randrange(n)] += 1
        if kind == "input_entry":
            return kind, dataclasses.replace(cert, input_map=MonoMap(rows))
        nodes = list(cert.nodes)
        nodes[idx] = MonoMap(rows)
        return kind, dataclasses.replace(cert, nodes=tuple(nodes))

    i, side, k = rng.choice(slots)
    mv = getattr(cert.arrows[i], side)[k]
    if kind == "move_delete":
        return kind, with_move(i, side, k, None)
    if mv.kind == "relabel":
        perm = list(mv.perm)
        a, b = rng.sample(range(n), 2)
        perm[a], perm[b] = perm[b], perm[a]
        if kind == "move_kind":
            return "relabel_to_blowup", with_move(i, side, k, Move.blowup(a, b))
        return "perm_swap", with_move(i, side, k, Move.relabel(perm))
    if kind == "move_swap":
        return kind, with_move(i, side, k, Move.blowup(mv.s, mv.r))
    if kind == "move_kind":
        return kind, with_move(i, side, k, Move.imt(mv.r, mv.s))
    # move_index: change r or s to another index
    if rng.random() < 0.5:
        choices = [x for x in range(n) if x not in (mv.r, mv.s)] or [mv.s]
        return kind, with_move(i, side, k, Move.blowup(rng.choice(choices), mv.s))
    choices = [x for x in range(n) if x not in (mv.r, mv.s)] or [mv.r]
    return kind, with_move(i, side, k, Move.blowup(mv.r, rng.choice(choices)))
