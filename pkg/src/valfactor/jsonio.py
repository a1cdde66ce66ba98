"""Strict JSON codecs for values, maps, moves, polynomials and certificates.

Rationals are written as ``"p/q"`` strings in lowest terms with ``q > 0``.
Variable indices are 1-based in every document.  Decoders reject unknown
fields and report the path of the first offending element.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .factor import Arrow, ZigzagCert
from .monomaps import BLOWUP, IMT, RELABEL, MonoMap, Move
from .perron import PerronMatrix
from .uniformize import MonomialForm, Polynomial
from .values import SurdBasis, Value, is_squarefree, rank

MAX_DIM = 64
_RATIONAL = re.compile(r"-?[0-9]{1,4000}/[0-9]{1,4000}\Z")

KINDS = ("factor", "monomialize", "perron", "verify")


class ProblemError(ValueError):
    """Malformed input document; the message names the offending path."""


def _fail(msg: str, path: str):
    raise ProblemError(f"{msg} at {path}" if path else msg)


def _obj(doc, path: str, required: tuple, optional: tuple = ()) -> dict:
    if not isinstance(doc, dict):
        _fail("expected object", path)
    for key in doc:
        if key not in required and key not in optional:
            _fail(f"unknown field {key!r}", path)
    for key in required:
        if key not in doc:
            _fail(f"missing field {key!r}", path)
    return doc


def _list(doc, path: str, length=None) -> list:
    if not isinstance(doc, list):
        _fail("expected array", path)
    if length is not None and len(doc) != length:
        _fail(f"expected {length} entries, got {len(doc)}", path)
    return doc


def _int(doc, path: str, lo=None, hi=None) -> int:
    if not isinstance(doc, int) or isinstance(doc, bool):
        _fail("expected integer", path)
    if lo is not None and doc < lo:
        _fail(f"integer below {lo}", path)
    if hi is not None and doc > hi:
        _fail(f"integer above {hi}", path)
    return doc


def _join(path: str, key) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


# -- rationals and values ---------------------------------------------------


def encode_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def decode_rational(doc, path: str = "") -> Fraction:
    if not isinstance(doc, str) or not _RATIONAL.match(doc):
        _fail("expected rational string 'p/q'", path)
    p, q = doc.split("/")
    try:
        num, den = int(p), int(q)
    except ValueError:
        _fail("rational too large", path)
    if den == 0:
        _fail("zero denominator", path)
    return Fraction(num, den)


def encode_value(v: Value) -> dict:
    return {"basis": list(v.basis.radicands), "coeffs": [encode_rational(c) for c in v.coeffs]}


def decode_value(doc, path: str = "", basis_cache=None) -> Value:
    _obj(doc, path, ("basis", "coeffs"))
    rads = _list(doc["basis"], _join(path, "basis"))
    if not rads:
        _fail("empty basis", _join(path, "basis"))
    for i, d in enumerate(rads):
        p = _join(_join(path, "basis"), i)
        _int(d, p, lo=1, hi=10**9)
        if not is_squarefree(d):
            _fail("radicand not squarefree", p)
        if i and rads[i - 1] >= d:
            _fail("radicands not strictly ascending", p)
    coeffs = _list(doc["coeffs"], _join(path, "coeffs"), len(rads))
    cs = [decode_rational(c, _join(_join(path, "coeffs"), i)) for i, c in enumerate(coeffs)]
    key = tuple(rads)
    if basis_cache is not None and key in basis_cache:
        basis = basis_cache[key]
    else:
        basis = SurdBasis(rads)
        if basis_cache is not None:
            basis_cache[key] = basis
    return Value(basis, cs)


def decode_weights(doc, path: str, n=None, positive=True, independent=True) -> tuple:
    items = _list(doc, path, n)
    if not items:
        _fail("no weights", path)
    cache = {}
    ws = tuple(decode_value(x, _join(path, i), cache) for i, x in enumerate(items))
    for i, w in enumerate(ws):
        if w.basis != ws[0].basis:
            _fail("incompatible value bases", _join(path, i))
    if positive:
        for i, w in enumerate(ws):
            if w.sign() <= 0:
                _fail("nonpositive weight", _join(path, i))
    if independent and rank(ws) != len(ws):
        _fail("weights not rationally independent (dependent-weight basis reuse)", path)
    return ws


# -- maps, moves ------------------------------------------------------------


def encode_monomap(m: MonoMap) -> dict:
    return {"n": m.n, "rows": [list(r) for r in m.rows]}


def decode_monomap(doc, path: str = "", n=None) -> MonoMap:
    _obj(doc, path, ("n", "rows"))
    size = _int(doc["n"], _join(path, "n"), lo=1, hi=MAX_DIM)
    if n is not None and size != n:
        _fail(f"dimension {size} does not match {n}", _join(path, "n"))
    rows = _list(doc["rows"], _join(path, "rows"), size)
    out = []
    for i, row in enumerate(rows):
        rp = _join(_join(path, "rows"), i)
        row = _list(row, rp, size)
        out.append(tuple(_int(x, _join(rp, j), lo=-10**100, hi=10**100) for j, x in enumerate(row)))
    return MonoMap(tuple(out))


def encode_move(mv: Move) -> dict:
    if mv.kind == RELABEL:
        return {"kind": RELABEL, "perm": [p + 1 for p in mv.perm]}
    return {"kind": mv.kind, "r": mv.r + 1, "s": mv.s + 1}


def decode_move(doc, path: str, n: int) -> Move:
    if not isinstance(doc, dict):
        _fail("expected object", path)
    kind = doc.get("kind")
    if kind == RELABEL:
        _obj(doc, path, ("kind", "perm"))
        perm = _list(doc["perm"], _join(path, "perm"), n)
        perm = [_int(p, _join(_join(path, "perm"), i), lo=1, hi=n) - 1 for i, p in enumerate(perm)]
        if sorted(perm) != list(range(n)):
            _fail("not a permutation", _join(path, "perm"))
        return Move.relabel(perm)
    if kind in (BLOWUP, IMT):
        _obj(doc, path, ("kind", "r", "s"))
        r = _int(doc["r"], _join(path, "r"), lo=1, hi=n) - 1
        s = _int(doc["s"], _join(path, "s"), lo=1, hi=n) - 1
        return Move(kind, r, s)
    _fail("unknown move kind", _join(path, "kind"))


def decode_moves(doc, path: str, n: int) -> tuple:
    return tuple(decode_move(m, _join(path, i), n) for i, m in enumerate(_list(doc, path)))


# -- polynomials ------------------------------------------------------------


def encode_polynomial(f: Polynomial) -> dict:
    return {"n": f.n, "terms": [{"exp": list(e), "coef": encode_rational(c)}
                                for e, c in f.terms.items()]}


def decode_polynomial(doc, path: str = "") -> Polynomial:
    _obj(doc, path, ("n", "terms"))
    n = _int(doc["n"], _join(path, "n"), lo=1, hi=MAX_DIM)
    terms = []
    seen = set()
    for i, t in enumerate(_list(doc["terms"], _join(path, "terms"))):
        tp = _join(_join(path, "terms"), i)
        _obj(t, tp, ("exp", "coef"))
        exp = tuple(_int(e, _join(_join(tp, "exp"), j), lo=0, hi=10**6)
                    for j, e in enumerate(_list(t["exp"], _join(tp, "exp"), n)))
        if exp in seen:
            _fail("duplicate exponent", _join(tp, "exp"))
        seen.add(exp)
        coef = decode_rational(t["coef"], _join(tp, "coef"))
        if coef == 0:
            _fail("zero coefficient", _join(tp, "coef"))
        terms.append((exp, coef))
    return Polynomial(n, terms)


# -- certificates and results -------------------------------------------------


def encode_cert(cert: ZigzagCert) -> dict:
    return {
        "n": cert.n,
        "input": encode_monomap(cert.input_map),
        "weights": [encode_value(w) for w in cert.weights],
        "nodes": [encode_monomap(m) for m in cert.nodes],
        "arrows": [{"left": [encode_move(m) for m in a.left],
                    "right": [encode_move(m) for m in a.right]} for a in cert.arrows],
    }


def decode_cert(doc, path: str = "") -> ZigzagCert:
    _obj(doc, path, ("n", "input", "weights", "nodes", "arrows"), ("kind",))
    n = _int(doc["n"], _join(path, "n"), lo=1, hi=MAX_DIM)
    input_map = decode_monomap(doc["input"], _join(path, "input"), n)
    weights = decode_weights(doc["weights"], _join(path, "weights"), n,
                             positive=False, independent=False)
    nodes = tuple(decode_monomap(m, _join(_join(path, "nodes"), i), n)
                  for i, m in enumerate(_list(doc["nodes"], _join(path, "nodes"))))
    arrows = []
    for i, a in enumerate(_list(doc["arrows"], _join(path, "arrows"))):
        ap = _join(_join(path, "arrows"), i)
        _obj(a, ap, ("left", "right"))
        arrows.append(Arrow(decode_moves(a["left"], _join(ap, "left"), n),
                            decode_moves(a["right"], _join(ap, "right"), n)))
    return ZigzagCert(n, input_map, weights, nodes, tuple(arrows))


def encode_perron(pm: PerronMatrix) -> dict:
    return {
        "A": [list(r) for r in pm.A],
        "det": pm.det,
        "tau_h": [encode_value(t) for t in pm.tau_h],
        "digits": [list(d) for d in pm.digits],
    }


def encode_monomial_form(mf: MonomialForm) -> dict:
    return {
        "A": [list(r) for r in mf.transform.A],
        "steps": mf.transform.h,
        "monomial": list(mf.monomial),
        "unit": encode_polynomial(mf.unit),
        "tau_h": [encode_value(t) for t in mf.transform.tau_h],
    }


def dumps(doc: Any) -> str:
    """Canonical serialization: sorted keys, compact separators, trailing newline."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


# -- problems -----------------------------------------------------------------


@dataclass(frozen=True)
class Problem:
    kind: str
    payload: dict


def _loads(text) -> Any:
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ProblemError(f"input is not UTF-8: {exc.reason}") from None
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except ProblemError:
        raise
    except (ValueError, RecursionError) as exc:
        raise ProblemError(f"malformed JSON: {exc.__class__.__name__}: {exc}") from None


def _reject_constant(name):
    raise ProblemError(f"non-finite number {name} not allowed")


def parse_problem(text, kind: str = None, steps: int = None) -> Problem:
    """Parse and validate a problem document.

    ``kind`` (one of ``factor``, ``monomialize``, ``perron``, ``verify``)
    may come from the caller or from a top-level ``"kind"`` field; when both
    are present they must agree.  For ``perron`` the document is the weight
    list itself (or an object with a ``weights`` field) and ``steps`` may be
    passed separately.
    """
    doc = _loads(text)
    doc_kind = doc.get("kind") if isinstance(doc, dict) else None
    if doc_kind is not None and doc_kind not in KINDS:
        _fail("unknown problem kind", "kind")
    if kind is None:
        kind = doc_kind
    if kind not in KINDS:
        raise ProblemError("problem kind not given")
    if doc_kind is not None and doc_kind != kind:
        _fail(f"document kind {doc_kind!r} does not match {kind!r}", "kind")

    if kind == "factor":
        _obj(doc, "", ("map", "weights"), ("kind",))
        m = decode_monomap(doc["map"], "map")
        weights = decode_weights(doc["weights"], "weights", m.n)
        return Problem(kind, {"map": m, "weights": weights})
    if kind == "monomialize":
        _obj(doc, "", ("poly", "weights"), ("kind",))
        f = decode_polynomial(doc["poly"], "poly")
        weights = decode_weights(doc["weights"], "weights", f.n)
        return Problem(kind, {"poly": f, "weights": weights})
    if kind == "perron":
        if isinstance(doc, list):
            wdoc, path = doc, ""
        else:
            _obj(doc, "", ("weights",), ("kind", "steps"))
            wdoc, path = doc["weights"], "weights"
            if "steps" in doc:
                doc_steps = _int(doc["steps"], "steps", lo=0, hi=10**6)
                if steps is not None and steps != doc_steps:
                    _fail("conflicting step counts", "steps")
                steps = doc_steps
        if steps is None:
            raise ProblemError("step count not given")
        if not isinstance(steps, int) or not 0 <= steps <= 10**6:
            raise ProblemError("step count out of range")
        weights = decode_weights(wdoc, path)
        if steps and len(weights) < 2:
            _fail("dimension too small", path)
        return Problem(kind, {"weights": weights, "steps": steps})
    return Problem(kind, {"cert": decode_cert(doc)})
