"""Monomialization of polynomials under a monomial valuation of maximal rational rank.

When the variable values are rationally independent, distinct monomials
have distinct values, so every polynomial has a unique term of least value.
Perron steps are applied until that term divides every other term; the
polynomial is then a monomial times a polynomial with nonzero constant term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import intmat
from .errors import CapExceeded
from .perron import DEFAULT_CAP, PerronMatrix, monomial_value, perron_step
from .values import Value


class Polynomial:
    """Sparse polynomial over Q in ``n`` variables, immutable.

    ``terms`` maps exponent tuples to nonzero Fractions.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping = ()):
        clean = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, coef in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError("exponent length does not match variable count")
            if any(e < 0 for e in exp):
                raise ValueError("negative exponent")
            c = clean.get(exp, Fraction(0)) + Fraction(coef)
            if c:
                clean[exp] = c
            else:
                clean.pop(exp, None)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def monomial(cls, exp: Sequence[int], coef=1) -> "Polynomial":
        return cls(len(exp), {tuple(exp): coef})

    @classmethod
    def constant(cls, n: int, c=1) -> "Polynomial":
        return cls(n, {(0,) * n: c})

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.n, Fraction(0))

    def _check(self, other: "Polynomial") -> None:
        if not isinstance(other, Polynomial) or other.n != self.n:
            raise ValueError("variable count mismatch")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        return Polynomial(self.n, list(self.terms.items()) + list(other.terms.items()))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = []
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out.append((tuple(a + b for a, b in zip(e1, e2)), c1 * c2))
        return Polynomial(self.n, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.terms.items())))

    def __repr__(self) -> str:
        return f"Polynomial({self.n}, {{{', '.join(f'{e}: {c}' for e, c in self.terms.items())}}})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.terms.items():
            mono = "*".join(f"x{i + 1}" + (f"^{e}" if e > 1 else "")
                            for i, e in enumerate(exp) if e)
            parts.append(f"{c}*{mono}" if mono and c != 1 else (mono or str(c)))
        return " + ".join(parts)


@dataclass(frozen=True)
class MonomialForm:
    """``substitute(f, transform) == x**monomial * unit`` with ``unit(0) != 0``."""

    transform: PerronMatrix
    monomial: tuple
    unit: Polynomial

    def expand(self) -> Polynomial:
        return Polynomial.monomial(self.monomial) * self.unit


def poly_value(f: Polynomial, tau: Sequence[Value]):
    """Least value of a term of ``f`` and the exponent attaining it."""
    if f.is_zero():
        raise ValueError("value of zero is infinite")
    if len(tau) != f.n:
        raise ValueError("dimension mismatch")
    best = best_val = None
    for exp in f.terms:
        v = monomial_value(exp, tau)
        if best is None or v < best_val:
            best, best_val = exp, v
    return best_val, best


def _as_rows(A) -> tuple:
    return A.A if isinstance(A, PerronMatrix) else intmat.as_matrix(A)


def substitute(f: Polynomial, A) -> Polynomial:
    """Apply ``x_i = prod_j x'_j ** A[i][j]`` to every term of ``f``."""
    rows = _as_rows(A)
    if len(rows) != f.n or any(len(r) != f.n for r in rows):
        raise ValueError("dimension mismatch")
    if not intmat.is_nonnegative(rows):
        raise ValueError("substitution matrix has negative entries")
    cols = intmat.transpose(rows)
    return Polynomial(f.n, [(tuple(sum(a * e for a, e in zip(col, exp)) for col in cols), c)
                            for exp, c in f.terms.items()])


def monomialize(f: Polynomial, tau: Sequence[Value], cap: int = DEFAULT_CAP) -> MonomialForm:
    """Perron transform making ``f`` a monomial times a unit."""
    if f.is_zero():
        raise ValueError("value of zero is infinite")
    n = f.n
    if len(tau) != n:
        raise ValueError("dimension mismatch")
    if any(t.sign() <= 0 for t in tau):
        raise ValueError("nonpositive weight")
    _, start = poly_value(f, tau)
    exps = list(f.terms)
    coefs = list(f.terms.values())
    lead = exps.index(start)
    A = intmat.identity(n)
    cur = tuple(tau)
    digits = []
    for h in range(cap + 1):
        a = exps[lead]
        if all(all(x <= y for x, y in zip(a, e)) for e in exps):
            unit = Polynomial(n, [(tuple(y - x for x, y in zip(a, e)), c)
                                  for e, c in zip(exps, coefs)])
            return MonomialForm(PerronMatrix(n, h, A, tuple(digits), cur), a, unit)
        if h == cap:
            break
        step, cur = perron_step(cur)
        cols = intmat.transpose(step.P)
        exps = [tuple(sum(p * x for p, x in zip(col, e)) for col in cols) for e in exps]
        A = intmat.matmul(A, step.P)
        digits.append(step.digits)
    raise CapExceeded("monomialization cap exceeded")
