"""Jacobi-Perron expansion of weight vectors and the monomial transforms it induces.

One step of the algorithm takes positive weights ``tau = (tau_1, ..., tau_s)``
to ``tau_next`` with ``tau = P @ tau_next`` where::

    a_j = floor(tau_j / tau_1)               (j = 2..s)
    tau_next[s] = tau_1
    tau_next[j-1] = tau_j - a_j * tau_1

Accumulating steps gives ``A = P(0) @ ... @ P(h-1)`` with ``tau = A @ tau_h``.
Read as a change of variables ``x_i = prod_j x'_j ** A[i][j]`` the matrix sends
the exponent vector of a monomial ``v`` to ``A.T @ v`` and preserves its value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from . import intmat
from .errors import AlgorithmError, CapExceeded
from .values import Value, floor_ratio, rank

DEFAULT_CAP = 10_000


@dataclass(frozen=True)
class PerronStep:
    s: int
    digits: tuple
    P: tuple

    @property
    def det(self) -> int:
        return (-1) ** (self.s - 1)


@dataclass(frozen=True)
class PerronMatrix:
    """Accumulated product of ``h`` Perron step matrices.

    ``A[i][j]`` is the exponent of the j-th new variable in the i-th old one;
    ``tau_h`` holds the weights of the new variables.
    """

    s: int
    h: int
    A: tuple
    digits: tuple = ()
    tau_h: tuple = ()

    @property
    def det(self) -> int:
        return (-1) ** (self.h * (self.s - 1))

    def apply(self, v: Sequence[int]) -> tuple:
        """Exponent vector of the monomial ``x**v`` in the new variables."""
        return tuple(sum(self.A[i][j] * v[i] for i in range(self.s)) for j in range(self.s))


def step_matrix(digits: Sequence[int]) -> tuple:
    s = len(digits) + 1
    rows = [[0] * s for _ in range(s)]
    rows[0][s - 1] = 1
    for j in range(1, s):
        rows[j][j - 1] = 1
        rows[j][s - 1] = digits[j - 1]
    return intmat.as_matrix(rows)


def monomial_value(v: Sequence[int], tau: Sequence[Value]) -> Value:
    acc = tau[0] * 0
    for e, t in zip(v, tau):
        if e:
            acc = acc + t * e
    return acc


def _check_weights(tau: Sequence[Value]) -> None:
    if len(tau) < 2:
        raise ValueError("dimension too small")
    for t in tau:
        if t.sign() <= 0:
            raise ValueError("nonpositive weight")


def perron_step(tau: Sequence[Value]):
    """One Perron step: returns ``(PerronStep, tau_next)``."""
    _check_weights(tau)
    first = tau[0]
    digits = tuple(floor_ratio(t, first) for t in tau[1:])
    nxt = [t - first * a for t, a in zip(tau[1:], digits)] + [first]
    if any(t.is_zero() for t in nxt):
        raise ValueError("dependent weights: exact integer ratio")
    return PerronStep(len(tau), digits, step_matrix(digits)), tuple(nxt)


def perron_accumulate(tau: Sequence[Value], h: int):
    """Run ``h`` Perron steps: returns ``(PerronMatrix, tau_h)``."""
    if h < 0:
        raise ValueError("negative step count")
    s = len(tau)
    if h > 0:
        _check_weights(tau)
    A = intmat.identity(s)
    cur = tuple(tau)
    digits = []
    for _ in range(h):
        step, cur = perron_step(cur)
        A = intmat.matmul(A, step.P)
        digits.append(step.digits)
    return PerronMatrix(s, h, A, tuple(digits), cur), cur


def _search(tau: Sequence[Value], done, cap: int, cap_message: str) -> PerronMatrix:
    s = len(tau)
    A = intmat.identity(s)
    cur = tuple(tau)
    digits = []
    for h in range(cap + 1):
        pm = PerronMatrix(s, h, A, tuple(digits), cur)
        if done(pm):
            return pm
        if h == cap:
            break
        step, cur = perron_step(cur)
        A = intmat.matmul(A, step.P)
        digits.append(step.digits)
    raise CapExceeded(cap_message)


def make_divisible(v1: Sequence[int], v2: Sequence[int], tau: Sequence[Value],
                   cap: int = DEFAULT_CAP) -> PerronMatrix:
    """Smallest number of Perron steps after which ``x**v1`` divides ``x**v2``.

    Requires ``value(v1) < value(v2)``.
    """
    if not (len(v1) == len(v2) == len(tau)):
        raise ValueError("dimension mismatch")
    if monomial_value(v1, tau) >= monomial_value(v2, tau):
        raise ValueError("value order violated")

    def done(pm: PerronMatrix) -> bool:
        return all(a <= b for a, b in zip(pm.apply(v1), pm.apply(v2)))

    return _search(tau, done, cap, "divisibility search cap exceeded")


def clear_to_regular(v: Sequence[int], tau: Sequence[Value], cap: int = DEFAULT_CAP) -> PerronMatrix:
    """Perron transform after which the Laurent monomial ``x**v`` (of positive value) is regular."""
    if len(v) != len(tau):
        raise ValueError("dimension mismatch")
    if monomial_value(v, tau).sign() <= 0:
        raise ValueError("nonpositive value")
    pos = [max(e, 0) for e in v]
    neg = [max(-e, 0) for e in v]
    return make_divisible(neg, pos, tau, cap)


def _perron_until_positive(E, w, coef, s, cap):
    """Type I pass on the first ``s`` weights until every relation coefficient is positive."""
    for _ in range(cap + 1):
        if all(c > 0 for c in coef):
            return E, w, coef
        if s < 2:
            break
        step, nxt = perron_step(w[:s])
        block = [list(row) + [0] for row in step.P] + [[0] * s + [1]]
        E = intmat.matmul(E, intmat.as_matrix(block))
        coef = [sum(step.P[k][j] * coef[k] for k in range(s)) for j in range(s)]
        w = list(nxt) + [w[s]]
    raise CapExceeded("type II positivity search cap exceeded")


def type2_matrix(tau: Sequence[Value], lam: int, lam_i: Sequence[int],
                 cap: int = DEFAULT_CAP) -> tuple:
    """Exponent matrix of a type II transform for a dependent variable.

    The variables are ``x_1..x_s`` with independent values ``tau`` and a last
    variable ``x_r`` with ``lam * value(x_r) = sum(lam_i[k] * tau[k])``.  The
    result ``a`` is a nonnegative unimodular ``(s+1) x (s+1)`` matrix such that
    ``x_k = prod_j N_j ** a[k][j]`` where ``N_1..N_s`` have positive value and
    ``N_r`` has value zero.
    """
    s = len(tau)
    if s < 1 or len(lam_i) != s:
        raise ValueError("dimension mismatch")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if math.gcd(lam, *lam_i) != 1:
        raise ValueError("imprimitive relation")
    for t in tau:
        if t.sign() <= 0:
            raise ValueError("nonpositive weight")
    if rank(tau) != s:
        raise ValueError("dependent weights")
    tau_r = sum((t * c for t, c in zip(tau[1:], lam_i[1:])), tau[0] * lam_i[0]) / lam
    if tau_r.sign() <= 0:
        raise ValueError("nonpositive dependent value")

    E = intmat.identity(s + 1)
    w = list(tau) + [tau_r]
    coef = list(lam_i)
    for _ in range(cap):
        E, w, coef = _perron_until_positive(E, w, coef, s, cap)
        if lam == 1:
            break
        i = next(k for k in range(s) if coef[k] % lam)
        mu, rem = divmod(coef[i], lam)
        # x_i = x'_r, x_r = x'_i * x'_r**mu
        shear = [[int(a == b) for b in range(s + 1)] for a in range(s + 1)]
        shear[i][i] = 0
        shear[i][s] = 1
        shear[s][i] = 1
        shear[s][s] = mu
        E = intmat.matmul(E, intmat.as_matrix(shear))
        w[i], w[s] = w[s] - w[i] * mu, w[i]
        coef = [lam if k == i else -c for k, c in enumerate(coef)]
        lam = rem
        if w[i].sign() <= 0:
            raise AlgorithmError("shear produced a nonpositive value")
    else:
        raise CapExceeded("type II reduction cap exceeded")

    # x_r = N_r * prod x_k**coef_k with value(N_r) = 0
    final = [[int(a == b) for b in range(s + 1)] for a in range(s + 1)]
    final[s][:s] = coef
    E = intmat.matmul(E, intmat.as_matrix(final))
    residual = w[s] - sum((w[k] * coef[k] for k in range(1, s)), w[0] * coef[0])
    if not residual.is_zero():
        raise AlgorithmError("dependent relation lost during reduction")
    return E


def type2_generator_values(tau: Sequence[Value], lam: int, lam_i: Sequence[int],
                           a: Optional[tuple] = None) -> list:
    """Values of ``N_1..N_s, N_r`` read off from the inverse of ``a``."""
    if a is None:
        a = type2_matrix(tau, lam, lam_i)
    s = len(tau)
    tau_r = sum((t * c for t, c in zip(tau[1:], lam_i[1:])), tau[0] * lam_i[0]) / lam
    old = list(tau) + [tau_r]
    b = intmat.unimodular_inverse(a)
    return [sum((old[j] * b[k][j] for j in range(1, s + 1)), old[0] * b[k][0])
            for k in range(s + 1)]
