"""Exact values in a rank-one value group of finite rational rank.

A :class:`Value` is a rational combination ``sum(q_i * sqrt(d_i))`` over a
fixed :class:`SurdBasis` of distinct squarefree radicands.  Square roots of
distinct squarefree integers are linearly independent over the rationals, so
a value is zero exactly when its coefficient vector is zero and the sign of
any nonzero value can be settled by refining interval enclosures of the
square roots.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "SurdBasis",
    "Value",
    "compare",
    "floor_ratio",
    "is_squarefree",
    "rank",
    "LESS",
    "EQUAL",
    "GREATER",
]

LESS, EQUAL, GREATER = -1, 0, 1

#: Bits of precision used for the first enclosure of every square root.
INITIAL_PRECISION = 32

Scalar = Union[int, Fraction]


def is_squarefree(d: int) -> bool:
    if d < 1:
        return False
    p = 2
    while p * p <= d:
        if d % (p * p) == 0:
            return False
        p += 1 if p == 2 else 2
    return True


class SurdBasis:
    """An ordered set of squarefree radicands ``d_1 < ... < d_s``."""

    __slots__ = ("radicands",)

    def __init__(self, radicands: Iterable[int]):
        rads = tuple(int(d) for d in radicands)
        if not rads:
            raise ValueError("empty surd basis")
        for i, d in enumerate(rads):
            if not is_squarefree(d):
                raise ValueError(f"radicand not squarefree at basis[{i}]")
        if any(a >= b for a, b in zip(rads, rads[1:])):
            raise ValueError("radicands must be distinct and sorted ascending")
        object.__setattr__(self, "radicands", rads)

    def __setattr__(self, name, value):
        raise AttributeError("SurdBasis is immutable")

    def __len__(self) -> int:
        return len(self.radicands)

    def __eq__(self, other) -> bool:
        return isinstance(other, SurdBasis) and self.radicands == other.radicands

    def __hash__(self) -> int:
        return hash(self.radicands)

    def __repr__(self) -> str:
        return f"SurdBasis({list(self.radicands)})"

    def zero(self) -> "Value":
        return Value(self, [0] * len(self))

    def one(self) -> "Value":
        """The value 1; requires 1 to be one of the radicands."""
        if self.radicands[0] != 1:
            raise ValueError("basis does not contain 1")
        return self.unit(0)

    def unit(self, i: int, coeff: Scalar = 1) -> "Value":
        """``coeff * sqrt(d_i)`` (0-based index)."""
        coeffs = [0] * len(self)
        coeffs[i] = coeff
        return Value(self, coeffs)

    def surd(self, d: int, coeff: Scalar = 1) -> "Value":
        """``coeff * sqrt(d)`` for a radicand ``d`` of this basis."""
        try:
            i = self.radicands.index(d)
        except ValueError:
            raise ValueError(f"radicand {d} not in basis") from None
        return self.unit(i, coeff)


class Value:
    """An immutable element ``sum(q_i * sqrt(d_i))`` of the value group.

    Equality and hashing are syntactic (coefficient vectors).  Ordering uses
    :func:`compare`, which is exact.
    """

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis: SurdBasis, coeffs: Iterable[Scalar]):
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != len(basis):
            raise ValueError("coefficient count does not match basis")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, name, value):
        raise AttributeError("Value is immutable")

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: "Value") -> None:
        if not isinstance(other, Value):
            raise TypeError(f"expected Value, got {type(other).__name__}")
        if self.basis != other.basis:
            raise ValueError("incompatible value bases")

    def __add__(self, other: "Value") -> "Value":
        self._check(other)
        return Value(self.basis, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Value") -> "Value":
        self._check(other)
        return Value(self.basis, (a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Value":
        return Value(self.basis, (-a for a in self.coeffs))

    def __mul__(self, k: Scalar) -> "Value":
        if not isinstance(k, (int, Fraction)) or isinstance(k, bool):
            return NotImplemented
        return Value(self.basis, (a * k for a in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, k: Scalar) -> "Value":
        if not isinstance(k, (int, Fraction)) or isinstance(k, bool):
            return NotImplemented
        return Value(self.basis, (a / k for a in self.coeffs))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Value):
            return NotImplemented
        return self.basis == other.basis and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.basis, self.coeffs))

    def sign(self) -> int:
        return _sign(self)

    def __lt__(self, other: "Value") -> bool:
        return compare(self, other) == LESS

    def __le__(self, other: "Value") -> bool:
        return compare(self, other) != GREATER

    def __gt__(self, other: "Value") -> bool:
        return compare(self, other) == GREATER

    def __ge__(self, other: "Value") -> bool:
        return compare(self, other) != LESS

    def __float__(self) -> float:
        return float(sum(c * math.sqrt(d) for c, d in zip(self.coeffs, self.basis.radicands)))

    def __repr__(self) -> str:
        return f"Value({list(self.basis.radicands)}, {[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        parts = []
        for c, d in zip(self.coeffs, self.basis.radicands):
            if c:
                parts.append(str(c) if d == 1 else f"{c}*sqrt({d})")
        return " + ".join(parts) if parts else "0"


def _sign(v: Value) -> int:
    if v.is_zero():
        return EQUAL
    den = 1
    for c in v.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [(int(c * den), d) for c, d in zip(v.coeffs, v.basis.radicands) if c]
    bits = INITIAL_PRECISION
    while True:
        # sqrt(d) * 2^bits lies in [r, r + 1] (exactly r when d is a square)
        lo = hi = 0
        scale = 4 ** bits
        for c, d in ints:
            r = math.isqrt(d * scale)
            r_hi = r if r * r == d * scale else r + 1
            if c > 0:
                lo += c * r
                hi += c * r_hi
            else:
                lo += c * r_hi
                hi += c * r
        if lo > 0:
            return GREATER
        if hi < 0:
            return LESS
        bits *= 2


def compare(a: Value, b: Value) -> int:
    """Exact ordering of two values: ``LESS``, ``EQUAL`` or ``GREATER``."""
    a._check(b)
    if a.coeffs == b.coeffs:
        return EQUAL
    return _sign(a - b)


def floor_ratio(a: Value, b: Value) -> int:
    """The integer ``q`` with ``q*b <= a < (q+1)*b``."""
    a._check(b)
    if _sign(b) <= 0:
        raise ValueError("nonpositive divisor")
    if _sign(a) < 0:
        raise ValueError("negative dividend")
    if a < b:
        return 0
    lo, hi = 1, 2
    while b * hi <= a:
        lo, hi = hi, hi * 2
    # invariant: lo*b <= a < hi*b
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if b * mid <= a:
            lo = mid
        else:
            hi = mid
    return lo


def rank(values: Sequence[Value]) -> int:
    """Rank over Q of a family of values sharing one basis.

    Values on a surd basis are rationally independent exactly when their
    coefficient vectors are linearly independent.
    """
    rows = [list(v.coeffs) for v in values]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col] / rows[r][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r
