"""Unit scalars of the base field: Q for characteristic 0, F_p otherwise."""

from __future__ import annotations
from fractions import Fraction
from math import lcm
from typing import Optional, Union

from sympy.core.intfunc import mod_inverse
from sympy.ntheory import n_order

from .exceptions import NoUnitPairing

Scalar = Union[Fraction, int]


class RationalUnits:
    characteristic = 0

    def ratio(self, num: int, den: int = 1) -> Fraction:
        if num == 0 or den == 0:
            raise NoUnitPairing(f"{num}/{den} is not a unit of Q")
        return Fraction(num, den)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def mul(self, a: Scalar, b: Scalar) -> Fraction:
        return Fraction(a) * Fraction(b)

    def inv(self, a: Scalar) -> Fraction:
        return 1 / Fraction(a)

    def power(self, a: Scalar, n: int) -> Fraction:
        return Fraction(a) ** n

    def is_one(self, a: Scalar) -> bool:
        return a == 1

    def order(self, a: Scalar) -> Optional[int]:
        """Multiplicative order, None when infinite."""
        if a == 1:
            return 1
        if a == -1:
            return 2
        return None

    def as_json(self, a: Scalar) -> str:
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


class ModularUnits:
    def __init__(self, characteristic: int):
        self.characteristic = characteristic

    def _reduce(self, a: Scalar) -> int:
        a = Fraction(a)
        p = self.characteristic
        if a.numerator % p == 0 or a.denominator % p == 0:
            raise NoUnitPairing(f"{a} is not a unit mod {p}")
        return a.numerator * mod_inverse(a.denominator, p) % p

    def ratio(self, num: int, den: int = 1) -> int:
        return self._reduce(Fraction(num, den) if den else Fraction(0))

    @property
    def one(self) -> int:
        return 1

    def mul(self, a: Scalar, b: Scalar) -> int:
        return self._reduce(a) * self._reduce(b) % self.characteristic

    def inv(self, a: Scalar) -> int:
        return int(mod_inverse(self._reduce(a), self.characteristic))

    def power(self, a: Scalar, n: int) -> int:
        base = self._reduce(a)
        if n < 0:
            base, n = int(mod_inverse(base, self.characteristic)), -n
        return pow(base, n, self.characteristic)

    def is_one(self, a: Scalar) -> bool:
        return self._reduce(a) == 1

    def order(self, a: Scalar) -> int:
        return int(n_order(self._reduce(a), self.characteristic))

    def as_json(self, a: Scalar) -> int:
        return self._reduce(a)


def units_for(characteristic: int) -> Union[RationalUnits, ModularUnits]:
    if characteristic == 0:
        return RationalUnits()
    return ModularUnits(characteristic)


def common_order(units, values) -> Optional[int]:
    """Least n with v^n = 1 for every value, None if some order is infinite."""
    n = 1
    for v in values:
        k = units.order(v)
        if k is None:
            return None
        n = lcm(n, k)
    return n
