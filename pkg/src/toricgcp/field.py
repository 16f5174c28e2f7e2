"""Exact coefficient fields: the rationals and prime fields GF(p).

Coefficients are stored as plain Python values (``Fraction`` for Q, ``int``
in ``[0, p)`` for GF(p)); a field object knows how to normalize, invert,
parse and print them.
"""
from __future__ import annotations

import random
import warnings
from fractions import Fraction


class FieldError(ValueError):
    pass


class RationalField:
    """The field Q with ``fractions.Fraction`` elements."""

    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(x)

    def inv(self, x: Fraction) -> Fraction:
        if not x:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / x

    def to_str(self, x: Fraction) -> str:
        return str(x)

    def random_element(self, rng: random.Random, bound: int = 50) -> Fraction:
        return Fraction(rng.randint(-bound, bound))

    def sample_points(self, rng: random.Random, count: int, bound: int):
        """``count`` distinct integers from ``[-bound, bound]``."""
        return [Fraction(v) for v in rng.sample(range(-bound, bound + 1), count)]

    def to_json(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """GF(p) with canonical representatives in ``[0, p)``."""

    def __init__(self, p: int, allow_small: bool = False):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise FieldError(f"{p} is not prime")
        if p in (2, 3):
            if not allow_small:
                raise FieldError(f"characteristic {p} is excluded (need p > 3)")
            warnings.warn(f"working in characteristic {p}; degenerate examples "
                          "may change behaviour", stacklevel=2)
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1

    def __call__(self, x) -> int:
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def to_str(self, x: int) -> str:
        return str(x)

    def random_element(self, rng: random.Random, bound: int = 0) -> int:
        return rng.randrange(self.p)

    def sample_points(self, rng: random.Random, count: int, bound: int = 0):
        if count > self.p:
            raise FieldError(f"GF({self.p}) has fewer than {count} elements")
        return rng.sample(range(self.p), count)

    def to_json(self):
        return {"GFp": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def GF(p: int, allow_small: bool = False) -> PrimeField:
    return PrimeField(p, allow_small=allow_small)


def field_from_spec(spec) -> RationalField | PrimeField:
    """Accepts ``"Q"``, ``{"GFp": p}`` or the CLI form ``"gfp:P"``."""
    if isinstance(spec, (RationalField, PrimeField)):
        return spec
    if spec in ("Q", "QQ", "q"):
        return QQ
    if isinstance(spec, dict) and "GFp" in spec:
        return GF(int(spec["GFp"]))
    if isinstance(spec, str) and spec.lower().startswith("gfp:"):
        return GF(int(spec.split(":", 1)[1]))
    raise FieldError(f"unknown field {spec!r}")
