"""Exact scalar fields: the rationals and prime fields GF(p).

Scalars are plain Python numbers.  Over the rationals an element is an ``int``
or a ``fractions.Fraction`` (integral fractions are collapsed back to ``int``
to keep the common case fast); over GF(p) it is an ``int`` in ``range(p)``.
No floating point is accepted anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Common interface.  Subclasses implement :meth:`red` and :meth:`inv`."""

    p = 0

    def __call__(self, x):
        """Coerce ``x`` (int, Fraction, or a string such as ``"-3/4"``) into the field."""
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, float):
            raise TypeError("floating point scalars are not allowed")
        if not isinstance(x, Rational):
            raise TypeError(f"cannot coerce {x!r} into {self}")
        return self._coerce(x)

    def _coerce(self, x):
        raise NotImplementedError

    def red(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def neg(self, x):
        return self.red(-x)

    def mul(self, a, b):
        return self.red(a * b)

    def div(self, a, b):
        return self.red(a * self.inv(b))

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def sign(self, exponent: int):
        """``(-1)**exponent`` as a field element."""
        return self.red(-1) if exponent % 2 else 1

    @property
    def is_finite(self) -> bool:
        return self.p != 0

    def elements(self):
        if not self.p:
            raise ValueError("the rationals cannot be enumerated")
        return range(self.p)

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("field", self.p))


class Rationals(Field):
    p = 0

    def _coerce(self, x):
        return self.red(Fraction(x))

    def red(self, x):
        if type(x) is Fraction and x.denominator == 1:
            return x.numerator
        return x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if type(x) is int:
            return x if x in (1, -1) else Fraction(1, x)
        return self.red(1 / x)

    def descriptor(self) -> str:
        return "Q"

    def __repr__(self):
        return "Q"


class PrimeField(Field):
    def __init__(self, p: int):
        if not isinstance(p, int) or not _is_prime(p):
            raise ValueError(f"modulus {p!r} is not prime")
        self.p = p

    def _coerce(self, x):
        x = Fraction(x)
        num = x.numerator % self.p
        den = x.denominator % self.p
        if den == 0:
            raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
        return (num * pow(den, -1, self.p)) % self.p

    def red(self, x):
        return x % self.p

    def inv(self, x):
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def descriptor(self) -> str:
        return f"Fp:{self.p}"

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(descriptor: str) -> Field:
    """``"Q"`` or ``"Fp:<p>"``."""
    s = descriptor.strip()
    if s in ("Q", "QQ"):
        return QQ
    if s.startswith("Fp:"):
        try:
            p = int(s[3:])
        except ValueError:
            raise ValueError(f"bad field descriptor {descriptor!r}") from None
        return PrimeField(p)
    raise ValueError(f"bad field descriptor {descriptor!r}")


def format_scalar(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)
