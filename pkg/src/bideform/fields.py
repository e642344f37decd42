"""Exact scalar arithmetic: the rationals and prime fields F_p.

Scalars are plain Python values (``fractions.Fraction`` over the rationals,
``int`` in ``[0, p)`` over F_p); every arithmetic operation goes through a
``Field`` object, and containers (matrices, graded maps, bialgebras) carry
the field tag.  Combining values under different field tags raises
``FieldMismatchError``; there is no silent coercion and no floating point.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldMismatchError, ScalarFormatError

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test for machine-word sized integers."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    # Deterministic Miller-Rabin; this base set is exact below 3.3e24.
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Common interface of the two supported exact fields."""

    name = "abstract"

    def check(self, value):
        """Return the canonical form of ``value`` or raise ScalarFormatError."""
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def parse(self, text: str):
        """Parse a scalar literal in the shared text syntax."""
        raise NotImplementedError

    def format(self, value) -> str:
        raise NotImplementedError

    def unify(self, other: "Field") -> "Field":
        """Return the common field, or raise on a tag mismatch."""
        if self != other:
            raise FieldMismatchError(f"cannot mix scalars over {self} and {other}")
        return self


class RationalField(Field):
    """The rationals; scalars are ``Fraction`` values (always canonical)."""

    name = "rational"
    prime = 0  # sentinel: 0 means characteristic zero

    def check(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        raise ScalarFormatError(f"not an exact rational: {value!r}")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def parse(self, text):
        text = text.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                num_i, den_i = int(num), int(den)
            else:
                num_i, den_i = int(text), 1
        except ValueError:
            raise ScalarFormatError(f"bad rational literal {text!r}") from None
        if den_i <= 0:
            raise ScalarFormatError(f"denominator must be positive in {text!r}")
        return Fraction(num_i, den_i)

    def format(self, value):
        return str(value)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "QQ"


QQ = RationalField()

_prime_field_cache: dict[int, "PrimeField"] = {}


class PrimeField(Field):
    """The field F_p for a word-sized prime p; scalars are ints in [0, p)."""

    name = "prime"

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise ScalarFormatError(f"modulus {p!r} is not prime")
        if p.bit_length() > 63:
            raise ScalarFormatError(f"modulus {p} does not fit in a machine word")
        self.prime = p

    def check(self, value):
        if isinstance(value, int):
            return value % self.prime
        raise ScalarFormatError(f"not an F_{self.prime} element: {value!r}")

    def add(self, a, b):
        return (a + b) % self.prime

    def sub(self, a, b):
        return (a - b) % self.prime

    def mul(self, a, b):
        return (a * b) % self.prime

    def neg(self, a):
        return (-a) % self.prime

    def inv(self, a):
        a %= self.prime
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.prime - 2, self.prime)

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def from_int(self, n):
        return n % self.prime

    def parse(self, text):
        text = text.strip()
        try:
            n = int(text)
        except ValueError:
            raise ScalarFormatError(f"bad F_{self.prime} literal {text!r}") from None
        if not 0 <= n < self.prime:
            raise ScalarFormatError(
                f"F_{self.prime} literals must lie in [0, {self.prime}); got {text!r}"
            )
        return n

    def format(self, value):
        return str(value)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.prime == self.prime

    def __hash__(self):
        return hash(("prime", self.prime))

    def __repr__(self):
        return f"GF({self.prime})"


def GF(p: int) -> PrimeField:
    """Return the (cached) prime field with p elements."""
    field = _prime_field_cache.get(p)
    if field is None:
        field = _prime_field_cache[p] = PrimeField(p)
    return field


def field_from_header(kind: str, modulus: str | None = None) -> Field:
    """Build a field from the file-format header tokens."""
    if kind == "rational":
        if modulus is not None:
            raise ScalarFormatError("'field rational' takes no modulus")
        return QQ
    if kind == "prime":
        if modulus is None:
            raise ScalarFormatError("'field prime' requires a modulus")
        try:
            p = int(modulus)
        except ValueError:
            raise ScalarFormatError(f"bad modulus {modulus!r}") from None
        return GF(p)
    raise ScalarFormatError(f"unknown field tag {kind!r}")
