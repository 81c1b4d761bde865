"""Exact arithmetic in small finite fields F_{p^e}.

The modulus is pinned to the lexicographically least monic irreducible
polynomial of degree e over Z/p (coefficient tuples compared from the
constant term up), so every run of the tool agrees on element encodings.
Elements are coefficient tuples in the monomial basis 1, t, .., t^(e-1);
the integer code of an element is its base-p digit string, constant term
least significant.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product as _iter_product

from .budgets import Budgets, check_budget
from .errors import ValidationError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _trim(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    # m monic
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - lead * mi) % p
        a.pop()
    return _trim(a)


def _is_irreducible(m: list[int], p: int) -> bool:
    """Trial factorization against all monic polynomials of degree <= deg(m)/2."""
    deg = len(m) - 1
    for d in range(1, deg // 2 + 1):
        for tail in _iter_product(range(p), repeat=d):
            cand = list(tail) + [1]
            if not _poly_mod(m, cand, p):
                return False
    return True


class FieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: "Field", coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def __add__(self, other: "FieldElement") -> "FieldElement":
        f = self.field
        return FieldElement(f, tuple((a + b) % f.p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        f = self.field
        return FieldElement(f, tuple((a - b) % f.p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FieldElement":
        f = self.field
        return FieldElement(f, tuple((-a) % f.p for a in self.coeffs))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        f = self.field
        prod = _poly_mul(_trim(list(self.coeffs)), _trim(list(other.coeffs)), f.p)
        red = _poly_mod(prod, f._modulus_list, f.p)
        return FieldElement(f, tuple(red) + (0,) * (f.e - len(red)))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return self * other.inverse()

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in " + self.field.name)
        return self ** (self.field.q - 2)

    def frobenius(self) -> "FieldElement":
        return self ** self.field.p

    def trace(self) -> int:
        """Trace down to the prime field, returned as an integer mod p."""
        acc = self
        power = self
        for _ in range(self.field.e - 1):
            power = power.frobenius()
            acc = acc + power
        if any(c for c in acc.coeffs[1:]):
            raise AssertionError("trace did not land in the prime field")
        return acc.coeffs[0]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def code(self) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * self.field.p + c
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElement)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((id(self.field), self.coeffs))

    def __repr__(self) -> str:
        if self.field.e == 1:
            return f"{self.coeffs[0]}"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else str(c)
                terms.append(f"{head}t^{i}" if i > 1 else f"{head}t")
        return "+".join(terms) if terms else "0"


class Field:
    """F_{p^e} with the canonical modulus; construct through make_field."""

    def __init__(self, p: int, e: int, budgets: Budgets | None = None):
        if not is_prime(p):
            raise ValidationError(f"{p} is not prime")
        if e < 1:
            raise ValidationError("extension degree must be >= 1")
        check_budget(budgets, "field_q_max", p**e)
        self.p = p
        self.e = e
        self.q = p**e
        self._modulus_list = self._least_irreducible(p, e)
        self.modulus = tuple(self._modulus_list)
        self.zero = FieldElement(self, (0,) * e)
        self.one = FieldElement(self, (1,) + (0,) * (e - 1))
        self.name = f"F_{self.q}"
        self.generator_code = self._find_generator() if self.q <= 2**10 else None

    @staticmethod
    def _least_irreducible(p: int, e: int) -> list[int]:
        if e == 1:
            return [0, 1]
        for tail in _iter_product(range(p), repeat=e):
            cand = list(tail) + [1]
            if _is_irreducible(cand, p):
                return cand
        raise AssertionError("no irreducible polynomial found")  # cannot happen

    def _find_generator(self) -> int:
        n = self.q - 1
        prime_factors = []
        m, d = n, 2
        while d * d <= m:
            if m % d == 0:
                prime_factors.append(d)
                while m % d == 0:
                    m //= d
            d += 1
        if m > 1:
            prime_factors.append(m)
        for code in range(1, self.q):
            x = self.from_code(code)
            if all((x ** (n // f)) != self.one for f in prime_factors):
                return code
        raise AssertionError("multiplicative group had no generator")

    def element(self, coeffs) -> FieldElement:
        coeffs = tuple(int(c) % self.p for c in coeffs)
        if len(coeffs) != self.e:
            raise ValidationError(f"need {self.e} coefficients for {self.name}")
        return FieldElement(self, coeffs)

    def from_code(self, code: int) -> FieldElement:
        if not (0 <= code < self.q):
            raise ValidationError(f"element code {code} out of range for {self.name}")
        digits = []
        for _ in range(self.e):
            digits.append(code % self.p)
            code //= self.p
        return FieldElement(self, tuple(digits))

    def from_int(self, n: int) -> FieldElement:
        """The image of an ordinary integer (prime subfield element)."""
        return FieldElement(self, (n % self.p,) + (0,) * (self.e - 1))

    def elements(self):
        for code in range(self.q):
            yield self.from_code(code)

    def t(self) -> FieldElement:
        """The residue of the variable, a root of the modulus."""
        if self.e == 1:
            raise ValidationError("prime field has no extension generator")
        return FieldElement(self, (0, 1) + (0,) * (self.e - 2))

    def serialize(self) -> str:
        return " ".join(str(x) for x in (self.p, self.e) + self.modulus)

    def __repr__(self) -> str:
        return self.name


@lru_cache(maxsize=None)
def _make_field_cached(p: int, e: int) -> Field:
    return Field(p, e)


def make_field(p: int, e: int = 1, budgets: Budgets | None = None) -> Field:
    """Interned constructor: the same (p, e) always returns the same object."""
    if budgets is not None:
        check_budget(budgets, "field_q_max", p**e)
    return _make_field_cached(p, e)


def parse_field_record(text: str) -> Field:
    """Parse 'p e c_0 .. c_e' and return the interned field, verifying the modulus."""
    parts = text.split()
    if len(parts) < 3:
        raise ValidationError(f"field record too short: {text!r}")
    try:
        nums = [int(x) for x in parts]
    except ValueError:
        raise ValidationError(f"field record has non-integer tokens: {text!r}")
    p, e, coeffs = nums[0], nums[1], nums[2:]
    if len(coeffs) != e + 1:
        raise ValidationError(f"field record: expected {e + 1} modulus coefficients, got {len(coeffs)}")
    field = make_field(p, e)
    if tuple(c % p for c in coeffs) != field.modulus:
        raise ValidationError(
            f"field record modulus {coeffs} does not match the canonical modulus {list(field.modulus)}"
        )
    return field
