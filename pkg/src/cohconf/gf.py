"""Finite fields GF(p^d) in a polynomial basis.

Elements are encoded as integers ``c_0 + c_1 p + ... + c_{d-1} p^{d-1}``
where ``c_i`` is the coefficient of ``x^i``.  This encoding doubles as the
point labelling used by the scheme builders: point ``0`` is the zero element.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

# Point labels live in int64 arrays downstream.
MAX_ORDER = 2**62
# Exp/log tables are only materialised up to this order.
TABLE_LIMIT = 1 << 20
# mul_code switches to table lookups below this order.
FAST_MUL_LIMIT = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, d)`` with ``q == p**d``, or None if q is not a prime power."""
    if q < 2:
        return None
    p = prime_factors(q)
    if len(p) != 1:
        return None
    p = p[0]
    d = 0
    while q > 1:
        q //= p
        d += 1
    return p, d


# -- polynomial helpers over GF(p); lists are low-degree first ---------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * mi) % p
        _trim(a)
    return a


def _digits(code: int, p: int, d: int) -> list[int]:
    out = []
    for _ in range(d):
        code, r = divmod(code, p)
        out.append(r)
    return out


def _undigits(digits, p: int) -> int:
    code = 0
    for c in reversed(list(digits)):
        code = code * p + int(c)
    return code


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    for e in range(1, deg // 2 + 1):
        for low in range(p**e):
            divisor = _digits(low, p, e) + [1]
            if not _poly_mod(poly, divisor, p):
                return False
    return True


class FieldMismatch(ValueError):
    """Raised when elements of different fields are combined or compared."""


class FiniteField:
    """GF(p^d) with the lexicographically least irreducible modulus.

    Instances are immutable; two fields with equal ``(p, d)`` are equal.
    """

    def __init__(self, p: int, d: int):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p!r}")
        if not isinstance(d, int) or d < 1:
            raise ValueError(f"degree must be a positive integer, got {d!r}")
        if p**d >= MAX_ORDER:
            raise OverflowError(f"field order {p}^{d} exceeds the supported range")
        self.p = p
        self.d = d
        self.q = p**d
        self.modulus = self._least_irreducible()
        self.xi = self._least_primitive()

    def _least_irreducible(self) -> tuple[int, ...]:
        p, d = self.p, self.d
        for low in range(p**d):
            poly = _digits(low, p, d) + [1]
            if is_irreducible(poly, p):
                return tuple(poly)
        raise AssertionError("no irreducible polynomial found")  # pragma: no cover

    def _least_primitive(self) -> int:
        order = self.q - 1
        if order == 1:
            return 1
        cofactors = [order // f for f in prime_factors(order)]
        for g in range(1, self.q):
            if all(self.pow_code(g, e) != 1 for e in cofactors):
                return g
        raise AssertionError("no primitive element found")  # pragma: no cover

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.d) == (other.p, other.d)

    def __hash__(self):
        return hash(("GF", self.p, self.d))

    def __repr__(self):
        return f"FiniteField({self.p}, {self.d})"

    def __len__(self):
        return self.q

    # -- integer-coded arithmetic -------------------------------------------

    def add_code(self, a: int, b: int) -> int:
        p = self.p
        out, scale = 0, 1
        while a or b:
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * scale
            scale *= p
        return out

    def neg_code(self, a: int) -> int:
        p = self.p
        out, scale = 0, 1
        while a:
            a, r = divmod(a, p)
            out += ((-r) % p) * scale
            scale *= p
        return out

    def sub_code(self, a: int, b: int) -> int:
        return self.add_code(a, self.neg_code(b))

    def _mul_poly(self, a: int, b: int) -> int:
        p, d = self.p, self.d
        da, db = _digits(a, p, d), _digits(b, p, d)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        return _undigits(_poly_mod(prod, list(self.modulus), p), p)

    def mul_code(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.q <= FAST_MUL_LIMIT:
            q1 = self.q - 1
            return int(self.exp_table[(self.log_table[a] + self.log_table[b]) % q1])
        return self._mul_poly(a, b)

    def pow_code(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv_code(a), -e
        result = 1
        while e:
            if e & 1:
                result = self._mul_poly(result, a)
            a = self._mul_poly(a, a)
            e >>= 1
        return result

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.pow_code(a, self.q - 2)

    # -- tables ---------------------------------------------------------------

    @cached_property
    def exp_table(self) -> np.ndarray:
        """``exp_table[i]`` is the code of ``xi**i`` for ``0 <= i < q - 1``."""
        if self.q > TABLE_LIMIT:
            raise MemoryError("field too large for exp/log tables")
        out = np.empty(self.q - 1, dtype=np.int64)
        g = 1
        for i in range(self.q - 1):
            out[i] = g
            g = self._mul_poly(g, self.xi)
        out.setflags(write=False)
        return out

    @cached_property
    def log_table(self) -> np.ndarray:
        """Discrete logarithm base ``xi``; entry 0 is -1."""
        out = np.full(self.q, -1, dtype=np.int64)
        out[self.exp_table] = np.arange(self.q - 1)
        out.setflags(write=False)
        return out

    @cached_property
    def digit_table(self) -> np.ndarray:
        """``digit_table[a, i]`` is the coefficient of ``x^i`` in element ``a``."""
        codes = np.arange(self.q, dtype=np.int64)
        out = np.empty((self.q, self.d), dtype=np.int64)
        for i in range(self.d):
            out[:, i] = codes % self.p
            codes //= self.p
        out.setflags(write=False)
        return out

    def difference_table(self) -> np.ndarray:
        """q x q array whose entry (x, y) is the code of ``y - x``."""
        dig = self.digit_table
        weights = self.p ** np.arange(self.d, dtype=np.int64)
        diff = (dig[None, :, :] - dig[:, None, :]) % self.p
        return diff @ weights

    def frobenius_table(self) -> np.ndarray:
        """Codes of ``a**p`` for every element code ``a``."""
        out = np.zeros(self.q, dtype=np.int64)
        if self.q > 1:
            logs = self.log_table[1:]
            out[1:] = self.exp_table[(logs * self.p) % (self.q - 1)]
        return out

    # -- element API ----------------------------------------------------------

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch("element belongs to another field")
            return value
        if isinstance(value, (list, tuple)):
            if len(value) != self.d or any(not 0 <= c < self.p for c in value):
                raise ValueError(f"bad coefficient vector {value!r}")
            return FieldElement(self, _undigits(value, self.p))
        if isinstance(value, (int, np.integer)):
            # Integers map through the prime subfield.
            return FieldElement(self, int(value) % self.p)
        raise TypeError(f"cannot coerce {value!r} into {self!r}")

    def element(self, code: int) -> FieldElement:
        if not 0 <= code < self.q:
            raise ValueError(f"element code {code} out of range for {self!r}")
        return FieldElement(self, int(code))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    @property
    def primitive(self) -> FieldElement:
        return FieldElement(self, self.xi)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, c) for c in range(self.q)]


class FieldElement:
    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        self.field = field
        self.code = code

    @property
    def rep(self) -> tuple[int, ...]:
        """Coefficient vector ``(c_0, ..., c_{d-1})``."""
        return tuple(_digits(self.code, self.field.p, self.field.d))

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine elements of {self.field!r} and {other.field!r}")
            return other.code
        if isinstance(other, (int, np.integer)):
            return self.field(other).code
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.add_code(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub_code(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub_code(b, self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg_code(self.code))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul_code(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul_code(self.code, self.field.inv_code(b)))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul_code(b, self.field.inv_code(self.code)))

    def __pow__(self, e: int):
        if self.code == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return FieldElement(self.field, 1 if e == 0 else 0)
        return FieldElement(self.field, self.field.pow_code(self.code, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv_code(self.code))

    def order(self) -> int:
        """Multiplicative order."""
        if self.code == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        n = self.field.q - 1
        for f in prime_factors(n):
            while n % f == 0 and self.field.pow_code(self.code, n // f) == 1:
                n //= f
        return n

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch("comparing elements of different fields")
            return self.code == other.code
        if isinstance(other, (int, np.integer)):
            return self.code == self.field(other).code
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.d, self.code))

    def __int__(self):
        return self.code

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.rep):
            if c:
                mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(mono if c == 1 and i else f"{c}" if i == 0 else f"{c}*{mono}")
        return " + ".join(reversed(terms)) or "0"


def build_field(p: int, d: int) -> FiniteField:
    return _cached_field(p, d)


_FIELDS: dict[tuple[int, int], FiniteField] = {}


def _cached_field(p: int, d: int) -> FiniteField:
    key = (p, d)
    if key not in _FIELDS:
        _FIELDS[key] = FiniteField(p, d)
    return _FIELDS[key]


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.field != b.field:
        raise FieldMismatch("operands belong to different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def frobenius_orbit(a: FieldElement) -> set[FieldElement]:
    """``{a, a^p, a^(p^2), ...}``."""
    orbit = set()
    x = a
    while x not in orbit:
        orbit.add(x)
        x = x ** a.field.p
    return orbit


def multiplicative_subgroup(field: FiniteField, index: int) -> frozenset[FieldElement]:
    """The unique subgroup of index ``index`` in the multiplicative group."""
    if index < 1 or (field.q - 1) % index:
        raise ValueError(f"index {index} does not divide q - 1 = {field.q - 1}")
    gen = field.pow_code(field.xi, index)
    out = set()
    g = 1
    for _ in range((field.q - 1) // index):
        out.add(FieldElement(field, g))
        g = field._mul_poly(g, gen)
    return frozenset(out)
