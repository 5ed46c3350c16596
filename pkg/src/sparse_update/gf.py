"""Exact arithmetic in GF(p) and GF(p^m).

Elements are plain integers in ``[0, p**m)``.  The base-p digits of an
element, least significant first, are the coefficients of its polynomial
representative modulo the field's modulus.  ``FieldSpec`` offers scalar
operations on ints and vectorized operations on integer numpy arrays;
``FieldElement`` is a thin operator-overloading wrapper for interactive use.

Fields of order up to 2**16 carry log/antilog tables keyed by the smallest
primitive element.  Prime fields use native modular arithmetic.  Larger
extension fields fall back to polynomial arithmetic.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

TABLE_LIMIT = 1 << 16
MAX_ORDER = 1 << 40


class FieldError(ValueError):
    """Invalid field parameters or mixed-field arithmetic."""


def is_prime(n: int) -> bool:
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


# ----------------------------------------------------------------------
# polynomials over GF(p), little-endian coefficient lists
# ----------------------------------------------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` divided by ``b`` over GF(p)."""
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        coef = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bi) % p
        _trim(a)
    return a


def _monic_polys(p: int, degree: int) -> Iterable[list[int]]:
    """All monic polynomials of the given degree, in increasing integer order."""
    for low in range(p**degree):
        coeffs = []
        v = low
        for _ in range(degree):
            v, d = divmod(v, p)
            coeffs.append(d)
        yield coeffs + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _trim(list(poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(p, d):
            if not poly_mod(poly, f, p):
                return False
    return True


@functools.lru_cache(maxsize=None)
def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m.

    Candidates are compared by the integer whose base-p digits (least
    significant first) are the coefficients.
    """
    for cand in _monic_polys(p, m):
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")  # pragma: no cover


# ----------------------------------------------------------------------
# FieldSpec
# ----------------------------------------------------------------------

@dataclass(frozen=True, eq=True)
class FieldSpec:
    """GF(p^m) given by an explicit monic irreducible modulus.

    Use :func:`make_field` to construct; it validates the parameters.
    """

    p: int
    m: int
    modulus: tuple[int, ...]

    # -- basic properties ------------------------------------------------
    @property
    def order(self) -> int:
        return self.p**self.m

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def degree(self) -> int:
        return self.m

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (make_field, (self.p, self.m, list(self.modulus)))

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        return make_field(obj["p"], obj["m"], obj.get("modulus"))

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    def elements(self) -> range:
        return range(self.order)

    # -- digits <-> ints -------------------------------------------------
    def to_poly(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def from_poly(self, coeffs: Sequence[int]) -> int:
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.p + (c % self.p)
        return v

    def _poly_mulmod(self, a: int, b: int) -> int:
        pa, pb = self.to_poly(a), self.to_poly(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(pa):
            if x:
                for j, y in enumerate(pb):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self.from_poly(poly_mod(prod, self.modulus, self.p))

    # -- tables ----------------------------------------------------------
    @property
    def _tabled(self) -> bool:
        return self.m > 1 and self.order <= TABLE_LIMIT

    @cached_property
    def generator(self) -> int:
        """Smallest primitive element (generator of the multiplicative group)."""
        return smallest_primitive_element(self)

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.order - 1
        g = self.generator
        exp = np.zeros(2 * n, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        v = 1
        for i in range(n):
            exp[i] = v
            log[v] = i
            v = self._poly_mulmod(v, g)
        exp[n:] = exp[:n]
        return exp, log

    @cached_property
    def _exp_list(self) -> list[int]:
        return self._tables[0].tolist()

    @cached_property
    def _log_list(self) -> list[int]:
        return self._tables[1].tolist()

    # -- scalar arithmetic on ints ----------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        return self.from_poly([x + y for x, y in zip(self.to_poly(a), self.to_poly(b))])

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.m == 1:
            return (-a) % self.p
        return self.from_poly([-x for x in self.to_poly(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.m == 1:
            return (a * b) % self.p
        if self._tabled:
            lg = self._log_list
            return self._exp_list[lg[a] + lg[b]]
        return self._poly_mulmod(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        if self._tabled:
            lg = self._log_list[a]
            return self._exp_list[(self.order - 1 - lg) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """Square-and-multiply; negative exponents invert first."""
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        if self.m == 1:
            return pow(a, e, self.p)
        e %= self.order - 1
        if self._tabled:
            return self._exp_list[(self._log_list[a] * e) % (self.order - 1)]
        result, base = 1, a
        while e:
            if e & 1:
                result = self._poly_mulmod(result, base)
            base = self._poly_mulmod(base, base)
            e >>= 1
        return result

    def element_order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        n = self.order - 1
        ordr = n
        for f in prime_factors(n):
            while ordr % f == 0 and self.pow(a, ordr // f) == 1:
                ordr //= f
        return ordr

    def is_primitive(self, a: int) -> bool:
        return a != 0 and self.element_order(a) == self.order - 1

    # -- vectorized arithmetic on int arrays -------------------------------
    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.m):
            out += ((a // scale % self.p + b // scale % self.p) % self.p) * scale
            scale *= self.p
        return out

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        if self.m == 1:
            return (-a) % self.p
        out = np.zeros_like(a)
        scale = 1
        for _ in range(self.m):
            out += ((-(a // scale % self.p)) % self.p) * scale
            scale *= self.p
        return out

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a * b) % self.p
        if self._tabled:
            exp, log = self._tables
            out = exp[log[a] + log[b]]
            return np.where((a == 0) | (b == 0), 0, out)
        return np.vectorize(self.mul, otypes=[np.int64])(a, b)

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("zero has no multiplicative inverse")
        if self._tabled:
            exp, log = self._tables
            return exp[(self.order - 1 - log[a]) % (self.order - 1)]
        return np.vectorize(self.inv, otypes=[np.int64])(a)

    def vpow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return np.vectorize(lambda x: self.pow(int(x), e), otypes=[np.int64])(a)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product of int arrays over the field."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1 and self.p < (1 << 20):
            return (a @ b) % self.p if a.size and b.size else np.zeros(
                (a.shape[0], b.shape[1]), dtype=np.int64)
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for k in range(a.shape[1]):
            out = self.vadd(out, self.vmul(a[:, k:k + 1], b[k:k + 1, :]))
        return out


def make_field(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Build GF(p^m), validating the modulus or searching for a default one."""
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise FieldError(f"characteristic {p} is not prime")
    p, m = int(p), int(m)
    if m < 1:
        raise FieldError(f"degree must be >= 1, got {m}")
    if p**m > MAX_ORDER:
        raise FieldError(f"field order {p}^{m} exceeds supported size 2^40")
    if modulus is None:
        modulus = smallest_irreducible(p, m)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {m}: {list(modulus)}")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {list(modulus)} is reducible over GF({p})")
    return _cached_field(p, m, tuple(modulus))


@functools.lru_cache(maxsize=None)
def _cached_field(p: int, m: int, modulus: tuple[int, ...]) -> FieldSpec:
    return FieldSpec(p, m, modulus)


def field_of_order(order: int) -> FieldSpec:
    """Default field with the given prime-power order."""
    for p in range(2, order + 1):
        if order % p == 0:
            break
    m, v = 0, order
    while v % p == 0:
        v //= p
        m += 1
    if v != 1 or not is_prime(p):
        raise FieldError(f"{order} is not a prime power")
    return make_field(p, m)


def smallest_primitive_element(field: FieldSpec) -> int:
    for a in range(1, field.order):
        if _is_primitive_slow(field, a):
            return a
    raise FieldError("no primitive element")  # pragma: no cover


def _is_primitive_slow(field: FieldSpec, a: int) -> bool:
    # avoids the tables, which are themselves keyed by the generator
    n = field.order - 1
    if field.m == 1:
        return all(pow(a, n // f, field.p) != 1 for f in prime_factors(n)) if n > 1 else a == 1
    for f in prime_factors(n):
        e, r, base = n // f, 1, a
        while e:
            if e & 1:
                r = field._poly_mulmod(r, base)
            base = field._poly_mulmod(base, base)
            e >>= 1
        if r == 1:
            return False
    return True


# ----------------------------------------------------------------------
# subfields
# ----------------------------------------------------------------------

def subfield_degree(field: FieldSpec, q: int) -> int:
    """Return d with q = p^d, checking that GF(q) is a subfield of ``field``."""
    d, v = 0, q
    while v > 1 and v % field.p == 0:
        v //= field.p
        d += 1
    if v != 1 or d == 0 or field.m % d != 0:
        raise FieldError(f"{q} is not the order of a subfield of {field!r}")
    return d


def frobenius_q(field: FieldSpec, a: int, q: int, i: int = 1) -> int:
    """a^(q^i): the i-th iterate of the q-power map on ``field``."""
    subfield_degree(field, q)
    if i < 0:
        raise FieldError("iterate count must be >= 0")
    if a == 0:
        return 0
    e = pow(q, i, field.order - 1) if field.order > 2 else 0
    return field.pow(a, e)


def subfield_elements(field: FieldSpec, q: int) -> list[int]:
    """The elements of ``field`` fixed by a -> a^q, i.e. the copy of GF(q)."""
    subfield_degree(field, q)
    return [a for a in range(field.order) if field.pow(a, q) == a]


def embedding(small: FieldSpec, big: FieldSpec) -> np.ndarray:
    """Lookup table for a field homomorphism GF(small) -> GF(big).

    The image of the small field's variable is the smallest root (by integer
    value) of the small field's modulus inside ``big``.
    """
    if small.p != big.p or big.m % small.m != 0:
        raise FieldError(f"{small!r} does not embed in {big!r}")
    if small.m == 1:
        return np.arange(small.order, dtype=np.int64)
    root = None
    for r in range(big.order):
        acc = 0
        for c in reversed(small.modulus):
            acc = big.add(big.mul(acc, r), c)
        if acc == 0:
            root = r
            break
    if root is None:  # pragma: no cover
        raise FieldError("modulus has no root in the extension")
    powers = [big.pow(root, i) for i in range(small.m)]
    table = np.zeros(small.order, dtype=np.int64)
    for v in range(small.order):
        acc = 0
        for c, pw in zip(small.to_poly(v), powers):
            if c:
                acc = big.add(acc, big.mul(c, pw))
        table[v] = acc
    return table


def extension_of(small: FieldSpec, t: int) -> FieldSpec:
    """Default field of order small.order**t (same characteristic)."""
    return make_field(small.p, small.m * t)


def subfield_basis(big: FieldSpec, q: int) -> list[int]:
    """Polynomial basis 1, x, ..., x^(t-1) of GF(big) over its subfield GF(q).

    These are independent over GF(q) because x generates the whole field over
    the prime field, so its minimal polynomial over GF(q) has degree t.
    """
    d = subfield_degree(big, q)
    t = big.m // d
    if big.m == 1:
        return [1]
    return [big.pow(big.p, i) for i in range(t)]


def is_independent_over_subfield(big: FieldSpec, elems: Sequence[int], q: int) -> bool:
    """Exhaustive check that no nonzero GF(q)-combination of ``elems`` vanishes."""
    sub = subfield_elements(big, q)
    for coeffs in itertools.product(sub, repeat=len(elems)):
        if any(coeffs):
            acc = 0
            for c, e in zip(coeffs, elems):
                acc = big.add(acc, big.mul(c, e))
            if acc == 0:
                return False
    return True


# ----------------------------------------------------------------------
# FieldElement
# ----------------------------------------------------------------------

class FieldElement:
    """An element of a specific field, with arithmetic operators."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value: int):
        value = int(value)
        if not 0 <= value < field.order:
            raise FieldError(f"value {value} out of range for {field!r}")
        self.field = field
        self.value = value

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"field mismatch: {self.field!r} vs {other.field!r}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return FieldElement(self.field, int(other)).value
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._coerce(other), self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._coerce(other)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, int(e)))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.field!r}({self.value})"


def _check_same(a: FieldElement, b: FieldElement) -> None:
    if a.field != b.field:
        raise FieldError(f"field mismatch: {a.field!r} vs {b.field!r}")


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def power(a: FieldElement, e: int) -> FieldElement:
    return a**e
