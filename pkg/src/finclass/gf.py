"""Exact arithmetic in small finite fields GF(p^e).

Elements are carried as integer codes in [0, p^e): the coefficient vector
(c_0, ..., c_{e-1}) of the reduced polynomial representative encodes as
sum(c_i * p^i).  That integer is also the serialization format.

The modulus is the monic irreducible polynomial of degree e whose
coefficient encoding is smallest, so two independently constructed fields
with equal (p, e) are identical and serialized data is reproducible.

Fields are capped at p^e <= 2**16; everything in scope uses q in
{2,3,4,5,7,8,9}, and the cap keeps intermediate products inside machine
integers.  Fields of size <= 256 precompute full add/mul tables; larger
ones reduce polynomials on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError

SIZE_CAP = 1 << 16
_TABLE_CAP = 256


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _poly_from_code(code: int, p: int) -> tuple[int, ...]:
    coeffs = []
    while code:
        coeffs.append(code % p)
        code //= p
    return tuple(coeffs)


def _poly_to_code(coeffs, p: int) -> int:
    code = 0
    for c in reversed(list(coeffs)):
        code = code * p + c
    return code


def _poly_mul_mod(a, b, modulus, p):
    # schoolbook product, reduced by the monic modulus
    prod = [0] * (len(a) + len(b) - 1) if a and b else [0]
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    e = len(modulus) - 1
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c == 0:
            continue
        prod[k] = 0
        for t in range(e):
            prod[k - e + t] = (prod[k - e + t] - c * modulus[t]) % p
    while len(prod) > e:
        prod.pop()
    return prod


def _poly_divmod(a, b, p):
    # a, b coefficient lists (low degree first), b nonzero
    a = list(a)
    db = len(b) - 1
    while b[db] == 0:
        db -= 1
    inv_lead = pow(b[db], p - 2, p)
    quot = [0] * max(len(a) - db, 1)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c == 0:
            continue
        f = (c * inv_lead) % p
        quot[k - db] = f
        for t in range(db + 1):
            a[k - db + t] = (a[k - db + t] - f * b[t]) % p
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return quot, a


def _is_irreducible(coeffs, p: int) -> bool:
    """Trial division by every monic polynomial of degree <= e/2."""
    e = len(coeffs) - 1
    if e == 1:
        return True
    if coeffs[0] == 0:  # divisible by x
        return False
    for d in range(1, e // 2 + 1):
        for code in range(p**d, 2 * p**d):
            div = list(_poly_from_code(code, p))
            # restrict to monic divisors; code range above makes leading coeff 1..p-1
            if div[-1] != 1:
                continue
            _, rem = _poly_divmod(list(coeffs), div, p)
            if rem == [0]:
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A concrete GF(p^e) with a fixed modulus.

    Use :func:`make_field`; constructing directly skips validation.
    """

    p: int
    e: int
    modulus: tuple[int, ...]  # monic, degree e, low-order coefficient first

    @property
    def q(self) -> int:
        return self.p**self.e

    # -- element codes ------------------------------------------------
    def elements(self):
        return range(self.q)

    def coeffs(self, a: int) -> tuple[int, ...]:
        c = _poly_from_code(a, self.p)
        return c + (0,) * (self.e - len(c))

    def _tables(self):
        return _field_tables(self)

    def add(self, a: int, b: int) -> int:
        if self.q <= _TABLE_CAP:
            return self._tables()[0][a * self.q + b]
        return self._add_slow(a, b)

    def _add_slow(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        mult = 1
        while a or b:
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        out = 0
        mult = 1
        while a:
            out += ((p - a % p) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.q <= _TABLE_CAP:
            return self._tables()[1][a * self.q + b]
        return self._mul_slow(a, b)

    def _mul_slow(self, a: int, b: int) -> int:
        pa = _poly_from_code(a, self.p)
        pb = _poly_from_code(b, self.p)
        if not pa or not pb:
            return 0
        return _poly_to_code(_poly_mul_mod(pa, pb, self.modulus, self.p), self.p)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.q)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            if a == 0:
                raise ZeroDivisionError("0 has no negative power")
            k = k % (self.q - 1)
        if a == 0:
            return 0 if k > 0 else 1
        if k >= self.q - 1:
            k %= self.q - 1
        result = 1
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def frobenius(self, a: int, k: int = 1) -> int:
        """a ** (p**k), the k-fold Frobenius."""
        if k < 0:
            raise DomainError("frobenius power must be >= 0")
        out = a
        for _ in range(k % self.e if self.e > 1 else 0):
            out = self.pow(out, self.p)
        return out

    def element(self, code: int) -> "FieldElement":
        if not 0 <= code < self.q:
            raise DomainError("element code %d outside [0, %d)" % (code, self.q))
        return FieldElement(self, code)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def trace_zero_elements(self) -> tuple[int, ...]:
        """Codes a with a + a^p + ... + a^(p^(e-1)) = 0 (used by unitary transvections)."""
        out = []
        for a in self.elements():
            t = 0
            x = a
            for _ in range(self.e):
                t = self.add(t, x)
                x = self.pow(x, self.p)
            if t == 0:
                out.append(a)
        return tuple(out)

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def _field_tables(spec: FieldSpec):
    q = spec.q
    add = [0] * (q * q)
    mul = [0] * (q * q)
    for a in range(q):
        for b in range(q):
            add[a * q + b] = spec._add_slow(a, b)
            mul[a * q + b] = spec._mul_slow(a, b)
    return add, mul


@dataclass(frozen=True)
class FieldElement:
    """A field element: a FieldSpec plus its canonical integer code."""

    spec: FieldSpec
    code: int

    def _o(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise DomainError("mixing elements of %r and %r" % (self.spec, other.spec))
            return other.code
        if isinstance(other, int):
            return other % self.spec.p
        raise TypeError(other)

    def __add__(self, other):
        return FieldElement(self.spec, self.spec.add(self.code, self._o(other)))

    def __sub__(self, other):
        return FieldElement(self.spec, self.spec.sub(self.code, self._o(other)))

    def __mul__(self, other):
        return FieldElement(self.spec, self.spec.mul(self.code, self._o(other)))

    def __truediv__(self, other):
        return FieldElement(self.spec, self.spec.div(self.code, self._o(other)))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.code))

    def __pow__(self, k: int):
        return FieldElement(self.spec, self.spec.pow(self.code, k))

    def frobenius(self, k: int = 1):
        return FieldElement(self.spec, self.spec.frobenius(self.code, k))

    def __int__(self):
        return self.code

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"{self.code}@GF({self.spec.q})"


@lru_cache(maxsize=None)
def make_field(p: int, e: int) -> FieldSpec:
    """GF(p^e) with the code-minimal irreducible monic modulus."""
    if not _is_prime(p):
        raise DomainError("characteristic %d is not prime" % p)
    if e < 1:
        raise DomainError("extension degree must be >= 1")
    if p**e > SIZE_CAP:
        raise DomainError("field size %d exceeds cap %d" % (p**e, SIZE_CAP))
    if e == 1:
        # modulus x - 0 is a placeholder; arithmetic is plain mod p
        return FieldSpec(p, 1, (0, 1))
    for low_code in range(p**e):
        coeffs = list(_poly_from_code(low_code, p))
        coeffs += [0] * (e - len(coeffs))
        coeffs.append(1)  # monic of degree e
        if _is_irreducible(coeffs, p):
            return FieldSpec(p, e, tuple(coeffs))
    raise DomainError("no irreducible polynomial found (unreachable)")


@lru_cache(maxsize=None)
def field_of_size(q: int) -> FieldSpec:
    """GF(q) from its size (q must be a prime power)."""
    for p in range(2, q + 1):
        if _is_prime(p) and q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                break
            return make_field(p, e)
    raise DomainError("%d is not a prime power" % q)


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Dispatch add|sub|mul|div on two elements of one field."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise DomainError("unknown op %r" % op)


def frobenius(a: FieldElement, k: int) -> FieldElement:
    return a.frobenius(k)
