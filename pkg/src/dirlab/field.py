"""Deterministic construction of GF(p^n) and exact arithmetic on element codes.

An element a_0 + a_1 x + ... + a_{n-1} x^{n-1} of F_p[x]/(m(x)) is stored as the
integer code sum(a_i * p**i).  Code 0 is zero and code 1 is one.  Multiplication
goes through discrete log tables built from a fixed primitive element; addition
is digit-wise mod p.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import (
    DegreeMismatch,
    DivisionByZero,
    FieldError,
    FieldTooLarge,
    JOutOfRange,
    NonPrimeCharacteristic,
    ReducibleModulus,
)

MAX_ORDER = 1 << 20
# Full q*q addition table only while every code is a cached small int.
ADD_TABLE_LIMIT = 256


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    return all(m % d for d in range(3, math.isqrt(m) + 1, 2))


def prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def divisors(m: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(m) + 1) if m % d == 0]
    return sorted(set(small) | {m // d for d in small})


def to_digits(code: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        code, r = divmod(code, p)
        out.append(r)
    return out


def from_digits(digits: Sequence[int], p: int) -> int:
    code = 0
    for d in reversed(digits):
        code = code * p + d
    return code


# -- polynomials over F_p as coefficient lists, constant term first ----------

def _poly_rem(a: list[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m."""
    a = list(a)
    dm = len(m) - 1
    for top in range(len(a) - 1, dm - 1, -1):
        c = a[top] % p
        if c:
            shift = top - dm
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mi) % p
    return [x % p for x in a[:dm]] + [0] * max(0, dm - len(a))


def is_irreducible(m: Sequence[int], p: int) -> bool:
    """Trial division of the monic m by every monic polynomial of degree <= deg(m)/2."""
    n = len(m) - 1
    if n < 1:
        return False
    for d in range(1, n // 2 + 1):
        for enc in range(p ** d):
            divisor = to_digits(enc, p, d) + [1]
            if not any(_poly_rem(list(m), divisor, p)):
                return False
    return True


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """First irreducible monic polynomial of degree n in encoding order of its lower coefficients."""
    for enc in range(p ** n):
        cand = to_digits(enc, p, n) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {n} over F_{p}")  # unreachable


def _mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    return _poly_rem(prod, m, p)


# -- public types --------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """Characteristic, degree and optional modulus (n+1 coefficients, constant first).

    A modulus given with only n entries is read as the non-leading coefficients
    of a monic polynomial.
    """

    p: int
    n: int
    modulus: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.modulus is not None:
            mod = tuple(int(c) for c in self.modulus)
            if len(mod) == self.n:
                mod = mod + (1,)
            object.__setattr__(self, "modulus", mod)


@dataclass(frozen=True, eq=False)
class FieldCtx:
    spec: FieldSpec
    q: int
    generator: int
    antilog: tuple[int, ...]
    log: tuple[int, ...]
    neg_table: tuple[int, ...]
    add_table: Optional[tuple[int, ...]]

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def modulus(self) -> tuple[int, ...]:
        return self.spec.modulus

    @property
    def key(self) -> tuple:
        return (self.p, self.n, self.modulus)

    def __eq__(self, other):
        if not isinstance(other, FieldCtx):
            return NotImplemented
        return self is other or self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"GF({self.p}^{self.n}, modulus={list(self.modulus)})"

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def digits(self, e: int) -> list[int]:
        return to_digits(e, self.p, self.n)

    def check(self, e: int) -> int:
        if not 0 <= e < self.q:
            raise FieldError(f"code {e} outside GF({self.q})")
        return e

    # additive structure
    def add(self, a: int, b: int) -> int:
        if self.add_table is not None:
            return self.add_table[a * self.q + b]
        p = self.p
        if p == 2:
            return a ^ b
        if self.n == 1:
            return (a + b) % p
        out, scale = 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += ((da + db) % p) * scale
            scale *= p
        return out

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg_table[b])

    # multiplicative structure
    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.antilog[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self.antilog[-self.log[a] % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise DivisionByZero(f"division of {a} by zero")
        if a == 0:
            return 0
        return self.antilog[(self.log[a] - self.log[b]) % (self.q - 1)]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k > 0:
                return 0
            if k == 0:
                return 1
            raise DivisionByZero("negative power of zero")
        return self.antilog[(self.log[a] * k) % (self.q - 1)]

    def scale(self, c: int, a: int) -> int:
        """Multiply a by the integer c (an element of the prime field)."""
        c %= self.p
        out = 0
        for _ in range(c):
            out = self.add(out, a)
        return out

    def frobenius(self, e: int, j: int) -> int:
        """Return e**(p**j) for 0 <= j < n."""
        if not 0 <= j < self.n:
            raise JOutOfRange(f"frobenius exponent j={j} outside [0, {self.n})")
        if e == 0:
            return 0
        return self.antilog[(self.log[e] * self.p ** j) % (self.q - 1)]

    def order(self, e: int) -> int:
        if e == 0:
            raise DivisionByZero("zero has no multiplicative order")
        return (self.q - 1) // math.gcd(self.log[e], self.q - 1)

    def iter_nonzero_by_log(self) -> Iterator[int]:
        return iter(self.antilog)


def arith(ctx: FieldCtx, op: str, *operands: int) -> int:
    """Dispatch one of add, sub, mul, div, inv, neg, pow."""
    fn = {
        "add": ctx.add,
        "sub": ctx.sub,
        "mul": ctx.mul,
        "div": ctx.div,
        "inv": ctx.inv,
        "neg": ctx.neg,
        "pow": ctx.pow,
    }.get(op)
    if fn is None:
        raise ValueError(f"unknown field operation {op!r}")
    return fn(*operands)


def _validate(spec: FieldSpec) -> tuple[int, ...]:
    p, n = spec.p, spec.n
    if not isinstance(p, int) or not is_prime(p):
        raise NonPrimeCharacteristic(f"characteristic p={p} is not prime")
    if not isinstance(n, int) or n < 1:
        raise DegreeMismatch(f"extension degree n={n} must be a positive integer")
    if p ** n > MAX_ORDER:
        raise FieldTooLarge(f"q={p}^{n} exceeds the supported maximum {MAX_ORDER}")
    if spec.modulus is None:
        return default_modulus(p, n)
    mod = spec.modulus
    if len(mod) != n + 1:
        raise DegreeMismatch(f"modulus has degree {len(mod) - 1}, expected {n}")
    if any(not 0 <= c < p for c in mod):
        raise FieldError(f"modulus coefficients must lie in [0, {p})")
    if mod[-1] != 1:
        raise DegreeMismatch("modulus must be monic")
    if not is_irreducible(mod, p):
        raise ReducibleModulus(f"modulus {list(mod)} is reducible over F_{p}")
    return mod


def _find_generator(p: int, n: int, mod: tuple[int, ...]) -> int:
    q = p ** n
    if q == 2:
        return 1
    factors = prime_factors(q - 1)

    def power(digits, k):
        result = [1] + [0] * (n - 1)
        base = digits
        while k:
            if k & 1:
                result = _mulmod(result, base, mod, p)
            base = _mulmod(base, base, mod, p)
            k >>= 1
        return result

    one = [1] + [0] * (n - 1)
    for code in range(2, q):
        d = to_digits(code, p, n)
        if all(power(d, (q - 1) // r) != one for r in factors):
            return code
    raise FieldError("no primitive element found")  # unreachable for a field


def _build_antilog(p: int, n: int, mod: tuple[int, ...], g: int) -> list[int]:
    q = p ** n
    # multiplication by g is F_p-linear: precompute the images of x^i * g
    images = [from_digits(_mulmod(to_digits(p ** i, p, n), to_digits(g, p, n), mod, p), p)
              for i in range(n)]
    image_digits = [to_digits(c, p, n) for c in images]
    antilog = [1]
    cur = 1
    for _ in range(q - 2):
        if p == 2:
            nxt, c, i = 0, cur, 0
            while c:
                if c & 1:
                    nxt ^= images[i]
                c >>= 1
                i += 1
        else:
            acc = [0] * n
            for i, di in enumerate(to_digits(cur, p, n)):
                if di:
                    for k, v in enumerate(image_digits[i]):
                        acc[k] += di * v
            nxt = from_digits([a % p for a in acc], p)
        antilog.append(nxt)
        cur = nxt
    return antilog


@functools.lru_cache(maxsize=None)
def _build(p: int, n: int, mod: tuple[int, ...]) -> FieldCtx:
    q = p ** n
    g = _find_generator(p, n, mod)
    antilog = _build_antilog(p, n, mod, g)
    log = [-1] * q
    for k, e in enumerate(antilog):
        log[e] = k
    neg = [from_digits([(-d) % p for d in to_digits(e, p, n)], p) for e in range(q)]
    add_table = None
    if q <= ADD_TABLE_LIMIT:
        dig = [to_digits(e, p, n) for e in range(q)]
        add_table = tuple(
            from_digits([(x + y) % p for x, y in zip(dig[a], dig[b])], p)
            for a in range(q) for b in range(q)
        )
    return FieldCtx(
        spec=FieldSpec(p, n, mod),
        q=q,
        generator=g,
        antilog=tuple(antilog),
        log=tuple(log),
        neg_table=tuple(neg),
        add_table=add_table,
    )


def build_field(spec: FieldSpec) -> FieldCtx:
    """Validate spec and return the (cached, immutable) arithmetic context.

    Raises NonPrimeCharacteristic, DegreeMismatch, ReducibleModulus or
    FieldTooLarge on bad input.
    """
    mod = _validate(spec)
    return _build(spec.p, spec.n, tuple(mod))


def gf(p: int, n: int = 1, modulus: Optional[Sequence[int]] = None) -> FieldCtx:
    """Shorthand for build_field(FieldSpec(p, n, modulus))."""
    return build_field(FieldSpec(p, n, None if modulus is None else tuple(modulus)))
