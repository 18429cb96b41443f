"""Multiplicative subsets of F_q^* stored as integer bitsets.

Bit ``e`` of ``MulSet.bits`` is set when the element with code ``e`` belongs to
the set.  Products are computed in log space, where multiplying by ``g**k`` is a
cyclic rotation by ``k`` of a (q-1)-bit mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from .errors import ContextMismatch, EmptySet, FieldError, IndexDoesNotDivide
from .field import FieldCtx, divisors


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the positions of set bits in ascending order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class MulSet:
    ctx: FieldCtx
    bits: int

    def __post_init__(self):
        if self.bits & 1:
            raise FieldError("a multiplicative set cannot contain zero")
        if self.bits >> self.ctx.q:
            raise FieldError("set contains codes outside the field")

    @classmethod
    def of(cls, ctx: FieldCtx, codes: Iterable[int]) -> "MulSet":
        bits = 0
        for c in codes:
            ctx.check(c)
            bits |= 1 << c
        return cls(ctx, bits)

    @classmethod
    def full(cls, ctx: FieldCtx) -> "MulSet":
        return cls(ctx, ((1 << ctx.q) - 1) ^ 1)

    def __len__(self):
        return self.bits.bit_count()

    def __iter__(self):
        return iter_bits(self.bits)

    def __contains__(self, e):
        return 0 <= e < self.ctx.q and (self.bits >> e) & 1 == 1

    def __le__(self, other: "MulSet") -> bool:
        _same_ctx(self, other)
        return self.bits & ~other.bits == 0

    def __or__(self, other: "MulSet") -> "MulSet":
        _same_ctx(self, other)
        return MulSet(self.ctx, self.bits | other.bits)

    def to_list(self) -> list[int]:
        return list(iter_bits(self.bits))

    def __repr__(self):
        return f"MulSet({self.to_list()})"

    # log-space views
    def log_mask(self) -> int:
        log = self.ctx.log
        mask = 0
        for e in iter_bits(self.bits):
            mask |= 1 << log[e]
        return mask

    @classmethod
    def from_log_mask(cls, ctx: FieldCtx, mask: int) -> "MulSet":
        antilog = ctx.antilog
        bits = 0
        for k in iter_bits(mask):
            bits |= 1 << antilog[k]
        return cls(ctx, bits)


def _same_ctx(a: MulSet, b: MulSet) -> None:
    if a.ctx != b.ctx:
        raise ContextMismatch(f"sets live in different fields: {a.ctx!r} vs {b.ctx!r}")


def _nonempty(*sets: MulSet) -> None:
    for s in sets:
        if not s.bits:
            raise EmptySet("operation requires a nonempty set")


def rotate(mask: int, k: int, width: int) -> int:
    """Cyclic left rotation of a width-bit mask by k."""
    k %= width
    full = (1 << width) - 1
    return ((mask << k) | (mask >> (width - k))) & full


def product_set(A: MulSet, B: MulSet) -> MulSet:
    """AB = {ab : a in A, b in B}."""
    _same_ctx(A, B)
    _nonempty(A, B)
    ctx = A.ctx
    m = ctx.q - 1
    if len(A) > len(B):
        A, B = B, A
    lb = B.log_mask()
    acc = 0
    log = ctx.log
    for a in A:
        acc |= rotate(lb, log[a], m)
    return MulSet.from_log_mask(ctx, acc)


def inverse_set(A: MulSet) -> MulSet:
    _nonempty(A)
    ctx = A.ctx
    return MulSet.of(ctx, (ctx.inv(a) for a in A))


def triple_quotient(D: MulSet) -> MulSet:
    """The set D * D^-1 * D^-1."""
    Dinv = inverse_set(D)
    return product_set(product_set(D, Dinv), Dinv)


def hypothesis_bound_holds(size: int, q: int) -> bool:
    """size <= (q+1)/2, in integers."""
    return 2 * size <= q + 1


@dataclass(frozen=True)
class DoublingReport:
    size_D: int
    size_DD: int
    size_triple: int
    c: Fraction
    hypothesis_holds: bool
    pr_sufficient_holds: bool

    def to_dict(self) -> dict:
        return {
            "size_D": self.size_D,
            "size_DD": self.size_DD,
            "size_triple": self.size_triple,
            "c": {"num": self.c.numerator, "den": self.c.denominator},
            "hypothesis_holds": self.hypothesis_holds,
            "pr_sufficient_holds": self.pr_sufficient_holds,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DoublingReport":
        return cls(
            size_D=d["size_D"],
            size_DD=d["size_DD"],
            size_triple=d["size_triple"],
            c=Fraction(d["c"]["num"], d["c"]["den"]),
            hypothesis_holds=d["hypothesis_holds"],
            pr_sufficient_holds=d["pr_sufficient_holds"],
        )


def doubling_report(D: MulSet) -> DoublingReport:
    _nonempty(D)
    q = D.ctx.q
    size_D = len(D)
    size_DD = len(product_set(D, D))
    size_triple = len(triple_quotient(D))
    c = Fraction(size_DD, size_D)
    # c^3 |D| <= (q+1)/2  <=>  2 num^3 |D| <= (q+1) den^3
    pr = 2 * c.numerator ** 3 * size_D <= (q + 1) * c.denominator ** 3
    return DoublingReport(
        size_D=size_D,
        size_DD=size_DD,
        size_triple=size_triple,
        c=c,
        hypothesis_holds=hypothesis_bound_holds(size_triple, q),
        pr_sufficient_holds=pr,
    )


# -- subgroups and cosets ------------------------------------------------------

def subgroup_by_index(ctx: FieldCtx, d: int) -> MulSet:
    """The subgroup {x^d : x in F_q^*} of index d; d must divide q-1."""
    m = ctx.q - 1
    if d < 1 or m % d:
        raise IndexDoesNotDivide(f"index {d} does not divide q-1 = {m}")
    antilog = ctx.antilog
    bits = 0
    for k in range(0, m, d):
        bits |= 1 << antilog[k]
    return MulSet(ctx, bits)


def all_subgroups(ctx: FieldCtx) -> list[tuple[int, MulSet]]:
    return [(d, subgroup_by_index(ctx, d)) for d in divisors(ctx.q - 1)]


def coset(ctx: FieldCtx, a: int, d: int) -> MulSet:
    """a times the index-d subgroup."""
    if a == 0:
        raise FieldError("coset representative must be nonzero")
    K = subgroup_by_index(ctx, d)
    return MulSet.of(ctx, (ctx.mul(a, k) for k in K))


def is_subgroup(K: MulSet) -> bool:
    if 1 not in K:
        return False
    return product_set(K, inverse_set(K)) == K


@dataclass(frozen=True)
class CosetDecomposition:
    a: int
    K: MulSet
    index: int

    def to_dict(self) -> dict:
        return {"a": self.a, "K": self.K.to_list(), "index": self.index}


def coset_decompose(D: MulSet) -> Optional[CosetDecomposition]:
    """Write D = aK for a subgroup K, or return None.

    D is a coset exactly when |D D^-1| = |D|, and then K = D D^-1.  The
    representative is the smallest code in D.
    """
    _nonempty(D)
    K = product_set(D, inverse_set(D))
    if len(K) != len(D) or not is_subgroup(K):
        return None
    ctx = D.ctx
    a = min(D)
    if MulSet.of(ctx, (ctx.mul(a, k) for k in K)) != D:
        return None
    return CosetDecomposition(a=a, K=K, index=(ctx.q - 1) // len(K))
