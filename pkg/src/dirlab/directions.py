"""Direction sets of point sets and function graphs in AG(2, q)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DuplicatePoint, FieldError, NonzeroAtOrigin, TooFewPoints
from .field import FieldCtx
from .sets import MulSet, iter_bits


@dataclass(frozen=True)
class FuncTable:
    """A function F_q -> F_q; values[x] is f(x)."""

    ctx: FieldCtx
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        q = self.ctx.q
        if len(vals) != q:
            raise FieldError(f"function table needs {q} values, got {len(vals)}")
        if any(not 0 <= v < q for v in vals):
            raise FieldError("function table holds codes outside the field")

    @classmethod
    def from_callable(cls, ctx: FieldCtx, fn) -> "FuncTable":
        return cls(ctx, tuple(fn(x) for x in range(ctx.q)))

    def __call__(self, x: int) -> int:
        return self.values[x]

    def shifted(self, b: int) -> "FuncTable":
        """x -> f(x) + b."""
        return FuncTable(self.ctx, tuple(self.ctx.add(v, b) for v in self.values))

    def normalized(self) -> "FuncTable":
        return self.shifted(self.ctx.neg(self.values[0]))


@dataclass(frozen=True)
class PointSet:
    ctx: FieldCtx
    points: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pts = tuple((int(x), int(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if len(set(pts)) != len(pts):
            raise DuplicatePoint("point set contains a repeated point")
        for x, y in pts:
            self.ctx.check(x)
            self.ctx.check(y)

    def translated(self, s: int, t: int) -> "PointSet":
        add = self.ctx.add
        return PointSet(self.ctx, tuple((add(x, s), add(y, t)) for x, y in self.points))


@dataclass(frozen=True)
class DirectionSet:
    """Finite directions as a code bitset; the vertical direction is a separate flag."""

    ctx: FieldCtx
    bits: int
    has_infinity: bool = False

    def __len__(self):
        return self.bits.bit_count() + self.has_infinity

    def finite(self) -> list[int]:
        return list(iter_bits(self.bits))

    def __contains__(self, e):
        return 0 <= e < self.ctx.q and (self.bits >> e) & 1 == 1

    def to_mulset(self) -> MulSet:
        """View as a subset of F_q^*; fails if 0 or infinity is present."""
        if self.has_infinity:
            raise FieldError("direction set contains the vertical direction")
        return MulSet(self.ctx, self.bits)

    def within(self, D: MulSet) -> bool:
        """True when every direction lies in D (so no infinity and no zero)."""
        return not self.has_infinity and self.bits & ~D.bits == 0

    def to_dict(self) -> dict:
        return {"directions": self.finite(), "infinity": self.has_infinity}


def directions_of_points(U: PointSet) -> DirectionSet:
    pts = U.points
    if len(pts) < 2:
        raise TooFewPoints("a direction set needs at least two points")
    ctx = U.ctx
    sub, div = ctx.sub, ctx.div
    bits = 0
    vertical = False
    for i, (xi, yi) in enumerate(pts):
        for xj, yj in pts[i + 1:]:
            if xi == xj:
                vertical = True
            else:
                bits |= 1 << div(sub(yj, yi), sub(xj, xi))
    return DirectionSet(ctx, bits, vertical)


def graph(f: FuncTable) -> PointSet:
    return PointSet(f.ctx, tuple(enumerate(f.values)))


def directions_of_function(f: FuncTable) -> DirectionSet:
    """All difference quotients (f(y)-f(x))/(y-x), x < y.  Never vertical."""
    ctx = f.ctx
    q = ctx.q
    vals = f.values
    sub, div = ctx.sub, ctx.div
    full = (1 << q) - 1
    bits = 0
    for x in range(q):
        fx = vals[x]
        for y in range(x + 1, q):
            bits |= 1 << div(sub(vals[y], fx), sub(y, x))
        if bits == full:
            break
    return DirectionSet(ctx, bits, False)


def image_ratio_set(f: FuncTable) -> DirectionSet:
    """{f(x)/x : x != 0}; requires f(0) = 0."""
    if f.values[0] != 0:
        raise NonzeroAtOrigin(f"f(0) = {f.values[0]} is not zero")
    ctx = f.ctx
    div = ctx.div
    bits = 0
    for x in range(1, ctx.q):
        bits |= 1 << div(f.values[x], x)
    return DirectionSet(ctx, bits, False)


def satisfies_quotient_condition(f: FuncTable, D: MulSet) -> bool:
    """Every difference quotient of f lies in D."""
    ctx = f.ctx
    vals = f.values
    sub, div = ctx.sub, ctx.div
    Dbits = D.bits
    for x in range(ctx.q):
        fx = vals[x]
        for y in range(x + 1, ctx.q):
            if not (Dbits >> div(sub(vals[y], fx), sub(y, x))) & 1:
                return False
    return True


def point_set(ctx: FieldCtx, pairs: Iterable[Sequence[int]]) -> PointSet:
    return PointSet(ctx, tuple((p[0], p[1]) for p in pairs))
