"""Linearized polynomials, Frobenius monomials and the reciprocal transform.

A linearized polynomial over GF(p^n) is L(x) = sum_j alpha_j x^(p^j),
0 <= j < n.  These are exactly the additive maps F_q -> F_q.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .directions import FuncTable
from .errors import ContextMismatch, FieldError, NonzeroAtOrigin, ZeroValueAtNonzeroPoint
from .field import FieldCtx


@dataclass(frozen=True)
class LinPoly:
    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if len(c) != self.ctx.n:
            raise FieldError(f"linearized polynomial needs {self.ctx.n} coefficients")
        for a in c:
            self.ctx.check(a)

    @classmethod
    def monomial(cls, ctx: FieldCtx, a: int, j: int) -> "LinPoly":
        coeffs = [0] * ctx.n
        coeffs[j] = a
        return cls(ctx, tuple(coeffs))

    def __call__(self, x: int) -> int:
        return lin_eval(self, x)

    def table(self) -> FuncTable:
        ctx = self.ctx
        return FuncTable(ctx, tuple(lin_eval(self, x) for x in range(ctx.q)))

    def support(self) -> list[int]:
        return [j for j, a in enumerate(self.coeffs) if a]

    def to_dict(self) -> dict:
        return {"coeffs": list(self.coeffs)}


def lin_eval(L: LinPoly, x: int) -> int:
    ctx = L.ctx
    out = 0
    for j, a in enumerate(L.coeffs):
        if a:
            out = ctx.add(out, ctx.mul(a, ctx.frobenius(x, j)))
    return out


def _solve(ctx: FieldCtx, M: list[list[int]], rhs: list[int]) -> Optional[list[int]]:
    """Gauss-Jordan elimination over F_q for a square system; None if singular."""
    n = len(M)
    A = [row[:] + [b] for row, b in zip(M, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        inv = ctx.inv(A[col][col])
        A[col] = [ctx.mul(inv, v) for v in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [ctx.sub(v, ctx.mul(f, w)) for v, w in zip(A[r], A[col])]
    return [A[r][n] for r in range(n)]


def detect_linearized(f: FuncTable) -> Optional[LinPoly]:
    """Coefficients of the linearized polynomial agreeing with f, or None.

    The coefficients are solved for on the polynomial basis 1, x, ..., x^(n-1)
    (a Moore system) and then checked against every point of the table, so a
    return value is always a verified representation.  The zero function is
    accepted.
    """
    ctx = f.ctx
    if f.values[0] != 0:
        return None
    basis = [ctx.p ** i for i in range(ctx.n)]
    M = [[ctx.frobenius(e, j) for j in range(ctx.n)] for e in basis]
    alpha = _solve(ctx, M, [f.values[e] for e in basis])
    if alpha is None:
        raise FieldError("Moore matrix of the polynomial basis is singular")  # cannot happen
    L = LinPoly(ctx, tuple(alpha))
    if L.table().values != f.values:
        return None
    return L


@dataclass(frozen=True)
class FrobeniusMonomial:
    """x -> a * x^(p^j) + b with a != 0."""

    a: int
    j: int
    b: int = 0

    def __post_init__(self):
        if self.a == 0:
            raise FieldError("Frobenius monomial needs a nonzero leading coefficient")

    def table(self, ctx: FieldCtx) -> FuncTable:
        a, j, b = self.a, self.j, self.b
        return FuncTable(ctx, tuple(ctx.add(ctx.mul(a, ctx.frobenius(x, j)), b)
                                    for x in range(ctx.q)))

    def to_dict(self) -> dict:
        return {"a": self.a, "j": self.j, "b": self.b}

    @classmethod
    def from_dict(cls, d: dict) -> "FrobeniusMonomial":
        return cls(d["a"], d["j"], d["b"])


def detect_frobenius_monomial(f: FuncTable) -> Optional[FrobeniusMonomial]:
    """Match f against a*x^(p^j)+b with b = f(0), a = f(1) - b; smallest j wins."""
    ctx = f.ctx
    vals = f.values
    b = vals[0]
    a = ctx.sub(vals[1], b)
    if a == 0:
        return None
    for j in range(ctx.n):
        if all(vals[x] == ctx.add(ctx.mul(a, ctx.frobenius(x, j)), b) for x in range(ctx.q)):
            return FrobeniusMonomial(a, j, b)
    return None


def reciprocal_transform(f: FuncTable) -> FuncTable:
    """g(0) = 0 and g(x) = 1 / f(1/x) elsewhere."""
    ctx = f.ctx
    vals = f.values
    if vals[0] != 0:
        raise NonzeroAtOrigin(f"f(0) = {vals[0]} is not zero")
    g = [0] * ctx.q
    for x in range(1, ctx.q):
        v = vals[ctx.inv(x)]
        if v == 0:
            raise ZeroValueAtNonzeroPoint(f"f vanishes at the nonzero point {ctx.inv(x)}")
        g[x] = ctx.inv(v)
    return FuncTable(ctx, tuple(g))


# -- dense polynomials over F_q --------------------------------------------------

@dataclass(frozen=True)
class DensePoly:
    """Coefficients over F_q, constant first, no trailing zeros (zero poly is ())."""

    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, ctx: FieldCtx, degree: int, coeff: int = 1) -> "DensePoly":
        return cls(ctx, (0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: int) -> int:
        ctx = self.ctx
        out = 0
        for c in reversed(self.coeffs):
            out = ctx.add(ctx.mul(out, x), c)
        return out


def poly_mul(A: DensePoly, B: DensePoly) -> DensePoly:
    if A.ctx != B.ctx:
        raise ContextMismatch("polynomials over different fields")
    ctx = A.ctx
    if not A.coeffs or not B.coeffs:
        return DensePoly(ctx, ())
    out = [0] * (len(A.coeffs) + len(B.coeffs) - 1)
    for i, a in enumerate(A.coeffs):
        if a:
            for j, b in enumerate(B.coeffs):
                if b:
                    out[i + j] = ctx.add(out[i + j], ctx.mul(a, b))
    return DensePoly(ctx, tuple(out))


@dataclass(frozen=True)
class HIdentity:
    holds: bool
    h: DensePoly
    degree_bound_ok: bool
    target_degree: int


def h_identity_check(alpha: LinPoly, beta: LinPoly) -> HIdentity:
    """Test (sum a_j x^(p^(n-1) - p^j)) * (sum b_j x^(p^j - 1)) == x^(p^(n-1) - 1) coefficient-wise.

    Agreement on F_q^* would only give equality modulo x^(q-1) - 1; the degree
    bound 2(p^(n-1) - 1) <= q - 1 is checked first so that coefficient
    equality is the statement being tested.
    """
    if alpha.ctx != beta.ctx:
        raise ContextMismatch("alpha and beta over different fields")
    ctx = alpha.ctx
    p, n = ctx.p, ctx.n
    top = p ** (n - 1)
    left = [0] * top
    right = [0] * top
    for j in range(n):
        left[top - p ** j] = alpha.coeffs[j]
        right[p ** j - 1] = beta.coeffs[j]
    h = poly_mul(DensePoly(ctx, tuple(left)), DensePoly(ctx, tuple(right)))
    bound = 2 * (top - 1)
    degree_ok = h.degree <= bound and bound <= ctx.q - 1
    target = DensePoly.monomial(ctx, top - 1)
    return HIdentity(
        holds=degree_ok and h.coeffs == target.coeffs,
        h=h,
        degree_bound_ok=degree_ok,
        target_degree=top - 1,
    )
