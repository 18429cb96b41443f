"""Exhaustive searches and end-to-end theorem checks at desk scale.

``enumerate_quotient_functions`` finds every f with f(0) = 0 whose difference
quotients all lie in D.  Values are assigned to x = 1, 2, ..., q-1 in order and
each unassigned x keeps a candidate bitset: after f(y) = v is fixed, f(x) must
lie in v + (x - y) D, so the candidate set is intersected with that translate.
A branch dies as soon as some candidate set is empty.

Work splits on the value of f(1); each branch is an independent deterministic
subtree, so results and node counts do not depend on the worker count.
"""

from __future__ import annotations

import itertools
import logging
import math
import os
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .directions import FuncTable, image_ratio_set, satisfies_quotient_condition
from .errors import EmptySet, FieldTooLargeForExhaustion, UsageError
from .field import FieldCtx, FieldSpec, divisors
from .linearized import FrobeniusMonomial, detect_frobenius_monomial, detect_linearized
from .sets import (
    CosetDecomposition,
    DoublingReport,
    MulSet,
    coset,
    coset_decompose,
    doubling_report,
    hypothesis_bound_holds,
    iter_bits,
    rotate,
    subgroup_by_index,
    triple_quotient,
)

log = logging.getLogger(__name__)

DIRECTIONS_MAX_Q = 9
CENSUS_MAX = 10 ** 8


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("DIRLAB_WORKERS", "1")))
    except ValueError:
        return 1


def _pmap(fn, jobs: Sequence[tuple], workers: int) -> list:
    """Ordered map, in-process for one worker or one job."""
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        futures = [pool.submit(fn, *job) for job in jobs]
        return [f.result() for f in futures]


# -- quotient-constrained enumeration -------------------------------------------

class _Translates:
    """Lazily built bitsets of t + c*D, keyed by (c, t)."""

    def __init__(self, ctx: FieldCtx, D_bits: int):
        self.ctx = ctx
        q = ctx.q
        D = list(iter_bits(D_bits))
        self.scaled = [None] + [[ctx.mul(c, d) for d in D] for c in range(1, q)]
        self.cache: list = [None] * (q * q)

    def get(self, c: int, t: int) -> int:
        q = self.ctx.q
        key = c * q + t
        bits = self.cache[key]
        if bits is None:
            add = self.ctx.add
            bits = 0
            for e in self.scaled[c]:
                bits |= 1 << add(t, e)
            self.cache[key] = bits
        return bits


def _search_branch(ctx: FieldCtx, D_bits: int, prefix: tuple[int, ...]):
    """All completions of the partial table ``prefix``; returns (tables, nodes)."""
    q = ctx.q
    sub = ctx.sub
    T = _Translates(ctx, D_bits)
    diff = [[sub(x, y) for y in range(q)] for x in range(q)]
    full = ((1 << q) - 1)
    cands = [full] * q
    for y, v in enumerate(prefix):
        for x in range(len(prefix), q):
            cands[x] &= T.get(diff[x][y], v)
    if any(not cands[x] for x in range(len(prefix), q)):
        return [], 0

    solutions = []
    values = list(prefix) + [0] * (q - len(prefix))
    nodes = 0

    def descend(x: int, cands: list[int]) -> None:
        nonlocal nodes
        if x == q:
            solutions.append(tuple(values))
            return
        row = diff
        bits = cands[x]
        while bits:
            low = bits & -bits
            v = low.bit_length() - 1
            bits ^= low
            nodes += 1
            new = cands[:]
            ok = True
            for z in range(x + 1, q):
                nz = new[z] & T.get(row[z][x], v)
                if not nz:
                    ok = False
                    break
                new[z] = nz
            if ok:
                values[x] = v
                descend(x + 1, new)

    descend(len(prefix), cands)
    return solutions, nodes


def _enumerate(D: MulSet, workers: int = 1) -> tuple[list[tuple[int, ...]], int]:
    ctx = D.ctx
    if not D.bits:
        raise EmptySet("D must be nonempty")
    if ctx.q == 2:
        # only x = 1 to assign: f(1) = f(1)/1 must lie in D
        return [(0, v) for v in D], 1 + len(D)
    # root node f(0)=0 plus one node per choice of f(1); f(1)/1 = f(1) must be in D
    jobs = [(ctx, D.bits, (0, v)) for v in D]
    results = _pmap(_search_branch, jobs, workers)
    tables: list[tuple[int, ...]] = []
    nodes = 1 + len(jobs)
    for sols, n in results:
        tables.extend(sols)
        nodes += n
    tables.sort()
    return tables, nodes


def enumerate_quotient_functions(D: MulSet, normalize: bool = True,
                                 workers: int = 1) -> list[FuncTable]:
    """Every f with all difference quotients in D, sorted lexicographically.

    With ``normalize`` only f(0) = 0 is returned; otherwise every constant
    shift of those solutions is included as well.
    """
    ctx = D.ctx
    tables, _ = _enumerate(D, workers)
    if not normalize:
        add = ctx.add
        tables = sorted(tuple(add(v, b) for v in t) for t in tables for b in range(ctx.q))
    return [FuncTable(ctx, t) for t in tables]


# -- McConnel-type verification --------------------------------------------------

def expected_solution_set(D: MulSet) -> list[FrobeniusMonomial]:
    """All (a, j, 0) with a * Im(x^(p^j - 1)) inside D.

    The image of x^(p^j - 1) on F_q^* is the subgroup of index
    gcd(p^j - 1, q - 1), so this list is computed without any search.
    """
    if not D.bits:
        raise EmptySet("D must be nonempty")
    ctx = D.ctx
    m = ctx.q - 1
    D_log = D.log_mask()
    out = []
    for j in range(ctx.n):
        K_log = subgroup_by_index(ctx, math.gcd(ctx.p ** j - 1, m)).log_mask()
        for a in range(1, ctx.q):
            if rotate(K_log, ctx.log[a], m) & ~D_log == 0:
                out.append(FrobeniusMonomial(a, j, 0))
    return out


@dataclass(frozen=True)
class SearchReport:
    D: MulSet
    hypothesis: DoublingReport
    solutions: tuple[FuncTable, ...]
    all_monomial: bool
    monomial_forms: tuple[FrobeniusMonomial, ...]
    node_count: int
    expected: tuple[FrobeniusMonomial, ...]
    violations: tuple[str, ...]
    wall_time: float = field(default=0.0, compare=False)

    @property
    def solution_count(self) -> int:
        return len(self.solutions)

    @property
    def violation(self) -> bool:
        return bool(self.violations)

    def to_dict(self) -> dict:
        return {
            "kind": "search",
            "D": self.D.to_list(),
            "hypothesis": self.hypothesis.to_dict(),
            "solutions": [list(s.values) for s in self.solutions],
            "solution_count": self.solution_count,
            "all_monomial": self.all_monomial,
            "monomial_forms": [m.to_dict() for m in self.monomial_forms],
            "expected_solution_set": [m.to_dict() for m in self.expected],
            "node_count": self.node_count,
            "violation": self.violation,
            "violations": list(self.violations),
        }

    @classmethod
    def from_dict(cls, ctx: FieldCtx, d: dict) -> "SearchReport":
        return cls(
            D=MulSet.of(ctx, d["D"]),
            hypothesis=DoublingReport.from_dict(d["hypothesis"]),
            solutions=tuple(FuncTable(ctx, tuple(s)) for s in d["solutions"]),
            all_monomial=d["all_monomial"],
            monomial_forms=tuple(FrobeniusMonomial.from_dict(m) for m in d["monomial_forms"]),
            node_count=d["node_count"],
            expected=tuple(FrobeniusMonomial.from_dict(m) for m in d["expected_solution_set"]),
            violations=tuple(d["violations"]),
        )


def verify_mcconnel_extended(D: MulSet, workers: int = 1) -> SearchReport:
    """Search all normalized solutions for D and check them against the theorem.

    A violation is recorded (never raised) when the hypothesis holds but some
    solution is not a Frobenius monomial, when a solution fails the post-hoc
    quotient recheck, or when the search misses a monomial that the
    independent oracle predicts.
    """
    ctx = D.ctx
    hyp = doubling_report(D)
    t0 = time.perf_counter()
    tables, nodes = _enumerate(D, workers)
    elapsed = time.perf_counter() - t0
    sols = tuple(FuncTable(ctx, t) for t in tables)

    violations = []
    bad = [s for s in sols if not satisfies_quotient_condition(s, D)]
    if bad:
        violations.append(f"{len(bad)} solutions fail the quotient recheck")

    forms = [detect_frobenius_monomial(s) for s in sols]
    all_mono = all(m is not None and m.b == 0 for m in forms)
    monomials = tuple(m for m in forms if m is not None)

    expected = tuple(expected_solution_set(D))
    found = set(tables)
    expected_tables = {m.table(ctx).values for m in expected}
    if not expected_tables <= found:
        violations.append("search missed monomial solutions predicted by the oracle")
    elif (expected_tables == found) != all_mono:
        violations.append("solution set equals the monomial oracle set inconsistently with all_monomial")
    if hyp.hypothesis_holds and not all_mono:
        violations.append("hypothesis holds but a non-monomial solution exists")

    return SearchReport(
        D=D,
        hypothesis=hyp,
        solutions=sols,
        all_monomial=all_mono,
        monomial_forms=monomials,
        node_count=nodes,
        expected=expected,
        violations=tuple(violations),
        wall_time=elapsed,
    )


# -- directions theorem, exhaustively ---------------------------------------------

@dataclass(frozen=True)
class DirectionsTheoremReport:
    q: int
    checked: int
    within_bound: int
    violations: int
    violating_tables: tuple[tuple[int, ...], ...] = ()

    def to_dict(self) -> dict:
        return {
            "kind": "directions-theorem",
            "q": self.q,
            "checked": self.checked,
            "within_bound": self.within_bound,
            "violations": self.violations,
            "violating_tables": [list(t) for t in self.violating_tables],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DirectionsTheoremReport":
        return cls(d["q"], d["checked"], d["within_bound"], d["violations"],
                   tuple(tuple(t) for t in d["violating_tables"]))


def _directions_branch(ctx: FieldCtx, f1: int):
    """Walk all tables with f(0)=0, f(1)=f1.

    Pruning a subtree whose partial direction set already exceeds (q+1)/2
    accounts for every table below it: their direction sets are supersets.
    """
    q = ctx.q
    bound = (q + 1) // 2
    # qbit[x][y][v*q + w] = bit of (v - w)/(x - y)
    qbit = [[None] * q for _ in range(q)]
    for x in range(q):
        for y in range(x):
            inv_d = ctx.inv(ctx.sub(x, y))
            qbit[x][y] = [1 << ctx.mul(ctx.sub(v, w), inv_d) for v in range(q) for w in range(q)]
    vals = [0] * q
    vals[1] = f1
    checked = 0
    within = 0
    bad = []
    weights = [q ** (q - 1 - x) for x in range(q + 1)]  # tables under a node at depth x

    def descend(x: int, bits: int) -> None:
        nonlocal checked, within
        if x == q:
            checked += 1
            within += 1
            if detect_linearized(FuncTable(ctx, tuple(vals))) is None:
                bad.append(tuple(vals))
            return
        rows = qbit[x]
        for v in range(q):
            nb = bits
            base = v * q
            for y in range(x):
                nb |= rows[y][base + vals[y]]
            if nb.bit_count() > bound:
                checked += weights[x]
                continue
            vals[x] = v
            descend(x + 1, nb)

    start = qbit[1][0][f1 * q]
    if start.bit_count() > bound:
        return weights[1], 0, []
    descend(2, start)
    return checked, within, bad


def verify_directions_theorem(ctx: FieldCtx, workers: int = 1,
                              max_q: int = DIRECTIONS_MAX_Q) -> DirectionsTheoremReport:
    """Check over every f with f(0) = 0 that few directions force linearity."""
    q = ctx.q
    if q > max_q:
        raise FieldTooLargeForExhaustion(
            f"q={q} exceeds the exhaustion limit {max_q} ({q}^{q - 1} tables)")
    if q == 2:
        tables = [(0, v) for v in range(2)]
        bad = tuple(t for t in tables if detect_linearized(FuncTable(ctx, t)) is None)
        return DirectionsTheoremReport(q, 2, 2, len(bad), bad)
    results = _pmap(_directions_branch, [(ctx, v) for v in range(q)], workers)
    checked = sum(r[0] for r in results)
    within = sum(r[1] for r in results)
    bad = tuple(t for r in results for t in r[2])
    return DirectionsTheoremReport(q, checked, within, len(bad), bad)


# -- corollary census --------------------------------------------------------------

@dataclass(frozen=True)
class CensusEntry:
    directions: tuple[int, ...]
    count: int
    triple_size: Optional[int]
    hypothesis_holds: bool
    decomposition: Optional[CosetDecomposition]

    def to_dict(self) -> dict:
        return {
            "directions": list(self.directions),
            "count": self.count,
            "triple_size": self.triple_size,
            "hypothesis_holds": self.hypothesis_holds,
            "coset": None if self.decomposition is None else self.decomposition.to_dict(),
        }


@dataclass(frozen=True)
class CensusReport:
    field: FieldSpec
    total: int
    entries: dict[int, int]
    coset_classified: tuple[CensusEntry, ...]
    converse_checked: int
    violations: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "kind": "census",
            "total": self.total,
            "entries": {str(k): v for k, v in sorted(self.entries.items())},
            "coset_classified": [e.to_dict() for e in self.coset_classified],
            "converse_checked": self.converse_checked,
            "violations": list(self.violations),
        }

    @classmethod
    def from_dict(cls, ctx: FieldCtx, d: dict) -> "CensusReport":
        entries = []
        for e in d["coset_classified"]:
            dec = None
            if e["coset"] is not None:
                c = e["coset"]
                dec = CosetDecomposition(c["a"], MulSet.of(ctx, c["K"]), c["index"])
            entries.append(CensusEntry(tuple(e["directions"]), e["count"], e["triple_size"],
                                       e["hypothesis_holds"], dec))
        return cls(ctx.spec, d["total"], {int(k): v for k, v in d["entries"].items()},
                   tuple(entries), d["converse_checked"], tuple(d["violations"]))


def _census_branch(ctx: FieldCtx, alpha0: int) -> Counter:
    """Tally direction sets (as bitsets) of all linearized f with the given alpha_0."""
    q, n = ctx.q, ctx.n
    add, div, mul = ctx.add, ctx.div, ctx.mul
    frob = [[ctx.frobenius(x, j) for x in range(q)] for j in range(n)]
    rows = [[tuple(mul(a, frob[j][x]) for x in range(q)) for a in range(q)] for j in range(n)]
    ratio = [[div(v, x) if x else 0 for v in range(q)] for x in range(q)]
    tally: Counter = Counter()
    first = rows[0][alpha0]
    for rest in itertools.product(range(q), repeat=n - 1):
        vals = list(first)
        for j, a in enumerate(rest, start=1):
            if a:
                r = rows[j][a]
                vals = [add(u, w) for u, w in zip(vals, r)]
        bits = 0
        for x in range(1, q):
            bits |= 1 << ratio[x][vals[x]]
        tally[bits] += 1
    return tally


def corollary_census(ctx: FieldCtx, workers: int = 1) -> CensusReport:
    """Enumerate every linearized polynomial and classify its direction set.

    Forward: a direction set inside F_q^* that satisfies the triple-quotient
    bound must be a coset of a subgroup of index p^r - 1 with r | n.
    Converse: every such coset a*K is the direction set of a*x^(p^r).
    """
    q, p, n = ctx.q, ctx.p, ctx.n
    if q ** n > CENSUS_MAX:
        raise FieldTooLargeForExhaustion(f"q^n = {q ** n} linearized polynomials exceeds {CENSUS_MAX}")
    tallies = _pmap(_census_branch, [(ctx, a) for a in range(q)], workers)
    tally: Counter = Counter()
    for t in tallies:
        tally.update(t)

    allowed = {p ** r - 1 for r in divisors(n)}
    violations = []
    classified = []
    sizes: Counter = Counter()
    for bits in sorted(tally):
        count = tally[bits]
        sizes[bits.bit_count()] += count
        triple_size = None
        hyp = False
        dec = None
        if not bits & 1:
            D = MulSet(ctx, bits)
            triple_size = len(triple_quotient(D))
            hyp = hypothesis_bound_holds(triple_size, q)
            dec = coset_decompose(D)
            if hyp and (dec is None or dec.index not in allowed):
                violations.append(f"direction set {D.to_list()} meets the bound but is not "
                                  f"a coset of index p^r-1 with r | n")
        classified.append(CensusEntry(tuple(iter_bits(bits)), count, triple_size, hyp, dec))

    converse = 0
    for r in divisors(n):
        for a in range(1, q):
            target = coset(ctx, a, p ** r - 1)
            j = r % n
            f = FuncTable(ctx, tuple(ctx.mul(a, ctx.frobenius(x, j)) for x in range(q)))
            converse += 1
            if image_ratio_set(f).bits != target.bits or target.bits not in tally:
                violations.append(f"coset {target.to_list()} not attained by {a}*x^(p^{r})")

    return CensusReport(
        field=ctx.spec,
        total=sum(tally.values()),
        entries=dict(sorted(sizes.items())),
        coset_classified=tuple(classified),
        converse_checked=converse,
        violations=tuple(violations),
    )


# -- small-doubling sampler ---------------------------------------------------------

def doubling_candidates(ctx: FieldCtx, strategy: str, index: int,
                        extras: Optional[Sequence[Sequence[int]]] = None,
                        cosets: Optional[Sequence[Sequence[int]]] = None,
                        samples: int = 0, size: int = 1,
                        seed: Optional[int] = None) -> list[MulSet]:
    """Build candidate sets D = K u E or D = union of cosets of K.

    Explicit ``extras`` (for subgroup-plus-points) or ``cosets`` (for
    coset-union) give one candidate per entry.  Otherwise ``samples`` random
    candidates are drawn with ``size`` extra points / coset representatives,
    which requires a seed.
    """
    K = subgroup_by_index(ctx, index)
    out: list[MulSet] = []
    if strategy == "subgroup-plus-points":
        groups = extras
        if groups is None:
            if seed is None:
                raise UsageError("random sampling needs a seed")
            rng = random.Random(seed)
            pool = [e for e in range(1, ctx.q) if e not in K]
            groups = [sorted(rng.sample(pool, min(size, len(pool)))) for _ in range(samples)]
        for E in groups:
            out.append(K | MulSet.of(ctx, E))
    elif strategy == "coset-union":
        groups = cosets
        if groups is None:
            if seed is None:
                raise UsageError("random sampling needs a seed")
            rng = random.Random(seed)
            reps = [ctx.antilog[k] for k in range(index)]  # one representative per coset
            groups = [sorted(rng.sample(reps, min(size, len(reps)))) for _ in range(samples)]
        for reps in groups:
            bits = 0
            for a in reps:
                bits |= coset(ctx, a, index).bits
            out.append(MulSet(ctx, bits))
    else:
        raise UsageError(f"unknown strategy {strategy!r}; use subgroup-plus-points or coset-union")
    return out


def small_doubling_sampler(ctx: FieldCtx, strategy: str, index: int,
                           workers: int = 1, **params) -> list[SearchReport]:
    """Search every candidate whose triple quotient meets the bound."""
    reports = []
    for D in doubling_candidates(ctx, strategy, index, **params):
        if doubling_report(D).hypothesis_holds:
            reports.append(verify_mcconnel_extended(D, workers))
    return reports
