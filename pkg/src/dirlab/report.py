"""Report envelopes and their JSON / CSV / text serializations.

JSON is canonical: sorted keys, compact separators, exact quantities as
integers or {"num", "den"} pairs.  The ``timestamp`` and ``timing`` members
are the only run-dependent fields; they are left out of the canonical digest.
"""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io
import json
from dataclasses import dataclass, field
from typing import Any, Optional, Union

from . import __version__
from .directions import DirectionSet
from .errors import UnrepresentableInFormat
from .field import FieldCtx, FieldSpec, build_field
from .linearized import FrobeniusMonomial, LinPoly
from .search import CensusReport, DirectionsTheoremReport, SearchReport
from .sets import DoublingReport, MulSet

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VIOLATION = 2

VOLATILE_KEYS = ("timestamp", "timing")


@dataclass(frozen=True)
class SampleReport:
    strategy: str
    index: int
    candidates: tuple[MulSet, ...]
    hypotheses: tuple[DoublingReport, ...]
    reports: tuple[SearchReport, ...]

    @property
    def violations(self) -> tuple[str, ...]:
        out = []
        for r in self.reports:
            out.extend(f"D={r.D.to_list()}: {v}" for v in r.violations)
            if not r.all_monomial:
                out.append(f"D={r.D.to_list()}: survivor is not all-monomial")
        return tuple(out)

    def to_dict(self) -> dict:
        return {
            "kind": "sample-doubling",
            "strategy": self.strategy,
            "index": self.index,
            "candidates": [
                {"D": D.to_list(), "hypothesis": h.to_dict()}
                for D, h in zip(self.candidates, self.hypotheses)
            ],
            "reports": [r.to_dict() for r in self.reports],
            "violations": list(self.violations),
        }

    @classmethod
    def from_dict(cls, ctx: FieldCtx, d: dict) -> "SampleReport":
        return cls(
            strategy=d["strategy"],
            index=d["index"],
            candidates=tuple(MulSet.of(ctx, c["D"]) for c in d["candidates"]),
            hypotheses=tuple(DoublingReport.from_dict(c["hypothesis"]) for c in d["candidates"]),
            reports=tuple(SearchReport.from_dict(ctx, r) for r in d["reports"]),
        )


@dataclass(frozen=True)
class DirectionsPayload:
    directions: DirectionSet
    source: str

    violations = ()

    def to_dict(self) -> dict:
        d = self.directions.to_dict()
        d.update(kind="directions", source=self.source, size=len(self.directions))
        return d

    @classmethod
    def from_dict(cls, ctx: FieldCtx, d: dict) -> "DirectionsPayload":
        bits = 0
        for e in d["directions"]:
            bits |= 1 << e
        return cls(DirectionSet(ctx, bits, d["infinity"]), d["source"])


@dataclass(frozen=True)
class AnalyzePayload:
    values: tuple[int, ...]
    directions: DirectionSet
    linearized: Optional[LinPoly]
    monomial: Optional[FrobeniusMonomial]
    doubling: Optional[DoublingReport]

    violations = ()

    def to_dict(self) -> dict:
        return {
            "kind": "analyze",
            "values": list(self.values),
            "directions": self.directions.to_dict(),
            "linearized": None if self.linearized is None else self.linearized.to_dict(),
            "monomial": None if self.monomial is None else self.monomial.to_dict(),
            "doubling": None if self.doubling is None else self.doubling.to_dict(),
        }

    @classmethod
    def from_dict(cls, ctx: FieldCtx, d: dict) -> "AnalyzePayload":
        bits = 0
        for e in d["directions"]["directions"]:
            bits |= 1 << e
        lin = d["linearized"]
        mono = d["monomial"]
        dbl = d["doubling"]
        return cls(
            values=tuple(d["values"]),
            directions=DirectionSet(ctx, bits, d["directions"]["infinity"]),
            linearized=None if lin is None else LinPoly(ctx, tuple(lin["coeffs"])),
            monomial=None if mono is None else FrobeniusMonomial.from_dict(mono),
            doubling=None if dbl is None else DoublingReport.from_dict(dbl),
        )


Payload = Union[SearchReport, DirectionsTheoremReport, CensusReport, SampleReport,
                DirectionsPayload, AnalyzePayload]


def _payload_from_dict(ctx: FieldCtx, d: dict) -> Payload:
    kind = d["kind"]
    if kind == "search":
        return SearchReport.from_dict(ctx, d)
    if kind == "directions-theorem":
        return DirectionsTheoremReport.from_dict(d)
    if kind == "census":
        return CensusReport.from_dict(ctx, d)
    if kind == "sample-doubling":
        return SampleReport.from_dict(ctx, d)
    if kind == "directions":
        return DirectionsPayload.from_dict(ctx, d)
    if kind == "analyze":
        return AnalyzePayload.from_dict(ctx, d)
    raise ValueError(f"unknown payload kind {kind!r}")


def payload_violations(payload: Payload) -> tuple[str, ...]:
    v = payload.violations
    if isinstance(v, int):  # DirectionsTheoremReport counts them
        return tuple(f"table {list(t)} has few directions but is not linearized"
                     for t in payload.violating_tables)
    return tuple(v)


def field_echo(ctx: FieldCtx) -> dict:
    return {
        "p": ctx.p,
        "n": ctx.n,
        "q": ctx.q,
        "modulus": list(ctx.modulus),
        "generator": ctx.generator,
    }


@dataclass(frozen=True)
class ReportEnvelope:
    ctx: FieldCtx
    command: dict
    payload: Payload
    exit_status: int
    version: str = __version__
    timestamp: str = field(default="", compare=False)
    timing: dict = field(default_factory=dict, compare=False)

    def to_dict(self, canonical: bool = False) -> dict:
        d = {
            "version": self.version,
            "field": field_echo(self.ctx),
            "command": self.command,
            "payload": self.payload.to_dict(),
            "exit_status": self.exit_status,
        }
        if not canonical:
            d["timestamp"] = self.timestamp
            d["timing"] = self.timing
            d["digest"] = digest(self)
        return d


def envelope(ctx: FieldCtx, command: dict, payload: Payload,
             timing: Optional[dict] = None) -> ReportEnvelope:
    status = EXIT_VIOLATION if payload_violations(payload) else EXIT_OK
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return ReportEnvelope(ctx, command, payload, status, timestamp=stamp, timing=timing or {})


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def digest(env: ReportEnvelope) -> str:
    return hashlib.sha256(canonical_json(env.to_dict(canonical=True)).encode()).hexdigest()


def _csv_rows(payload: Payload) -> list[list]:
    if isinstance(payload, CensusReport):
        return [["size", "count"]] + [[k, v] for k, v in sorted(payload.entries.items())]
    if isinstance(payload, DirectionsTheoremReport):
        return [["q", "checked", "within_bound", "violations"],
                [payload.q, payload.checked, payload.within_bound, payload.violations]]
    if isinstance(payload, DirectionsPayload):
        rows = [["direction"]] + [[e] for e in payload.directions.finite()]
        if payload.directions.has_infinity:
            rows.append(["inf"])
        return rows
    raise UnrepresentableInFormat(
        f"{payload.to_dict()['kind']} reports carry tables and cannot be written as CSV")


def _text(env: ReportEnvelope) -> str:
    ctx, payload = env.ctx, env.payload
    lines = [f"field GF({ctx.p}^{ctx.n}) modulus={list(ctx.modulus)} generator={ctx.generator}",
             f"command {env.command.get('verb')}"]
    if isinstance(payload, SearchReport):
        h = payload.hypothesis
        lines += [
            f"D = {payload.D.to_list()}",
            f"|D|={h.size_D} |DD|={h.size_DD} |DD^-1D^-1|={h.size_triple} "
            f"c={h.c} hypothesis={h.hypothesis_holds} pr_sufficient={h.pr_sufficient_holds}",
            f"solutions={payload.solution_count} all_monomial={payload.all_monomial} "
            f"nodes={payload.node_count}",
        ]
        lines += [f"  f = {list(s.values)}" for s in payload.solutions[:20]]
        if payload.solution_count > 20:
            lines.append(f"  ... {payload.solution_count - 20} more")
    elif isinstance(payload, DirectionsTheoremReport):
        lines.append(f"checked={payload.checked} within_bound={payload.within_bound} "
                     f"violations={payload.violations}")
    elif isinstance(payload, CensusReport):
        lines.append(f"linearized polynomials={payload.total} distinct direction sets="
                     f"{len(payload.coset_classified)} converse checks={payload.converse_checked}")
        lines += [f"  |D_f|={k}: {v}" for k, v in sorted(payload.entries.items())]
    elif isinstance(payload, SampleReport):
        lines.append(f"candidates={len(payload.candidates)} survivors={len(payload.reports)}")
        for r in payload.reports:
            lines.append(f"  D={r.D.to_list()} solutions={r.solution_count} "
                         f"all_monomial={r.all_monomial}")
    else:
        lines.append(canonical_json(payload.to_dict()))
    for v in payload_violations(payload):
        lines.append(f"VIOLATION: {v}")
    lines.append(f"exit_status {env.exit_status}")
    return "\n".join(lines) + "\n"


def emit(env: ReportEnvelope, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (canonical_json(env.to_dict()) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(_csv_rows(env.payload))
        return buf.getvalue().encode()
    if fmt == "text":
        return _text(env).encode()
    raise UnrepresentableInFormat(f"unknown format {fmt!r}")


def parse_envelope(data: Union[str, bytes]) -> ReportEnvelope:
    """Inverse of emit(..., "json")."""
    d = json.loads(data)
    fe = d["field"]
    ctx = build_field(FieldSpec(fe["p"], fe["n"], tuple(fe["modulus"])))
    return ReportEnvelope(
        ctx=ctx,
        command=d["command"],
        payload=_payload_from_dict(ctx, d["payload"]),
        exit_status=d["exit_status"],
        version=d["version"],
        timestamp=d.get("timestamp", ""),
        timing=d.get("timing", {}),
    )
