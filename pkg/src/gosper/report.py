"""Evaluation reports and their JSON / CSV serializations."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .banded import BandAccumulator, error_estimate
from .numeric import BigFloat, log10_abs, to_decimal
from .reference import GUARD_DIGITS, evaluate_target
from .schemes.definition import SchemeDef, render_rational

__all__ = ["TargetReport", "EvalReport", "REPORT_SCHEMA", "CSV_HEADER", "build_report", "matched_digits"]

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "EvalReport",
    "type": "object",
    "required": ["scheme", "params", "backend", "precision", "terms", "digits", "alpha_prefix", "a_block", "targets"],
    "additionalProperties": False,
    "properties": {
        "scheme": {"type": "string"},
        "params": {"type": "object", "additionalProperties": {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}},
        "backend": {"enum": ["rational", "float"]},
        "precision": {"type": ["integer", "null"], "minimum": 64},
        "terms": {"type": "integer", "minimum": 1},
        "digits": {"type": "integer", "minimum": 1},
        "alpha_prefix": {"type": "string"},
        "a_block": {"type": "array", "items": {"type": "string"}},
        "targets": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["index", "descriptor", "value", "exact", "oracle", "matched_digits", "estimated_digits"],
                "additionalProperties": False,
                "properties": {
                    "index": {"type": "integer", "minimum": 1},
                    "descriptor": {"type": "string"},
                    "value": {"type": "string"},
                    "exact": {"type": ["string", "null"], "pattern": r"^-?\d+(/\d+)?$"},
                    "oracle": {"type": ["string", "null"]},
                    "matched_digits": {"type": ["integer", "null"], "minimum": 0},
                    "estimated_digits": {"type": ["number", "null"]},
                },
            },
        },
    },
}

CSV_HEADER = [
    "scheme",
    "params",
    "backend",
    "precision",
    "terms",
    "digits",
    "alpha_prefix",
    "a_block",
    "index",
    "descriptor",
    "value",
    "exact",
    "oracle",
    "matched_digits",
    "estimated_digits",
]


@dataclass
class TargetReport:
    index: int  # 1 = bottom entry v^(1)
    descriptor: str
    value: str
    exact: Optional[str]
    oracle: Optional[str]
    matched_digits: Optional[int]
    estimated_digits: Optional[float]


@dataclass
class EvalReport:
    scheme: str
    params: Dict[str, str]
    backend: str
    precision: Optional[int]
    terms: int
    digits: int
    alpha_prefix: str
    a_block: List[str]
    targets: List[TargetReport] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "EvalReport":
        d = dict(d)
        d["targets"] = [TargetReport(**t) for t in d["targets"]]
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def csv_rows(self) -> List[List[str]]:
        head = [
            self.scheme,
            ";".join(f"{k}={v}" for k, v in self.params.items()),
            self.backend,
            "" if self.precision is None else str(self.precision),
            str(self.terms),
            str(self.digits),
            self.alpha_prefix,
            ";".join(self.a_block),
        ]
        rows = []
        for t in self.targets:
            rows.append(
                head
                + [
                    str(t.index),
                    t.descriptor,
                    t.value,
                    t.exact or "",
                    t.oracle or "",
                    "" if t.matched_digits is None else str(t.matched_digits),
                    "" if t.estimated_digits is None else repr(t.estimated_digits),
                ]
            )
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(self.csv_rows())
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "EvalReport":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise ValueError("empty CSV report")
        r = rows[0]
        params = dict(p.split("=", 1) for p in r["params"].split(";") if p)
        report = cls(
            scheme=r["scheme"],
            params=params,
            backend=r["backend"],
            precision=int(r["precision"]) if r["precision"] else None,
            terms=int(r["terms"]),
            digits=int(r["digits"]),
            alpha_prefix=r["alpha_prefix"],
            a_block=r["a_block"].split(";") if r["a_block"] else [],
        )
        for r in rows:
            report.targets.append(
                TargetReport(
                    index=int(r["index"]),
                    descriptor=r["descriptor"],
                    value=r["value"],
                    exact=r["exact"] or None,
                    oracle=r["oracle"] or None,
                    matched_digits=int(r["matched_digits"]) if r["matched_digits"] else None,
                    estimated_digits=float(r["estimated_digits"]) if r["estimated_digits"] else None,
                )
            )
        return report

    def to_text(self) -> str:
        lines = [f"scheme {self.scheme}" + "".join(f" {k}={v}" for k, v in self.params.items())]
        prec = f" precision={self.precision}" if self.precision else ""
        lines.append(f"backend={self.backend}{prec} terms={self.terms}")
        lines.append(f"alpha_prefix = {self.alpha_prefix}")
        lines.append("a_block (I, J, J^2, ...) = " + ", ".join(self.a_block))
        for t in self.targets:
            shown = t.exact if t.exact is not None else t.value
            extra = []
            if t.oracle is not None:
                extra.append(f"oracle {t.oracle}")
            if t.matched_digits is not None:
                extra.append(f"matched {t.matched_digits}")
            if t.estimated_digits is not None:
                extra.append(f"estimated {t.estimated_digits}")
            tail = f"  [{'; '.join(extra)}]" if extra else ""
            lines.append(f"v{t.index} -> {t.descriptor}: {shown}{tail}")
        return "\n".join(lines) + "\n"


def matched_digits(value, oracle, cap: int) -> int:
    """Correct decimal places of ``value`` against ``oracle``, capped at ``cap``."""
    err = log10_abs(value - oracle)
    if err == -math.inf:
        return cap
    return max(0, min(cap, math.floor(-err)))


def build_report(
    scheme: SchemeDef,
    acc: BandAccumulator,
    digits: int,
    with_oracle: bool = True,
) -> EvalReport:
    exact = acc.prec is None and not any(isinstance(x, BigFloat) for x in acc.v)
    cap = digits + GUARD_DIGITS
    est = None
    if scheme.infinite:
        est = error_estimate(acc, scheme.factor(acc.p + 1))
    targets = []
    for i, value in enumerate(acc.v):
        oracle = matched = None
        if with_oracle and scheme.targets:
            ref = evaluate_target(scheme.targets[i], scheme.params, cap)
            oracle = to_decimal(ref, digits)
            matched = matched_digits(value, ref, cap)
        estimated = None
        if est is not None and est[i].digits != -math.inf:
            estimated = round(min(est[i].digits, float(cap)), 2)
        targets.append(
            TargetReport(
                index=i + 1,
                descriptor=scheme.targets[i].render() if scheme.targets else f"v{i + 1}",
                value=to_decimal(value, digits),
                exact=render_rational(Fraction(value)) if exact else None,
                oracle=oracle,
                matched_digits=matched,
                estimated_digits=estimated,
            )
        )
    return EvalReport(
        scheme=scheme.name,
        params={k: render_rational(v) for k, v in scheme.params.items()},
        backend="rational" if acc.prec is None else "float",
        precision=acc.prec,
        terms=acc.p,
        digits=digits,
        alpha_prefix=to_decimal(acc.prefix, min(digits, 12)),
        a_block=[to_decimal(c, min(digits, 12)) for c in acc.a_block()],
        targets=targets,
    )
