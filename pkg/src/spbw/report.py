"""Structured run reports: a dataclass mirror of the pipeline outcome that
renders to human text and to a stable machine document.

The machine document round-trips (``Report.from_dict(r.to_dict()) == r``)
and byte-compares against golden files once the timing fields are zeroed.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .gkdim import CheckRecord, SmoothnessReport

SCHEMA_ID = "spbw-report/1"


@dataclass
class Report:
    algebra: str
    mode: str | None
    config: dict
    calculus_dimension: int | None
    gk_estimate: int | None
    checks: list
    verdict: str
    failed_check: str | None
    failing: list
    schema: str = SCHEMA_ID

    @staticmethod
    def from_smoothness(name, mode, config, rep: SmoothnessReport) -> "Report":
        return Report(
            algebra=name,
            mode=mode,
            config=dict(config),
            calculus_dimension=rep.calculus_dimension,
            gk_estimate=rep.gk_estimate,
            checks=list(rep.checks),
            verdict=rep.verdict,
            failed_check=rep.failed_check,
            failing=list(rep.failing),
        )

    def check(self, name: str) -> CheckRecord | None:
        for rec in self.checks:
            if rec.name == name:
                return rec
        return None

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "algebra": self.algebra,
            "mode": self.mode,
            "config": dict(self.config),
            "calculus_dimension": self.calculus_dimension,
            "gk_estimate": self.gk_estimate,
            "checks": [asdict(c) for c in self.checks],
            "verdict": self.verdict,
            "failed_check": self.failed_check,
            "failing": list(self.failing),
        }

    @staticmethod
    def from_dict(data: dict) -> "Report":
        checks = [
            CheckRecord(
                name=c["name"],
                status=c["status"],
                witnesses=list(c.get("witnesses", [])),
                data=dict(c.get("data", {})),
                seconds=c.get("seconds", 0.0),
            )
            for c in data["checks"]
        ]
        return Report(
            algebra=data["algebra"],
            mode=data["mode"],
            config=dict(data["config"]),
            calculus_dimension=data["calculus_dimension"],
            gk_estimate=data["gk_estimate"],
            checks=checks,
            verdict=data["verdict"],
            failed_check=data["failed_check"],
            failing=list(data["failing"]),
            schema=data["schema"],
        )

    def to_json(self, zero_timing: bool = False) -> str:
        doc = self.to_dict()
        if zero_timing:
            for c in doc["checks"]:
                c["seconds"] = 0.0
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @staticmethod
    def from_json(text: str) -> "Report":
        return Report.from_dict(json.loads(text))

    def human_text(self) -> str:
        lines = [f"algebra: {self.algebra}" + (f"  (mode {self.mode})" if self.mode else "")]
        for c in self.checks:
            mark = {"pass": "ok", "fail": "FAIL", "skipped": "--", "error": "ERROR"}[c.status]
            detail = ""
            if c.data:
                detail = "  " + ", ".join(f"{k}={v}" for k, v in sorted(c.data.items()))
            lines.append(f"  {c.name:<22} {mark}{detail}")
            for w in c.witnesses[:3]:
                lines.append(f"      witness: {w}")
        dims = f"calculus dimension {self.calculus_dimension}, growth estimate {self.gk_estimate}"
        lines.append(f"  {dims}")
        lines.append(f"verdict: {self.verdict}" + (f" ({', '.join(self.failing)})" if self.failing else ""))
        return "\n".join(lines) + "\n"
