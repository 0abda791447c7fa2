"""The report/1 output format."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Dict, List, Optional

from . import __version__

REPORT_FORMAT = "report/1"
STATUSES = ("pass", "fail", "truncated", "skipped")


@dataclass
class ZhuReport:
    command: str
    config: Dict[str, Any]
    cases: List[dict] = field(default_factory=list)
    result: Dict[str, Any] = field(default_factory=dict)
    timing: Optional[Dict[str, str]] = None

    def summary(self) -> Dict[str, int]:
        out = {s: 0 for s in STATUSES}
        for c in self.cases:
            out[c["status"]] += 1
        out["total"] = len(self.cases)
        return out

    @property
    def failures(self) -> int:
        return sum(1 for c in self.cases if c["status"] == "fail")

    def to_json(self) -> dict:
        return {
            "format": REPORT_FORMAT,
            "tool": {"name": "zhukit", "version": __version__},
            "command": self.command,
            "config": self.config,
            "summary": self.summary(),
            "cases": self.cases,
            "result": self.result,
            "timing": self.timing,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def report_schema() -> dict:
    return json.loads(resources.files("zhukit").joinpath("schemas", "report1.schema.json").read_text())


def validate_report(data: dict) -> None:
    import jsonschema

    jsonschema.validate(data, report_schema())
