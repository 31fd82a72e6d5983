"""Harness results and their text form.

    theorem 3
    graph k=1, 2 vertices, 3 edges, 0 squares
    instances 3
    status fail
    failure perp({b}) = {a} but the definition gives {}
      kgraph 1 k=1
      ...
      set b
"""

from __future__ import annotations

from typing import Iterable, Literal

from pydantic import BaseModel, Field

Status = Literal["pass", "fail", "partial"]


class Failure(BaseModel):
    message: str
    reproducer: str = ""


class TheoremReport(BaseModel):
    theorem: str
    graph: str
    instances: int = 0
    failures: list[Failure] = Field(default_factory=list)
    unknown: int = 0  # instances left undecided
    bounded: bool = False  # only bounded coverage was possible

    @property
    def status(self) -> Status:
        if self.failures:
            return "fail"
        if self.unknown or self.bounded:
            return "partial"
        return "pass"

    def fail(self, message: str, reproducer: str = "") -> None:
        self.failures.append(Failure(message=message, reproducer=reproducer))

    def to_text(self) -> str:
        lines = [
            f"theorem {self.theorem}",
            f"graph {self.graph}",
            f"instances {self.instances}",
            f"status {self.status}",
        ]
        for failure in self.failures:
            lines.append(f"failure {failure.message}")
            lines.extend(f"  {row}" for row in failure.reproducer.splitlines())
        return "\n".join(lines) + "\n"


def merge_reports(theorem: str, graph: str, reports: Iterable[TheoremReport]) -> TheoremReport:
    merged = TheoremReport(theorem=theorem, graph=graph)
    for r in reports:
        merged.instances += r.instances
        merged.unknown += r.unknown
        merged.bounded = merged.bounded or r.bounded
        merged.failures.extend(r.failures)
    return merged


def format_reports(reports: Iterable[TheoremReport]) -> str:
    return "\n".join(r.to_text() for r in reports)
