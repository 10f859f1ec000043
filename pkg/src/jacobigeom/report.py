"""Checker reports: a verdict plus exact defect witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    name: str
    passed: bool = True
    witnesses: list[str] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)

    def fail(self, witness: str) -> None:
        self.passed = False
        self.witnesses.append(witness)

    def note(self, witness: str) -> None:
        self.witnesses.append(witness)

    def absorb(self, other: "Report", prefix: str = "") -> None:
        if not other.passed:
            self.passed = False
        tag = prefix or other.name
        self.witnesses.extend(f"{tag}: {w}" for w in other.witnesses)

    def __bool__(self) -> bool:
        return self.passed

    def summary(self) -> str:
        head = f"{self.name}: {'pass' if self.passed else 'fail'}"
        if self.witnesses:
            head += "\n" + "\n".join(f"  {w}" for w in self.witnesses)
        return head
