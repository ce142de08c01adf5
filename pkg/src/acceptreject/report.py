"""Pass/fail reports for axiom and property checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    witness: Optional[Any] = None
    method: str = "exact"
    detail: str = ""


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    def add(self, name, ok, witness=None, method="exact", detail="") -> Check:
        c = Check(name, bool(ok), witness, method, detail)
        self.checks.append(c)
        return c

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self):
        return self.ok

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name):
        return any(c.name == name for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def summary(self) -> str:
        lines = [self.title]
        for c in self.checks:
            mark = "ok" if c.ok else "FAIL"
            extra = f" witness={c.witness}" if c.witness is not None else ""
            lines.append(f"  {c.name}: {mark} [{c.method}]{extra}")
        return "\n".join(lines)
