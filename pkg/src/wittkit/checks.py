"""Result record shared by the exhaustive checkers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    violation: Any = None
    detail: str = ""

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        out: dict = {"ok": self.ok}
        if self.violation is not None:
            out["violation"] = _plain(self.violation)
        if self.detail:
            out["detail"] = self.detail
        return out


def _plain(x):
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (int, str, float, bool)) or x is None:
        return x
    return str(x)


PASS = CheckResult(True)
