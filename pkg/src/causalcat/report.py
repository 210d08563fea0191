"""Law reports shared by every verification suite."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Failure:
    law: str
    witness: Any
    case: int | None = None
    deviation: float | None = None

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "law": self.law,
            "witness": _jsonable(self.witness),
            "deviation": self.deviation,
        }


@dataclass
class LawReport:
    """Outcome of checking a family of laws.

    ``laws`` maps each law name to whether it held on every case; the
    first failing case of each law keeps its witness in ``failures``.
    """

    suite: str
    cases: int = 0
    laws: dict[str, bool] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)
    max_deviation: float = 0.0
    notes: list[str] = field(default_factory=list)
    values: dict[str, Any] = field(default_factory=dict)

    def record(self, law: str, ok: bool, witness: Any = None,
               case: int | None = None, deviation: float | None = None) -> bool:
        ok = bool(ok)
        if deviation is not None:
            self.max_deviation = max(self.max_deviation, float(deviation))
        if law not in self.laws:
            self.laws[law] = True
        if not ok:
            if self.laws[law]:
                self.failures.append(Failure(law, witness, case, deviation))
            self.laws[law] = False
        return ok

    @property
    def passed(self) -> bool:
        return all(self.laws.values())

    def witness(self, law: str) -> Any:
        for f in self.failures:
            if f.law == law:
                return f.witness
        return None

    def merge(self, other: LawReport) -> None:
        self.cases += other.cases
        for law, ok in other.laws.items():
            self.laws[law] = self.laws.get(law, True) and ok
        self.failures.extend(other.failures)
        self.max_deviation = max(self.max_deviation, other.max_deviation)
        self.notes.extend(other.notes)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "cases": self.cases,
            "laws": dict(self.laws),
            "failures": [f.to_dict() for f in self.failures],
            "max_deviation": self.max_deviation,
            "notes": list(self.notes),
            "values": _jsonable(self.values),
        }

    def format_text(self) -> str:
        head = f"[{'PASS' if self.passed else 'FAIL'}] {self.suite}: {self.cases} cases, max deviation {self.max_deviation:.3g}"
        lines = [head]
        for law, ok in self.laws.items():
            line = f"  {'PASS' if ok else 'FAIL'} {law}"
            if not ok:
                w = self.witness(law)
                line += f"  witness={json.dumps(_jsonable(w), sort_keys=True)}"
            lines.append(line)
        lines.extend(f"  {k} = {json.dumps(_jsonable(v), sort_keys=True)}" for k, v in self.values.items())
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)


def _jsonable(x: Any) -> Any:
    if isinstance(x, (frozenset, set)):
        return sorted((_jsonable(v) for v in x), key=repr)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if hasattr(x, "item"):
        return _jsonable(x.item())
    return repr(x)
