from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Violation:
    axiom: str
    instance: tuple = ()
    location: str = ""
    group: str = ""
    detail: str = ""

    def to_dict(self):
        return {
            "axiom": self.axiom,
            "instance": [_jsonable(x) for x in self.instance],
            "location": self.location,
            "group": self.group,
            "detail": self.detail,
        }


@dataclass
class ValidationReport:
    """Outcome of an exhaustive law check.

    ``violations`` lists every failed law instance together with the ids
    that witness it; the report is ok iff that list is empty.
    """

    subject: str
    violations: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def status(self) -> str:
        return "ok" if self.ok else "fail"

    @property
    def axioms(self) -> set:
        return {v.axiom for v in self.violations}

    def add(self, axiom, instance=(), location="", group="", detail=""):
        if not isinstance(instance, tuple):
            instance = (instance,)
        self.violations.append(Violation(axiom, instance, location, group, detail))

    def extend(self, other: "ValidationReport", prefix: str = ""):
        for v in other.violations:
            loc = f"{prefix}{v.location}" if prefix else v.location
            self.violations.append(Violation(v.axiom, v.instance, loc, v.group, v.detail))

    def by_axiom(self, axiom):
        return [v for v in self.violations if v.axiom == axiom]

    def raise_if_failed(self):
        if not self.ok:
            from .errors import LawViolation

            raise LawViolation(self)
        return self

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "subject": self.subject,
            "violations": [v.to_dict() for v in self.violations],
            "counts": dict(self.counts),
        }

    def __str__(self):
        lines = [f"{self.subject}: {self.status}"]
        for v in self.violations[:50]:
            where = f" [{v.location}]" if v.location else ""
            lines.append(f"  {v.axiom}{where}: {v.instance!r} {v.detail}".rstrip())
        if len(self.violations) > 50:
            lines.append(f"  ... {len(self.violations) - 50} more")
        return "\n".join(lines)


def _jsonable(x: Any):
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, (tuple, list, frozenset, set)):
        return [_jsonable(y) for y in x]
    return repr(x)
