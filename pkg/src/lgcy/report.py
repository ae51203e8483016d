"""Verification report: one record per check plus run metadata."""

import json
from dataclasses import asdict, dataclass, field

SCHEMA_VERSION = "1"

PASS, FAIL = "PASS", "FAIL"


def format_number(x, digits=6):
    """Stable text form of a residual, tolerance or value."""
    if x is None:
        return None
    if isinstance(x, str):
        return x
    if x == 0:
        return "0"
    try:
        import mpmath

        return mpmath.nstr(x, digits, min_fixed=-3, max_fixed=3)
    except (TypeError, ValueError):
        return str(x)


@dataclass
class CheckRecord:
    id: str
    reference: str
    status: str
    residual: str
    tolerance: str
    order: int
    precision: int
    wall_time: float = 0.0
    details: dict = field(default_factory=dict)


@dataclass
class VerificationReport:
    meta: dict
    checks: list = field(default_factory=list)

    def add(self, record):
        if any(c.id == record.id for c in self.checks):
            raise ValueError(f"duplicate check id {record.id}")
        self.checks.append(record)

    @property
    def passed(self):
        return all(c.status == PASS for c in self.checks)

    def failures(self):
        return [c for c in self.checks if c.status != PASS]

    def to_dict(self, with_times=True):
        checks = []
        for c in self.checks:
            d = asdict(c)
            if not with_times:
                d.pop("wall_time")
            checks.append(d)
        meta = dict(self.meta)
        if not with_times:
            meta.pop("wall_time", None)
        return {"meta": meta, "checks": checks}

    def to_json(self, with_times=True):
        return json.dumps(self.to_dict(with_times), indent=2, sort_keys=True)

    def to_text(self):
        width = max((len(c.id) for c in self.checks), default=10)
        lines = [f"{'check':<{width}}  status  residual      tolerance"]
        for c in self.checks:
            lines.append(f"{c.id:<{width}}  {c.status:<6}  {c.residual:<12}  {c.tolerance}")
            for k, v in c.details.items():
                lines.append(f"{'':<{width}}    {k}: {v}")
        n_fail = len(self.failures())
        lines.append(f"{len(self.checks) - n_fail}/{len(self.checks)} checks passed")
        return "\n".join(lines)
