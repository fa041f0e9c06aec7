"""Report records and their JSON-lines / CSV emission."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional


def _clean(v):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):
        v = v.item()
    if isinstance(v, complex):
        return [_clean(v.real), _clean(v.imag)]
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


@dataclass
class Assertion:
    id: str
    passed: bool
    value: float
    bound: Optional[float] = None
    margin: Optional[float] = None
    witness: Optional[list] = None
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    passed: bool
    samples: int
    worst_value: Optional[float]
    witness: Optional[list]
    assertions: list
    runtime: float = 0.0
    config: dict = field(default_factory=dict)

    def failing(self) -> list:
        return [a for a in self.assertions if not a.passed]

    def numeric_fields(self) -> dict:
        """Everything except wall-clock time; identical across seeded reruns."""
        d = asdict(self)
        d.pop("runtime")
        return _clean(d)

    def jsonl_lines(self) -> list:
        head = {"suite": self.suite, "passed": self.passed, "samples": self.samples,
                "worst_value": self.worst_value, "witness": self.witness,
                "runtime": round(self.runtime, 3), "config": self.config}
        lines = [json.dumps(_clean(head))]
        for a in self.assertions:
            lines.append(json.dumps(_clean({"suite": self.suite, **asdict(a)})))
        return lines

    def write_jsonl(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(self.jsonl_lines()) + "\n")
        return path


@dataclass
class RatioSearchReport:
    objective: str
    curve: str
    best_value: float
    arg_triple: list
    grid_best: float
    evaluations: int
    budget: int
    region: list
    trace: list = field(default_factory=list)
    seed: int = 0

    def numeric_fields(self) -> dict:
        return _clean(asdict(self))

    def jsonl_lines(self) -> list:
        return [json.dumps(self.numeric_fields())]

    def write_jsonl(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(self.jsonl_lines()) + "\n")
        return path


def fmt(x) -> str:
    """17 significant digits: exact round trip for doubles."""
    return format(float(x), ".17g")


def write_csv(path, header, rows) -> Path:
    """CSV with floats printed via :func:`fmt`; column order is the header's."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, (float, int)) and not isinstance(v, bool) else v
                        for v in row])
    return path


SAMPLE_COLUMNS = ("z1_re", "z1_im", "z2_re", "z2_im", "z3_re", "z3_im",
                  "c_sq", "full", "re_part", "im_part", "re_ratio", "im_ratio", "condition")


def sample_rows(z, c_sq, full, re_part, im_part, condition):
    """Rows in ``SAMPLE_COLUMNS`` order for a batch of symmetrization results."""
    import numpy as np

    z = np.asarray(z)
    c_sq = np.asarray(c_sq, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        rr = np.where(c_sq > 0, np.asarray(re_part) / c_sq, np.nan)
        ir = np.where(c_sq > 0, np.asarray(im_part) / c_sq, np.nan)
    cond = np.broadcast_to(np.asarray(condition), c_sq.shape)
    full = np.real(np.asarray(full))
    for i in range(len(z)):
        pts = [v for p in z[i] for v in (float(p.real), float(p.imag))]
        yield pts + [float(c_sq[i]), float(full[i]), float(re_part[i]), float(im_part[i]),
                     float(rr[i]), float(ir[i]), str(cond[i])]
