"""Check reports: JSON lines or a fixed-width table, 15 significant digits."""
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"


def _num(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return float(format(x, ".15g"))


def encode(v):
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, complex):
        if v.imag == 0:
            return _num(v.real)
        return {"re": _num(v.real), "im": _num(v.imag)}
    if isinstance(v, float):
        return _num(v)
    if isinstance(v, dict):
        return {str(k): encode(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        items = sorted(v, key=str) if isinstance(v, (set, frozenset)) else v
        return [encode(x) for x in items]
    if hasattr(v, "real") and hasattr(v, "imag"):
        return encode(complex(v))
    return str(v)


@dataclass
class CheckReport:
    name: str
    params: dict
    lhs: object = None
    rhs: object = None
    abs_err: float = 0.0
    rel_err: float = 0.0
    status: str = PASS
    certificates: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "params": encode(self.params), "lhs": encode(self.lhs),
                "rhs": encode(self.rhs), "abs_err": encode(self.abs_err), "rel_err": encode(self.rel_err),
                "status": self.status, "certificates": encode(self.certificates)}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=False)


def compare(name, params, lhs, rhs, tol, rel=True, certificates=None, floor=1e-300):
    """PASS iff the (relative, else absolute) error is within tol."""
    ae = abs(complex(lhs) - complex(rhs))
    scale = max(abs(complex(lhs)), abs(complex(rhs)))
    re = ae / scale if scale > floor else 0.0
    err = re if rel else ae
    return CheckReport(name, params, lhs, rhs, ae, re, PASS if err <= tol else FAIL, certificates or {})


def skip(name, params, reason):
    return CheckReport(name, params, status=SKIP, certificates={"reason": reason})


def summary(reports):
    c = {PASS: 0, FAIL: 0, SKIP: 0}
    for r in reports:
        c[r.status] += 1
    return {"summary": {"total": len(reports), "pass": c[PASS], "fail": c[FAIL], "skip": c[SKIP]}}


def format_table(reports):
    rows = ["%-20s %-6s %-22s %-22s %-22s %s" % ("name", "status", "lhs", "rhs", "abs_err", "params")]
    for r in reports:
        d = r.to_dict()
        rows.append("%-20s %-6s %-22s %-22s %-22s %s" % (
            r.name, r.status, _short(d["lhs"]), _short(d["rhs"]), _short(d["abs_err"]),
            json.dumps(d["params"], sort_keys=True)))
    s = summary(reports)["summary"]
    rows.append("total %d  pass %d  fail %d  skip %d" % (s["total"], s["pass"], s["fail"], s["skip"]))
    return "\n".join(rows)


def _short(v):
    if isinstance(v, dict) and "re" in v:
        return "%.15g%+.15gi" % (v["re"], v["im"])
    if isinstance(v, float):
        return "%.15g" % v
    return str(v)
