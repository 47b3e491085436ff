"""Flat key = value configuration files for verification runs."""
from dataclasses import dataclass, field
from math import gcd

CHECKS = ("generating_series", "kernel_fe", "orbital_grid", "eisenstein_cm", "derivative_terms",
          "lfunc", "theta_eisenstein", "reciprocity")

_INT = ("D", "m", "c", "s", "a_min", "a_max", "seed", "w", "samples", "lfunc_bound")
_FLOAT = ("tol", "route_tol")


@dataclass
class VerificationConfig:
    D: int = 7
    m: int = 3
    c: int = 1
    s: int = 1
    chi: list = field(default_factory=list)
    a_min: int = 1
    a_max: int = 50
    checks: list = field(default_factory=lambda: list(CHECKS))
    tol: float = 1e-8
    route_tol: float = 1e-9
    seed: int = 0
    tau: list = field(default_factory=lambda: [1.5, 2.0])
    w: int = 0
    samples: int = 300
    lfunc_bound: int = 500
    grid: str = "fast"

    def params(self):
        return {"D": self.D, "m": self.m, "c": self.c, "s": self.s, "chi": list(self.chi)}

    def kernel_params(self):
        from ..kernel import KernelParams
        return KernelParams(self.D, self.m, self.c, self.s, ks=list(self.chi) or None)

    def validate(self):
        if self.D <= 0 or self.m <= 0 or self.c <= 0 or self.s <= 0:
            raise ValueError("D, m, c, s must be positive")
        if gcd(self.m * self.s, self.D) != 1 or gcd(self.c, self.D) != 1:
            raise ValueError("m, s and c must be prime to D")
        if gcd(self.m, self.c) != 1:
            raise ValueError("m must be prime to c")
        if self.c % self.s:
            raise ValueError("s must divide c")
        if self.s != 1:
            raise ValueError("s > 1 needs the local norm-type hypothesis check, which is not implemented")
        bad = [x for x in self.checks if x not in CHECKS]
        if bad:
            raise ValueError("unknown checks: %s" % ", ".join(bad))
        if self.a_min < 1 or self.a_max < self.a_min:
            raise ValueError("bad a-range")
        if self.grid not in ("fast", "full"):
            raise ValueError("grid must be fast or full")
        return self


def _list(v, conv):
    v = v.strip()
    if v.startswith("[") and v.endswith("]"):
        v = v[1:-1]
    return [conv(x.strip()) for x in v.split(",") if x.strip()]


def parse_config(text):
    cfg = VerificationConfig()
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError("line %d: expected key = value" % n)
        k, v = (x.strip() for x in line.split("=", 1))
        if k in _INT:
            setattr(cfg, k, int(v))
        elif k in _FLOAT:
            setattr(cfg, k, float(v))
        elif k == "chi":
            cfg.chi = _list(v, int)
        elif k == "tau":
            cfg.tau = _list(v, float)
        elif k == "checks":
            cfg.checks = _list(v, str)
        elif k == "grid":
            cfg.grid = v
        else:
            raise ValueError("line %d: unknown key %r" % (n, k))
    return cfg.validate()


def load_config(path):
    with open(path, encoding="utf-8") as f:
        return parse_config(f.read())
