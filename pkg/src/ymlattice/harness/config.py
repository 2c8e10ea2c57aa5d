"""Plain-text ``key = value`` run configuration.

Blank lines and ``#`` comments are ignored; nested keys use dots
(``lattice.n = 3``).  Unknown keys are rejected.
"""

from dataclasses import dataclass, replace

from ..errors import ConfigError

CONVENTIONS = ("intro", "body")

# key -> (attribute, type, help)
KEYS = {
    "lattice.n": ("lattice_n", int, "lattice points per axis (cubic torus)"),
    "lattice.h": ("h", float, "lattice spacing"),
    "algebra.n": ("algebra_n", int, "rank n of su(n)"),
    "seed": ("seed", int, "master random seed"),
    "cg.tol": ("cg_tol", float, "relative residual tolerance of Green solves"),
    "cg.maxit": ("cg_maxit", int, "CG iteration cap (0: 10 x problem dimension)"),
    "fd.step": ("fd_step", float, "central-difference step of the audits"),
    "fd.probes": ("fd_probes", int, "probe directions per audit"),
    "dt": ("dt", float, "time step"),
    "steps": ("steps", int, "number of time steps"),
    "convention": ("convention", str, "sign convention of the field flow: intro or body"),
    "output.dir": ("out_dir", str, "output directory"),
    "suite.long": ("suite_long", bool, "run the long integrator checks in verify"),
    "suite.spectrum": ("suite_spectrum", bool, "print the Omega spectrum in verify"),
}


@dataclass(frozen=True)
class RunConfig:
    lattice_n: int = 2
    h: float = 1.0
    algebra_n: int = 2
    seed: int = 0
    cg_tol: float = 1e-10
    cg_maxit: int = 0
    fd_step: float = 1e-4
    fd_probes: int = 16
    dt: float = 1e-3
    steps: int = 1000
    convention: str = "intro"
    out_dir: str = "."
    suite_long: bool = True
    suite_spectrum: bool = True

    def validate(self):
        for key, (attr, typ, _) in KEYS.items():
            v = getattr(self, attr)
            if typ in (int, float) and attr not in ("seed", "cg_maxit") and not v > 0:
                raise ConfigError(f"{key} must be positive, got {v}", key=key)
        if self.seed < 0 or self.cg_maxit < 0:
            key = "seed" if self.seed < 0 else "cg.maxit"
            raise ConfigError(f"{key} must be non-negative", key=key)
        if self.lattice_n < 2:
            raise ConfigError("lattice.n must be at least 2", key="lattice.n")
        if self.algebra_n < 2:
            raise ConfigError("algebra.n must be at least 2", key="algebra.n")
        if self.convention not in CONVENTIONS:
            raise ConfigError(f"convention must be one of {CONVENTIONS}", key="convention")
        return self

    def with_overrides(self, **kw):
        return replace(self, **kw).validate()


def _parse_bool(s):
    t = s.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(s)


def parse_config(text, source="<config>"):
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'", line=lineno)
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key '{key}'", key=key, line=lineno)
        attr, typ, _ = KEYS[key]
        try:
            values[attr] = _parse_bool(val) if typ is bool else typ(val)
        except ValueError:
            raise ConfigError(
                f"{source}:{lineno}: bad value for '{key}': {val!r}", key=key, line=lineno
            ) from None
    return RunConfig(**values).validate()


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), str(path))


def describe_keys():
    """Help text listing every key with its default."""
    defaults = RunConfig()
    width = max(map(len, KEYS))
    return "\n".join(
        f"  {k:<{width}}  {doc} (default {getattr(defaults, a)!r})" for k, (a, _, doc) in KEYS.items()
    )


__all__ = ["RunConfig", "load_config", "parse_config", "describe_keys", "KEYS"]
