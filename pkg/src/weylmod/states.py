"""JSON state files: a list of profile terms, a support radius and flags.

Example::

    {
      "support_radius": 0.9,
      "majorana": true,
      "profiles": [
        {"kind": "gaussian", "width": 0.16, "spinor": [1, [0, 0.3]],
         "center": [0.05, 0, 0]}
      ]
    }

Complex numbers are written as a plain number or as ``[re, im]``.  An optional
``grid`` object (``{"L": .., "N": ..}``) and ``leak_tol`` may be given.
"""

import json
from dataclasses import dataclass

from .dirac import majorana_embed
from .errors import ConfigError
from .profiles import DEFAULT_LEAK_TOL, KINDS, ProfileTerm, synthesize_cauchy
from .waves import GridSpec

PROFILE_KEYS = {"kind", "width", "spinor", "center", "degree", "wavevector"}
STATE_KEYS = {"support_radius", "majorana", "profiles", "grid", "leak_tol", "name"}


@dataclass(frozen=True)
class StateSpec:
    profiles: tuple
    support_radius: float
    majorana: bool = False
    grid: GridSpec = None
    leak_tol: float = DEFAULT_LEAK_TOL
    name: str = ""

    def build(self, grid=None):
        """Weyl data, or a MajoranaState when the ``majorana`` flag is set."""
        g = grid or self.grid or GridSpec()
        phi = synthesize_cauchy(g, self.profiles, self.support_radius, self.leak_tol)
        return majorana_embed(phi) if self.majorana else phi


def _complex(v, path):
    if isinstance(v, bool):
        raise ConfigError("expected a number or [re, im]", path)
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(
            isinstance(c, (int, float)) and not isinstance(c, bool) for c in v):
        return complex(v[0], v[1])
    raise ConfigError("expected a number or [re, im]", path)


def _number(v, path, positive=False):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError("expected a number", path)
    if positive and not v > 0:
        raise ConfigError("expected a positive number", path)
    return float(v)


def _vector(v, path, n=3):
    if not isinstance(v, (list, tuple)) or len(v) != n:
        raise ConfigError(f"expected a list of {n} numbers", path)
    return tuple(_number(c, f"{path}[{i}]") for i, c in enumerate(v))


def _profile(d, path):
    if not isinstance(d, dict):
        raise ConfigError("expected an object", path)
    unknown = set(d) - PROFILE_KEYS
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", path)
    kind = d.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"kind must be one of {KINDS}", f"{path}.kind")
    if "width" not in d:
        raise ConfigError("missing", f"{path}.width")
    spinor = d.get("spinor")
    if not isinstance(spinor, list) or len(spinor) != 2:
        raise ConfigError("expected two complex components", f"{path}.spinor")
    degree = d.get("degree", 4 if kind == "bump" else 0)
    if isinstance(degree, bool) or not isinstance(degree, int) or degree < 0:
        raise ConfigError("expected a non-negative integer", f"{path}.degree")
    try:
        return ProfileTerm(
            kind=kind,
            width=_number(d["width"], f"{path}.width", positive=True),
            spinor=tuple(_complex(c, f"{path}.spinor[{i}]") for i, c in enumerate(spinor)),
            center=_vector(d.get("center", [0, 0, 0]), f"{path}.center"),
            degree=degree,
            wavevector=_vector(d.get("wavevector", [0, 0, 0]), f"{path}.wavevector"),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), path) from exc


def parse_state(obj, source="state"):
    if not isinstance(obj, dict):
        raise ConfigError("expected a JSON object", source)
    unknown = set(obj) - STATE_KEYS
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", source)
    profiles = obj.get("profiles")
    if not isinstance(profiles, list) or not profiles:
        raise ConfigError("expected a non-empty list", f"{source}.profiles")
    terms = tuple(_profile(p, f"{source}.profiles[{i}]") for i, p in enumerate(profiles))
    if "support_radius" not in obj:
        raise ConfigError("missing", f"{source}.support_radius")
    R = _number(obj["support_radius"], f"{source}.support_radius", positive=True)
    majorana = obj.get("majorana", False)
    if not isinstance(majorana, bool):
        raise ConfigError("expected true or false", f"{source}.majorana")
    grid = None
    if "grid" in obj:
        g = obj["grid"]
        if not isinstance(g, dict) or set(g) - {"L", "N"}:
            raise ConfigError("expected an object with keys L and N", f"{source}.grid")
        try:
            grid = GridSpec(float(g.get("L", 2.5)), int(g.get("N", 48)))
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc), f"{source}.grid") from exc
    leak_tol = _number(obj.get("leak_tol", DEFAULT_LEAK_TOL), f"{source}.leak_tol", positive=True)
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise ConfigError("expected a string", f"{source}.name")
    return StateSpec(terms, R, majorana, grid, leak_tol, name)


def load_state(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", str(path)) from exc
    return parse_state(obj, source=str(path))
