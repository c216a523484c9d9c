"""Scenario files: JSON schema, loading, and the shipped gallery.

Schema (all keys required except constraints/checks)::

    {
      "name": str,
      "dim": even int >= 4,
      "coords": [str, ...],                  # dim entries
      "immersion": [expr, ...],              # dim+1 expressions
      "transversal": [expr, ...],            # dim+1 expressions
      "omega": [[num-or-expr, ...], ...],    # dim x dim, antisymmetric
      "sample_points": [[num, ...], ...],
      "constraints": [{"name": str, "expr": expr}, ...],   # require expr > 0
      "checks": [{"name": str, "p_max": int, "tol": num}, ...]
    }

Expressions use the calculus grammar over the declared coordinates.
"""

from __future__ import annotations

import json
from importlib import resources

import numpy as np

from .expr import ExprError, parse_expr
from .geometry import Scenario

BUILTIN_NAMES = ("paper_example_n2", "paper_example_n3", "paraboloid",
                 "centroaffine_sphere")


class ScenarioFormatError(ValueError):
    pass


def _parse_field(source, coords, where):
    try:
        return parse_expr(str(source), coords)
    except ExprError as err:
        raise ScenarioFormatError(f"in {where}: {err}") from err


def scenario_from_dict(data: dict, validate: bool = True) -> Scenario:
    try:
        name = str(data["name"])
        dim = int(data["dim"])
        coords = tuple(str(c) for c in data["coords"])
        imm_src = list(data["immersion"])
        trans_src = list(data["transversal"])
        omega_src = list(data["omega"])
        points = tuple(tuple(float(v) for v in p) for p in data["sample_points"])
    except KeyError as err:
        raise ScenarioFormatError(f"missing scenario key {err}") from err
    if dim % 2 != 0 or dim < 4:
        raise ScenarioFormatError(f"dim must be an even integer >= 4, got {dim}")
    if len(coords) != dim:
        raise ScenarioFormatError(f"expected {dim} coords, got {len(coords)}")
    if len(imm_src) != dim + 1:
        raise ScenarioFormatError(
            f"expected {dim + 1} immersion components, got {len(imm_src)}")
    if len(trans_src) != dim + 1:
        raise ScenarioFormatError(
            f"expected {dim + 1} transversal components, got {len(trans_src)}")
    if len(omega_src) != dim or any(len(row) != dim for row in omega_src):
        raise ScenarioFormatError("omega must be a dim x dim matrix")
    for p in points:
        if len(p) != dim:
            raise ScenarioFormatError(f"sample point {p} has wrong dimension")

    immersion = tuple(_parse_field(s, coords, f"immersion[{i}]")
                      for i, s in enumerate(imm_src))
    transversal = tuple(_parse_field(s, coords, f"transversal[{i}]")
                        for i, s in enumerate(trans_src))
    omega = np.empty((dim, dim), dtype=object)
    for i in range(dim):
        for j in range(dim):
            v = omega_src[i][j]
            omega[i, j] = float(v) if isinstance(v, (int, float)) \
                else _parse_field(v, coords, f"omega[{i}][{j}]")
    constraints = tuple(
        (str(c["name"]), _parse_field(c["expr"], coords, f"constraint '{c['name']}'"))
        for c in data.get("constraints", ()))
    checks = tuple(dict(c) for c in data.get("checks", ()))

    sc = Scenario(name, dim, coords, immersion, transversal, omega,
                  points, constraints, checks)
    if validate:
        sc.validate()
    return sc


def load_scenario(path_or_name: str, validate: bool = True) -> Scenario:
    """Load a scenario from a file path or by shipped-gallery name."""
    import os
    if os.path.exists(path_or_name):
        with open(path_or_name, "rb") as fh:
            raw = fh.read()
    elif path_or_name in BUILTIN_NAMES:
        raw = resources.files("affsym").joinpath(
            "data", f"{path_or_name}.json").read_bytes()
    else:
        raise ScenarioFormatError(
            f"no such scenario file or builtin name: {path_or_name!r} "
            f"(builtins: {', '.join(BUILTIN_NAMES)})")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as err:
        raise ScenarioFormatError(
            f"invalid JSON at line {err.lineno}, column {err.colno}: {err.msg}") from err
    return scenario_from_dict(data, validate=validate)


def scenario_digest(path_or_name: str) -> str:
    import hashlib
    import os
    if os.path.exists(path_or_name):
        with open(path_or_name, "rb") as fh:
            raw = fh.read()
    else:
        raw = resources.files("affsym").joinpath(
            "data", f"{path_or_name}.json").read_bytes()
    return hashlib.sha256(raw).hexdigest()
