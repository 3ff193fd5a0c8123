"""Scenario files: parsing, validation, dispatch and CSV output.

A scenario is a TOML document.  Top-level keys::

    kind = "cp-atom"        # cp-atom | cp-medium-atom | micro-object | lifshitz
                            # | vdw | born-body | crossing
    units = "natural"       # or "si" (then omega_ref is required)
    omega_ref = 1e15        # reference angular frequency [rad/s]
    rel_tol = 1e-6          # outer quadrature tolerance
    rule = "gauss-kronrod"  # or "double-exponential"

Named blocks::

    [atoms.<name>]       alpha0 = ..., terms = [[Omega, omega0(, gamma)], ...]
                         (or static = alpha(0), omega0 = ...)
    [materials.<name>]   type = "lorentz" | "table" | "mirror" | "vacuum"
                         lorentz: terms = [[Omega, omega0, gamma], ...] and/or
                                  static = eps(0), omega0 = ..., eps_inf = ...
                         table:   table = [[xi, eps], ...]
                         mirror:  r_s = -1, r_p = 1 (optional)
    [media.<name>]       atom = "<atom>", density = ...   (or chi0 = static chi)

Geometry: ``[stack]`` (or ``[stack_left]``/``[stack_right]`` for lifshitz)
with ``layers = [{material = "vacuum"}, {material = "film", thickness = ...},
{material = "glass"}]``; ``[provider]`` with ``kind = "free-space" | "bulk" |
"planar"`` (``material`` for bulk; planar uses ``[stack]``); ``[body]``,
``[body1]``, ``[body2]`` with ``medium`` plus ``shape = "box"`` (``n``,
``pitch``), ``shape = "sphere"`` (``radius``, ``pitch``) or ``file``.

``[sweep]`` holds ``values = [...]`` or ``start``/``stop``/``num`` with
``spacing = "linear" | "log"``; the swept variable is z, d or rho depending
on the kind.  In SI scenarios lengths are metres, frequencies rad/s,
polarizabilities C m^2/V, densities m^-3, volumes m^3.
"""
import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib as tomli
except ImportError:  # python < 3.11
    import tomli

from . import __version__
from .born import APPROXIMATIONS, VoxelBody, body_force_exact, body_force_linear, crossing_force
from .errors import DispersiaError, ParseError, ValidationError
from .forces import (cp_force_atom, cp_force_atom_nonretarded_check, cp_force_medium_atom,
                     lifshitz_pressure, micro_object_force, mirror_pressure_limit,
                     retarded_mirror_limit)
from .green import BulkGreen, FreeSpaceGreen, PlanarGreen
from .materials import (PERFECT_MIRROR, VACUUM, IdealReflector, MaterialModel,
                        OscillatorPolarizability, Susceptibility, clausius_mosotti)
from .planar import LayerStack
from .quadrature import RULES, QuadratureSpec
from .units import UnitSystem
from .vdw import london_c6, retarded_vdw_limit, vdw_force

KINDS = ("cp-atom", "cp-medium-atom", "micro-object", "lifshitz", "vdw", "born-body", "crossing")
SWEEP_VARIABLE = {"cp-atom": "z", "cp-medium-atom": "z", "micro-object": "z",
                  "born-body": "z", "lifshitz": "d", "vdw": "rho", "crossing": "rho"}
CSV_COLUMNS = ("sweep", "Fx", "Fy", "Fz", "err", "converged")
WORKERS_ENV = "DISPERSIA_WORKERS"


@dataclass
class Scenario:
    """Validated scenario with every quantity already in natural units."""

    kind: str
    units: str
    unit_system: UnitSystem
    spec: QuadratureSpec
    sweep: np.ndarray
    atoms: dict = field(default_factory=dict)
    materials: dict = field(default_factory=dict)
    media: dict = field(default_factory=dict)
    geometry: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    source_hash: str = ""

    @property
    def sweep_variable(self):
        return SWEEP_VARIABLE[self.kind]

    @property
    def quantity(self):
        return "pressure" if self.kind == "lifshitz" else "force"


@dataclass(frozen=True)
class ResultRow:
    """One sweep point: natural-unit force (or pressure in ``force[2]``)."""

    sweep: float
    force: tuple
    error: float
    converged: bool
    flags: tuple = ()


class _Collector:
    """Accumulates validation errors instead of stopping at the first one."""

    def __init__(self):
        self.errors = []

    def add(self, message):
        self.errors.append(message)

    def number(self, table, key, where, default=None, positive=False, required=True):
        if key not in table:
            if required and default is None:
                self.add(f"{where}: missing '{key}'")
            return default
        value = table[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.add(f"{where}.{key}: expected a number, got {value!r}")
            return default
        if positive and not value > 0:
            self.add(f"{where}.{key}: must be positive")
            return default
        return float(value)

    def pairs(self, table, key, where, width):
        rows = table.get(key, [])
        ok = isinstance(rows, list) and all(
            isinstance(r, list) and len(r) in width
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in r)
            for r in rows)
        if not ok:
            self.add(f"{where}.{key}: expected a list of numeric rows of length {width}")
            return []
        return [[float(v) for v in r] for r in rows]


def _toml(text):
    try:
        return tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ParseError(getattr(exc, "msg", str(exc)), getattr(exc, "lineno", None),
                         getattr(exc, "colno", None)) from None


def _parse_atoms(doc, conv, col):
    out = {}
    for name, blk in doc.get("atoms", {}).items():
        where = f"atoms.{name}"
        if "terms" in blk:
            terms = col.pairs(blk, "terms", where, (2, 3))
            terms = [[conv.frequency(v) for v in t] for t in terms]
            alpha0 = col.number(blk, "alpha0", where, positive=True)
        else:
            static = col.number(blk, "static", where, positive=True)
            omega0 = col.number(blk, "omega0", where, positive=True)
            terms = [[conv.frequency(omega0), conv.frequency(omega0)]] if omega0 else []
            alpha0 = static
        if alpha0 is None or not terms:
            continue
        try:
            out[name] = OscillatorPolarizability(tuple(map(tuple, terms)),
                                                 conv.polarizability(alpha0))
        except ValueError as exc:
            col.add(f"{where}: {exc}")
    return out


def _parse_materials(doc, conv, col):
    out = {"vacuum": VACUUM, "mirror": PERFECT_MIRROR}
    for name, blk in doc.get("materials", {}).items():
        where = f"materials.{name}"
        kind = blk.get("type", "lorentz")
        try:
            if kind == "vacuum":
                out[name] = VACUUM
            elif kind == "mirror":
                out[name] = IdealReflector(float(blk.get("r_s", -1.0)), float(blk.get("r_p", 1.0)),
                                           name)
            elif kind == "table":
                rows = col.pairs(blk, "table", where, (2,))
                rows = [(conv.frequency(x), e) for x, e in rows]
                out[name] = MaterialModel(table=tuple(rows), label=name)
            elif kind == "lorentz":
                terms = col.pairs(blk, "terms", where, (2, 3))
                terms = [[conv.frequency(v) for v in t] for t in terms]
                mu_terms = col.pairs(blk, "mu_terms", where, (2, 3))
                mu_terms = [[conv.frequency(v) for v in t] for t in mu_terms]
                if "static" in blk:
                    static = col.number(blk, "static", where)
                    omega0 = col.number(blk, "omega0", where, positive=True)
                    gamma = col.number(blk, "gamma", where, default=0.0, required=False)
                    if static is not None and omega0 is not None:
                        if static < 1:
                            col.add(f"{where}.static: eps(0) must be >= 1")
                            continue
                        w0 = conv.frequency(omega0)
                        terms.append([np.sqrt(static - 1.0) * w0, w0, conv.frequency(gamma)])
                eps_inf = col.number(blk, "eps_inf", where, default=1.0, required=False)
                out[name] = MaterialModel(tuple(map(tuple, terms)), tuple(map(tuple, mu_terms)),
                                          name, eps_inf=eps_inf)
            else:
                col.add(f"{where}.type: unknown material type {kind!r}")
        except ValueError as exc:
            col.add(f"{where}: {exc}")
    return out


def _parse_media(doc, atoms, conv, col):
    out = {}
    for name, blk in doc.get("media", {}).items():
        where = f"media.{name}"
        atom = blk.get("atom")
        if atom not in atoms:
            col.add(f"{where}.atom: unknown atom reference {atom!r}")
            continue
        try:
            if "chi0" in blk:
                chi0 = col.number(blk, "chi0", where, positive=True)
                if chi0 is not None:
                    out[name] = Susceptibility.with_static_chi(chi0, atoms[atom])
            else:
                density = col.number(blk, "density", where)
                if density is not None:
                    out[name] = clausius_mosotti(conv.density(density), atoms[atom])
        except DispersiaError as exc:
            col.add(f"{where}: {exc}")
    return out


def _parse_stack(blk, where, materials, conv, col):
    layers = blk.get("layers") if isinstance(blk, dict) else None
    if not isinstance(layers, list) or not layers:
        col.add(f"{where}.layers: expected a non-empty list of layers")
        return None
    entries = []
    for i, layer in enumerate(layers):
        name = layer.get("material") if isinstance(layer, dict) else None
        if name not in materials:
            col.add(f"{where}.layers[{i}]: unknown material reference {name!r}")
            return None
        t = layer.get("thickness", "halfspace")
        if t == "halfspace":
            thickness = None
        elif isinstance(t, (int, float)) and not isinstance(t, bool) and t > 0:
            thickness = conv.length(t)
        else:
            col.add(f"{where}.layers[{i}].thickness: expected a positive length or 'halfspace'")
            return None
        entries.append((materials[name], thickness))
    if len(entries) == 1:
        entries.insert(0, (VACUUM, None))
    elif not (isinstance(entries[0][0], MaterialModel) and entries[0][0].is_vacuum):
        entries.insert(0, (VACUUM, None))
    try:
        return LayerStack(tuple(entries))
    except ValueError as exc:
        col.add(f"{where}: {exc}")
        return None


def _parse_sweep(doc, conv, col, variable):
    blk = doc.get("sweep")
    if not isinstance(blk, dict):
        col.add("sweep: missing [sweep] table")
        return np.array([])
    var = blk.get("variable", variable)
    if var != variable:
        col.add(f"sweep.variable: this kind sweeps {variable!r}, not {var!r}")
    if "values" in blk:
        vals = blk["values"]
        if not isinstance(vals, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals):
            col.add("sweep.values: expected a list of numbers")
            return np.array([])
        values = np.array(vals, dtype=float)
    else:
        start = col.number(blk, "start", "sweep", positive=True)
        stop = col.number(blk, "stop", "sweep", positive=True)
        num = blk.get("num")
        if not isinstance(num, int) or num < 1:
            col.add("sweep.num: expected a positive integer")
            return np.array([])
        if start is None or stop is None:
            return np.array([])
        spacing = blk.get("spacing", "linear")
        if spacing == "log":
            values = np.geomspace(start, stop, num)
        elif spacing == "linear":
            values = np.linspace(start, stop, num)
        else:
            col.add(f"sweep.spacing: unknown spacing {spacing!r}")
            return np.array([])
    if values.size == 0:
        col.add("sweep: no sweep points")
    elif np.any(values <= 0):
        col.add("sweep: values must be positive")
    elif np.any(np.diff(values) <= 0):
        col.add("sweep: values must be strictly increasing")
    return np.array([conv.length(v) for v in values])


def _parse_provider(doc, materials, stack, col):
    blk = doc.get("provider", {"kind": "planar" if stack is not None else "free-space"})
    kind = blk.get("kind")
    if kind == "free-space":
        return FreeSpaceGreen()
    if kind == "bulk":
        name = blk.get("material")
        if name not in materials or not isinstance(materials[name], MaterialModel):
            col.add(f"provider.material: unknown material reference {name!r}")
            return None
        return BulkGreen(materials[name])
    if kind == "planar":
        if stack is None:
            col.add("provider: a planar provider needs a [stack]")
            return None
        return PlanarGreen(stack)
    col.add(f"provider.kind: unknown provider {kind!r}")
    return None


def _parse_body(blk, where, media, conv, col, base_dir):
    if not isinstance(blk, dict):
        col.add(f"{where}: missing table")
        return None
    medium = blk.get("medium")
    if "file" not in blk and medium not in media:
        col.add(f"{where}.medium: unknown medium reference {medium!r}")
        return None
    try:
        if "file" in blk:
            path = Path(base_dir or ".") / blk["file"]
            text = path.read_text()
            return VoxelBody.from_text(text, media, length_scale=conv.length_unit, label=where)
        shape = blk.get("shape", "box")
        pitch = col.number(blk, "pitch", where, positive=True)
        center = blk.get("center", [0.0, 0.0, 0.0])
        center = [conv.length(float(v)) for v in center]
        if pitch is None:
            return None
        pitch = conv.length(pitch)
        if shape == "box":
            n = blk.get("n", [1, 1, 1])
            return VoxelBody.box(n, pitch, center, media[medium], where)
        if shape == "sphere":
            radius = col.number(blk, "radius", where, positive=True)
            if radius is None:
                return None
            return VoxelBody.sphere(conv.length(radius), pitch, center, media[medium], where)
        col.add(f"{where}.shape: unknown shape {shape!r}")
    except (OSError, ValueError, KeyError, DispersiaError) as exc:
        col.add(f"{where}: {exc}")
    return None


class _Converter:
    def __init__(self, unit_system, si):
        self.units = unit_system
        self.si = si

    @property
    def length_unit(self):
        return self.units.length if self.si else 1.0

    def length(self, x):
        return self.units.length_to_natural(x) if self.si else x

    def frequency(self, w):
        return self.units.frequency_to_natural(w) if self.si else w

    def polarizability(self, a):
        return self.units.polarizability_to_natural(a) if self.si else a

    def density(self, n):
        return self.units.density_to_natural(n) if self.si else n

    def volume(self, v):
        return self.units.volume_to_natural(v) if self.si else v


def _ref(doc, key, table, col, what):
    name = doc.get(key)
    if name not in table:
        col.add(f"{key}: unknown {what} reference {name!r}")
        return None
    return table[name]


def parse_scenario(text, base_dir=None):
    """Parse and validate scenario text.

    Returns
    -------
    Scenario

    Raises
    ------
    ParseError
        Malformed TOML (with line and column).
    ValidationError
        Every semantic problem found, not just the first.
    """
    doc = _toml(text)
    col = _Collector()
    kind = doc.get("kind")
    if kind not in KINDS:
        col.add(f"kind: expected one of {', '.join(KINDS)}, got {kind!r}")
        raise ValidationError(col.errors)
    units = doc.get("units", "natural")
    if units not in ("si", "natural"):
        col.add(f"units: expected 'si' or 'natural', got {units!r}")
    omega_ref = doc.get("omega_ref")
    unit_system = None
    if omega_ref is not None:
        try:
            unit_system = UnitSystem(float(omega_ref))
        except (TypeError, ValueError):
            col.add("omega_ref: must be a positive number [rad/s]")
    if units == "si" and unit_system is None:
        col.add("omega_ref: required when units = 'si'")
    conv = _Converter(unit_system or UnitSystem(1.0), units == "si" and unit_system is not None)

    rel_tol = doc.get("rel_tol", 1e-6)
    rule = doc.get("rule", "gauss-kronrod")
    spec = QuadratureSpec()
    try:
        spec = QuadratureSpec(rel_tol=float(rel_tol), rule=rule)
    except (TypeError, ValueError) as exc:
        col.add(f"rel_tol/rule: {exc} (rules: {', '.join(RULES)})")

    atoms = _parse_atoms(doc, conv, col)
    materials = _parse_materials(doc, conv, col)
    media = _parse_media(doc, atoms, conv, col)
    geometry = {}
    params = {}
    for key in ("stack", "stack_left", "stack_right"):
        if key in doc:
            geometry[key] = _parse_stack(doc[key], key, materials, conv, col)

    if kind in ("cp-atom", "cp-medium-atom", "micro-object") and "stack" not in doc:
        col.add("stack: missing [stack] table")
    if kind in ("cp-atom", "cp-medium-atom"):
        params["atom"] = _ref(doc, "atom", atoms, col, "atom")
    if kind == "cp-medium-atom":
        if "density" in doc:
            params["density"] = conv.density(col.number(doc, "density", "top") or 0.0)
        params["method"] = doc.get("method", "closed-form")
        if params["method"] not in ("closed-form", "tensor"):
            col.add("method: expected 'closed-form' or 'tensor'")
    if kind == "micro-object":
        params["medium"] = _ref(doc, "medium", media, col, "medium")
        vol = col.number(doc, "volume", "top", positive=True)
        params["volume"] = conv.volume(vol) if vol is not None else None
        params["shape"] = doc.get("shape", "isolated")
        if params["shape"] not in ("isolated", "embedded"):
            col.add("shape: expected 'isolated' or 'embedded'")
        params["weak"] = bool(doc.get("weak", False))
    if kind == "lifshitz":
        for key in ("stack_left", "stack_right"):
            if key not in doc:
                col.add(f"{key}: missing [{key}] table")
    if kind in ("vdw", "born-body", "crossing"):
        geometry["provider"] = _parse_provider(doc, materials, geometry.get("stack"), col)
        direction = np.asarray(doc.get("direction", [0.0, 0.0, 1.0]), dtype=float)
        norm = np.linalg.norm(direction)
        if direction.shape != (3,) or norm == 0:
            col.add("direction: expected a non-zero 3-vector")
            norm = 1.0
        params["direction"] = direction / norm
        params["origin"] = np.array([conv.length(float(v))
                                     for v in doc.get("origin", [0.0, 0.0, 0.0])])
    if kind == "vdw":
        params["atom1"] = _ref(doc, "atom1", atoms, col, "atom")
        params["atom2"] = _ref(doc, "atom2", atoms, col, "atom")
    if kind == "born-body":
        geometry["body"] = _parse_body(doc.get("body"), "body", media, conv, col, base_dir)
        params["method"] = doc.get("method", "exact")
        if params["method"] not in ("exact", "linear"):
            col.add("method: expected 'exact' or 'linear'")
    if kind == "crossing":
        geometry["body1"] = _parse_body(doc.get("body1"), "body1", media, conv, col, base_dir)
        geometry["body2"] = _parse_body(doc.get("body2"), "body2", media, conv, col, base_dir)

    sweep = _parse_sweep(doc, conv, col, SWEEP_VARIABLE[kind])
    if col.errors:
        raise ValidationError(col.errors)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return Scenario(kind, units, unit_system, spec, sweep, atoms, materials, media, geometry,
                    params, digest)


def _centroid(body):
    return body.centers.mean(axis=0)


def compute_point(scenario, value):
    """Evaluate one sweep point and return the physics-module ForceResult."""
    s, g, p = scenario, scenario.geometry, scenario.params
    spec = s.spec
    if s.kind == "cp-atom":
        return cp_force_atom(p["atom"], g["stack"], value, spec)
    if s.kind == "cp-medium-atom":
        return cp_force_medium_atom(p["atom"], p.get("density"), g["stack"], value, spec,
                                    p["method"])
    if s.kind == "micro-object":
        return micro_object_force(p["medium"], p["volume"], g["stack"], value, p["shape"],
                                  p["weak"], spec)
    if s.kind == "lifshitz":
        return lifshitz_pressure(g["stack_left"], value, g["stack_right"], spec)
    if s.kind == "vdw":
        r2 = p["origin"]
        r1 = r2 + value * p["direction"]
        return vdw_force(p["atom1"], p["atom2"], g["provider"], r1, r2, spec)
    if s.kind == "born-body":
        body = g["body"]
        shift = np.array([0.0, 0.0, value - _centroid(body)[2]])
        body = body.translated(shift)
        solver = body_force_exact if p["method"] == "exact" else body_force_linear
        return solver(g["provider"], body, spec)
    if s.kind == "crossing":
        b1, b2 = g["body1"], g["body2"]
        b2 = b2.translated(p["origin"] - _centroid(b2))
        b1 = b1.translated(p["origin"] + value * p["direction"] - _centroid(b1))
        return crossing_force(g["provider"], b1, b2, spec)
    raise ValueError(f"unknown kind {s.kind!r}")


def _row(scenario, value):
    try:
        res = compute_point(scenario, value)
    except DispersiaError as exc:
        return ResultRow(float(value), (np.nan, np.nan, np.nan), np.nan, False,
                         (f"error: {exc}",))
    flags = ()
    approx = res.metadata.get("approximations")
    if approx:
        flags = tuple(approx) if isinstance(approx, tuple) else (approx,)
    return ResultRow(float(value), tuple(float(v) for v in res.force),
                     float(res.error_estimate), bool(res.converged), flags)


def _worker_count():
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_scenario(scenario, workers=None):
    """Evaluate every sweep point; rows come back in sweep order.

    Physics errors at a point do not abort the sweep: the row is reported
    with ``converged=False`` and NaN values.  ``workers`` (default: the
    ``DISPERSIA_WORKERS`` environment variable, else 1) sets the number of
    worker processes.
    """
    workers = workers or _worker_count()
    values = [float(v) for v in scenario.sweep]
    if workers <= 1 or len(values) <= 1:
        return [_row(scenario, v) for v in values]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_row, [scenario] * len(values), values))


def format_float(x):
    """Shortest round-trip scientific representation."""
    x = float(x)
    if not np.isfinite(x):
        return repr(x)
    return np.format_float_scientific(x, unique=True, trim="-")


def output_factors(scenario, units):
    """Multipliers converting natural (sweep, force) values to the requested units."""
    if units == "natural":
        return 1.0, 1.0
    if scenario.unit_system is None:
        raise ValueError("SI output needs omega_ref in the scenario")
    u = scenario.unit_system
    return u.length, (u.pressure if scenario.quantity == "pressure" else u.force)


def emit_csv(rows, header=None, sweep_factor=1.0, value_factor=1.0):
    """Render rows as CSV text.

    ``header`` entries become ``# key: value`` comment lines.  Columns are
    always ``sweep,Fx,Fy,Fz,err,converged``; floats use the shortest
    representation that round-trips.
    """
    lines = [f"# {k}: {v}" for k, v in (header or {}).items()]
    lines.append(",".join(CSV_COLUMNS))
    for row in rows:
        fields = [format_float(row.sweep * sweep_factor)]
        fields += [format_float(f * value_factor) for f in row.force]
        fields.append(format_float(row.error * value_factor))
        fields.append("true" if row.converged else "false")
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def csv_header(scenario, units):
    quantity = scenario.quantity
    unit = {"si": "Pa" if quantity == "pressure" else "N",
            "natural": "hbar*omega_ref/l^3" if quantity == "pressure" else "hbar*omega_ref/l"}
    length = "m" if units == "si" else "l = c/omega_ref"
    header = {
        "dispersia": __version__,
        "scenario_sha256": scenario.source_hash,
        "kind": scenario.kind,
        "units": units,
        "omega_ref": ("unset" if scenario.unit_system is None
                      else format_float(scenario.unit_system.omega_ref)),
        "rel_tol": format_float(scenario.spec.rel_tol),
        "rule": scenario.spec.rule,
        "sweep_variable": f"{scenario.sweep_variable} [{length}]",
        "quantity": f"{quantity} [{unit[units]}]" + (" (in Fz)" if quantity == "pressure" else ""),
    }
    if scenario.kind in ("born-body", "crossing"):
        header["approximations"] = "; ".join(APPROXIMATIONS)
    return header


def limits(scenario):
    """Analytic asymptotes for the scenario's sweep points.

    Returns ``(column_names, rows)`` in natural units, or ``None`` when the
    kind has no closed-form limits.
    """
    x = scenario.sweep
    p = scenario.params
    if scenario.kind == "cp-atom":
        atom = p["atom"]
        stack = scenario.geometry["stack"]
        ret = [retarded_mirror_limit(atom.static, z) for z in x]
        nonret = [cp_force_atom_nonretarded_check(atom, stack, z).fz for z in x]
        return ("retarded_mirror", "nonretarded"), list(zip(ret, nonret))
    if scenario.kind == "lifshitz":
        return ("ideal_mirror",), [(mirror_pressure_limit(d),) for d in x]
    if scenario.kind == "vdw":
        a1, a2 = p["atom1"], p["atom2"]
        c6 = london_c6(a1, a2)
        return (("retarded_free_space", "london_free_space"),
                [(retarded_vdw_limit(a1.static, a2.static, r), -6.0 * c6 / r**7) for r in x])
    return None
