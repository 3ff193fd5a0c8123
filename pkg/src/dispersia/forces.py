"""Dispersion forces in planar geometries.

All forces point along z (the wall fills ``z <= 0``); a negative ``F_z`` is
attraction.  The z-derivative of the scattering Green tensor is always taken
under the kappa-integral (``d/dz -> -2 kappa``), never numerically.

With ``hbar = c = eps0 = mu0 = 1`` the Casimir-Polder force reads

    F_z = (1/4 pi^2) int dxi alpha(i xi) int_xi^inf dkappa kappa e^{-2 kappa z}
          [xi^2 (r_s - r_p) - 2 (kappa^2 - xi^2) r_p]

and its screened counterpart for an atom inside a weakly dielectric medium
keeps only the ``xi^2 (r_s - r_p)`` part (with an extra ``xi^2`` weight in the
outer integral, see :func:`cp_force_medium_atom`).

Embedded micro-objects use the tensor combination ``1/2 Tr G - G``; for a planar
wall only ``d/dz [1/2 Tr G - G]_zz = d/dz (g_xx - g_zz/2)`` survives, because the
diagonal tensor depends on z alone.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, QuadratureError
from .materials import IdealReflector, clausius_mosotti
from .planar import _gap_denominator, coincident_scaled, reflection_kappa
from .quadrature import (QuadratureSpec, decade_breakdown, integrate_double,
                         integrate_semiinfinite)


@dataclass(frozen=True)
class ForceResult:
    """Force (or pressure) vector with its quadrature diagnostics.

    Attributes
    ----------
    force : ndarray, shape (3,)
        Natural units; for pressures only the z entry is used.
    error_estimate : float
        Propagated quadrature error bound.
    converged : bool
    evaluations : int
        Integrand evaluations spent.
    breakdown : dict
        Contribution of each xi-decade (``floor(log10 xi)``) to ``F_z``.
    metadata : dict
        What was computed and which approximations were applied.
    """

    force: np.ndarray
    error_estimate: float
    converged: bool = True
    evaluations: int = 0
    breakdown: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @property
    def fz(self):
        return float(self.force[2])

    @property
    def magnitude(self):
        return float(np.linalg.norm(self.force))


def _zero(metadata):
    return ForceResult(np.zeros(3), 0.0, True, 0, {}, metadata)


def _frequency_scale(alpha, default=1.0):
    return float(getattr(alpha, "characteristic_frequency", default))


def _check_z(z):
    if not z > 0:
        raise DomainError("distance from the wall must be positive")


def _from_double(res, metadata, factor=1.0):
    breakdown = {k: factor * float(v) for k, v in decade_breakdown(res.partition).items()}
    force = np.array([0.0, 0.0, factor * float(res.value)])
    return ForceResult(force, abs(factor) * res.error_estimate, res.converged,
                       res.evaluations, breakdown, metadata)


def _cp_double(weight, stack, z, spec, freq_scale):
    """``(1/4pi^2) int dxi weight(xi) int dkappa kappa e^{-2kz} [..]`` as an IntegralResult."""

    def f(xi, kappa):
        rs, rp = reflection_kappa(stack, xi, kappa)
        xi2 = xi * xi
        bracket = xi2 * (rs - rp) - 2.0 * (kappa * kappa - xi2) * rp
        return kappa * np.exp(-2.0 * kappa * z) * bracket

    def g(xi, kappa):
        return weight(xi) * f(xi, kappa)

    inv = 1.0 / (2.0 * z)
    return integrate_double(g, spec, outer_scale=min(freq_scale, inv), inner_scale=inv)


def cp_force_atom(alpha, stack, z, spec=None):
    """Casimir-Polder force on a ground-state atom at height ``z``.

    Parameters
    ----------
    alpha : callable
        Polarizability ``alpha(i xi)`` (e.g. an OscillatorPolarizability).
    stack : LayerStack
    z : float
        Height above the wall, > 0.
    spec : QuadratureSpec, optional
        Tolerance of the outer xi-integral.

    Returns
    -------
    ForceResult
        ``F_z < 0`` (attraction) for any passive dielectric wall.
    """
    _check_z(z)
    meta = {"quantity": "cp-force", "z": z}
    if stack.is_vacuum:
        return _zero(meta)
    spec = spec or QuadratureSpec()
    res = _cp_double(lambda xi: np.asarray(alpha(xi)), stack, z, spec,
                     _frequency_scale(alpha))
    return _from_double(res, meta, 1.0 / (4.0 * np.pi**2))


def _large_q_rp(stack, xi):
    # kappa -> inf: only the top interface matters and r_p -> (eps-1)/(eps+1)
    top = stack.top_material
    if isinstance(top, IdealReflector):
        return np.full_like(xi, top.r_p)
    eps = np.asarray(top.eps(xi))
    return (eps - 1.0) / (eps + 1.0)


def cp_force_atom_nonretarded_check(alpha, stack, z, spec=None):
    """Short-distance asymptote ``F_z = -(3 / 16 pi^2 z^4) int dxi alpha (eps-1)/(eps+1)``.

    Meant for comparison with :func:`cp_force_atom` at ``z`` much smaller than
    the atomic and material wavelengths.  For layered walls the top interface
    determines the limit.
    """
    _check_z(z)
    meta = {"quantity": "cp-force-nonretarded-asymptote", "z": z}
    if stack.is_vacuum:
        return _zero(meta)
    spec = spec or QuadratureSpec()

    def f(xi):
        return np.asarray(alpha(xi)) * _large_q_rp(stack, xi)

    res = integrate_semiinfinite(f, 0.0, spec, scale=_frequency_scale(alpha))
    return _from_double(res, meta, -3.0 / (16.0 * np.pi**2 * z**4))


def cp_force_medium_atom(alpha, density, stack, z, spec=None, method="closed-form"):
    """Screened force on one atom of a weakly dielectric medium above a wall.

    ``F_z = (1/4pi^2) int dxi xi^2 alpha int dkappa kappa e^{-2kz} (r_s - r_p)``.

    Parameters
    ----------
    alpha : callable
        Atomic polarizability.
    density : float or None
        Number density of the medium; only used to enforce the causality
        gate (the per-atom force does not depend on it).
    stack : LayerStack
    z : float
    spec : QuadratureSpec, optional
    method : {"closed-form", "tensor"}
        ``"tensor"`` assembles the same force from the z-derivatives of the
        separately integrated components ``g_xx`` and ``g_zz``; the two
        methods are independent numerical paths and must agree.
    """
    _check_z(z)
    if density is not None:
        clausius_mosotti(density, alpha)
    meta = {"quantity": "screened-atom-force", "z": z, "method": method}
    if stack.is_vacuum:
        return _zero(meta)
    spec = spec or QuadratureSpec()
    freq = _frequency_scale(alpha)
    inv = 1.0 / (2.0 * z)
    if method == "closed-form":
        def g(xi, kappa):
            rs, rp = reflection_kappa(stack, xi, kappa)
            return xi * xi * alpha(xi) * kappa * np.exp(-2.0 * kappa * z) * (rs - rp)

        res = integrate_double(g, spec, outer_scale=min(freq, inv), inner_scale=inv)
        return _from_double(res, meta, 1.0 / (4.0 * np.pi**2))
    if method != "tensor":
        raise ValueError("method must be 'closed-form' or 'tensor'")

    inner_spec = spec.tightened(1e4) if spec.rel_tol > 1e-8 else QuadratureSpec(rel_tol=1e-12)
    spent = [0]

    def outer(xis):
        rows = []
        for xi in xis:
            (dxx, dzz), err = coincident_scaled(stack, z, float(xi), inner_spec, order=1)
            a = float(alpha(float(xi)))
            rows.append((-a * (dxx - 0.5 * dzz) / np.pi, a * err / np.pi))
            spent[0] += 1
        return np.array(rows)

    res = integrate_semiinfinite(outer, 0.0, spec, scale=min(freq, inv), control=slice(0, 1))
    value, inner_err = np.asarray(res.value)
    breakdown = {k: float(v[0]) for k, v in decade_breakdown(res.partition).items()}
    return ForceResult(np.array([0.0, 0.0, value]), res.error_estimate + abs(inner_err),
                       res.converged, res.evaluations, breakdown, meta)


def micro_object_force(susceptibility, volume, stack, z, shape="isolated", weak=False,
                       spec=None):
    """Force on a small dielectric object of volume ``volume`` at height ``z``.

    The scattering Green tensor is taken constant across the object.  The
    local-field factor enters as ``eta alpha [1 + chi/3]``, which equals
    ``chi`` for a Clausius-Mosotti medium.

    Parameters
    ----------
    susceptibility : Susceptibility
        Clausius-Mosotti medium of the object.
    volume : float
    stack : LayerStack
    z : float
    shape : {"isolated", "embedded"}
        ``"embedded"`` is an object inside a larger body of the same atoms;
        its force is screened by the rest of the body (``1/2 Tr G - G``).
    weak : bool
        Drop the local-field factor and use ``eta alpha`` in place of ``chi``,
        i.e. the sum of independent single-atom forces.
    """
    _check_z(z)
    if not volume > 0:
        raise DomainError("volume must be positive")
    if shape not in ("isolated", "embedded"):
        raise ValueError("shape must be 'isolated' or 'embedded'")
    meta = {"quantity": "micro-object-force", "z": z, "shape": shape, "weak": weak,
            "approximations": "scattering Green tensor constant over the object"}
    if stack.is_vacuum or susceptibility.density == 0:
        return _zero(meta)
    spec = spec or QuadratureSpec()
    weight = susceptibility.bare if weak else susceptibility.chi
    freq = _frequency_scale(susceptibility.polarizability)
    factor = volume / (4.0 * np.pi**2)
    if shape == "isolated":
        res = _cp_double(lambda xi: np.asarray(weight(xi)), stack, z, spec, freq)
        return _from_double(res, meta, factor)

    inv = 1.0 / (2.0 * z)

    def g(xi, kappa):
        rs, rp = reflection_kappa(stack, xi, kappa)
        return xi * xi * weight(xi) * kappa * np.exp(-2.0 * kappa * z) * (rs - rp)

    res = integrate_double(g, spec, outer_scale=min(freq, inv), inner_scale=inv)
    return _from_double(res, meta, factor)


def lifshitz_pressure(stack_left, d, stack_right, spec=None):
    """Casimir pressure between two planar walls separated by a vacuum gap ``d``.

    ``P = -(1/2pi^2) int dxi int_xi^inf dkappa kappa^2 sum_sigma
    r_+ r_- e^{-2 kappa d} / (1 - r_+ r_- e^{-2 kappa d})``; negative values
    mean attraction.  Both stacks are listed from the gap outward.

    Returns
    -------
    ForceResult
        The pressure is stored in ``force[2]`` (see ``fz``).
    """
    if not d > 0:
        raise DomainError("gap width must be positive")
    meta = {"quantity": "pressure", "d": d}
    if stack_left.is_vacuum or stack_right.is_vacuum:
        return _zero(meta)
    spec = spec or QuadratureSpec()

    def g(xi, kappa):
        rs_m, rp_m = reflection_kappa(stack_left, xi, kappa)
        rs_p, rp_p = reflection_kappa(stack_right, xi, kappa)
        phase = 2.0 * kappa * d
        ed = np.exp(-phase)
        total = (rs_p * rs_m * ed / _gap_denominator(rs_p, rs_m, phase)
                 + rp_p * rp_m * ed / _gap_denominator(rp_p, rp_m, phase))
        return kappa * kappa * total

    inv = 1.0 / (2.0 * d)
    res = integrate_double(g, spec, outer_scale=inv, inner_scale=inv)
    return _from_double(res, meta, -1.0 / (2.0 * np.pi**2))


def retarded_mirror_limit(alpha_static, z):
    """Large-distance asymptote ``-3 alpha(0) / (8 pi^2 z^5)`` over a perfect mirror."""
    return -3.0 * alpha_static / (8.0 * np.pi**2 * z**5)


def mirror_pressure_limit(d):
    """Ideal-mirror Casimir pressure ``-pi^2 / (240 d^4)``."""
    return -np.pi**2 / (240.0 * d**4)


__all__ = ["ForceResult", "cp_force_atom", "cp_force_atom_nonretarded_check",
           "cp_force_medium_atom", "micro_object_force", "lifshitz_pressure",
           "retarded_mirror_limit", "mirror_pressure_limit", "QuadratureError"]
