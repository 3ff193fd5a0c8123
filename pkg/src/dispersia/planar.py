"""Scattering Green tensor of planar multilayers at imaginary frequency.

On the imaginary axis ``omega = i*xi`` the perpendicular wavenumber in the
vacuum gap is ``beta = i*kappa`` with ``kappa = sqrt(q**2 + xi**2)``.  All
q-integrals are rewritten in terms of ``kappa`` (``q dq = kappa dkappa``,
``kappa in [xi, inf)``), so every integrand is real and carries an explicit
``exp(-2 kappa z)`` weight.  There is no propagating/evanescent split on this
axis.

Layer stacks are listed from the evaluation side outward::

    [vacuum half-space, slab_1, ..., slab_n, far half-space]

so ``z > 0`` is always the vacuum region and the wall occupies ``z <= 0``.

Internally the *scaled* tensor ``xi**2 * G`` is integrated because it stays
finite as ``xi -> 0``; the public functions return ``G`` itself.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, QuadratureError
from .materials import VACUUM, IdealReflector, MaterialModel
from .quadrature import QuadratureSpec, integrate_semiinfinite

_HALFSPACE = None


@dataclass(frozen=True)
class LayerStack:
    """Ordered planar layers, evaluation-side vacuum first.

    Parameters
    ----------
    layers : sequence of (material, thickness)
        ``thickness`` is ``None`` for the two half-spaces that cap the stack
        and a positive length for every interior slab.  The last material may
        be an :class:`~dispersia.materials.IdealReflector`.
    """

    layers: tuple

    def __post_init__(self):
        layers = tuple((mat, None if t is None else float(t)) for mat, t in self.layers)
        if len(layers) < 2:
            raise ValueError("a stack needs at least the vacuum side and one half-space")
        if layers[0][1] is not None or layers[-1][1] is not None:
            raise ValueError("first and last layers must be half-spaces (thickness None)")
        first = layers[0][0]
        if not (isinstance(first, MaterialModel) and first.is_vacuum):
            raise ValueError("the evaluation-side half-space must be vacuum")
        for mat, t in layers[1:-1]:
            if t is None or not t > 0:
                raise ValueError("interior slabs need a positive thickness")
            if isinstance(mat, IdealReflector):
                raise ValueError("an ideal reflector can only terminate the stack")
        object.__setattr__(self, "layers", layers)

    @classmethod
    def halfspace(cls, material):
        """Vacuum above a single homogeneous half-space (or ideal reflector)."""
        return cls(((VACUUM, _HALFSPACE), (material, _HALFSPACE)))

    @classmethod
    def vacuum(cls):
        """No wall at all; every reflection coefficient vanishes."""
        return cls(((VACUUM, _HALFSPACE), (VACUUM, _HALFSPACE)))

    @classmethod
    def slab_on(cls, slab, thickness, substrate):
        """Finite slab of ``slab`` on a half-space of ``substrate``."""
        return cls(((VACUUM, _HALFSPACE), (slab, thickness), (substrate, _HALFSPACE)))

    @property
    def is_vacuum(self):
        return all(isinstance(m, MaterialModel) and m.is_vacuum for m, _ in self.layers)

    @property
    def top_material(self):
        """Material directly below the vacuum gap."""
        return self.layers[1][0]


@dataclass(frozen=True)
class GreenTensor3:
    """Real 3x3 Green tensor value at imaginary frequency.

    ``kind`` is one of ``"scattering-coincident"``, ``"gap"``, ``"free-space"``,
    ``"bulk"``, ``"scattering"`` (noncoincident) or a derivative thereof (suffix
    ``"-dz"``).  ``regularization`` records what was subtracted to make the value
    finite.
    """

    matrix: np.ndarray
    xi: float
    kind: str
    z: float = None
    error_estimate: float = 0.0
    regularization: str = ""
    extra: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def xx(self):
        return float(self.matrix[0, 0])

    @property
    def yy(self):
        return float(self.matrix[1, 1])

    @property
    def zz(self):
        return float(self.matrix[2, 2])

    @property
    def trace(self):
        return float(np.trace(self.matrix))


def _material_response(mat, xi):
    return mat.eps(xi), mat.mu(xi)


def _kappa_in(kappa0, xi, eps, mu):
    # sqrt(q^2 + eps*mu*xi^2) written via the vacuum kappa0^2 = q^2 + xi^2
    return np.sqrt(kappa0 * kappa0 + (eps * mu - 1.0) * xi * xi)


def _interface(ka, kb, eps_a, mu_a, eps_b, mu_b):
    rs = (mu_b * ka - mu_a * kb) / (mu_b * ka + mu_a * kb)
    rp = (eps_b * ka - eps_a * kb) / (eps_b * ka + eps_a * kb)
    return rs, rp


def fresnel_iw(mat_a, mat_b, xi, q):
    """Fresnel amplitudes ``(r_s, r_p)`` for light in ``mat_a`` hitting ``mat_b``.

    Parameters
    ----------
    mat_a, mat_b : MaterialModel or IdealReflector
        Incident and transmitting media; an ideal reflector as ``mat_b``
        returns its fixed amplitudes.
    xi : float
        Imaginary frequency, > 0.
    q : float or ndarray
        In-plane wavenumber, >= 0.
    """
    if not xi > 0:
        raise DomainError("fresnel_iw needs xi > 0")
    q = np.asarray(q, dtype=float)
    if np.any(q < 0):
        raise DomainError("q must be non-negative")
    if isinstance(mat_a, IdealReflector):
        raise DomainError("the incident medium cannot be an ideal reflector")
    if isinstance(mat_b, IdealReflector):
        shape = np.shape(q)
        return np.full(shape, mat_b.r_s)[()], np.full(shape, mat_b.r_p)[()]
    eps_a, mu_a = _material_response(mat_a, xi)
    eps_b, mu_b = _material_response(mat_b, xi)
    ka = np.sqrt(q * q + eps_a * mu_a * xi * xi)
    kb = np.sqrt(q * q + eps_b * mu_b * xi * xi)
    rs, rp = _interface(ka, kb, eps_a, mu_a, eps_b, mu_b)
    return rs[()], rp[()]


def reflection_kappa(stack, xi, kappa):
    """Generalized ``(r_s, r_p)`` of ``stack`` as functions of the vacuum ``kappa``.

    ``kappa >= xi`` is the vacuum perpendicular decay constant.  This is the
    workhorse behind :func:`generalized_reflection`; all integrands call it.
    """
    kappa = np.asarray(kappa, dtype=float)
    if stack.is_vacuum:
        zero = np.zeros_like(kappa)
        return zero, zero.copy()
    layers = stack.layers
    resp = []
    for mat, _ in layers:
        if isinstance(mat, IdealReflector):
            resp.append(None)
        else:
            eps, mu = _material_response(mat, xi)
            resp.append((eps, mu, _kappa_in(kappa, xi, eps, mu)))

    def interface(j):
        eps_a, mu_a, ka = resp[j]
        if resp[j + 1] is None:
            reflector = layers[j + 1][0]
            return (np.full_like(kappa, reflector.r_s), np.full_like(kappa, reflector.r_p))
        eps_b, mu_b, kb = resp[j + 1]
        return _interface(ka, kb, eps_a, mu_a, eps_b, mu_b)

    n = len(layers)
    rs, rp = interface(n - 2)
    for j in range(n - 3, -1, -1):
        thickness = layers[j + 1][1]
        phase = np.exp(-2.0 * resp[j + 1][2] * thickness)
        ts, tp = interface(j)
        rs = (ts + rs * phase) / (1.0 + ts * rs * phase)
        rp = (tp + rp * phase) / (1.0 + tp * rp * phase)
    return rs, rp


def generalized_reflection(stack, xi, q):
    """Generalized reflection coefficients ``(r_s^-, r_p^-)`` seen from the gap.

    Layers are composed from the far half-space inward with
    ``r = (r_top + r_rest e^{-2 kappa_j d_j}) / (1 + r_top r_rest e^{-2 kappa_j d_j})``.
    For a bare half-space this is exactly :func:`fresnel_iw`.
    """
    if not xi > 0:
        raise DomainError("generalized_reflection needs xi > 0")
    q = np.asarray(q, dtype=float)
    if np.any(q < 0):
        raise DomainError("q must be non-negative")
    if len(stack.layers) == 2:
        return fresnel_iw(stack.layers[0][0], stack.layers[1][0], xi, q)
    rs, rp = reflection_kappa(stack, xi, np.sqrt(q * q + xi * xi))
    return rs[()], rp[()]


def _check_point(z, xi):
    if not z > 0:
        raise DomainError("evaluation height z must be > 0")
    if not xi > 0:
        raise DomainError("imaginary frequency xi must be > 0")


def _integrate_kappa(integrand, xi, scale, spec, what):
    res = integrate_semiinfinite(integrand, xi, spec, scale=scale)
    if not res.converged:
        raise QuadratureError(f"{what} did not converge (error estimate "
                              f"{res.error_estimate:.3e})", res)
    return res


def coincident_scaled(stack, z, xi, spec=None, order=0):
    """``xi**2 * [g_xx, g_zz]`` (or their ``order``-th z-derivative) and error estimate."""
    spec = spec or QuadratureSpec(rel_tol=1e-10)
    xi2 = xi * xi

    def integrand(kappa):
        rs, rp = reflection_kappa(stack, xi, kappa)
        k2 = kappa * kappa
        weight = np.exp(-2.0 * kappa * z) * (-2.0 * kappa)**order
        gxx = weight * (xi2 * rs - k2 * rp) / (8.0 * np.pi)
        gzz = -weight * (k2 - xi2) * rp / (4.0 * np.pi)
        return np.stack([gxx, gzz], axis=-1)

    res = _integrate_kappa(integrand, xi, 1.0 / (2.0 * z), spec, "coincident Green tensor")
    return np.asarray(res.value), res.error_estimate


def scattering_green_coincident(stack, z, xi, spec=None, order=0):
    """Scattering Green tensor ``G^(S)(r, r, i xi)`` at height ``z`` above ``stack``.

    Parameters
    ----------
    stack : LayerStack
    z : float
        Height above the top interface, > 0.
    xi : float
        Imaginary frequency, > 0.
    spec : QuadratureSpec, optional
        Tolerance of the kappa-integral (default ``rel_tol=1e-10``).
    order : {0, 1}
        ``1`` returns the z-derivative, obtained by multiplying the integrand
        by ``-2 kappa``.

    Returns
    -------
    GreenTensor3
        Diagonal tensor with ``g_xx = g_yy``.
    """
    _check_point(z, xi)
    if order not in (0, 1):
        raise ValueError("order must be 0 or 1")
    if stack.is_vacuum:
        vals, err = np.zeros(2), 0.0
    else:
        vals, err = coincident_scaled(stack, z, xi, spec, order)
    gxx, gzz = vals / (xi * xi)
    kind = "scattering-coincident" + ("-dz" if order else "")
    return GreenTensor3(np.diag([gxx, gxx, gzz]), xi, kind, z=z,
                        error_estimate=err / (xi * xi),
                        regularization="bulk vacuum part subtracted")


def scattering_green_trace(stack, z, xi, spec=None):
    """Trace of ``G^(S)(r, r, i xi)`` from its own kappa-integral.

    ``Tr G^(S) = (1/4pi) int dkappa e^{-2 kappa z} [(r_s - r_p) - 2 (kappa^2 - xi^2) r_p / xi^2]``.
    This is evaluated independently of the tensor components and therefore
    doubles as a consistency check on them.
    """
    _check_point(z, xi)
    if stack.is_vacuum:
        return 0.0
    spec = spec or QuadratureSpec(rel_tol=1e-10)
    xi2 = xi * xi

    def integrand(kappa):
        rs, rp = reflection_kappa(stack, xi, kappa)
        bracket = xi2 * (rs - rp) - 2.0 * (kappa * kappa - xi2) * rp
        return np.exp(-2.0 * kappa * z) * bracket / (4.0 * np.pi)

    res = _integrate_kappa(integrand, xi, 1.0 / (2.0 * z), spec, "Green tensor trace")
    return float(res.value) / xi2


def _gap_denominator(r_plus, r_minus, phase):
    # 1 - r+ r- e^{-2 kappa d}, written so that r+ r- = 1 loses no digits
    prod = r_plus * r_minus
    return (1.0 - prod) - prod * np.expm1(-phase)


def scattering_green_gap(stack_left, d, stack_right, z, xi, spec=None):
    """Scattering Green tensor at height ``z`` inside a vacuum gap of width ``d``.

    ``stack_left`` occupies ``z <= 0`` and ``stack_right`` occupies ``z >= d``;
    both are listed from the gap outward.  Multiple reflections enter through
    ``D_sigma = 1 - r_+ r_- e^{-2 kappa d}``.

    Returns
    -------
    GreenTensor3
        Diagonal tensor ``(g_xx, g_xx, g_zz)``.
    """
    if not d > 0:
        raise DomainError("gap width must be positive")
    if not 0 < z < d:
        raise DomainError("z must lie strictly inside the gap")
    if not xi > 0:
        raise DomainError("imaginary frequency xi must be > 0")
    if stack_left.is_vacuum and stack_right.is_vacuum:
        return GreenTensor3(np.zeros((3, 3)), xi, "gap", z=z,
                            regularization="bulk vacuum part subtracted")
    spec = spec or QuadratureSpec(rel_tol=1e-10)
    xi2 = xi * xi

    def integrand(kappa):
        rs_m, rp_m = reflection_kappa(stack_left, xi, kappa)
        rs_p, rp_p = reflection_kappa(stack_right, xi, kappa)
        e1 = np.exp(-2.0 * kappa * z)
        e2 = np.exp(-2.0 * kappa * (d - z))
        ed = np.exp(-2.0 * kappa * d)
        ds = _gap_denominator(rs_p, rs_m, 2.0 * kappa * d)
        dp = _gap_denominator(rp_p, rp_m, 2.0 * kappa * d)
        c_s = (rs_m * e1 + rs_p * e2 + 2.0 * rs_p * rs_m * ed) / ds
        c_pz = (rp_m * e1 + rp_p * e2 + 2.0 * rp_p * rp_m * ed) / dp
        c_pq = (rp_m * e1 + rp_p * e2 - 2.0 * rp_p * rp_m * ed) / dp
        k2 = kappa * kappa
        gxx = (xi2 * c_s - k2 * c_pq) / (8.0 * np.pi)
        gzz = -(k2 - xi2) * c_pz / (4.0 * np.pi)
        return np.stack([gxx, gzz], axis=-1)

    scale = 1.0 / (2.0 * min(z, d - z))
    res = _integrate_kappa(integrand, xi, scale, spec, "gap Green tensor")
    gxx, gzz = np.asarray(res.value) / xi2
    return GreenTensor3(np.diag([gxx, gxx, gzz]), xi, "gap", z=z,
                        error_estimate=res.error_estimate / xi2,
                        regularization="bulk vacuum part subtracted")
