"""Green-tensor providers for noncoincident points at imaginary frequency.

Providers work with the scaled tensor ``H = xi**2 G``, which has a finite
static limit, and are vectorised over point pairs: ``r1`` and ``r2`` are
``(n, 3)`` arrays and results are ``(n, 3, 3)`` (values) or ``(n, 3, 3, 3)``
(first-argument gradients, indexed ``[pair, c, a, b] = d H_ab / d r1_c``).

* :class:`FreeSpaceGreen`: closed-form vacuum tensor.
* :class:`BulkGreen`: homogeneous medium, ``G = mu G_0(rho, n xi)`` with
  ``n = sqrt(eps mu)``.
* :class:`PlanarGreen`: vacuum half-space above a layer stack; free part plus
  a Sommerfeld-integral scattering part (a perfect mirror uses the exact
  image construction instead).
"""
import numpy as np
from scipy.special import j0, j1, jv

from .errors import DomainError, QuadratureError
from .materials import PERFECT_MIRROR
from .planar import GreenTensor3, LayerStack, reflection_kappa
from .quadrature import QuadratureSpec, integrate_semiinfinite

_FOUR_PI = 4.0 * np.pi
_MIRROR_POS = np.array([1.0, 1.0, -1.0])    # image position z -> -z
_MIRROR_DIP = np.array([-1.0, -1.0, 1.0])   # image dipole of a perfect conductor


def _pairs(r1, r2):
    r1 = np.atleast_2d(np.asarray(r1, dtype=float))
    r2 = np.atleast_2d(np.asarray(r2, dtype=float))
    r1, r2 = np.broadcast_arrays(r1, r2)
    return r1, r2


def _radial(d, xi):
    """Coefficients of ``H_0 = F1 1 + F2 d d`` and their rho-derivatives."""
    rho = np.linalg.norm(d, axis=-1)
    if np.any(rho == 0):
        raise DomainError("coincident points: the free-space Green tensor is singular")
    e = np.exp(-xi * rho) / _FOUR_PI
    p = xi * xi / rho + xi / rho**2 + 1.0 / rho**3
    s = xi * xi / rho**3 + 3.0 * xi / rho**4 + 3.0 / rho**5
    f1 = e * p
    f2 = -e * s
    df1 = e * (-xi * p - xi * xi / rho**2 - 2.0 * xi / rho**3 - 3.0 / rho**4)
    df2 = -e * (-xi * s - 3.0 * xi * xi / rho**4 - 12.0 * xi / rho**5 - 15.0 / rho**6)
    return rho, f1, f2, df1, df2


def free_space_scaled(d, xi):
    """``xi^2 G_0`` for separation vectors ``d`` of shape ``(n, 3)``."""
    d = np.atleast_2d(d)
    _, f1, f2, _, _ = _radial(d, xi)
    return f1[:, None, None] * np.eye(3) + f2[:, None, None] * d[:, :, None] * d[:, None, :]


def free_space_scaled_gradient(d, xi):
    """``d/dd_c (xi^2 G_0)_ab`` as an ``(n, 3, 3, 3)`` array ``[n, c, a, b]``."""
    d = np.atleast_2d(d)
    rho, _, f2, df1, df2 = _radial(d, xi)
    unit = d / rho[:, None]
    eye = np.eye(3)
    dd = d[:, :, None] * d[:, None, :]
    grad = (df1[:, None, None, None] * unit[:, :, None, None] * eye
            + df2[:, None, None, None] * unit[:, :, None, None] * dd[:, None, :, :])
    # F2 (delta_ac d_b + delta_bc d_a)
    grad += f2[:, None, None, None] * (eye[None, :, :, None] * d[:, None, None, :]
                                       + eye[None, :, None, :] * d[:, None, :, None])
    return grad


def free_space_green_iw(r1, r2, xi):
    """Vacuum Green tensor ``G(r1, r2, i xi)``.

    ``G = e^{-u} / (4 pi rho) [A(u) 1 + B(u) rhat rhat]`` with ``u = xi rho``,
    ``A = 1 + 1/u + 1/u^2`` and ``B = -(1 + 3/u + 3/u^2)``.

    Raises
    ------
    DomainError
        For coincident points or ``xi <= 0``.
    """
    if not xi > 0:
        raise DomainError("xi must be positive")
    d = np.asarray(r1, dtype=float) - np.asarray(r2, dtype=float)
    h = free_space_scaled(d[None, :], xi)[0]
    return GreenTensor3(h / (xi * xi), xi, "free-space")


def _bulk_index(material, xi):
    eps = float(material.eps(xi))
    mu = float(material.mu(xi))
    return eps, mu, np.sqrt(eps * mu)


def bulk_green_iw(material, r1, r2, xi):
    """Green tensor of an unbounded homogeneous medium.

    The vacuum form with ``xi -> n xi`` (``n = sqrt(eps mu)``) times ``mu``;
    for a nonmagnetic medium ``G_bulk(rho, xi) = G_0(rho, sqrt(eps) xi)``.
    """
    if not xi > 0:
        raise DomainError("xi must be positive")
    eps, mu, n = _bulk_index(material, xi)
    d = np.asarray(r1, dtype=float) - np.asarray(r2, dtype=float)
    h = free_space_scaled(d[None, :], n * xi)[0]
    return GreenTensor3(mu * h / (n * xi)**2, xi, "bulk", extra={"eps": eps, "mu": mu})


class GreenProvider:
    """Base class; subclasses supply ``full`` and, optionally, analytic gradients.

    Attributes
    ----------
    kind : str
    translation_invariant : bool
    analytic_gradient : bool
        Whether :meth:`grad_full` is exact rather than a finite difference.
    """

    kind = "abstract"
    translation_invariant = False
    analytic_gradient = False

    def full(self, r1, r2, xi):
        raise NotImplementedError

    def scattering(self, r1, r2, xi):
        """Scaled scattering part; zero for providers without boundaries."""
        r1, _ = _pairs(r1, r2)
        return np.zeros((len(r1), 3, 3))

    def green(self, r1, r2, xi):
        """Unscaled :class:`GreenTensor3` for one point pair."""
        if not xi > 0:
            raise DomainError("xi must be positive")
        h = self.full(r1, r2, xi)[0]
        return GreenTensor3(h / (xi * xi), xi, self.kind)

    def _fd(self, func, r1, r2, xi, step):
        # central differences at h and h/2, Richardson-combined (error O(h^4))
        r1, r2 = _pairs(r1, r2)
        n = len(r1)
        step = np.broadcast_to(np.asarray(step, dtype=float), (n,))
        shifts = []
        for h in (step, 0.5 * step):
            for c in range(3):
                for sign in (1.0, -1.0):
                    delta = np.zeros((n, 3))
                    delta[:, c] = sign * h
                    shifts.append(r1 + delta)
        big1 = np.concatenate(shifts)
        big2 = np.tile(r2, (len(shifts), 1))
        vals = func(big1, big2, xi).reshape(2, 3, 2, n, 3, 3)
        d_h = (vals[0, :, 0] - vals[0, :, 1]) / (2.0 * step[None, :, None, None])
        d_h2 = (vals[1, :, 0] - vals[1, :, 1]) / step[None, :, None, None]
        grad = (4.0 * d_h2 - d_h) / 3.0
        return np.moveaxis(grad, 0, 1)

    def grad_full(self, r1, r2, xi, step):
        """First-argument gradient of :meth:`full`; ``step`` is the FD fallback step."""
        return self._fd(self.full, r1, r2, xi, step)

    def grad_scattering(self, r1, r2, xi, step):
        """First-argument gradient of :meth:`scattering`."""
        return self._fd(self.scattering, r1, r2, xi, step)

    def trace_scattering_gradient(self, r, xi, step):
        """``grad Tr H^S(r, r)`` (both arguments moved), shape ``(n, 3)``."""
        r = np.atleast_2d(np.asarray(r, dtype=float))
        g = self.grad_scattering(r, r, xi, step)
        return 2.0 * np.einsum("ncaa->nc", g)


class FreeSpaceGreen(GreenProvider):
    """Vacuum everywhere."""

    kind = "free-space"
    translation_invariant = True
    analytic_gradient = True

    def full(self, r1, r2, xi):
        r1, r2 = _pairs(r1, r2)
        return free_space_scaled(r1 - r2, xi)

    def grad_full(self, r1, r2, xi, step=None):
        r1, r2 = _pairs(r1, r2)
        return free_space_scaled_gradient(r1 - r2, xi)

    def grad_scattering(self, r1, r2, xi, step=None):
        r1, _ = _pairs(r1, r2)
        return np.zeros((len(r1), 3, 3, 3))

    def trace_scattering_gradient(self, r, xi, step=None):
        return np.zeros((len(np.atleast_2d(r)), 3))


class BulkGreen(GreenProvider):
    """Unbounded homogeneous medium described by a MaterialModel."""

    kind = "bulk"
    translation_invariant = True
    analytic_gradient = True

    def __init__(self, material):
        self.material = material

    def _factors(self, xi):
        eps, mu, n = _bulk_index(self.material, xi)
        return n * xi, mu / (n * n)

    def full(self, r1, r2, xi):
        r1, r2 = _pairs(r1, r2)
        xi_m, scale = self._factors(xi)
        return scale * free_space_scaled(r1 - r2, xi_m)

    def grad_full(self, r1, r2, xi, step=None):
        r1, r2 = _pairs(r1, r2)
        xi_m, scale = self._factors(xi)
        return scale * free_space_scaled_gradient(r1 - r2, xi_m)

    def grad_scattering(self, r1, r2, xi, step=None):
        r1, _ = _pairs(r1, r2)
        return np.zeros((len(r1), 3, 3, 3))

    def trace_scattering_gradient(self, r, xi, step=None):
        return np.zeros((len(np.atleast_2d(r)), 3))


def _sommerfeld_scaled(stack, r1, r2, xi, spec):
    """Scaled scattering tensor above ``stack`` for many point pairs at once.

    In the basis (Rhat, phihat, zhat), with ``Z = z1 + z2`` and ``R`` the
    in-plane separation::

        H_RR   = 1/8pi int dk e^{-kZ} [xi^2 r_s (J0 + J2) - k^2 r_p (J0 - J2)]
        H_pp   = 1/8pi int dk e^{-kZ} [xi^2 r_s (J0 - J2) - k^2 r_p (J0 + J2)]
        H_zz   = -1/4pi int dk e^{-kZ} r_p q^2 J0
        H_zR   = 1/4pi int dk e^{-kZ} r_p q k J1 = -H_Rz
    """
    n = len(r1)
    sep = r1[:, :2] - r2[:, :2]
    big_r = np.hypot(sep[:, 0], sep[:, 1])
    big_z = r1[:, 2] + r2[:, 2]
    if np.any(r1[:, 2] <= 0) or np.any(r2[:, 2] <= 0):
        raise DomainError("planar provider points must lie in the vacuum region z > 0")
    xi2 = xi * xi

    def integrand(kappa):
        rs, rp = reflection_kappa(stack, xi, kappa)
        q = np.sqrt(np.maximum(kappa * kappa - xi2, 0.0))
        arg = q[:, None] * big_r[None, :]
        b0, b1, b2 = j0(arg), j1(arg), jv(2, arg)
        e = np.exp(-kappa[:, None] * big_z[None, :])
        k2 = (kappa * kappa)[:, None]
        s_term = xi2 * rs[:, None]
        p_term = k2 * rp[:, None]
        h_rr = e * (s_term * (b0 + b2) - p_term * (b0 - b2)) / (8.0 * np.pi)
        h_pp = e * (s_term * (b0 - b2) - p_term * (b0 + b2)) / (8.0 * np.pi)
        h_zz = -e * (rp * q * q)[:, None] * b0 / _FOUR_PI
        h_zr = e * (rp * q * kappa)[:, None] * b1 / _FOUR_PI
        return np.concatenate([h_rr, h_pp, h_zz, h_zr], axis=1)

    scale = 1.0 / float(np.mean(big_z))
    res = integrate_semiinfinite(integrand, xi, spec, scale=scale)
    if not res.converged:
        raise QuadratureError("Sommerfeld integral did not converge "
                              f"(error estimate {res.error_estimate:.3e})", res)
    h_rr, h_pp, h_zz, h_zr = np.asarray(res.value).reshape(4, n)
    safe = np.where(big_r > 0, big_r, 1.0)
    cos = np.where(big_r > 0, sep[:, 0] / safe, 1.0)
    sin = np.where(big_r > 0, sep[:, 1] / safe, 0.0)
    rhat = np.stack([cos, sin, np.zeros(n)], axis=1)
    phat = np.stack([-sin, cos, np.zeros(n)], axis=1)
    zhat = np.tile([0.0, 0.0, 1.0], (n, 1))

    def outer(a, b):
        return a[:, :, None] * b[:, None, :]

    return (h_rr[:, None, None] * outer(rhat, rhat) + h_pp[:, None, None] * outer(phat, phat)
            + h_zz[:, None, None] * outer(zhat, zhat)
            + h_zr[:, None, None] * (outer(zhat, rhat) - outer(rhat, zhat)))


class PlanarGreen(GreenProvider):
    """Vacuum region ``z > 0`` above a :class:`~dispersia.planar.LayerStack`.

    Parameters
    ----------
    stack : LayerStack
    spec : QuadratureSpec, optional
        Tolerance of the Sommerfeld integrals (default ``rel_tol=1e-11``).
    closed_form : bool
        Use the exact image construction for a perfect-mirror half-space.
        Set to False to force the Sommerfeld integrals (useful as an oracle).
    """

    kind = "planar"

    def __init__(self, stack, spec=None, closed_form=True):
        if not isinstance(stack, LayerStack):
            raise TypeError("PlanarGreen needs a LayerStack")
        self.stack = stack
        self.spec = spec or QuadratureSpec(rel_tol=1e-11)
        self.image = (closed_form and len(stack.layers) == 2
                      and stack.layers[1][0] == PERFECT_MIRROR)
        self.analytic_gradient = self.image or stack.is_vacuum

    def scattering(self, r1, r2, xi):
        r1, r2 = _pairs(r1, r2)
        if self.stack.is_vacuum:
            return np.zeros((len(r1), 3, 3))
        if self.image:
            return free_space_scaled(r1 - r2 * _MIRROR_POS, xi) * _MIRROR_DIP
        return _sommerfeld_scaled(self.stack, r1, r2, xi, self.spec)

    def full(self, r1, r2, xi):
        r1, r2 = _pairs(r1, r2)
        return free_space_scaled(r1 - r2, xi) + self.scattering(r1, r2, xi)

    def grad_scattering(self, r1, r2, xi, step=None):
        r1, r2 = _pairs(r1, r2)
        if self.stack.is_vacuum:
            return np.zeros((len(r1), 3, 3, 3))
        if self.image:
            return free_space_scaled_gradient(r1 - r2 * _MIRROR_POS, xi) * _MIRROR_DIP
        if step is None:
            raise ValueError("a finite-difference step is required for this stack")
        return self._fd(self.scattering, r1, r2, xi, step)

    def grad_full(self, r1, r2, xi, step=None):
        r1, r2 = _pairs(r1, r2)
        return (free_space_scaled_gradient(r1 - r2, xi)
                + self.grad_scattering(r1, r2, xi, step))

    def trace_scattering_gradient(self, r, xi, step=None):
        """Exact ``grad Tr H^S(r, r)``: only z survives, via the kappa-integral."""
        r = np.atleast_2d(np.asarray(r, dtype=float))
        out = np.zeros((len(r), 3))
        if self.stack.is_vacuum:
            return out
        if self.image:
            return 2.0 * np.einsum("ncaa->nc", self.grad_scattering(r, r, xi))
        for i, z in enumerate(r[:, 2]):
            out[i, 2] = trace_gradient_scaled(self.stack, z, xi, self.spec)
        return out


def trace_gradient_scaled(stack, z, xi, spec=None):
    """``xi^2 d/dz Tr G^(S)(z, z)`` above a planar stack (kappa-integral, exact derivative)."""
    if not z > 0:
        raise DomainError("z must be positive")
    spec = spec or QuadratureSpec(rel_tol=1e-11)
    xi2 = xi * xi

    def integrand(kappa):
        rs, rp = reflection_kappa(stack, xi, kappa)
        bracket = xi2 * (rs - rp) - 2.0 * (kappa * kappa - xi2) * rp
        return -2.0 * kappa * np.exp(-2.0 * kappa * z) * bracket / _FOUR_PI

    res = integrate_semiinfinite(integrand, xi, spec, scale=1.0 / (2.0 * z))
    if not res.converged:
        raise QuadratureError("trace gradient did not converge", res)
    return float(res.value)
