"""Two-atom van der Waals force mediated by an arbitrary Green tensor.

    F_12 = (1/2pi) int dxi xi^4 alpha_1 alpha_2 grad_1 Tr[G(r1, r2) G(r2, r1)]

in natural units.  For translation-invariant closed-form providers the trace
only depends on ``rho = |r1 - r2|``: with ``xi^2 G = T (1 - rhat rhat) + L rhat rhat``
it equals ``2 T^2 + L^2`` and its rho-derivative is taken analytically, so the
force is exactly central and exactly antisymmetric under ``1 <-> 2``.  Other
providers use Richardson-extrapolated central differences of the trace.
"""
import numpy as np

from .errors import DomainError
from .forces import ForceResult
from .green import BulkGreen, FreeSpaceGreen, GreenProvider, _bulk_index
from .quadrature import QuadratureSpec, decade_breakdown, integrate_semiinfinite

# finite-difference fallback: h = FD_RELATIVE_STEP * rho, then h/2, Richardson order 2 -> 4
FD_RELATIVE_STEP = 1e-4


def _trace_and_derivative(rho, xi):
    """``Tr[(xi^2 G_0)^2]`` and its rho-derivative for the vacuum tensor."""
    e = np.exp(-xi * rho) / (4.0 * np.pi)
    p = xi * xi / rho + xi / rho**2 + 1.0 / rho**3
    dp = -xi * xi / rho**2 - 2.0 * xi / rho**3 - 3.0 / rho**4
    q = -2.0 * xi / rho**2 - 2.0 / rho**3
    dq = 4.0 * xi / rho**3 + 6.0 / rho**4
    t, lng = e * p, e * q
    dt = e * (dp - xi * p)
    dl = e * (dq - xi * q)
    return 2.0 * t * t + lng * lng, 4.0 * t * dt + 2.0 * lng * dl


def pair_trace_derivative(provider, rho, xi):
    """``d/drho Tr[H(r1,r2) H(r2,r1)]`` for a translation-invariant closed-form provider."""
    if isinstance(provider, FreeSpaceGreen):
        return _trace_and_derivative(rho, xi)[1]
    if isinstance(provider, BulkGreen):
        eps, mu, n = _bulk_index(provider.material, xi)
        scale = mu / (n * n)
        # H_bulk(rho, xi) = scale * H_0(rho, n xi)
        return scale * scale * _trace_and_derivative(rho, n * xi)[1]
    raise TypeError("no closed form for this provider")


def _fd_gradient(provider, r1, r2, xi, h):
    """Central differences of ``Tr[H12 H21]`` in r1 at steps h and h/2, Richardson-combined."""
    pts1 = []
    for step in (h, 0.5 * h):
        for c in range(3):
            for sign in (1.0, -1.0):
                p = r1.copy()
                p[c] += sign * step
                pts1.append(p)
    pts1 = np.array(pts1)
    pts2 = np.tile(r2, (len(pts1), 1))
    h12 = provider.full(pts1, pts2, xi)
    h21 = provider.full(pts2, pts1, xi)
    tr = np.einsum("nab,nba->n", h12, h21).reshape(2, 3, 2)
    d_h = (tr[0, :, 0] - tr[0, :, 1]) / (2.0 * h)
    d_h2 = (tr[1, :, 0] - tr[1, :, 1]) / h
    return (4.0 * d_h2 - d_h) / 3.0


def vdw_force(alpha1, alpha2, provider, r1, r2, spec=None):
    """Force on atom 1 (at ``r1``) due to atom 2 (at ``r2``).

    Parameters
    ----------
    alpha1, alpha2 : callable
        Polarizabilities ``alpha(i xi)``.
    provider : GreenProvider
        Environment mediating the interaction.
    r1, r2 : array_like, shape (3,)
    spec : QuadratureSpec, optional

    Returns
    -------
    ForceResult
        Attraction means the force points from ``r1`` toward ``r2``.
    """
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    sep = r1 - r2
    rho = float(np.linalg.norm(sep))
    if rho == 0:
        raise DomainError("the two atoms must not coincide")
    if not isinstance(provider, GreenProvider):
        raise TypeError("provider must be a GreenProvider")
    spec = spec or QuadratureSpec()
    freq = min(float(getattr(alpha1, "characteristic_frequency", 1.0)),
               float(getattr(alpha2, "characteristic_frequency", 1.0)), 1.0 / rho)
    meta = {"quantity": "vdw-force", "rho": rho, "provider": provider.kind}

    if isinstance(provider, (FreeSpaceGreen, BulkGreen)):
        unit = sep / rho
        meta["gradient"] = "analytic"

        def radial(xis):
            out = np.empty(len(xis))
            for i, xi in enumerate(xis):
                xi = float(xi)
                out[i] = alpha1(xi) * alpha2(xi) * pair_trace_derivative(provider, rho, xi)
            return out / (2.0 * np.pi)

        res = integrate_semiinfinite(radial, 0.0, spec, scale=freq)
        breakdown = {k: float(v) * unit[2] for k, v in decade_breakdown(res.partition).items()}
        return ForceResult(float(res.value) * unit, res.error_estimate, res.converged,
                           res.evaluations, breakdown, meta)

    h = FD_RELATIVE_STEP * rho
    meta["gradient"] = f"central differences, h={FD_RELATIVE_STEP:g}*rho, Richardson"

    def vector(xis):
        out = np.empty((len(xis), 3))
        for i, xi in enumerate(xis):
            xi = float(xi)
            out[i] = alpha1(xi) * alpha2(xi) * _fd_gradient(provider, r1, r2, xi, h)
        return out / (2.0 * np.pi)

    res = integrate_semiinfinite(vector, 0.0, spec, scale=freq)
    breakdown = {k: float(v[2]) for k, v in decade_breakdown(res.partition).items()}
    return ForceResult(np.asarray(res.value, dtype=float), res.error_estimate, res.converged,
                       res.evaluations, breakdown, meta)


def retarded_vdw_limit(alpha1_static, alpha2_static, rho):
    """Large-distance force ``-161 alpha1(0) alpha2(0) / (64 pi^3 rho^8)``.

    Negative values mean attraction.
    """
    return -161.0 * alpha1_static * alpha2_static / (64.0 * np.pi**3 * rho**8)


def london_c6(alpha1, alpha2, spec=None):
    """``C6 = (3 / 16 pi^3) int dxi alpha1(i xi) alpha2(i xi)``; the potential is ``-C6/rho^6``."""
    spec = spec or QuadratureSpec(rel_tol=1e-10)
    freq = min(float(getattr(alpha1, "characteristic_frequency", 1.0)),
               float(getattr(alpha2, "characteristic_frequency", 1.0)))
    res = integrate_semiinfinite(lambda x: np.asarray(alpha1(x)) * np.asarray(alpha2(x)), 0.0,
                                 spec, scale=freq)
    return 3.0 * float(res.value) / (16.0 * np.pi**3)
