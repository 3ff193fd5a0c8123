"""Voxelized Dyson solver and body forces for small dielectric bodies.

A body is a set of cubic voxels of volume ``dV = pitch**3``.  Each voxel i has
``c_i = chi_i dV`` and local-field factor ``D_i = 1 + chi_i/3`` (spherical
exclusion volume, L = 1/3).  The collocation form of the Dyson equation on the
imaginary axis is

    D_i G_V(s_i, s_j) + xi^2 sum_k Ghat(s_i, s_k) c_k G_V(s_k, s_j) = Ghat(s_i, s_j)

where ``Ghat`` is the host tensor between different voxels and the host
*scattering* tensor on the diagonal (the principal-volume self-integral of
the bulk part vanishes for a sphere; the cube-minus-sphere remainder is
neglected).  Keeping the scattering self-term makes the discrete system
exactly reciprocal for uniform ``chi``.

Everything is done with the scaled tensor ``H = xi^2 G``, so the system matrix
is ``M = D + Hhat C`` and the solution is returned as ``Y = xi^2 G_V``.

The exact force on voxel i is

    F_i = -(1/pi) int dxi a_i [ 1/2 grad Tr H^S(s_i, s_i)
                               - sum_k Tr( d1 Hhat(s_i, s_k) c_k Y_ki ) ]

with ``a_i = c_i / D_i``: the z-derivative of the first-argument of the
voxel-centred Green tensor after one extra application of the Dyson equation.
It coincides with minus the gradient of the discretized interaction energy,
so internal forces cancel pairwise and a body in free space feels no force.
"""
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import CausalityViolation, DomainError, SeparationTooSmall, SingularSystem
from .forces import ForceResult
from .green import BulkGreen, FreeSpaceGreen, GreenProvider, PlanarGreen
from .quadrature import QuadratureSpec, decade_breakdown, integrate_semiinfinite
from .vdw import pair_trace_derivative

MAX_VOXELS = 2000
CONDITION_LIMIT = 1e12
APPROXIMATIONS = ("spherical exclusion volume (L = 1/3)",
                  "cube-minus-sphere self-integral neglected",
                  "bulk subtraction by vacuum part plus local-field factor")


class VoxelBody:
    """Cubic-voxel discretization of a dielectric body.

    Parameters
    ----------
    centers : array_like, shape (N, 3)
        Voxel centres (distinct, pairwise at least one pitch apart).
    pitch : float
        Voxel edge length.
    susceptibility : Susceptibility or sequence of Susceptibility
        Uniform medium or one entry per voxel.  Each must satisfy the
        causality gate.
    label : str
    """

    def __init__(self, centers, pitch, susceptibility, label="body"):
        centers = np.atleast_2d(np.asarray(centers, dtype=float))
        if centers.ndim != 2 or centers.shape[1] != 3 or len(centers) == 0:
            raise ValueError("centers must be a non-empty (N, 3) array")
        if len(centers) > MAX_VOXELS:
            raise ValueError(f"at most {MAX_VOXELS} voxels are supported (dense solve)")
        if not pitch > 0:
            raise ValueError("pitch must be positive")
        if len(centers) > 1:
            diff = centers[:, None, :] - centers[None, :, :]
            dist = np.linalg.norm(diff, axis=-1)
            np.fill_diagonal(dist, np.inf)
            if dist.min() < pitch * (1.0 - 1e-9):
                raise ValueError("voxel centres must be at least one pitch apart")
        if isinstance(susceptibility, (list, tuple)):
            if len(susceptibility) != len(centers):
                raise ValueError("need one susceptibility per voxel")
            media = tuple(susceptibility)
        else:
            media = (susceptibility,) * len(centers)
        for m in media:
            if not m.gate < 1.0:
                raise CausalityViolation(m.gate)
        self.centers = centers
        self.pitch = float(pitch)
        self.media = media
        self.uniform = all(m is media[0] for m in media)
        self.label = label

    def __len__(self):
        return len(self.centers)

    @property
    def voxel_volume(self):
        return self.pitch**3

    @property
    def volume(self):
        return len(self) * self.voxel_volume

    def chi(self, xi):
        """Per-voxel ``chi(i xi)`` as an (N,) array."""
        if self.uniform:
            return np.full(len(self), float(self.media[0].chi(xi)))
        return np.array([float(m.chi(xi)) for m in self.media])

    def translated(self, shift):
        shift = np.asarray(shift, dtype=float)
        media = self.media[0] if self.uniform else list(self.media)
        return VoxelBody(self.centers + shift, self.pitch, media, self.label)

    def with_susceptibility(self, susceptibility):
        return VoxelBody(self.centers, self.pitch, susceptibility, self.label)

    @property
    def frequency_scale(self):
        return min(float(getattr(m.polarizability, "characteristic_frequency", 1.0))
                   for m in set(self.media))

    @classmethod
    def box(cls, shape, pitch, center, susceptibility, label="box"):
        """Rectangular block of ``shape = (nx, ny, nz)`` voxels centred at ``center``."""
        nx, ny, nz = (int(n) for n in shape)
        if min(nx, ny, nz) < 1:
            raise ValueError("box needs at least one voxel per side")
        axes = [(np.arange(n) - 0.5 * (n - 1)) * pitch for n in (nx, ny, nz)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
        return cls(grid + np.asarray(center, dtype=float), pitch, susceptibility, label)

    @classmethod
    def sphere(cls, radius, pitch, center, susceptibility, label="sphere"):
        """Voxels of a cubic lattice whose centres lie inside ``radius``."""
        n = int(np.ceil(radius / pitch)) + 1
        axis = np.arange(-n, n + 1) * pitch
        grid = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)
        inside = grid[np.linalg.norm(grid, axis=1) <= radius * (1.0 + 1e-12)]
        if len(inside) == 0:
            inside = np.zeros((1, 3))
        return cls(inside + np.asarray(center, dtype=float), pitch, susceptibility, label)

    @classmethod
    def from_text(cls, text, media, length_scale=1.0, label="file"):
        """Parse the plain-text voxel format.

        ``#`` starts a comment.  The header holds ``pitch <length>`` and
        ``material <name>`` lines (any order); every other line is a voxel
        centre ``x y z``.  Lengths are divided by ``length_scale``.
        """
        pitch = None
        name = None
        rows = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            words = line.split()
            key = words[0].lower()
            if key == "pitch" and len(words) == 2:
                pitch = float(words[1]) / length_scale
            elif key == "material" and len(words) == 2:
                name = words[1]
            elif len(words) == 3:
                rows.append([float(w) / length_scale for w in words])
            else:
                raise ValueError(f"voxel file line {lineno}: cannot parse {raw!r}")
        if pitch is None or name is None:
            raise ValueError("voxel file needs 'pitch' and 'material' header lines")
        if name not in media:
            raise KeyError(f"voxel file refers to unknown medium {name!r}")
        return cls(np.array(rows), pitch, media[name], label)


def _host_blocks(host, body, xi):
    """``Hhat``: host tensor off the diagonal, host scattering tensor on it, (N, N, 3, 3)."""
    s = body.centers
    n = len(s)
    i, k = np.triu_indices(n, 1)
    blocks = np.empty((n, n, 3, 3))
    blocks[np.arange(n), np.arange(n)] = host.scattering(s, s, xi)
    if len(i):
        upper = host.full(s[i], s[k], xi)
        blocks[i, k] = upper
        blocks[k, i] = np.transpose(upper, (0, 2, 1))
    return blocks


def _as_matrix(blocks):
    n = blocks.shape[0]
    return blocks.transpose(0, 2, 1, 3).reshape(3 * n, 3 * n)


def _as_blocks(matrix):
    n = matrix.shape[0] // 3
    return matrix.reshape(n, 3, n, 3).transpose(0, 2, 1, 3)


@dataclass
class DysonSolution:
    """Interior Green tensor of host plus body at one imaginary frequency.

    Attributes
    ----------
    xi : float
    matrix : ndarray, shape (3N, 3N)
        Blocks ``G_V(s_i, s_j, i xi)``.
    scaled : ndarray
        ``xi^2 * matrix``.
    host : GreenProvider
    body : VoxelBody
    condition : float
        Condition number estimate of the system matrix.
    """

    xi: float
    matrix: np.ndarray
    scaled: np.ndarray
    host: GreenProvider
    body: VoxelBody
    condition: float
    system: np.ndarray = field(repr=False)
    rhs: np.ndarray = field(repr=False)
    _lu: tuple = field(repr=False)
    metadata: dict = field(default_factory=dict)

    def block(self, i, j):
        return self.matrix[3 * i:3 * i + 3, 3 * j:3 * j + 3]

    def asymmetry(self):
        """``max |X - X^T| / max |X|``; zero for an exactly reciprocal solution."""
        scale = np.abs(self.matrix).max()
        if scale == 0:
            return 0.0
        return float(np.abs(self.matrix - self.matrix.T).max() / scale)

    def residual(self):
        """Relative residual of the collocation system ``M Y - Hhat``."""
        norm = np.linalg.norm(self.rhs)
        if norm == 0:
            return 0.0
        return float(np.linalg.norm(self.system @ self.scaled - self.rhs) / norm)

    def column(self, sources):
        """``G_V(s_i, r')`` for external source points ``r'``, shape (P, N, 3, 3).

        Solves with the stored factorization and the host tensor between the
        voxels and each source as right-hand side.
        """
        sources = np.atleast_2d(np.asarray(sources, dtype=float))
        s = self.body.centers
        n = len(s)
        out = np.empty((len(sources), n, 3, 3))
        for p, src in enumerate(sources):
            h = self.host.full(s, np.tile(src, (n, 1)), self.xi).reshape(3 * n, 3)
            y = scipy.linalg.lu_solve(self._lu, h)
            out[p] = y.reshape(n, 3, 3) / self.xi**2
        return out

    def green(self, r, r_prime):
        """``G_V(r, r')`` for two points outside the body (one extra Dyson application)."""
        r = np.asarray(r, dtype=float)
        r_prime = np.asarray(r_prime, dtype=float)
        xi2 = self.xi**2
        s = self.body.centers
        n = len(s)
        c = self.body.chi(self.xi) * self.body.voxel_volume
        y_col = self.column(r_prime[None, :])[0] * xi2
        h_rs = self.host.full(np.tile(r, (n, 1)), s, self.xi)
        h_rr = self.host.full(r[None, :], r_prime[None, :], self.xi)[0]
        total = h_rr - np.einsum("kab,k,kbc->ac", h_rs, c, y_col)
        return total / xi2


def solve_dyson(host, body, xi):
    """Solve the discretized Dyson equation for ``body`` inside ``host``.

    Parameters
    ----------
    host : GreenProvider
    body : VoxelBody
    xi : float
        Imaginary frequency, > 0.

    Returns
    -------
    DysonSolution

    Raises
    ------
    SingularSystem
        If the system matrix is numerically singular.
    """
    if not xi > 0:
        raise DomainError("xi must be positive")
    n = len(body)
    chi = body.chi(xi)
    c = np.repeat(chi * body.voxel_volume, 3)
    d = np.repeat(1.0 + chi / 3.0, 3)
    rhs = _as_matrix(_host_blocks(host, body, xi))
    system = np.diag(d) + rhs * c[None, :]
    condition = float(np.linalg.cond(system))
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise SingularSystem(condition)
    lu = scipy.linalg.lu_factor(system)
    y = scipy.linalg.lu_solve(lu, rhs)
    # one step of iterative refinement
    y = y + scipy.linalg.lu_solve(lu, rhs - system @ y)
    meta = {"approximations": APPROXIMATIONS, "voxels": n}
    return DysonSolution(xi, y / (xi * xi), y, host, body, condition, system, rhs, lu, meta)


def _fd_step(body):
    return 0.25 * body.pitch


def _exact_integrand(host, body, xi):
    sol = solve_dyson(host, body, xi)
    s = body.centers
    n = len(s)
    chi = body.chi(xi)
    c = chi * body.voxel_volume
    a = c / (1.0 + chi / 3.0)
    step = _fd_step(body)
    grads = np.empty((n, n, 3, 3, 3))
    grads[np.arange(n), np.arange(n)] = host.grad_scattering(s, s, xi, step)
    i, k = np.where(~np.eye(n, dtype=bool))
    if len(i):
        grads[i, k] = host.grad_full(s[i], s[k], xi, step)
    y = _as_blocks(sol.scaled)                      # y[k, i] = Y_ki
    cy = c[:, None, None, None] * y                 # c_k Y_ki
    coupling = np.einsum("ikcab,kiba->ic", grads, cy)
    self_term = 0.5 * host.trace_scattering_gradient(s, xi, step)
    per_voxel = -(a[:, None] * (self_term - coupling)) / np.pi
    return per_voxel.sum(axis=0)


def _geometry_scale(host, body):
    if isinstance(host, PlanarGreen):
        return 1.0 / (2.0 * max(body.centers[:, 2].min(), body.pitch))
    return 1.0 / body.pitch


def _integrate_vector(integrand, scale, spec, meta):
    def vector(xis):
        return np.array([integrand(float(xi)) for xi in xis])

    res = integrate_semiinfinite(vector, 0.0, spec, scale=scale)
    breakdown = {k: float(v[2]) for k, v in decade_breakdown(res.partition).items()}
    return ForceResult(np.asarray(res.value, dtype=float), res.error_estimate, res.converged,
                       res.evaluations, breakdown, meta)


def body_force_exact(host, body, spec=None):
    """All-order dispersion force on ``body`` from the discretized Dyson solution.

    For closed-form hosts (vacuum, bulk, perfect-mirror image) the first-argument
    gradients are analytic; other planar hosts use Richardson-extrapolated
    central differences with step ``pitch/4``.

    Returns
    -------
    ForceResult
        ``metadata["approximations"]`` lists the discretization approximations.
    """
    spec = spec or QuadratureSpec()
    meta = {"quantity": "body-force-exact", "voxels": len(body),
            "approximations": APPROXIMATIONS,
            "gradient": "analytic" if host.analytic_gradient else "central differences, pitch/4"}
    if all(m.density == 0 for m in body.media):
        return ForceResult(np.zeros(3), 0.0, True, 0, {}, meta)
    scale = min(body.frequency_scale, _geometry_scale(host, body))
    return _integrate_vector(lambda xi: _exact_integrand(host, body, xi), scale, spec, meta)


def body_force_linear(host, body, spec=None):
    """Force to first order in ``chi``: ``-(1/2pi) int dxi sum_i c_i grad Tr H^S(s_i, s_i)``.

    No Dyson solve; each voxel feels the host scattering field independently.
    """
    spec = spec or QuadratureSpec()
    meta = {"quantity": "body-force-linear", "voxels": len(body)}
    if all(m.density == 0 for m in body.media):
        return ForceResult(np.zeros(3), 0.0, True, 0, {}, meta)
    step = _fd_step(body)

    def integrand(xi):
        c = body.chi(xi) * body.voxel_volume
        grad = host.trace_scattering_gradient(body.centers, xi, step)
        return -(c[:, None] * grad).sum(axis=0) / (2.0 * np.pi)

    scale = min(body.frequency_scale, _geometry_scale(host, body))
    return _integrate_vector(integrand, scale, spec, meta)


def min_separation(body1, body2):
    diff = body1.centers[:, None, :] - body2.centers[None, :, :]
    return float(np.linalg.norm(diff, axis=-1).min())


def crossing_force(host, body1, body2, spec=None):
    """Force on ``body1`` bilinear in the susceptibilities of two weak bodies.

    ``(1/2pi) int dxi sum_i sum_j c_i c_j grad_1 Tr[H(s_i, s_j) H(s_j, s_i)]``.

    Raises
    ------
    SeparationTooSmall
        If any two voxels of different bodies are closer than three pitches.
    """
    limit = 3.0 * max(body1.pitch, body2.pitch)
    sep = min_separation(body1, body2)
    if sep < limit:
        raise SeparationTooSmall(f"bodies are {sep:.4g} apart; at least {limit:.4g} required")
    spec = spec or QuadratureSpec()
    meta = {"quantity": "crossing-force", "min_separation": sep}
    s1, s2 = body1.centers, body2.centers
    n1, n2 = len(s1), len(s2)
    i, j = np.meshgrid(np.arange(n1), np.arange(n2), indexing="ij")
    i, j = i.ravel(), j.ravel()
    d = s1[i] - s2[j]
    rho = np.linalg.norm(d, axis=1)
    unit = d / rho[:, None]
    radial = isinstance(host, (FreeSpaceGreen, BulkGreen))
    step = 0.25 * min(body1.pitch, body2.pitch)
    meta["gradient"] = "analytic" if (radial or host.analytic_gradient) else "central differences"

    def integrand(xi):
        cc = (body1.chi(xi) * body1.voxel_volume)[i] * (body2.chi(xi) * body2.voxel_volume)[j]
        if radial:
            deriv = np.array([pair_trace_derivative(host, r, xi) for r in rho])
            return (cc * deriv) @ unit / (2.0 * np.pi)
        grad = host.grad_full(s1[i], s2[j], xi, step)
        h21 = host.full(s2[j], s1[i], xi)
        trace = 2.0 * np.einsum("ncab,nba->nc", grad, h21)
        return cc @ trace / (2.0 * np.pi)

    if all(m.density == 0 for m in body1.media + body2.media):
        return ForceResult(np.zeros(3), 0.0, True, 0, {}, meta)
    scale = min(body1.frequency_scale, body2.frequency_scale, 1.0 / float(rho.min()))
    return _integrate_vector(integrand, scale, spec, meta)
