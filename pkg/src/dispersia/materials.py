"""Material response on the imaginary frequency axis.

Everything here is evaluated at ``omega = i*xi`` with ``xi >= 0``, where all
response functions are real, positive and monotonically decreasing.  Damping
constants are accepted for completeness; on the imaginary axis a Lorentz term
``Omega**2 / (w0**2 - w**2 - i*gamma*w)`` becomes
``Omega**2 / (w0**2 + xi**2 + gamma*xi)``, so the vanishing-damping limit used
for perturbative polarizabilities is simply ``gamma = 0``.

Natural units (eps0 = 1) are used throughout: a polarizability is stored as
``alpha / eps0``, which has the dimension of a volume.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import CausalityViolation, DomainError


def _check_xi(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0) or np.any(np.isnan(xi)):
        raise DomainError("imaginary frequency xi must be >= 0")
    return xi


def _normalize_terms(terms):
    out = []
    for term in terms:
        term = tuple(float(v) for v in term)
        if len(term) == 2:
            term = term + (0.0,)
        if len(term) != 3:
            raise ValueError(f"oscillator term must be (Omega, omega0[, gamma]), got {term}")
        out.append(term)
    return tuple(out)


def _lorentz_sum(terms, xi):
    total = np.zeros_like(xi)
    for coupling, resonance, gamma in terms:
        total = total + coupling**2 / (resonance**2 + xi**2 + gamma * xi)
    return total


@dataclass(frozen=True)
class OscillatorPolarizability:
    """Ground-state atomic polarizability ``alpha0 * sum Omega_k^2 / (w_k^2 + xi^2)``.

    Parameters
    ----------
    terms : sequence of (Omega_k, omega_k) or (Omega_k, omega_k, gamma_k)
        Coupling and resonance angular frequencies (natural units).
    alpha0 : float
        Overall polarizability scale (``alpha/eps0`` per unit ``Omega^2/omega^2``).
    """

    terms: tuple
    alpha0: float = 1.0

    def __post_init__(self):
        terms = _normalize_terms(self.terms)
        if not terms:
            raise ValueError("at least one oscillator term is required")
        for coupling, resonance, gamma in terms:
            if not (resonance > 0 and coupling != 0 and gamma >= 0):
                raise ValueError("need omega_k > 0, Omega_k^2 > 0 and gamma_k >= 0")
        if not self.alpha0 > 0:
            raise ValueError("alpha0 must be positive")
        object.__setattr__(self, "terms", terms)

    def __call__(self, xi):
        return polarizability_iw(self, xi)

    @property
    def static(self):
        """Static polarizability alpha(0)."""
        return float(self(0.0))

    @property
    def characteristic_frequency(self):
        """Lowest resonance frequency; sets the decay scale of alpha(i xi)."""
        return min(resonance for _, resonance, _ in self.terms)

    @classmethod
    def single(cls, static, omega0):
        """One-oscillator model with given static polarizability and resonance."""
        return cls(((omega0, omega0),), alpha0=static)


def polarizability_iw(model, xi):
    """Evaluate ``alpha(i xi)`` for an :class:`OscillatorPolarizability`.

    Raises
    ------
    DomainError
        If any ``xi`` is negative.
    """
    xi = _check_xi(xi)
    value = model.alpha0 * _lorentz_sum(model.terms, xi)
    return float(value) if value.ndim == 0 else value


@dataclass(frozen=True)
class MaterialModel:
    """Drude-Lorentz (or tabulated) permittivity and permeability on the imaginary axis.

    ``eps(i xi) = eps_inf + sum Omega^2 / (w0^2 + xi^2 + gamma*xi)``, likewise
    for ``mu`` (with background 1).  ``eps_inf > 1`` gives a nondispersive
    background, mostly useful for tests with a constant permittivity.  A
    tabulated permittivity (pairs ``(xi, eps)``) is interpolated with a
    monotone cubic and clipped at 1; above the table it decays like a
    Lorentz tail ``(eps_last - 1) * (xi_last / xi)**2`` and below it is held
    at the first value.
    """

    eps_terms: tuple = ()
    mu_terms: tuple = ()
    label: str = "vacuum"
    table: tuple = None
    eps_inf: float = 1.0
    _interp: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "eps_terms", _normalize_terms(self.eps_terms))
        object.__setattr__(self, "mu_terms", _normalize_terms(self.mu_terms))
        if not self.eps_inf >= 1:
            raise ValueError("eps_inf must be >= 1")
        for terms in (self.eps_terms, self.mu_terms):
            for _, resonance, gamma in terms:
                if resonance < 0 or gamma < 0:
                    raise ValueError("resonance and damping must be non-negative")
        if self.table is not None:
            pts = np.asarray(self.table, dtype=float)
            if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
                raise ValueError("table must be a list of (xi, eps) pairs")
            if np.any(np.diff(pts[:, 0]) <= 0) or pts[0, 0] < 0:
                raise ValueError("table xi values must be non-negative and increasing")
            if np.any(pts[:, 1] < 1):
                raise ValueError("tabulated eps(i xi) must be >= 1")
            object.__setattr__(self, "table", tuple(map(tuple, pts)))
            object.__setattr__(self, "_interp", PchipInterpolator(pts[:, 0], pts[:, 1]))

    @property
    def is_vacuum(self):
        return (not self.eps_terms and not self.mu_terms and self.table is None
                and self.eps_inf == 1.0)

    def eps(self, xi):
        return permittivity_iw(self, xi)

    def mu(self, xi):
        xi = _check_xi(xi)
        value = 1.0 + _lorentz_sum(self.mu_terms, xi)
        return float(value) if value.ndim == 0 else value

    @classmethod
    def lorentz(cls, eps_static, omega0, gamma=0.0, label="lorentz"):
        """Single Lorentz pole with ``eps(0) = eps_static`` and resonance ``omega0``."""
        if eps_static < 1:
            raise ValueError("eps_static must be >= 1")
        coupling = np.sqrt(eps_static - 1.0) * omega0
        terms = ((coupling, omega0, gamma),) if eps_static > 1 else ()
        return cls(eps_terms=terms, label=label)

    @classmethod
    def constant(cls, eps, label="constant"):
        """Nondispersive medium with ``eps(i xi) = eps`` at every frequency."""
        return cls(eps_inf=eps, label=label)


VACUUM = MaterialModel()


def permittivity_iw(model, xi):
    """Evaluate ``eps(i xi)`` for a :class:`MaterialModel` (>= 1 for passive media)."""
    xi = _check_xi(xi)
    if model.table is not None:
        pts = np.asarray(model.table)
        x_lo, x_hi = pts[0, 0], pts[-1, 0]
        inside = np.clip(xi, x_lo, x_hi)
        value = np.maximum(model._interp(inside), 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = 1.0 + (pts[-1, 1] - 1.0) * (x_hi / np.where(xi > 0, xi, 1.0))**2
        value = np.where(xi > x_hi, tail, value)
        value = value + (model.eps_inf - 1.0) + _lorentz_sum(model.eps_terms, xi)
    else:
        value = model.eps_inf + _lorentz_sum(model.eps_terms, xi)
    return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True)
class IdealReflector:
    """Interface marker with fixed, frequency-independent reflection amplitudes.

    The default (``r_s = -1``, ``r_p = +1``) is a perfect mirror; other values
    are useful for limit tests.  It can only terminate a layer stack.
    """

    r_s: float = -1.0
    r_p: float = 1.0
    label: str = "mirror"


PERFECT_MIRROR = IdealReflector()


@dataclass(frozen=True)
class Susceptibility:
    """Clausius-Mosotti susceptibility of a medium of polarizable atoms.

    ``chi(i xi) = eta*alpha / (1 - eta*alpha/3)`` (eps0 = 1).  Construct through
    :func:`clausius_mosotti`, which enforces the causality gate.
    """

    density: float
    polarizability: object

    def chi(self, xi):
        x = self.density * np.asarray(self.polarizability(xi))
        value = x / (1.0 - x / 3.0)
        return float(value) if np.ndim(value) == 0 else value

    def local_field_factor(self, xi):
        """``1 + chi/3``, the local-field enhancement of the force."""
        return 1.0 + np.asarray(self.chi(xi)) / 3.0

    def bare(self, xi):
        """``eta * alpha(i xi)``: the susceptibility without local-field correction."""
        return self.density * np.asarray(self.polarizability(xi))

    @property
    def gate(self):
        """Causality gate value ``eta*alpha(0)/3``; valid media have gate < 1."""
        return self.density * float(self.polarizability(0.0)) / 3.0

    @classmethod
    def with_static_chi(cls, chi0, polarizability):
        """Medium whose static susceptibility equals ``chi0``."""
        return clausius_mosotti(polarizability_from_chi(chi0) / polarizability(0.0),
                                polarizability)


def clausius_mosotti(density, polarizability):
    """Clausius-Mosotti susceptibility for number density ``density``.

    Raises
    ------
    CausalityViolation
        Unless ``density * alpha(0) / 3 < 1``; for larger values ``chi`` would
        have a pole in the upper half-plane.
    """
    if density < 0:
        raise DomainError("number density must be non-negative")
    gate = density * float(polarizability(0.0)) / 3.0
    if not gate < 1.0:
        raise CausalityViolation(gate)
    return Susceptibility(float(density), polarizability)


def polarizability_from_chi(chi):
    """Invert Clausius-Mosotti: ``eta*alpha = chi / (1 + chi/3)``."""
    chi = np.asarray(chi, dtype=float)
    if np.any(chi <= -3):
        raise DomainError("chi must exceed -3")
    value = chi / (1.0 + chi / 3.0)
    return float(value) if value.ndim == 0 else value
