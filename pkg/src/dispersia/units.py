"""Natural-unit system used internally by every computation.

All physics routines work with hbar = c = eps0 = mu0 = 1 and a user-declared
reference angular frequency ``omega_ref``.  Lengths are then measured in
``c / omega_ref``, frequencies in ``omega_ref``, polarizabilities as
``alpha / (eps0 * length**3)``, forces in ``hbar * omega_ref / length`` and
pressures in ``hbar * omega_ref / length**3``.

Conversion only happens at the boundary (scenario files, CLI output).
"""
from dataclasses import dataclass

from scipy.constants import c as SPEED_OF_LIGHT
from scipy.constants import epsilon_0 as EPSILON_0
from scipy.constants import hbar as HBAR


@dataclass(frozen=True)
class UnitSystem:
    """SI <-> natural conversion for a given reference angular frequency [rad/s]."""

    omega_ref: float

    def __post_init__(self):
        if not self.omega_ref > 0:
            raise ValueError("omega_ref must be positive")

    @property
    def length(self):
        """Length unit in metres."""
        return SPEED_OF_LIGHT / self.omega_ref

    @property
    def force(self):
        """Force unit in newtons."""
        return HBAR * self.omega_ref / self.length

    @property
    def pressure(self):
        """Pressure unit in pascals."""
        return HBAR * self.omega_ref / self.length**3

    @property
    def polarizability(self):
        """Polarizability unit in C m^2 / V."""
        return EPSILON_0 * self.length**3

    # SI -> natural
    def length_to_natural(self, x):
        return x / self.length

    def frequency_to_natural(self, w):
        return w / self.omega_ref

    def polarizability_to_natural(self, a):
        return a / self.polarizability

    def density_to_natural(self, n):
        return n * self.length**3

    def volume_to_natural(self, v):
        return v / self.length**3

    # natural -> SI
    def length_to_si(self, x):
        return x * self.length

    def frequency_to_si(self, w):
        return w * self.omega_ref

    def polarizability_to_si(self, a):
        return a * self.polarizability

    def density_to_si(self, n):
        return n / self.length**3

    def volume_to_si(self, v):
        return v * self.length**3

    def force_to_si(self, f):
        return f * self.force

    def pressure_to_si(self, p):
        return p * self.pressure
