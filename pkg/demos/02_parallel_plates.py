# # Pressure between two plates
#
# Two parallel walls attract each other.  For perfect mirrors the pressure is
# -pi^2 / (240 d^4) in natural units.  Real dielectrics give a weaker pull.

# In[1]:

import numpy as np

from dispersia import (PERFECT_MIRROR, LayerStack, MaterialModel, UnitSystem,
                       lifshitz_pressure, mirror_pressure_limit)

mirror = LayerStack.halfspace(PERFECT_MIRROR)
glass = LayerStack.halfspace(MaterialModel.lorentz(3.0, 1.0))

# # Mirrors against the closed form

# In[2]:

for d in (0.1, 1.0, 10.0):
    p = lifshitz_pressure(mirror, d, mirror)
    print(f"d = {d:5.1f}   P = {p.fz: .6e}   ratio = {p.fz / mirror_pressure_limit(d):.9f}")

# # Dielectric walls
#
# The ratio to the mirror value stays below one.  At short separation the
# relevant frequencies lie far above the resonance, where the glass is nearly
# transparent, so the ratio is small.  It grows with d towards the value set
# by the static permittivity.

# In[3]:

for d in np.logspace(-2, 1, 4):
    ratio = lifshitz_pressure(glass, d, glass).fz / mirror_pressure_limit(d)
    print(f"d = {d:7.3f}   P_glass / P_mirror = {ratio:.4f}")

# # SI output
#
# Pick omega_ref = 1e15 rad/s, so one length unit is about 0.3 micrometre.

# In[4]:

units = UnitSystem(1e15)
d_si = 1e-6
p = lifshitz_pressure(mirror, d_si / units.length, mirror).fz
print(f"mirror pressure at 1 um: {units.pressure_to_si(p):.4e} Pa")
