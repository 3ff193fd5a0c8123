# # Two atoms in free space
#
# The van der Waals force between two atoms falls as rho^-7 (London) at
# short range.  At long range it falls as rho^-8 (retarded).  Near a mirror
# the force picks up a contribution reflected off the surface.

# In[1]:

import numpy as np

from dispersia import (PERFECT_MIRROR, FreeSpaceGreen, LayerStack, OscillatorPolarizability,
                       PlanarGreen, london_c6, retarded_vdw_limit, vdw_force)

atom = OscillatorPolarizability.single(1.0, 1.0)
free = FreeSpaceGreen()

# # Two asymptotes

# In[2]:

c6 = london_c6(atom, atom)
for rho in (1e-3, 1e-2, 1e1, 1e2):
    f = vdw_force(atom, atom, free, [rho, 0, 0], [0, 0, 0]).force[0]
    london = -6 * c6 / rho**7
    retarded = retarded_vdw_limit(1.0, 1.0, rho)
    print(f"rho = {rho:7.0e}   F/London = {f / london:.4f}   F/retarded = {f / retarded:.4f}")

# # Above a mirror
#
# Two atoms side by side at height h.  The surface adds a force component
# along z, so the total force is no longer parallel to the separation.

# In[3]:

above = PlanarGreen(LayerStack.halfspace(PERFECT_MIRROR))
h = 0.5
r1, r2 = np.array([0.4, 0, h]), np.array([0.0, 0, h])
f_free = vdw_force(atom, atom, free, r1, r2).force
f_mirror = vdw_force(atom, atom, above, r1, r2).force
print("free space:  ", f_free)
print("above mirror:", f_mirror)
