# # An atom near a surface
#
# A ground-state atom is pulled towards a nearby surface.  Close to the
# surface the force follows the static-image picture and falls as z^-4.
# Far away retardation takes over and it falls as z^-5.  This script sweeps
# the distance and shows the local power law moving between the two regimes.

# In[1]:

import numpy as np

from dispersia import (PERFECT_MIRROR, LayerStack, MaterialModel, OscillatorPolarizability,
                       cp_force_atom, cp_force_atom_nonretarded_check, retarded_mirror_limit)

atom = OscillatorPolarizability.single(1.0, 1.0)   # alpha(0) = 1, resonance at omega_ref
mirror = LayerStack.halfspace(PERFECT_MIRROR)
glass = LayerStack.halfspace(MaterialModel.lorentz(2.0, 1.0))

# # Local exponent across the crossover
#
# Distances are in units of c/omega_ref, so the crossover sits near z = 1.

# In[2]:

z = np.logspace(-2, 2, 9)
fz = np.array([cp_force_atom(atom, mirror, zi).fz for zi in z])
slope = np.gradient(np.log(-fz), np.log(z))
for zi, f, s in zip(z, fz, slope):
    print(f"z = {zi:8.3g}   F = {f: .4e}   d ln|F| / d ln z = {s:6.3f}")

# # Checking both ends
#
# The far end should match the static-polarizability mirror result.  The near
# end should match the nonretarded expression.  Glass is used for the near
# end, which makes the contrast enter through (eps - 1)/(eps + 1).

# In[3]:

far = cp_force_atom(atom, mirror, 100.0).fz
print("far field ratio:", far / retarded_mirror_limit(1.0, 100.0))

near = cp_force_atom(atom, glass, 1e-3).fz
print("near field ratio:", near / cp_force_atom_nonretarded_check(atom, glass, 1e-3).fz)
