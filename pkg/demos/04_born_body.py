# # A small dielectric body above a mirror
#
# The body is cut into cubic voxels.  The exact force solves the Dyson
# equation inside the body.  The linear force adds up the voxels as if each
# one were alone.  The two agree for a dilute body.  As the susceptibility
# grows, screening inside the body makes the exact force the weaker one.

# In[1]:

import numpy as np

from dispersia import (PERFECT_MIRROR, LayerStack, OscillatorPolarizability, PlanarGreen,
                       QuadratureSpec, Susceptibility, VoxelBody, body_force_exact,
                       body_force_linear)

atom = OscillatorPolarizability.single(1.0, 1.0)
host = PlanarGreen(LayerStack.halfspace(PERFECT_MIRROR))
spec = QuadratureSpec(rel_tol=1e-8)

# # Exact against linear

# In[2]:

for chi0 in (1e-3, 0.1, 0.5, 1.0):
    medium = Susceptibility.with_static_chi(chi0, atom)
    body = VoxelBody.box((2, 2, 2), 0.1, [0, 0, 0.5], medium)
    exact = body_force_exact(host, body, spec).fz
    linear = body_force_linear(host, body, spec).fz
    print(f"chi(0) = {chi0:6.3f}   exact = {exact: .5e}   exact/linear = {exact / linear:.4f}")

# # Refining the grid
#
# The same 0.4-wide cube is cut into 1, 8 and 64 voxels.  The differences
# between successive levels shrink, which is what a converging grid looks like.

# In[3]:

medium = Susceptibility.with_static_chi(1.0, atom)
forces = [body_force_exact(host, VoxelBody.box((n, n, n), 0.4 / n, [0, 0, 0.6], medium),
                           spec).fz for n in (1, 2, 4)]
print("forces:", np.array(forces))
print("ratio of successive differences:", (forces[2] - forces[1]) / (forces[1] - forces[0]))
