"""Degree certification and continuation: periodic orbits emanating from the
switched equilibrium as the forcing is switched on.

At lam = 0 the forced disk system is autonomous with a stable switched
equilibrium x0 = (1, 0); its return map has winding number 1 on a small
square around x0.  The winding number survives along lam, so a periodic
orbit exists near x0 for each small lam, and the computed branch shrinks
back to x0 as lam -> 0.
"""

import numpy as np

import sweepsim as sw
from sweepsim.presets import forced_disk_scenario

scn = forced_disk_scenario()
x0 = np.array([1.0, 0.0])
square = [x0 + (-0.1, -0.1), x0 + (0.1, -0.1), x0 + (0.1, 0.1), x0 + (-0.1, 0.1)]

print("winding number of q - P(V(q)) on the side-0.2 square around x0")
for lam in (0.0, 0.05, 0.1):
    res = sw.degree_2d(scn, lam, 512, square, mesh=64)
    print(f"  lam={lam:<5}: degree {res.degree}  "
          f"(min field norm {res.min_field_norm:.3e}, {res.mesh_points} mesh points)")

print("\ncontinuation branch, warm-started upward in lam")
orbits = sw.continue_branch(scn, [0.05, 0.1, 0.2], x0, 1e-6)
for orbit in orbits:
    print(f"  lam={orbit.lam:<5}: residual {orbit.residual:.1e}   "
          f"max_t |x(t) - x0| = {orbit.seed_distance:.4f}")
print("  distances shrink as lam -> 0: the branch collapses onto x0")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(5.5, 5))
    for orbit in orbits[::-1]:
        xs = orbit.trajectory.x_nodes
        ax.plot(xs[:, 0], xs[:, 1], label=f"lam={orbit.lam}")
    ax.plot(*x0, "k*", ms=10, label="x0")
    ax.axis("equal")
    ax.legend()
    ax.set_title("periodic orbits shrinking onto the switched equilibrium")
    fig.tight_layout()
    fig.savefig("continuation_branch.png", dpi=120)
    print("wrote continuation_branch.png")
