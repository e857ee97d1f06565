"""A point dragged by a moving disk: the catching-up integrator versus the
scalar play relation.

The unit disk translates right at speed 2 over [0, 2].  Starting on the
right edge at (1, 0), the constrained state is constant until the left edge
catches it at t = 1 and then rides along: x1(t) = max(1, 2t - 1).  Starting
at the top (0, 1) instead, the state slides around the moving circle; there
the integrator is checked by step-doubling.
"""

import numpy as np

import sweepsim as sw
from sweepsim.presets import drag_scenario

drag = drag_scenario()

# --- edge start: exact play relation -----------------------------------------

traj = sw.run(drag, 0.0, (1.0, 0.0), 2048)
exact = np.array([[max(1.0, 2.0 * t - 1.0), 0.0] for t in traj.times])
err = float(np.max(np.linalg.norm(traj.x_nodes - exact, axis=1)))
print(f"edge start, n=2048: sup node error vs play relation = {err:.2e}")
print("  (the scheme is node-exact here: one projection per step IS the play recursion)")

slack = sw.moreau_residual(traj, drag, 0.0)
print(f"  energy-inequality slack {slack:.4f} >= -{sw.moreau_epsilon(traj):.2e}")
print(f"  per-step increments within bounds: {sw.step_variation_check(traj)}")

# --- top start: curved sliding, convergence by step doubling ------------------

print("\ntop start (0, 1): sliding along the moving circle")
fine = sw.refine(drag, 0.0, (0.0, 1.0), tol=1e-4, n0=256, n_max=2**14)
print(f"  refinement accepted at n={fine.n}; residual history "
      f"{[f'{r:.1e}' for r in fine.residual_history]}")
print(f"  final state x(2) = {fine.x_nodes[-1].round(6).tolist()}")

# --- optional picture ----------------------------------------------------------

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(1, 2, figsize=(10, 4))
    ax[0].plot(traj.times, traj.x_nodes[:, 0], "k", label="integrator")
    ax[0].plot(traj.times, exact[:, 0], "r--", label="play relation")
    ax[0].set_xlabel("t")
    ax[0].set_ylabel("x1")
    ax[0].legend()
    ax[0].set_title("edge start")
    ax[1].plot(fine.x_nodes[:, 0], fine.x_nodes[:, 1], "k")
    ax[1].set_xlabel("x1")
    ax[1].set_ylabel("x2")
    ax[1].set_title("top start (sliding arc)")
    ax[1].axis("equal")
    fig.tight_layout()
    fig.savefig("dragged_state.png", dpi=120)
    print("\nwrote dragged_state.png")
