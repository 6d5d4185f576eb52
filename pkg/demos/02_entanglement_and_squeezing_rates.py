"""
How fast can a coupling entangle or squeeze?
============================================

For an infinitesimal interaction window the best achievable growth rates have
closed forms: the entanglement rate is ``s1 e^l - s2 e^-l`` (with ``l`` the
local squeezing parameter of the state) and the log-squeezing rate is the
coupling capability ``s1 - s2`` times the state squeezability
``2 |x1| |x2|``.  This script evaluates both, shows the rotations that
achieve them, and confirms the optima against a brute-force search.
"""

import numpy as np

from twomode import (
    H0,
    HBS,
    apply_symplectic,
    entanglement,
    evolve,
    local_squeezing_parameter,
    optimal_entanglement_rate,
    optimal_squeezing_rate,
    pure_standard_form,
    squeezed_product_cm,
    squeezing,
    squeezing_capability,
    two_mode_squeezed_cm,
    vacuum_cm,
)
from twomode.core import LocalRotationPair

np.set_printoptions(precision=6, suppress=True)

# %% Reference states and their quantifiers.  The two-mode squeezed state
# with parameter r has log-negativity r and squeezing e^r:

for name, g in [
    ("vacuum", vacuum_cm()),
    ("two-mode squeezed (r = 0.8)", two_mode_squeezed_cm(0.4)),
    ("squeezed light (r = 2.5 in mode 2)", squeezed_product_cm(0.0, 2.5)),
]:
    ent = entanglement(g)
    sq = squeezing(g)
    print(f"{name:36s} E0 = {ent.r:.4f}  negativity = {ent.negativity:.4f}  "
          f"S = {sq.squeezing:.4f}")

# %% From the vacuum the position-position coupling entangles at unit rate;
# the beam splitter cannot entangle unsqueezed states at all:

print("\nvacuum rates:")
print("  X1X2:          ", optimal_entanglement_rate(vacuum_cm(), H0).rate)
print("  beam splitter: ", optimal_entanglement_rate(vacuum_cm(), HBS).rate)

# %% Local squeezing is fuel.  Squeezed light (r = 2.5) stores the local
# squeezing parameter l = 1.25 and boosts the optimal rate to e^1.25:

g_in = squeezed_product_cm(0.0, 2.5)
plan = optimal_entanglement_rate(g_in, H0)
print(f"\nsqueezed light: l = {local_squeezing_parameter(g_in):.4f}, "
      f"rate = {plan.rate:.6f} (= e^1.25 = {np.exp(1.25):.6f})")
print("pre-rotations to apply:", (round(plan.rotations.phi1, 4), round(plan.rotations.phi2, 4)))

# %% The returned rotations really achieve the rate: evolve one short window
# and differentiate, then compare against a coarse search over both angles.

dt = 1e-6
rotated = apply_symplectic(plan.rotations.matrix, g_in)
stepped = apply_symplectic(evolve(H0, dt), rotated)
achieved = (pure_standard_form(stepped).r - pure_standard_form(g_in).r) / dt
print(f"\nfinite-difference rate with the plan rotations: {achieved:.6f}")

best = -np.inf
for phi1 in np.linspace(0, 2 * np.pi, 72, endpoint=False):
    for phi2 in np.linspace(0, 2 * np.pi, 72, endpoint=False):
        pair = LocalRotationPair(phi1, phi2)
        g = apply_symplectic(evolve(H0, dt), apply_symplectic(pair.matrix, g_in))
        best = max(best, (pure_standard_form(g).r - pure_standard_form(g_in).r) / dt)
print(f"best rate over a 72 x 72 angle grid:            {best:.6f}")

# %% Squeezing rates factor into capability (coupling) times squeezability
# (state).  The vacuum is fully squeezable; a state already squeezed in one
# mode alone is a dead end for any bilinear coupling:

print("\nsqueezing capabilities: X1X2 ->", squeezing_capability(H0),
      " beam splitter ->", squeezing_capability(HBS))
for name, g in [("vacuum", vacuum_cm()), ("mode-1 squeezed", squeezed_product_cm(1.0, 0.0))]:
    sq_plan = optimal_squeezing_rate(g, H0)
    print(f"  {name:16s} squeezability = {sq_plan.squeezability:.3f}  "
          f"rate = {sq_plan.rate:.3f}")
