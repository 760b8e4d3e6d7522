"""Rotating a single photon between sideband modes.

A photon split over the two input sidebands exits split over the two
output beams, with weights set by the diffraction angle and the optical
phase: the device rotates the sideband basis and then separates it
spatially, so photon counting at the outputs analyses the input state.
"""

import numpy as np

from sidebandsim import ModeId, Port, sideband_photon, single_photon_transform

cases = [
    ("photon on the lower sideband", 1.0, 0.0),
    ("photon on the upper sideband", 0.0, 1.0),
    ("balanced superposition", 1 / np.sqrt(2), 1 / np.sqrt(2)),
    ("complex superposition", 0.6, 0.8j),
]

print("pass-through (theta = 0):")
for label, mu, nu in cases:
    out = single_photon_transform(sideband_photon(mu, nu), 0.0, 0.0)
    a1 = out.amp_at(ModeId(Port.OUT1, +1))
    a2 = out.amp_at(ModeId(Port.OUT2, -1))
    print(f"  {label:28s} out1(+1)={a1:+.3f}  out2(-1)={a2:+.3f}  "
          f"norm={out.norm_sq():.12f}")

print("\nbalanced analysis (theta = pi/4), detection probabilities:")
for phi in (0.0, np.pi / 2, np.pi):
    print(f"  phi = {phi:.3f}")
    for label, mu, nu in cases:
        out = single_photon_transform(sideband_photon(mu, nu), np.pi / 4, phi)
        p1 = abs(out.amp_at(ModeId(Port.OUT1, +1))) ** 2
        p2 = abs(out.amp_at(ModeId(Port.OUT2, -1))) ** 2
        print(f"    {label:28s} P(out1)={p1:.4f}  P(out2)={p2:.4f}")

print("\nfull swap (theta = pi/2): the photon changes sideband and beam")
out = single_photon_transform(sideband_photon(0.0, 1.0), np.pi / 2, 0.0)
print(f"  upper-sideband photon -> out2(-1) amplitude "
      f"{out.amp_at(ModeId(Port.OUT2, -1)):+.3f}")
