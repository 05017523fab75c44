"""
Pitch control on a single scene
===============================

Builds an 11v11 snapshot, integrates the control field on the default
50x32 grid and prints how the pitch splits between the two teams. The
field is written to ``pitch_control.csv`` / ``pitch_control.ppm``.
"""

import numpy as np

from pitchvalue import GridSpec, PlayerState, Snapshot, ppcf_at, ppcf_field
from pitchvalue.export import write_heatmap_csv, write_heatmap_ppm
from pitchvalue.geometry import ATTACKING, DEFENDING

rng = np.random.default_rng(4)

# attackers in a 4-3-3 shape moving forward, defenders in a compact block
att = np.array([(-48, 0), (-30, -22), (-32, -7), (-32, 7), (-30, 22),
                (-12, -12), (-15, 0), (-12, 12), (8, -25), (12, 0), (8, 25)], dtype=float)
dfd = np.array([(50, 0), (28, -18), (26, -6), (26, 6), (28, 18),
                (14, -12), (12, 0), (14, 12), (2, -20), (4, 0), (2, 20)], dtype=float)
players = [PlayerState(f"A{i}", ATTACKING, p, (3.0, 0.0)) for i, p in enumerate(att)]
players += [PlayerState(f"D{i}", DEFENDING, p, (-1.0, 0.0)) for i, p in enumerate(dfd)]
scene = Snapshot(0.0, (-15.0, 0.0), players, "+x")

grid = GridSpec()
field = ppcf_field(scene, grid)
print("grid", grid.shape, "cells", grid.size)
print("attacking share of the pitch: %.3f" % field.attack.mean())
print("defending share of the pitch: %.3f" % field.defend.mean())
print("max attack + defend: %.6f" % (field.attack + field.defend).max())

# the grid agrees with the pointwise evaluation
r, c = 10, 30
a, d = ppcf_at(scene, grid.centers[r * grid.nx + c])
print("cell (%d, %d): grid %.4f, pointwise %.4f" % (r, c, field.attack[r, c], a))

write_heatmap_csv("pitch_control.csv", field.attack)
write_heatmap_ppm("pitch_control.ppm", field.attack, vmax=1.0)
