"""
OBPV against OBSO in a deep build-up
====================================

The attacking side circulates the ball near its own box. The scoring
model sees almost nothing there, while the field value model still
separates useful space from dead space.
"""

import numpy as np

from pitchvalue import EvaluationConfig, PlayerState, Snapshot, event_scalar, obpv_surface, obso_surface
from pitchvalue.data.synthetic import default_mixtures, sample_mixture
from pitchvalue.geometry import ATTACKING, DEFENDING
from pitchvalue.transition import PassSample, fit_transition_kernel

rng = np.random.default_rng(1)
mix = default_mixtures()
passes = []
for area, comps in mix.items():
    a = int(area) - 1
    col, row = divmod(a, 3)
    starts = np.c_[rng.uniform(-52.5 + 17.5 * col, -35 + 17.5 * col, 200),
                   rng.uniform(-34 + 68 / 3 * row, -34 + 68 / 3 * (row + 1), 200)]
    passes += [PassSample(tuple(s), tuple(e)) for s, e in zip(starts, sample_mixture(comps, rng, 200))]
cfg = EvaluationConfig(kernel=fit_transition_kernel(passes))

att = [(-50, 0), (-40, -20), (-42, -6), (-42, 6), (-40, 20),
       (-28, -12), (-30, 2), (-24, 14), (-10, -24), (-8, 0), (-10, 24)]
dfd = [(50, 0), (14, -18), (12, -6), (12, 6), (14, 18),
       (-2, -14), (-4, 0), (-2, 14), (-18, -10), (-20, 2), (-16, 12)]
players = [PlayerState(f"A{i}", ATTACKING, p) for i, p in enumerate(att)]
players += [PlayerState(f"D{i}", DEFENDING, p) for i, p in enumerate(dfd)]
scene = Snapshot(12.0, (-42.0, -6.0), players, "+x")

obso = obso_surface(scene, cfg)
obpv = obpv_surface(scene, cfg)
print("max OBSO %.2e" % obso.max)
print("max OBPV %.3f  (ratio %.0f)" % (obpv.max, obpv.max / max(obso.max, 1e-300)))
print("OBPV at the best attacker's cell: %.3f" % event_scalar(obpv, scene, "player_max"))
r, c = np.unravel_index(obpv.values.argmax(), obpv.grid.shape)
x, y = obpv.grid.centers[r * obpv.grid.nx + c]
print("OBPV peak at (%.1f, %.1f)" % (x, y))
