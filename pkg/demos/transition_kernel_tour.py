"""
Fitting the pass transition kernel
==================================

Draws synthetic passes from the generator's per-area mixtures, fits the
per-area kernel model and compares the fitted field with the fixed
Gaussian transition model for a ball on the left flank.
"""

import numpy as np

from pitchvalue import GaussianTransitionParams, GridSpec, PassSample, fit_transition_kernel, transition_field
from pitchvalue.data.synthetic import default_mixtures, sample_mixture
from pitchvalue.geometry import AreaPartition, PitchSpec

rng = np.random.default_rng(0)
pitch, part = PitchSpec(), AreaPartition()
mixtures = default_mixtures(pitch, part)

passes = []
for area in range(1, part.n_areas + 1):
    col, row = divmod(area - 1, part.rows)
    x0, y0 = -52.5 + 17.5 * col, -34 + 68 / 3 * row
    starts = np.c_[rng.uniform(x0, x0 + 17.5, 300), rng.uniform(y0, y0 + 68 / 3, 300)]
    ends = sample_mixture(mixtures[str(area)], rng, 300)
    passes += [PassSample(tuple(s), tuple(e)) for s, e in zip(starts, ends)]

model = fit_transition_kernel(passes)
print("passes per area after mirroring:", model.counts())
print("bandwidths (m):", {a: round(model.kernel_for(a).h, 2) for a in (1, 2, 8, 17)})

grid = GridSpec()
ball = (-20.0, -25.0)
kde = transition_field(model, ball, grid, norm="sum")
gauss = transition_field(GaussianTransitionParams(), ball, grid, norm="sum")
ys = grid.centers[:, 1].reshape(grid.shape)
xs = grid.centers[:, 0].reshape(grid.shape)
for name, f in [("kernel", kde), ("gaussian", gauss)]:
    print("%-8s mass toward the centre %.2f, mass ahead of the ball %.2f"
          % (name, f[ys > ball[1]].sum(), f[xs > ball[0]].sum()))
