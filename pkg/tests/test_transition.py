import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pitchvalue.errors import DegenerateData, DegenerateField, InsufficientData, InvalidArgument, InvalidFormat
from pitchvalue.geometry import AreaPartition, GridSpec, PitchSpec, area_of, build_grid
from pitchvalue.transition import (GaussianTransitionParams, KernelModel, PassSample, fit_transition_kernel,
                                   gaussian_transition_at, kde_at, silverman_bandwidth, transition_field)

from helpers import fixture_kernel, sample_passes


# ---- oracles ----------------------------------------------------------------

def mixture_density(comps, pts):
    pts = np.asarray(pts, dtype=float)
    out = np.zeros(len(pts))
    for c in comps:
        d2 = ((pts - np.asarray(c["mean"])) ** 2).sum(axis=1)
        out += c["weight"] * np.exp(-d2 / (2 * c["sd"] ** 2)) / (2 * math.pi * c["sd"] ** 2)
    return out


def peaked_mixtures(part=AreaPartition()):
    """One dominant and one minor component per area, far enough apart that
    the mixture has a single clear mode."""
    out = {}
    for a in range(1, part.n_areas + 1):
        col, row = divmod(a - 1, part.rows)
        cx = -52.5 + (col + 0.5) * 17.5
        cy = -34 + (row + 0.5) * 68 / 3
        main = [float(np.clip(cx + 8, -36, 36)), 0.5 * cy]
        minor = [float(np.clip(cx - 12, -40, 40)), float(np.clip(cy + (12 if cy <= 0 else -12), -22, 22))]
        out[str(a)] = [{"weight": 0.75, "mean": main, "sd": 6.0},
                       {"weight": 0.25, "mean": minor, "sd": 5.0}]
    return out


def points_with_variance(n, var):
    """n points whose per-axis unbiased variances are both `var`."""
    rng = np.random.default_rng(n)
    p = rng.normal(size=(n, 2))
    p -= p.mean(axis=0)
    p /= p.std(axis=0, ddof=1)
    return p * math.sqrt(var)


# ---- bandwidth -----------------------------------------------------------------

def test_silverman_two_points():
    # two points (0, 0) and (sqrt2, sqrt2): unbiased variance 1 on both axes
    pts = [(0.0, 0.0), (math.sqrt(2), math.sqrt(2))]
    h = silverman_bandwidth(pts)
    assert h == pytest.approx(1.5 ** -0.2 * 2, abs=1e-9)
    assert h == pytest.approx(1.844216, abs=1e-6)


def test_silverman_hundred_points():
    h = silverman_bandwidth(points_with_variance(100, 4.0))
    assert h == pytest.approx(75 ** -0.2 * 2 * 2, abs=1e-9)
    assert h == pytest.approx(1.686738, abs=1e-6)


def test_silverman_errors():
    with pytest.raises(InsufficientData):
        silverman_bandwidth([(1.0, 2.0)])
    with pytest.raises(DegenerateData):
        silverman_bandwidth([(1.0, 2.0)] * 5)


@given(st.integers(2, 500), st.floats(0.01, 100), st.floats(0.1, 10))
def test_silverman_scale_equivariant(n, var, c):
    pts = points_with_variance(n, var)
    assert silverman_bandwidth(pts * c) == pytest.approx(c * silverman_bandwidth(pts), rel=1e-9)


def test_bandwidth_decreases_with_n():
    hs = [silverman_bandwidth(points_with_variance(n, 9.0)) for n in range(2, 400)]
    assert np.all(np.diff(hs) < 0)


# ---- fitting ---------------------------------------------------------------------

def test_single_pass_mirrored():
    m = fit_transition_kernel([PassSample((0.0, 20.0), (5.0, 12.0))])
    a, b = area_of((0.0, 20.0)), area_of((0.0, -20.0))
    assert m.counts()[a] == 1 and m.counts()[b] == 1
    assert sum(m.counts().values()) == 2
    assert tuple(m.areas[b].samples[0]) == (5.0, -12.0)


def test_central_pass_mirror_stays_in_area():
    m = fit_transition_kernel([PassSample((0.0, 2.0), (5.0, 1.0))] * 3)
    assert m.counts()[area_of((0.0, 0.0))] == 6


def test_mirror_off():
    m = fit_transition_kernel([PassSample((0.0, 10.0), (5.0, 12.0))] * 2
                              + [PassSample((0.0, 20.0), (1.0, 1.0))], mirror=False)
    assert sum(m.counts().values()) == 3


def test_empty_input():
    with pytest.raises(InsufficientData):
        fit_transition_kernel([])


def test_sparse_area_uses_pooled():
    passes = sample_passes(60, seed=1)
    # area 1 passes mirror into area 3, leaving 10 samples in each
    sparse = [p for p in passes if area_of(p.start) not in (1, 3)] + [p for p in passes if area_of(p.start) == 1][:10]
    m = fit_transition_kernel(sparse)
    assert m.counts()[1] == 10 and m.counts()[3] == 10
    assert m.kernel_for(1) is m.pooled
    assert m.kernel_for(5) is m.areas[5]
    assert m.pooled.n == 2 * len(sparse)


def test_counts_even_with_mirror():
    m = fixture_kernel()
    part = m.partition
    c = m.counts()
    for a in range(1, 19):
        # an area and its mirror share the doubled passes
        pair = c[a] + (c[part.mirror(a)] if part.mirror(a) != a else 0)
        assert pair % 2 == 0


def test_json_round_trip(tmp_path):
    m = fixture_kernel()
    path = tmp_path / "k.json"
    m.save(path)
    back = KernelModel.load(path)
    assert back.counts() == m.counts()
    for a in range(1, 19):
        assert back.kernel_for(a).h == m.kernel_for(a).h
        assert np.array_equal(back.kernel_for(a).samples, m.kernel_for(a).samples)
    doc = json.loads(path.read_text())
    doc["kernel_model_version"] = 99
    with pytest.raises(InvalidFormat):
        KernelModel.from_json(doc)
    path.write_text("{not json")
    with pytest.raises(InvalidFormat):
        KernelModel.load(path)


# ---- density -----------------------------------------------------------------------

def test_kde_single_sample():
    m = fit_transition_kernel([PassSample((0.0, 0.0), (0.0, 0.0)), PassSample((0.0, 0.0), (2.0, 2.0))],
                              mirror=False, min_samples=0)
    k = m.kernel_for(area_of((0.0, 0.0)))
    one = type(k)(samples=np.zeros((1, 2)), h=1.0, fitted=True)
    assert one.density([(0.0, 0.0)])[0] == pytest.approx(1 / (2 * math.pi), abs=1e-12)
    assert 1 / (2 * math.pi) == pytest.approx(0.159155, abs=1e-6)


def test_kde_unknown_area():
    with pytest.raises(InvalidArgument):
        kde_at(fixture_kernel(), 19, (0.0, 0.0))
    with pytest.raises(InvalidArgument):
        kde_at(fixture_kernel(), 0, (0.0, 0.0))


def test_kde_scalar_and_vector():
    m = fixture_kernel()
    pts = np.array([[0.0, 0.0], [10.0, -5.0]])
    v = kde_at(m, 8, pts)
    assert v.shape == (2,) and np.all(v > 0)
    assert kde_at(m, 8, pts[1]) == pytest.approx(v[1], abs=1e-15)


def test_kde_grid_matches_pointwise():
    m = fixture_kernel()
    g = GridSpec()
    grid = m.density_grid(11, g).ravel()
    assert np.allclose(grid, kde_at(m, 11, g.centers), rtol=1e-12, atol=1e-15)


def test_kde_central_symmetry():
    rng = np.random.default_rng(2)
    half = rng.normal(0, 5, size=(40, 2)) + [3.0, -1.0]
    pts = np.vstack([half, 2 * np.array([3.0, -1.0]) - half])
    k = type(fixture_kernel().pooled)(samples=pts, h=silverman_bandwidth(pts), fitted=True)
    q = rng.uniform(-20, 20, size=(30, 2))
    assert np.allclose(k.density(q), k.density(2 * np.array([3.0, -1.0]) - q), rtol=1e-12)


@pytest.mark.parametrize("area", [1, 8, 17])
def test_kde_unit_mass(area):
    m = fixture_kernel()
    k = m.kernel_for(area)
    # 0.5 m midpoint quadrature over the pitch padded by 6 bandwidths
    pad = 6 * k.h
    wide = PitchSpec(105 + 2 * pad, 68 + 2 * pad)
    g = build_grid(wide, int(round(wide.length / 0.5)), int(round(wide.width / 0.5)))
    dx, dy = g.cell_size
    mass = k.density_grid(g).sum() * dx * dy
    assert mass == pytest.approx(1.0, abs=0.01)


def test_mode_recovery():
    mix = peaked_mixtures()
    m = fit_transition_kernel(sample_passes(2000, seed=3, mixtures=mix), mirror=False)
    g = build_grid(nx=420, ny=272)
    for a in range(1, 19):
        truth = g.centers[np.argmax(mixture_density(mix[str(a)], g.centers))]
        found = g.centers[np.argmax(m.kernel_for(a).density_grid(g))]
        assert np.hypot(*(truth - found)) <= 2.0, a


# ---- transition fields -----------------------------------------------------------------

def test_gaussian_weight():
    p = GaussianTransitionParams()
    assert gaussian_transition_at((3, 4), (3, 4), p) == 1.0
    assert gaussian_transition_at((0, 0), (14, 0), p) == pytest.approx(math.exp(-0.5), abs=1e-12)
    assert math.exp(-0.5) == pytest.approx(0.60653, abs=1e-5)
    with pytest.raises(InvalidArgument):
        GaussianTransitionParams(0)


@given(st.floats(0, 2 * math.pi), st.floats(0, 40))
def test_gaussian_isotropic(theta, r):
    ball = np.array([5.0, -3.0])
    a = gaussian_transition_at(ball, ball + [r, 0.0])
    b = gaussian_transition_at(ball, ball + r * np.array([math.cos(theta), math.sin(theta)]))
    assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


def test_gaussian_field_peak_cell():
    g = GridSpec()
    ball = (12.3, -7.7)
    f = transition_field(GaussianTransitionParams(), ball, g, norm="max")
    assert f[g.cell_of(ball)] == pytest.approx(1.0, abs=1e-12)
    assert f.max() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("source", ["gaussian", "kernel"])
def test_sum_normalisation(source):
    src = GaussianTransitionParams() if source == "gaussian" else fixture_kernel()
    f = transition_field(src, (-20.0, 10.0), GridSpec(), norm="sum")
    assert f.sum() == pytest.approx(1.0, abs=1e-9)


def test_transition_field_errors():
    with pytest.raises(InvalidArgument):
        transition_field(GaussianTransitionParams(), (0, 0), GridSpec(), norm="l2")
    with pytest.raises(InvalidArgument):
        transition_field("kernel", (0, 0), GridSpec())
    with pytest.raises(DegenerateField):
        transition_field(GaussianTransitionParams(0.01), (0, 0), GridSpec())


def test_kernel_field_uses_ball_area():
    m = fixture_kernel()
    g = GridSpec()
    f = transition_field(m, (-44.0, -28.0), g, norm="max")
    raw = m.density_grid(1, g)
    assert np.allclose(f, raw / raw.max(), rtol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([2, 5, 8, 11, 14, 17]), st.floats(0, 1))
def test_mirrored_kernel_symmetric_on_centreline(area, u):
    m = fixture_kernel()
    col = (area - 1) // 3
    ball = (-52.5 + (col + u) * 17.5, 0.0)
    g = GridSpec()
    f = transition_field(m, ball, g, norm="max")
    assert np.allclose(f, f[::-1], atol=1e-9, rtol=0)


def test_side_area_mass_toward_interior():
    m = fixture_kernel()
    g = GridSpec()
    ys = np.repeat(g.y_centers[:, None], g.nx, axis=1)
    for ball in [(-44.0, -28.0), (10.0, 28.0)]:
        f = transition_field(m, ball, g, norm="sum")
        inward = np.sign(-ball[1])
        toward = f[np.sign(ys - ball[1]) == inward].sum()
        assert toward > 0.6


def test_backward_suppressed():
    # equal-width windows behind and ahead of the area centre; the last column's
    # forward component is capped short of the goal line so it is left out
    m = fixture_kernel()
    g = GridSpec()
    xs = np.repeat(g.x_centers[None, :], g.ny, axis=0)
    for area in range(1, 16):
        col, row = divmod(area - 1, 3)
        bx, by = -52.5 + (col + 0.5) * 17.5, -34 + (row + 0.5) * 68 / 3
        w = min(17.5, 52.5 - abs(bx))
        f = transition_field(m, (bx, by), g, norm="max")
        assert f[(xs < bx) & (xs >= bx - w)].mean() < f[(xs > bx) & (xs <= bx + w)].mean(), area
