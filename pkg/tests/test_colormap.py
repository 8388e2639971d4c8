import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from terramap.colormap import (CONTINUOUS_MAPS, CategoricalColorMap, ColorMap,
                               QUALITATIVE_12, colorbrewer, create_set_cmap,
                               named_color)

ALL_MAPS = sorted(CONTINUOUS_MAPS)
SCALES = ("lin", "log", "sqrt")


def test_named_color_forms():
    assert named_color("r") == (255, 0, 0, 255)
    assert named_color("b", alpha=40) == (0, 0, 255, 40)
    assert named_color((1, 2, 3)) == (1, 2, 3, 255)
    assert named_color((1, 2, 3, 4)) == (1, 2, 3, 4)
    with pytest.raises(ValueError):
        named_color("purple")
    with pytest.raises(ValueError):
        named_color((1, 2))


def test_unknown_map_rejected():
    with pytest.raises(ValueError, match="unknown colormap"):
        ColorMap("nosuchmap")


def test_alpha_and_levels_validation():
    with pytest.raises(ValueError):
        ColorMap("hot", alpha=300)
    with pytest.raises(ValueError):
        ColorMap("hot", levels=0)


@pytest.mark.parametrize("name", ALL_MAPS)
@pytest.mark.parametrize("scale", SCALES)
def test_endpoints_all_maps_all_scales(name, scale):
    cmap = ColorMap(name)
    table = CONTINUOUS_MAPS[name]
    lo = cmap.to_color(0.0, 10.0, scale)
    hi = cmap.to_color(10.0, 10.0, scale)
    assert lo == tuple(table[0]) + (255,)
    assert hi == tuple(table[-1]) + (255,)


@pytest.mark.parametrize("name", ALL_MAPS)
@pytest.mark.parametrize("scale", SCALES)
def test_argmax_gets_hottest_color(name, scale, rng):
    cmap = ColorMap(name)
    values = rng.uniform(0, 50, 200)
    vmax = float(values.max())
    colors = cmap.to_colors(values, vmax, scale)
    hottest = cmap.to_color(vmax, vmax, scale)
    assert tuple(colors[np.argmax(values)]) == hottest


@pytest.mark.parametrize("scale", SCALES)
def test_t_is_nondecreasing(scale, rng):
    cmap = ColorMap("hot")
    v = np.sort(rng.uniform(0, 100, 500))
    t = cmap._t(v, 100.0, scale)
    assert (np.diff(t) >= 0).all()
    assert t.min() >= 0.0 and t.max() <= 1.0


def test_reversed_suffix():
    fwd = ColorMap("jet")
    rev = ColorMap("jet_r")
    assert rev.to_color(0.0, 1.0) == fwd.to_color(1.0, 1.0)
    assert rev.to_color(1.0, 1.0) == fwd.to_color(0.0, 1.0)


def test_values_clipped_to_range():
    cmap = ColorMap("hot")
    assert cmap.to_color(-5.0, 10.0) == cmap.to_color(0.0, 10.0)
    assert cmap.to_color(25.0, 10.0) == cmap.to_color(10.0, 10.0)


def test_invalid_inputs_rejected():
    cmap = ColorMap("hot")
    with pytest.raises(ValueError):
        cmap.to_color(float("nan"), 10.0)
    with pytest.raises(ValueError):
        cmap.to_color(1.0, 0.0)
    with pytest.raises(ValueError):
        cmap.to_colors([1.0, float("inf")], 10.0)
    with pytest.raises(ValueError):
        cmap.to_color(1.0, 10.0, scale="cubic")


def test_alpha_applied_uniformly(rng):
    cmap = ColorMap("Blues", alpha=90)
    colors = cmap.to_colors(rng.uniform(0, 1, 100), 1.0)
    assert (colors[:, 3] == 90).all()


@pytest.mark.parametrize("levels", [1, 2, 5, 10])
@pytest.mark.parametrize("scale", SCALES)
def test_levels_bound_distinct_outputs(levels, scale, rng):
    cmap = ColorMap("Blues", alpha=255, levels=levels)
    values = rng.uniform(0, 1000, 10_000)
    colors = cmap.to_colors(values, 1000.0, scale)
    distinct = {tuple(c) for c in colors}
    assert len(distinct) <= levels


def test_levels_keep_endpoints():
    cmap = ColorMap("Blues", alpha=255, levels=10)
    plain = ColorMap("Blues", alpha=255)
    assert cmap.to_color(0.0, 1.0) == plain.to_color(0.0, 1.0)
    assert cmap.to_color(1.0, 1.0) == plain.to_color(1.0, 1.0)


@settings(max_examples=100, deadline=None)
@given(v=st.floats(0, 1e6), vmax=st.floats(1e-6, 1e6),
       scale=st.sampled_from(SCALES))
def test_to_color_always_valid_rgba(v, vmax, scale):
    c = ColorMap("viridis").to_color(v, vmax, scale)
    assert len(c) == 4
    assert all(0 <= ch <= 255 for ch in c)


def test_to_colors_matches_to_color(rng):
    cmap = ColorMap("coolwarm", alpha=128)
    values = rng.uniform(0, 7, 50)
    batch = cmap.to_colors(values, 7.0, "sqrt")
    for i in range(len(values)):
        assert tuple(batch[i]) == cmap.to_color(values[i], 7.0, "sqrt")


# -- categorical ------------------------------------------------------------

def test_colorbrewer_distinct_and_sorted():
    cats = ["metro", "bus", "s-tog", "ferry"]
    cmap = colorbrewer(cats, alpha=200)
    assigned = [cmap.to_color(c) for c in sorted(cats)]
    assert len(set(assigned)) == len(cats)
    assert assigned[0] == QUALITATIVE_12[0] + (200,)
    with pytest.raises(KeyError):
        cmap.to_color("tram")


def test_colorbrewer_rejects_over_12():
    with pytest.raises(ValueError):
        colorbrewer([str(i) for i in range(13)])


def test_create_set_cmap():
    cmap = create_set_cmap("jet", ["a", "b", "c"])
    colors = [cmap.to_color(c) for c in "abc"]
    assert len(set(colors)) == 3
    assert colors[0][:3] == tuple(CONTINUOUS_MAPS["jet"][0])
    assert colors[2][:3] == tuple(CONTINUOUS_MAPS["jet"][-1])


def test_categorical_len():
    assert len(CategoricalColorMap({"x": (1, 2, 3, 4)})) == 1
