import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from oracles import flood_fill_labels, random_mask, same_partition
from wordseg.ccl import BOTTOM, LEFT, RIGHT, TOP, component_stats, label_components
from wordseg.raster import Box

masks = hnp.arrays(bool, hnp.array_shapes(min_dims=2, max_dims=2, min_side=1, max_side=24))


def test_empty():
    assert label_components(np.zeros((3, 3), bool)).n == 0


def test_diagonal_connectivity():
    m = np.zeros((2, 2), bool)
    m[0, 0] = m[1, 1] = True
    assert label_components(m, 8).n == 1
    assert label_components(m, 4).n == 2


def test_rejects_bad_connectivity():
    with pytest.raises(ValueError):
        label_components(np.ones((2, 2), bool), 6)


def test_u_shape_merges_late():
    m = np.array(
        [
            [1, 0, 1, 0, 1],
            [1, 0, 1, 0, 1],
            [1, 1, 1, 1, 1],
        ],
        bool,
    )
    lm = label_components(m, 4)
    assert lm.n == 1
    assert set(np.unique(lm.labels)) == {0, 1}


def test_raster_order_labels():
    m = np.array([[0, 0, 1], [1, 0, 0], [0, 0, 1]], bool)
    lm = label_components(m, 8)
    assert lm.labels.tolist() == [[0, 0, 1], [2, 0, 0], [0, 0, 3]]


@pytest.mark.parametrize("conn", [4, 8])
def test_random_oracle(rng, conn):
    for _ in range(40):
        m = random_mask(rng)
        lm = label_components(m, conn)
        ref, n = flood_fill_labels(m, conn)
        assert lm.n == n
        assert np.array_equal(lm.labels, ref)


@given(masks, st.sampled_from([4, 8]))
def test_partition_property(m, conn):
    lm = label_components(m, conn)
    ref, n = flood_fill_labels(m, conn)
    assert same_partition(lm.labels, ref)
    assert set(np.unique(lm.labels[m])) == set(range(1, lm.n + 1))
    assert (lm.labels[~m] == 0).all()


@given(masks, st.integers(0, 3), st.integers(0, 3))
def test_translation_invariance(m, dy, dx):
    h, w = m.shape
    big = np.zeros((h + 3, w + 3), bool)
    big[dy : dy + h, dx : dx + w] = m
    a = label_components(m, 8).labels
    b = label_components(big, 8).labels[dy : dy + h, dx : dx + w]
    assert same_partition(a, b)


def test_stats_singleton():
    m = np.zeros((5, 5), bool)
    m[3, 2] = True
    (c,) = component_stats(label_components(m))
    assert c.bbox == Box(2, 3, 1, 1)
    assert c.pixel_count == 1
    assert c.touches == frozenset()


def test_stats_first_row():
    m = np.zeros((4, 4), bool)
    m[0] = True
    (c,) = component_stats(label_components(m))
    assert c.bbox == Box(0, 0, 4, 1)
    assert c.pixel_count == 4
    assert c.touches == {LEFT, RIGHT, TOP}


def test_stats_full_image_touches_all():
    (c,) = component_stats(label_components(np.ones((3, 3), bool)))
    assert c.touches == {LEFT, RIGHT, TOP, BOTTOM}


def test_stats_conservation(rng):
    for _ in range(10):
        m = rng.random((64, 64)) < rng.random()
        comps = component_stats(label_components(m, 8))
        assert sum(c.pixel_count for c in comps) == m.sum()
        for c in comps:
            x, y, w, h = c.bbox
            pix = label_components(m, 8).labels == c.label
            ys, xs = np.nonzero(pix)
            assert (xs.min(), ys.min(), xs.max() - xs.min() + 1, ys.max() - ys.min() + 1) == (x, y, w, h)
