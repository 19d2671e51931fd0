import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wordseg.synth import LayoutOverflow, SynthSpec, XorShift64Star, splitmix64, synth_page


def test_splitmix64_reference_vector():
    # first output of the reference splitmix64 generator started at state 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF


def test_xorshift_vectors():
    r = XorShift64Star(0)
    assert [r.next() for _ in range(3)] == [0x7BBCB40D550682D0, 0xDE7FE413D00CC9FD, 0xB3C638353C668C91]
    r = XorShift64Star(42)
    assert [r.next() for _ in range(3)] == [0x31B0ECE7C4F697A2, 0x9008A3B1CB686F03, 0x7C7173ABD97BE16F]


def test_randint_range():
    r = XorShift64Star(7)
    values = {r.randint(3, 5) for _ in range(200)}
    assert values == {3, 4, 5}


def test_deterministic():
    spec = SynthSpec(seed=11)
    a, ba = synth_page(spec)
    b, bb = synth_page(SynthSpec(seed=11))
    assert np.array_equal(a, b) and ba == bb
    c, _ = synth_page(SynthSpec(seed=12))
    assert not np.array_equal(a, c)


def test_single_word_box_is_tight():
    spec = SynthSpec(page=(120, 80), lines=1, words_per_line=(1, 1), noise_salt_prob=0.0, seed=5)
    img, boxes = synth_page(spec)
    assert len(boxes) == 1
    ys, xs = np.nonzero(img < 255)
    assert boxes[0] == (xs.min(), ys.min(), xs.max() - xs.min() + 1, ys.max() - ys.min() + 1)


def test_three_by_five_gaps():
    spec = SynthSpec(
        page=(600, 200), lines=3, words_per_line=(5, 5), jitter=0, noise_salt_prob=0.0, seed=3
    )
    img, boxes = synth_page(spec)
    assert len(boxes) == 15
    ink = img < 255
    for i, a in enumerate(boxes):
        assert ink[a.y : a.y + a.h, a.x : a.x + a.w].any()
        for b in boxes[i + 1 :]:
            assert a.intersection(b) == 0
    for line in range(3):
        row = sorted(boxes[5 * line : 5 * line + 5], key=lambda b: b.x)
        for a, b in zip(row, row[1:]):
            assert b.x - (a.x + a.w) >= spec.inter_word_gap[0]


def test_layout_overflow():
    with pytest.raises(LayoutOverflow):
        synth_page(SynthSpec(page=(200, 600)))
    with pytest.raises(LayoutOverflow):
        synth_page(SynthSpec(page=(1400, 100)))


def test_spec_validation():
    with pytest.raises(ValueError):
        SynthSpec(intra_word_gap=(1, 14), inter_word_gap=(14, 20))
    with pytest.raises(ValueError):
        SynthSpec(char_size=(9, 3))


@settings(max_examples=10)
@given(st.integers(0, 2**64 - 1))
def test_truth_boxes_disjoint_and_inked(seed):
    img, boxes = synth_page(SynthSpec(page=(700, 300), lines=4, words_per_line=(5, 7), seed=seed))
    for i, a in enumerate(boxes):
        assert a.inside(700, 300)
        assert (img[a.y : a.y + a.h, a.x : a.x + a.w] < 255).any()
        for b in boxes[i + 1 :]:
            assert a.intersection(b) == 0


def test_noise_rate_close_to_probability():
    clean, _ = synth_page(SynthSpec(noise_salt_prob=0.0, seed=1))
    noisy, _ = synth_page(SynthSpec(noise_salt_prob=0.01, seed=1))
    rate = (clean != noisy).mean()
    assert 0.008 < rate < 0.012
