import numpy as np
import pytest

from src.core.errors import DomainError, GeometryError
from src.core.services.datasets import (
    derive_rng,
    derive_seed,
    ellipse_for,
    gen_global_setting,
    gen_local_setting,
    tag_key,
    trimodal_valid_box,
    trimodal_weak_box,
)
from src.models.config import DatasetSpec


@pytest.fixture
def ellipse_spec():
    return DatasetSpec(kind="ellipse_partial", n=5000)


@pytest.fixture
def trimodal_spec():
    return DatasetSpec(kind="trimodal", n=100_000)


def test_global_setting_is_deterministic(ellipse_spec):
    first = gen_global_setting(ellipse_spec, 500, seed=11)
    second = gen_global_setting(ellipse_spec, 500, seed=11)
    other = gen_global_setting(ellipse_spec, 500, seed=12)
    np.testing.assert_array_equal(first, second)
    assert not np.array_equal(first, other)


def test_global_setting_lies_in_ellipse(ellipse_spec):
    points = gen_global_setting(ellipse_spec, seed=3)
    assert points.shape == (5000, 2)
    assert ellipse_for(ellipse_spec).accepts(points).all()


def test_global_setting_covers_upper_left(ellipse_spec):
    points = gen_global_setting(ellipse_spec, seed=3)
    frame = ellipse_for(ellipse_spec).to_frame(points)
    mean = frame.mean(axis=0)
    assert mean[0] < 0.0
    assert mean[1] > 0.0


def test_global_setting_rejects_empty_size(ellipse_spec):
    with pytest.raises(DomainError):
        gen_global_setting(ellipse_spec, 0)


def test_global_setting_raises_when_mixture_misses_ellipse():
    spec = DatasetSpec(
        kind="ellipse_partial",
        mode_fractions=[(8.0, 8.0)],
        mode_weights=[1.0],
        mode_spread=0.05,
    )
    with pytest.raises(GeometryError):
        gen_global_setting(spec, 100, seed=0)


def test_local_setting_label_counts(trimodal_spec):
    points, labels = gen_local_setting(trimodal_spec, seed=5)
    assert points.shape == (100_000, 2)
    counts = np.bincount(labels, minlength=3)
    n = labels.shape[0]
    for count, weight in zip(counts, (0.9, 0.05, 0.05)):
        sigma = np.sqrt(n * weight * (1.0 - weight))
        assert abs(count - n * weight) < 3.0 * sigma


def test_local_setting_modes_sit_on_their_centers(trimodal_spec):
    points, labels = gen_local_setting(trimodal_spec, 20_000, seed=5)
    centers = np.asarray(trimodal_spec.mode_centers)
    for mode in range(3):
        np.testing.assert_allclose(points[labels == mode].mean(axis=0), centers[mode], atol=0.1)


def test_invalid_center_fails_weak_verifier(trimodal_spec):
    centers = np.asarray(trimodal_spec.mode_centers)
    accepted = trimodal_weak_box().accepts(centers)
    assert not accepted[trimodal_spec.invalid_mode]
    assert accepted[0] and accepted[2]
    assert trimodal_valid_box().accepts(centers[[0, 2]]).all()


def test_tag_keys():
    assert tag_key(7) == 7
    assert tag_key("expand") == tag_key("expand")
    assert tag_key("expand") != tag_key("project")


def test_derived_streams_are_reproducible():
    a = derive_rng(9, "sde", 2).standard_normal(100)
    b = derive_rng(9, "sde", 2).standard_normal(100)
    np.testing.assert_array_equal(a, b)
    assert derive_seed(9, "expand", 1) == derive_seed(9, "expand", 1)


def test_distinct_tags_give_distinct_streams():
    tags = [("sde",), ("sde", 1), ("metrics",), ("metrics", "vendi"), ("expand", 0)]
    streams = [derive_rng(4, *tag).integers(0, 2**63, size=10_000) for tag in tags]
    for i in range(len(streams)):
        for j in range(i + 1, len(streams)):
            assert np.intersect1d(streams[i], streams[j]).size == 0
    seeds = {derive_seed(4, *tag) for tag in tags}
    assert len(seeds) == len(tags)
