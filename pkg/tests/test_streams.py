import math
import pathlib

import numpy as np
import pytest

import uwajam
from uwajam.numerics import RandomStream, sample_poisson, split_stream


def test_same_identity_reproduces_sequence():
    a = RandomStream(12345, 7)
    b = RandomStream(12345, 7)
    assert np.array_equal(a.uniforms(1000), b.uniforms(1000))
    assert a.normal_pair() == b.normal_pair()
    assert a.poisson(5.0) == b.poisson(5.0)


def test_split_deterministic_and_distinct():
    parent = RandomStream(99)
    c1 = split_stream(parent, 5)
    c2 = split_stream(parent, 5)
    assert c1.stream_id == c2.stream_id
    assert np.array_equal(c1.normals(10), c2.normals(10))
    ids = {split_stream(parent, i).stream_id for i in range(10_000)}
    assert len(ids) == 10_000  # distinct indices never collide


def test_split_streams_uncorrelated():
    parent = RandomStream(1)
    x = parent.split(0).uniforms(10_000)
    y = parent.split(1).uniforms(10_000)
    rho = np.corrcoef(x, y)[0, 1]
    assert abs(rho) < 4.0 / math.sqrt(10_000)


def test_uniform_range_and_mean():
    u = RandomStream(3).uniforms(200_000)
    assert u.min() >= 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 4.0 * (1.0 / math.sqrt(12 * 200_000))


def test_normal_moments():
    z = RandomStream(4).normals(400_000)
    assert abs(z.mean()) < 4.0 / math.sqrt(400_000)
    assert abs(z.std() - 1.0) < 0.01


def test_poisson_zero_mean():
    rng = RandomStream(5)
    assert all(rng.poisson(0.0) == 0 for _ in range(100))


def test_poisson_large_mean_moments():
    k = RandomStream(6).poissons(37.7, 1_000_000)
    se_mean = math.sqrt(37.7 / 1_000_000)
    assert abs(k.mean() - 37.7) < 4.0 * se_mean
    assert abs(k.var() - 37.7) / 37.7 < 0.05


def test_poisson_small_mean_pmf():
    k = RandomStream(7).poissons(3.0, 1_000_000)
    p0 = math.exp(-3.0)
    se = math.sqrt(p0 * (1 - p0) / 1_000_000)
    assert abs((k == 0).mean() - p0) < 4.0 * se


def test_sample_poisson_wrapper_and_validation():
    rng = RandomStream(8)
    assert isinstance(sample_poisson(2.5, rng), int)
    with pytest.raises(ValueError):
        rng.poisson(-1.0)
    with pytest.raises(ValueError):
        rng.poisson(math.inf)


def test_no_global_rng_in_package():
    # Every sampler must consume an explicit stream; the package must not
    # touch python's or numpy's global generators.
    pkg_dir = pathlib.Path(uwajam.__file__).parent
    for path in pkg_dir.rglob("*.py"):
        text = path.read_text()
        assert "np.random" not in text, path
        assert "numpy.random" not in text, path
        assert "import random" not in text, path
