import math

import numpy as np
import pytest

from app.core.bitseq import BitString
from app.core.channels import Dist, make_runlength_channel, make_threshold_channel
from app.core.errors import InstanceTooLarge, NotNormalized, ZeroProbability
from app.core.infotheory import (
    JointDist,
    StarLaw,
    TableLaw,
    binary_entropy,
    capacity_small_n,
    entropy,
    information_density,
    mutual_information,
    uniform_inputs,
)

B = BitString


def test_entropy_and_binary_entropy():
    assert entropy([0.5, 0.5]) == pytest.approx(1.0)
    assert entropy([1.0, 0.0]) == 0.0
    with pytest.raises(NotNormalized):
        entropy([0.5, 0.6])
    assert binary_entropy(0.5) == pytest.approx(1.0)
    assert binary_entropy(0.11) == pytest.approx(0.4999, abs=1e-3)
    assert binary_entropy(np.array([0.0, 1.0])).tolist() == [0.0, 0.0]


def test_noiseless_channel_information():
    spec = make_threshold_channel(2, 0.0)
    j = JointDist(uniform_inputs(3), spec)
    assert mutual_information(j) == pytest.approx(3.0)
    assert information_density(j, "011", "011") == pytest.approx(3.0)
    with pytest.raises(ZeroProbability):
        information_density(j, "011", "111")
    assert capacity_small_n(spec, 3) == pytest.approx(3.0, abs=1e-6)


def test_joint_dist_validation():
    spec = make_threshold_channel(2, 0.1)
    with pytest.raises(ValueError):
        JointDist({B("01"): 0.5, B("1"): 0.5}, spec)
    with pytest.raises(NotNormalized):
        JointDist({B("01"): 0.5}, spec)
    with pytest.raises(InstanceTooLarge):
        capacity_small_n(spec, 11)


def test_capacity_of_toy_channels():
    # one use of a binary erasure-like deletion channel carries 1 - d bits
    assert capacity_small_n(make_threshold_channel(1, 0.3), 1) == pytest.approx(0.7, abs=1e-6)

    p = 0.11
    bsc = TableLaw(
        {
            B("0"): Dist({B("0"): 1 - p, B("1"): p}),
            B("1"): Dist({B("1"): 1 - p, B("0"): p}),
        }
    )
    assert capacity_small_n(bsc, 1) == pytest.approx(1 - binary_entropy(p), abs=1e-6)


def test_capacity_dominates_uniform_input():
    spec = make_runlength_channel([0.1, 0.3], mu=0.3)
    for star in (False, True):
        cap = capacity_small_n(spec, 3, star=star)
        if star:
            uniform = mutual_information(JointDist(uniform_inputs(3), StarLaw(spec)))
        else:
            uniform = mutual_information(JointDist(uniform_inputs(3), spec))
        assert cap >= uniform - 1e-9
        assert cap <= 3.0 + 1e-9


def test_trimming_never_adds_information():
    spec = make_runlength_channel([0.1, 0.3], mu=0.3)
    inputs = uniform_inputs(4)
    base = mutual_information(JointDist(inputs, spec))
    for mode in ("trim00", "trim01", "trim10", "trim11"):
        assert mutual_information(JointDist(inputs, spec.with_trim(mode))) <= base + 1e-9
    assert not math.isnan(base)
