"""Keyed sample streams."""

import numpy as np
import pytest

from src.config.exceptions import SampleReuseError
from src.objectives.sampling import DISPATCH_SALT, SAMPLE_SALT, SampleStreams, keyed_rng


def test_same_key_same_stream():
    a = SampleStreams(5).stream(1, 3).standard_normal(4)
    b = SampleStreams(5).stream(1, 3).standard_normal(4)
    assert np.array_equal(a, b)


def test_keys_independent_of_request_order():
    first = SampleStreams(0)
    x = first.stream(0, 2).random()
    y = first.stream(1, 2).random()
    second = SampleStreams(0)
    y2 = second.stream(1, 2).random()
    x2 = second.stream(0, 2).random()
    assert (x, y) == (x2, y2)


def test_distinct_keys_distinct_streams():
    streams = SampleStreams(0)
    draws = {streams.stream(i, t).random() for i in range(3) for t in range(1, 4)}
    assert len(draws) == 9


def test_reuse_refused():
    streams = SampleStreams(0)
    streams.stream(2, 4)
    assert streams.consumed(2, 4)
    with pytest.raises(SampleReuseError):
        streams.stream(2, 4)


def test_substeps_are_separate_samples():
    streams = SampleStreams(0)
    streams.stream(0, 1, 0)
    streams.stream(0, 1, 1)
    assert len(streams) == 2


def test_reuse_check_can_be_disabled():
    streams = SampleStreams(0, check_reuse=False)
    a = streams.stream(0, 1).random()
    b = streams.stream(0, 1).random()
    assert a == b


def test_salts_separate_families():
    assert keyed_rng(0, SAMPLE_SALT, 1).random() != keyed_rng(0, DISPATCH_SALT, 1).random()
