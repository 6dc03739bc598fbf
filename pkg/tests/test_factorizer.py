import itertools
import math

import numpy as np
import pytest

from plcpz import streamkit
from plcpz.decompress import decompress_oracle
from plcpz.factorizer import (PlcpSource, ScanStats, detect_peaks,
                              lower_bound_text, pipeline_compress,
                              stream_factorize)
from plcpz.scheme import Threshold, scheme_factorize
from plcpz.text_index import build_index, make_text

from conftest import RUNNING_REFS, random_text


def scheme_pairs(t, theta):
    f = scheme_factorize(t, build_index(t), Threshold(theta))
    return sorted((d, l) for d, _, l in f.discovery_refs)


def stream_pairs(t, theta, stats=None):
    b = build_index(t)
    return sorted(tuple(p) for p in stream_factorize(b.plcp, theta,
                                                     stats=stats))


def test_running_example_pairs(rex):
    stats = ScanStats()
    pairs = stream_pairs(rex, 2, stats)
    assert pairs == sorted((d, l) for d, _, l in RUNNING_REFS)
    assert stats.pairs == 4


@pytest.mark.parametrize("theta", [2, 3])
def test_exhaustive_binary_strings(theta):
    for n in range(1, 9):
        for bits in itertools.product(b"ab", repeat=n):
            t = make_text(bytes(bits))
            assert stream_pairs(t, theta) == scheme_pairs(t, theta), bits


@pytest.mark.parametrize("seed", range(40))
def test_random_strings_match_scheme(seed):
    t = make_text(random_text(seed, max_n=400))
    theta = 2 + seed % 3
    assert stream_pairs(t, theta) == scheme_pairs(t, theta)


def test_peak_flags_are_consistent(rex):
    b = build_index(rex)
    flags = detect_peaks(b.plcp, 2)
    assert len(flags) == rex.n
    for pos, peak, interesting, maximal in flags:
        if maximal:
            assert interesting
        if interesting:
            assert peak
        if not peak:
            assert not interesting and not maximal
    maximal_pos = {pos for pos, _, _, m in flags if m}
    assert {d for d, _, _ in RUNNING_REFS} <= maximal_pos


def test_plcp_source_stream_and_array_agree(rex, tiny_budget):
    b = build_index(rex)
    via_array = sorted(tuple(p) for p in stream_factorize(b.plcp, 2))
    s = streamkit.stream_from_array(b.plcp, tiny_budget)
    via_stream = sorted(tuple(p) for p in
                        stream_factorize(PlcpSource(s), 2,
                                         budget=tiny_budget))
    assert via_array == via_stream


def test_pipeline_matches_scheme_and_roundtrips(rex):
    b = build_index(rex)
    f = pipeline_compress(rex, b, 2)
    g = scheme_factorize(rex, b, Threshold(2))
    assert f.reference_triples() == g.reference_triples()
    assert decompress_oracle(f).data == rex.data


@pytest.mark.parametrize("seed", range(15))
def test_pipeline_roundtrip_random(seed):
    t = make_text(random_text(seed + 900, max_n=600))
    b = build_index(t)
    f = pipeline_compress(t, b, 2)
    assert decompress_oracle(f).data == t.data
    assert f.reference_triples() == \
        scheme_factorize(t, b, Threshold(2)).reference_triples()


def test_pipeline_under_tiny_budget(tiny_budget):
    t = make_text(random_text(77, max_n=4000))
    b = build_index(t)
    f = pipeline_compress(t, b, 2, budget=tiny_budget)
    assert decompress_oracle(f).data == t.data


def test_lower_bound_text_shape():
    t = lower_bound_text(5)
    assert t.n == 26  # 5*5 + sentinel
    assert max(t.data[:-1]) == 5 and min(t.data[:-1]) == 1
    with pytest.raises(ValueError):
        lower_bound_text(1)
    with pytest.raises(ValueError):
        lower_bound_text(256)


@pytest.mark.parametrize("m", [4, 7, 12, 20])
def test_lower_bound_peak_list_growth(m):
    t = lower_bound_text(m)
    b = build_index(t)
    stats = ScanStats()
    list(stream_factorize(b.plcp, 2, stats=stats))
    assert stats.max_peak_list == m - 2
