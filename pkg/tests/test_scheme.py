import numpy as np
import pytest

from plcpz.scheme import (CodingError, Factor, Factorization, Threshold,
                          char_source_map, scheme_factorize, verify_cycle_free)
from plcpz.text_index import build_index, make_text

from conftest import RUNNING_REFS, random_text


def greedy_oracle_refs(t, theta):
    """Independent replay of the greedy rule on plain Python lists."""
    n = t.n
    b = build_index(t)
    plcp = b.plcp.tolist()
    phi = b.phi.tolist()
    refs = []
    while True:
        v = max(plcp)
        if v < theta:
            break
        dst = plcp.index(v) + 1  # leftmost maximum
        refs.append((dst, phi[dst - 1], v))
        for j in range(max(1, dst - v), dst):
            plcp[j - 1] = min(plcp[j - 1], dst - j)
        for j in range(dst, dst + v):
            plcp[j - 1] = 0
    return refs


def test_running_example_factors(rex):
    f = scheme_factorize(rex, build_index(rex), Threshold(2))
    assert f.discovery_refs == RUNNING_REFS
    assert sorted(f.reference_triples()) == sorted(
        (d, s, l) for d, s, l in RUNNING_REFS)
    assert verify_cycle_free(f)


@pytest.mark.parametrize("seed", range(20))
@pytest.mark.parametrize("theta", [2, 3])
def test_matches_list_replay(seed, theta):
    t = make_text(random_text(seed, max_n=120))
    f = scheme_factorize(t, build_index(t), Threshold(theta))
    assert f.discovery_refs == greedy_oracle_refs(t, theta)


def test_threshold_floor():
    with pytest.raises(ValueError):
        Threshold(1)
    assert Threshold().theta == 2


def lit(dst, data):
    return Factor(dst, len(data), literal=data)


def test_validate_rejects_bad_tilings():
    with pytest.raises(CodingError):
        Factorization(3, 2, [lit(1, b"ab")]).validate()  # short
    with pytest.raises(CodingError):
        Factorization(3, 2, [lit(1, b"ab"), lit(4, b"c")]).validate()  # gap
    with pytest.raises(CodingError):
        Factorization(3, 2, [lit(1, b"ab"), Factor(3, 2, src=4)]).validate()
    with pytest.raises(CodingError):
        Factorization(4, 2, [lit(1, b"ab"), Factor(3, 2, src=3)]).validate()
    Factorization(4, 2, [lit(1, b"ab"), Factor(3, 2, src=1)]).validate()


def test_cycle_detection():
    # two references copying each other: unresolvable
    f = Factorization(5, 2, [Factor(1, 2, src=3), Factor(3, 2, src=1),
                             lit(5, b"\x00")])
    assert not verify_cycle_free(f)
    # bidirectional but resolvable (reference pointing right)
    g = Factorization(5, 2, [Factor(1, 2, src=3), lit(3, b"ab"),
                             lit(5, b"\x00")])
    assert verify_cycle_free(g)


def test_char_source_map_identity_for_literals():
    f = Factorization(4, 2, [lit(1, b"abc"), lit(4, b"\x00")])
    assert char_source_map(f).tolist() == [0, 1, 2, 3]


def test_scheme_output_decodes_to_text(rex):
    from plcpz.decompress import decompress_oracle
    f = scheme_factorize(rex, build_index(rex), Threshold(2))
    assert decompress_oracle(f).data == rex.data
