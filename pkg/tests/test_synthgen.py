import json

import numpy as np
import pytest

from sewer_osp.network import SewerNetwork, build_upstream_index, validate_network
from sewer_osp.synthgen import (
    DEFAULT_DISTRIBUTION,
    BranchingDistribution,
    SynthConfig,
    fit_branching_distribution,
    generate_intree,
)

# mean exactly one: the only kind of law a tree's child-count histogram can follow
CRITICAL = BranchingDistribution((0.4, 0.3, 0.2, 0.1))


def _is_single_intree(net):
    idx = build_upstream_index(net)
    outfalls = np.flatnonzero(idx.downstream < 0)
    return len(outfalls) == 1 and idx.up_size[outfalls[0]] == net.n


def test_distribution_validation():
    with pytest.raises(ValueError):
        BranchingDistribution((0.5, 0.4))
    with pytest.raises(ValueError):
        BranchingDistribution((1.2, -0.2))
    d = BranchingDistribution.from_mapping({"0": 0.5, "2": 0.5})
    assert d.probs == (0.5, 0.0, 0.5)
    assert BranchingDistribution.from_mapping(json.loads(d.to_json())) == d


def test_single_node():
    net = generate_intree(SynthConfig(n=1))
    assert net.n == 1 and net.num_edges == 0


def test_cannot_grow():
    with pytest.raises(ValueError, match="cannot grow"):
        generate_intree(SynthConfig(n=5, distribution=BranchingDistribution((1.0,))))
    with pytest.raises(ValueError):
        SynthConfig(n=0)


@pytest.mark.parametrize("n", [2, 3, 17, 100, 1000])
def test_structure(n):
    net = generate_intree(SynthConfig(n=n, seed=n))
    assert net.n == n and net.num_edges == n - 1
    assert validate_network(net).ok
    assert _is_single_intree(net)
    assert net.coords.shape == (n, 2)


def test_path_only_distribution():
    net = generate_intree(SynthConfig(n=30, seed=1, distribution=BranchingDistribution((0.5, 0.5))))
    assert _is_single_intree(net)
    assert net.in_degrees().max() == 1


def test_deterministic():
    a = generate_intree(SynthConfig(n=300, seed=7))
    b = generate_intree(SynthConfig(n=300, seed=7))
    c = generate_intree(SynthConfig(n=300, seed=8))
    np.testing.assert_array_equal(a.edges, b.edges)
    assert not np.array_equal(a.edges, c.edges)


def test_fit_examples():
    path = SewerNetwork.from_labels("abc", [("a", "b"), ("b", "c")])
    np.testing.assert_allclose(fit_branching_distribution(path).probs, [1 / 3, 2 / 3])
    conf = SewerNetwork.from_labels("abcd", [("a", "c"), ("b", "c"), ("c", "d")])
    np.testing.assert_allclose(fit_branching_distribution(conf).probs, [1 / 2, 1 / 4, 1 / 4])
    assert fit_branching_distribution(SewerNetwork.from_labels("a", [])).probs == (1.0,)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_child_counts_follow_critical_distribution(seed):
    net = generate_intree(SynthConfig(n=6000, seed=seed, distribution=CRITICAL))
    freq = np.bincount(net.in_degrees(), minlength=4) / net.n
    assert np.abs(freq[:4] - CRITICAL.probs).max() <= 0.03
    fitted = fit_branching_distribution(net).probs
    assert np.abs(np.array(fitted[:4]) - CRITICAL.probs).max() <= 0.05


def test_fit_generate_roundtrip():
    source = generate_intree(SynthConfig(n=5000, seed=11, distribution=CRITICAL))
    fitted = fit_branching_distribution(source)
    again = fit_branching_distribution(generate_intree(SynthConfig(n=5000, seed=12, distribution=fitted)))
    k = max(len(fitted.probs), len(again.probs))
    a = np.pad(fitted.probs, (0, k - len(fitted.probs)))
    b = np.pad(again.probs, (0, k - len(again.probs)))
    assert np.abs(a - b).max() <= 0.05


def test_subcritical_default_is_size_conditioned():
    # the default law has mean 0.75; a tree's histogram must have mean (n - 1) / n
    assert DEFAULT_DISTRIBUTION.mean == pytest.approx(0.75)
    net = generate_intree(SynthConfig(n=5000, seed=3))
    fitted = fit_branching_distribution(net)
    assert fitted.mean == pytest.approx(4999 / 5000, abs=1e-12)
    # zero-child nodes remain the most common kind
    assert fitted.probs[0] == max(fitted.probs)
