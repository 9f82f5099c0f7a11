import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.codes import NodeState, mbr
from src.core.codes.mbr import build_incidence, derive_params
from src.core.field import FieldSpec
from src.utils.error_handler import (
    CorruptionError,
    DataLossError,
    DuplicateNodeError,
    MissingHelperError,
    ParameterError,
)

INCIDENCE_5 = [
    [1, 1, 1, 1, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 1, 1, 1, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 0, 1, 1, 0],
    [0, 0, 1, 0, 0, 1, 0, 1, 0, 1],
    [0, 0, 0, 1, 0, 0, 1, 0, 1, 1],
]


def _source(spec, chunks, seed=0):
    rng = np.random.default_rng(seed)
    return rng.integers(0, spec.field.order, size=(chunks, spec.params.B))


def test_parameters_n5_k3():
    params = derive_params(5, 3)
    assert (params.n, params.k, params.d, params.alpha, params.beta, params.B, params.theta, params.q) == \
        (5, 3, 4, 4, 1, 9, 10, 2)


def test_parameters_n6_k3():
    params = derive_params(6, 3)
    assert (params.B, params.theta, params.q) == (12, 15, 16)


@pytest.mark.parametrize("n,k", [(3, 3), (3, 0), (2, 5)])
def test_invalid_parameters(n, k):
    with pytest.raises(ParameterError):
        derive_params(n, k)


def test_incidence_matrix_n5():
    incidence = build_incidence(5)
    assert incidence.matrix().tolist() == INCIDENCE_5
    assert incidence.theta == 10
    assert incidence.check_properties()
    assert incidence.node_columns(3) == (1, 4, 7, 8)
    assert incidence.edge_column(4, 3) == 7


@pytest.mark.parametrize("n", [2, 3, 6, 9])
def test_incidence_properties(n):
    assert build_incidence(n).check_properties()


def test_incidence_errors():
    with pytest.raises(ParameterError):
        build_incidence(1)
    with pytest.raises(ParameterError):
        build_incidence(4).edge_column(2, 2)


def test_corrupted_incidence_fails_properties():
    incidence = build_incidence(4)
    broken = mbr.IncidenceMatrix(4, incidence.edges[:-1] + ((1, 2),))
    assert not broken.check_properties()


@pytest.mark.parametrize("n,k,field", [
    (5, 3, None),
    (5, 2, None),
    (6, 3, None),
    (4, 3, None),
    (5, 3, FieldSpec.binary(8)),
    (4, 1, None),
])
def test_every_k_subset_reconstructs(n, k, field):
    spec = mbr.build(n, k, field)
    source = _source(spec, chunks=3)
    states = spec.encode(source)
    assert all(s.alpha == spec.params.alpha for s in states)
    for subset in itertools.combinations(states, k):
        assert np.array_equal(spec.reconstruct(list(subset)), source)


def test_default_family_by_redundancy():
    assert mbr.build(4, 3).construction_tag() == "identity"
    assert mbr.build(5, 3).construction_tag() == "single-parity-check"
    assert mbr.build(6, 3).construction_tag() == "vandermonde"


def test_shared_symbols_agree(mbr_53):
    states = {s.node_id: s for s in mbr_53.encode(_source(mbr_53, 2))}
    for i, j in itertools.combinations(range(1, 6), 2):
        assert np.array_equal(mbr_53.helper_symbol(states[i], j), mbr_53.helper_symbol(states[j], i))


def test_download_plan_counts_duplicates(mbr_53):
    plan = mbr_53.download_plan([1, 2, 3])
    assert plan.columns == tuple(range(9))
    assert plan.repetitions == 3
    with pytest.raises(DuplicateNodeError):
        mbr_53.download_plan([1, 1, 2])


def test_reconstruct_uses_k_smallest_and_caches_inverse(mbr_53):
    source = _source(mbr_53, 1)
    states = mbr_53.encode(source)
    assert np.array_equal(mbr_53.reconstruct(states), source)
    assert np.array_equal(mbr_53.reconstruct(states[:3]), source)
    assert list(mbr_53._inverse_cache) == [tuple(range(9))]


def test_reconstruct_errors(mbr_53):
    states = mbr_53.encode(_source(mbr_53, 1))
    with pytest.raises(DataLossError):
        mbr_53.reconstruct(states[:2])
    with pytest.raises(DuplicateNodeError):
        mbr_53.reconstruct([states[0], states[0], states[1]])
    dead = [NodeState(s.node_id, s.symbols, live=False) for s in states[:3]]
    with pytest.raises(DataLossError):
        mbr_53.reconstruct(dead + states[3:])


def test_disagreeing_duplicates_are_detected(mbr_53):
    states = mbr_53.encode(_source(mbr_53, 1))
    # colonne 0 = arête {1, 2}, premier symbole du nœud 1
    states[0].symbols[0, 0] ^= 1
    with pytest.raises(CorruptionError):
        mbr_53.reconstruct(states[:3])


def test_regenerate_node3(mbr_53):
    states = mbr_53.encode(_source(mbr_53, 4))
    helpers = [s for s in states if s.node_id != 3]
    node, transcript = mbr_53.regenerate(3, helpers)
    assert node == states[2]
    assert transcript.helpers == (1, 2, 4, 5)
    assert transcript.per_helper_symbols == {1: 1, 2: 1, 4: 1, 5: 1}
    assert transcript.coefficients == {1: (1,), 2: (4,), 4: (7,), 5: (8,)}
    assert transcript.symbols_per_chunk == 4
    assert transcript.total_symbols == 16
    assert transcript.total_bytes == 2


@pytest.mark.parametrize("n,k", [(5, 3), (6, 2), (7, 4)])
def test_every_node_regenerates_exactly(n, k):
    spec = mbr.build(n, k)
    states = spec.encode(_source(spec, 2, seed=n))
    for failed in spec.node_ids:
        node, transcript = spec.repair(failed, [s for s in states if s.node_id != failed])
        assert node == states[failed - 1]
        assert transcript.symbols_per_chunk == spec.params.d


def test_regenerate_errors(mbr_53):
    states = mbr_53.encode(_source(mbr_53, 1))
    with pytest.raises(MissingHelperError):
        mbr_53.regenerate(3, states[:2])
    with pytest.raises(ParameterError):
        mbr_53.regenerate(3, states)
    with pytest.raises(DuplicateNodeError):
        mbr_53.regenerate(1, [states[1], states[1], states[2], states[3], states[4]])
    dead = NodeState(2, states[1].symbols, live=False)
    with pytest.raises(MissingHelperError):
        mbr_53.regenerate(1, [dead] + states[2:])
    with pytest.raises(ParameterError):
        mbr_53.regenerate(6, states[1:])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 10), min_size=9, max_size=9), st.sampled_from(list(itertools.combinations(range(5), 3))))
def test_random_sources_reconstruct(values, subset):
    spec = mbr.build(5, 3, FieldSpec.prime(11))
    states = spec.encode(values)
    decoded = spec.reconstruct([states[i] for i in subset])
    assert decoded[0].tolist() == values


def test_encode_rejects_bad_source(mbr_53):
    with pytest.raises(ParameterError):
        mbr_53.encode([0, 1])
    with pytest.raises(ParameterError):
        mbr_53.encode([2] * 9)


MBR_SHAPES = [(n, k) for n in range(3, 8) for k in range(1, n)]


@pytest.mark.parametrize("n,k", MBR_SHAPES)
def test_small_codes_reconstruct_and_regenerate(n, k):
    spec = mbr.build(n, k)
    source = _source(spec, 2, seed=10 * n + k)
    states = spec.encode(source)
    for subset in itertools.combinations(states, k):
        assert np.array_equal(spec.reconstruct(list(subset)), source)
    for failed in spec.node_ids:
        node, transcript = spec.repair(failed, [s for s in states if s.node_id != failed])
        assert node == states[failed - 1]
        assert transcript.symbols_per_chunk == n - 1


def test_thousand_repair_cycles_are_exact():
    spec = mbr.build(6, 3)
    rng = np.random.default_rng(42)
    source = _source(spec, 1, seed=5)
    original = {s.node_id: s for s in spec.encode(source)}
    states = dict(original)
    for cycle in range(1, 1001):
        failed = int(rng.integers(1, spec.params.n + 1))
        node, _ = spec.repair(failed, [s for i, s in states.items() if i != failed])
        assert node == original[failed]
        states[failed] = node
        if cycle % 100 == 0:
            chosen = rng.choice(sorted(states), size=spec.params.k, replace=False)
            assert np.array_equal(spec.reconstruct([states[int(i)] for i in chosen]), source)
