import itertools

import numpy as np
import pytest

from src.core.codes import msr
from src.core.codes.msr import derive_params
from src.core.field import FieldSpec
from src.utils.error_handler import DuplicateNodeError, FieldTooSmallError, MissingHelperError, ParameterError


def _source(spec, chunks, seed=0):
    rng = np.random.default_rng(seed)
    return rng.integers(0, spec.field.order, size=(chunks, spec.params.B))


def _combine(field, weights, vectors):
    total = [0] * len(vectors[0])
    for weight, vector in zip(weights, vectors):
        total = [field.add(t, field.mul(weight, x)) for t, x in zip(total, vector)]
    return tuple(total)


def test_parameters():
    params = derive_params(5, 3, FieldSpec.prime(7))
    assert (params.n, params.k, params.d, params.alpha, params.beta, params.B, params.q) == (5, 3, 4, 2, 1, 6, 7)


@pytest.mark.parametrize("n,k", [(4, 3), (3, 2), (5, 0)])
def test_invalid_parameters(n, k):
    with pytest.raises(ParameterError):
        derive_params(n, k)


def test_default_field():
    assert str(msr.build(6, 3).field) == "prime:7"
    with pytest.raises(FieldTooSmallError):
        msr.build(6, 3, FieldSpec.prime(5))


def test_node_vectors_layout(msr_53):
    main, aux = msr_53.main_vector(2), msr_53.aux_vector(2)
    assert msr_53.node_vectors(2) == [main + (0, 0, 0), aux + main]
    assert main == (1, 1, 1)
    assert msr_53.node_vectors_pair(2) == msr.MsrNodeVectors(main, aux)


def test_every_k_subset_reconstructs(msr_53):
    source = _source(msr_53, 3)
    states = msr_53.encode(source)
    for subset in itertools.combinations(states, 3):
        assert np.array_equal(msr_53.reconstruct(list(subset)), source)


def test_zero_aux_vectors_store_plain_halves(gf7):
    spec = msr.build(5, 3, gf7, aux_seed=None)
    source = _source(spec, 1)
    f, g = source[0, :3], source[0, 3:]
    for state in spec.encode(source):
        p = spec.main_vector(state.node_id)
        assert state.row() == [gf7.dot(f, p), gf7.dot(g, p)]


def test_regen_coefficients_relations(msr_53, gf7):
    helpers = (2, 3, 4, 5)
    c = msr_53.regen_coefficients(1, helpers)
    mains = [msr_53.main_vector(h) for h in helpers]
    auxes = [msr_53.aux_vector(h) for h in helpers]
    target = msr_53.main_vector(1)

    assert c.delta[0] == 1
    assert all(c.delta)
    assert c.b == (1, 1, 1, 1)
    assert _combine(gf7, c.delta, mains) == (0, 0, 0)
    assert _combine(gf7, c.rho, mains) == target
    mixed = [tuple(gf7.add(gf7.mul(a, p), u) for p, u in zip(main, aux))
             for a, main, aux in zip(c.a, mains, auxes)]
    assert _combine(gf7, c.delta, mixed) == target
    assert c.for_helper(4) == (c.a[2], 1)


def test_regen_coefficients_errors(msr_53):
    with pytest.raises(MissingHelperError):
        msr_53.regen_coefficients(1, (2, 3, 4))
    with pytest.raises(DuplicateNodeError):
        msr_53.regen_coefficients(1, (2, 2, 3, 4))
    with pytest.raises(ParameterError):
        msr_53.regen_coefficients(1, (1, 2, 3, 4))


def test_repair_reproduces_main_symbol(msr_53, gf7):
    source = _source(msr_53, 2)
    states = msr_53.encode(source)
    version = msr_53.aux_version

    node, transcript = msr_53.repair(3, [s for s in states if s.node_id != 3])
    assert np.array_equal(node.symbols[:, 0], states[2].symbols[:, 0])
    assert msr_53.aux_version == version + 1
    assert transcript.symbols_per_chunk == 4
    assert transcript.helpers == (1, 2, 4, 5)

    # second symbole : g^t p + f^t u~ avec la nouvelle table
    f, g = source[:, :3], source[:, 3:]
    p, u = msr_53.main_vector(3), msr_53.aux_vector(3)
    for chunk in range(2):
        expected = gf7.add(gf7.dot(g[chunk], p), gf7.dot(f[chunk], u))
        assert node.symbols[chunk, 1] == expected

    states[2] = node
    for subset in itertools.combinations(states, 3):
        assert np.array_equal(msr_53.reconstruct(list(subset)), source)


def test_regenerate_from_helper_symbols(msr_53):
    states = {s.node_id: s for s in msr_53.encode(_source(msr_53, 1))}
    c = msr_53.regen_coefficients(5, (1, 2, 3, 4))
    symbols = {h: msr_53.helper_symbol(states[h], *c.for_helper(h)) for h in c.helpers}
    node, new_aux, transcript = msr_53.regenerate(5, symbols, c)
    assert new_aux == msr_53.aux_vector(5)
    assert node.symbols[0, 0] == states[5].symbols[0, 0]
    assert transcript.coefficients[2] == c.for_helper(2)

    with pytest.raises(MissingHelperError):
        msr_53.regenerate(5, {h: symbols[h] for h in (1, 2, 3)}, c)


def test_many_repair_cycles_keep_data(gf7):
    spec = msr.build(6, 3, gf7, aux_seed=3)
    rng = np.random.default_rng(11)
    source = _source(spec, 2, seed=4)
    states = {s.node_id: s for s in spec.encode(source)}
    for _ in range(30):
        failed = int(rng.integers(1, 7))
        helpers = sorted(rng.choice([i for i in states if i != failed], size=4, replace=False).tolist())
        node, _ = spec.repair(failed, [states[h] for h in helpers])
        states[failed] = node
    for subset in itertools.combinations(sorted(states), 3):
        assert np.array_equal(spec.reconstruct([states[i] for i in subset]), source)


def test_repair_needs_d_live_helpers(msr_53):
    states = msr_53.encode(_source(msr_53, 1))
    with pytest.raises(MissingHelperError):
        msr_53.repair(1, states[1:4])


def test_add_node_until_field_exhausted(msr_53):
    source = _source(msr_53, 2)
    states = {s.node_id: s for s in msr_53.encode(source)}

    node, transcript = msr_53.add_node([states[i] for i in (1, 2, 3, 4)])
    assert node.node_id == 6 and msr_53.params.n == 6
    assert transcript.symbols_per_chunk == 4
    states[6] = node
    assert np.array_equal(msr_53.reconstruct([states[6], states[1], states[5]]), source)

    node, _ = msr_53.add_node([states[i] for i in (2, 3, 5, 6)])
    states[7] = node
    assert np.array_equal(msr_53.reconstruct([states[7], states[6], states[4]]), source)

    with pytest.raises(FieldTooSmallError):
        msr_53.add_node([states[i] for i in (1, 2, 3, 4)])


def test_snapshot_and_set_aux(msr_53):
    msr_53.set_aux(1, (1, 2, 3))
    version, table = msr_53.snapshot()
    msr_53.set_aux(1, (0, 0, 0))
    assert msr_53.aux_version == version + 1
    assert msr_53.aux_vector(1) == (0, 0, 0)
    assert table[1] == (1, 2, 3)
    with pytest.raises(ParameterError):
        msr_53.set_aux(1, (9, 0, 0))
    with pytest.raises(ParameterError):
        msr_53.set_aux(9, (0, 0, 0))


def test_delta_has_no_zero_for_any_helper_set(gf7):
    spec = msr.build(7, 3, gf7, aux_seed=2)
    checked = 0
    for failed in spec.node_ids:
        others = [i for i in spec.node_ids if i != failed]
        for helpers in itertools.combinations(others, spec.params.d):
            c = spec.regen_coefficients(failed, helpers)
            assert c.delta[0] == 1 and all(c.delta)
            assert _combine(gf7, c.delta, [spec.main_vector(h) for h in helpers]) == (0, 0, 0)
            checked += 1
    assert checked == 7 * 15


def test_main_symbol_is_always_reproduced(gf7):
    spec = msr.build(7, 3, gf7, aux_seed=5)
    rng = np.random.default_rng(3)
    source = _source(spec, 3, seed=8)
    first = {s.node_id: s.symbols[:, 0].copy() for s in spec.encode(source)}
    states = {s.node_id: s for s in spec.encode(source)}
    for _ in range(120):
        failed = int(rng.integers(1, 8))
        helpers = rng.choice([i for i in states if i != failed], size=spec.params.d, replace=False)
        node, _ = spec.repair(failed, [states[int(h)] for h in helpers])
        assert np.array_equal(node.symbols[:, 0], first[failed])
        states[failed] = node
    assert np.array_equal(spec.reconstruct([states[i] for i in (2, 5, 7)]), source)


def test_reconstruction_does_not_depend_on_aux_seed(gf7):
    reference = None
    for seed in [None, *range(10)]:
        spec = msr.build(6, 3, gf7, aux_seed=seed)
        source = _source(spec, 2, seed=1)
        states = spec.encode(source)
        main_symbols = np.stack([s.symbols[:, 0] for s in states])
        if reference is None:
            reference = main_symbols
        assert np.array_equal(main_symbols, reference)
        for subset in itertools.combinations(states, 3):
            assert np.array_equal(spec.reconstruct(list(subset)), source)


@pytest.mark.parametrize("pair", list(itertools.combinations(range(1, 7), 2)))
def test_two_simultaneous_failures_with_three_spare_nodes(pair, gf7):
    spec = msr.build(6, 3, gf7, aux_seed=8)
    source = _source(spec, 2, seed=sum(pair))
    original = {s.node_id: s for s in spec.encode(source)}
    states = {i: s for i, s in original.items() if i not in pair}
    assert len(states) == spec.params.d

    for failed in pair:
        node, transcript = spec.repair(failed, list(states.values()))
        assert transcript.symbols_per_chunk == spec.params.d
        assert np.array_equal(node.symbols[:, 0], original[failed].symbols[:, 0])
        states[failed] = node

    for subset in itertools.combinations(sorted(states), 3):
        assert np.array_equal(spec.reconstruct([states[i] for i in subset]), source)


def test_thousand_repair_cycles_keep_data(gf7):
    spec = msr.build(6, 3, gf7, aux_seed=13)
    rng = np.random.default_rng(99)
    source = _source(spec, 1, seed=2)
    states = {s.node_id: s for s in spec.encode(source)}
    for cycle in range(1, 1001):
        failed = int(rng.integers(1, 7))
        helpers = rng.choice([i for i in states if i != failed], size=spec.params.d, replace=False)
        states[failed], _ = spec.repair(failed, [states[int(h)] for h in helpers])
        if cycle % 100 == 0:
            chosen = rng.choice(sorted(states), size=spec.params.k, replace=False)
            assert np.array_equal(spec.reconstruct([states[int(i)] for i in chosen]), source)
    assert spec.aux_version == 1000
    for subset in itertools.combinations(sorted(states), 3):
        assert np.array_equal(spec.reconstruct([states[i] for i in subset]), source)
