import itertools

import numpy as np
import pytest

from src.core.codes import ConstructionTag, VectorFamily, build_code, make_mds, select_mbr_field, select_msr_field, systematize, vandermonde_family, verify_mds
from src.core.codes.mds import single_parity_check_family, vandermonde_vector
from src.core.codes import mbr
from src.core.field import FieldSpec
from src.core.linalg import Matrix
from src.utils.error_handler import DuplicateNodeError, FieldTooSmallError, ParameterError, UnsupportedOperationError


def test_make_mds_picks_family(gf7):
    assert make_mds(4, 4, gf7).tag == ConstructionTag.IDENTITY
    assert make_mds(5, 4, FieldSpec.binary(1)).tag == ConstructionTag.SINGLE_PARITY_CHECK
    assert make_mds(7, 3, gf7).tag == ConstructionTag.VANDERMONDE


def test_make_mds_rejects_impossible_shape(gf7):
    with pytest.raises(ParameterError):
        make_mds(2, 3, gf7)


def test_vandermonde_vector(gf7):
    assert vandermonde_vector(3, 4, gf7) == (1, 3, 2, 6)
    assert vandermonde_vector(0, 3, gf7) == (1, 0, 0)


def test_vandermonde_needs_enough_points(gf7):
    with pytest.raises(FieldTooSmallError):
        vandermonde_family(8, 3, gf7)


@pytest.mark.parametrize("count,dimension,field", [
    (7, 3, FieldSpec.prime(7)),
    (15, 12, FieldSpec.binary(4)),
    (10, 9, FieldSpec.binary(1)),
    (6, 6, FieldSpec.binary(1)),
])
def test_constructed_families_are_mds(count, dimension, field):
    assert verify_mds(make_mds(count, dimension, field), dimension)


def test_sampled_verification_for_large_families():
    family = vandermonde_family(25, 3, FieldSpec.prime(29))
    assert verify_mds(family, 3, seed=5)


def test_dependent_family_detected(gf7):
    family = VectorFamily.custom(gf7, 2, [(1, 2), (2, 4), (0, 1)])
    assert not verify_mds(family, 2)


def test_verify_mds_edge_cases(gf7):
    small = VectorFamily.custom(gf7, 3, [(1, 0, 0), (0, 1, 0)])
    assert not verify_mds(small, 3)
    with pytest.raises(ParameterError):
        verify_mds(small, 4)


def test_vector_family_validation(gf7):
    with pytest.raises(ParameterError):
        VectorFamily.custom(gf7, 2, [(1, 2, 3)])
    with pytest.raises(ParameterError):
        VectorFamily.custom(gf7, 2, [(1, 9)])


def test_transformed_family(gf7):
    family = single_parity_check_family(2, gf7)
    swap = Matrix.from_rows(gf7, [[0, 1], [1, 0]])
    assert family.transformed(swap).vectors == ((0, 1), (1, 0), (1, 1))


@pytest.mark.parametrize("B,theta,expected", [(9, 10, "gf2:1"), (6, 6, "gf2:1"), (12, 15, "gf2:4"), (7, 10, "prime:11")])
def test_select_mbr_field(B, theta, expected):
    assert str(select_mbr_field(B, theta)) == expected


@pytest.mark.parametrize("n,expected", [(5, "prime:5"), (6, "prime:7"), (16, "gf2:4")])
def test_select_msr_field(n, expected):
    assert str(select_msr_field(n)) == expected


def test_systematize_when_already_systematic(mbr_53):
    spec = systematize(mbr_53, [3, 1, 2])
    assert spec.systematic_nodes == (1, 2, 3)
    assert spec.family == mbr_53.family


def test_systematize_changes_basis(mbr_53_gf11, rng):
    spec = systematize(mbr_53_gf11, [3, 4, 5])
    assert spec.family != mbr_53_gf11.family
    assert verify_mds(spec.family, spec.params.B)

    source = rng.integers(0, 11, size=spec.params.B)
    states = {s.node_id: s for s in spec.encode(source)}
    columns = spec.download_plan([3, 4, 5]).columns
    for node in (3, 4, 5):
        for position, column in enumerate(spec.columns_of(node)):
            assert states[node].symbols[0, position] == source[columns.index(column)]


def test_systematize_rejects_bad_node_sets(mbr_53):
    with pytest.raises(DuplicateNodeError):
        systematize(mbr_53, [1, 1, 2])
    with pytest.raises(ParameterError):
        systematize(mbr_53, [1, 2])


def test_build_code_registry():
    assert build_code("mbr", 5, 3, systematic=[1, 2, 3]).systematic_nodes == (1, 2, 3)
    assert build_code("msr", 5, 3).params.alpha == 2
    with pytest.raises(UnsupportedOperationError):
        build_code("msr", 5, 3, systematic=[1, 2, 3])
    with pytest.raises(ValueError):
        build_code("rs", 5, 3)


@pytest.mark.parametrize("spec", [mbr.build(5, 3, FieldSpec.prime(11)), mbr.build(6, 3), mbr.build(7, 3)])
def test_systematic_code_keeps_every_k_subset(spec):
    systematic = systematize(spec, [1, 2, 3])
    source = np.random.default_rng(12).integers(0, spec.field.order, size=(2, spec.params.B))
    states = systematic.encode(source)
    for subset in itertools.combinations(states, 3):
        assert np.array_equal(systematic.reconstruct(list(subset)), source)
    for failed in systematic.node_ids:
        node, _ = systematic.repair(failed, [s for s in states if s.node_id != failed])
        assert node == states[failed - 1]
