import itertools

import numpy as np
import pytest

from src.core.codes import mbr, msr
from src.core.verify import (
    LinearStorageCode,
    can_reconstruct,
    certify,
    check_all_corollary1,
    check_corollary1,
    check_lemma1,
    check_lemma2,
    check_structure,
    format_code_text,
    mutate,
    parse_code_text,
    regenerates_exactly,
)
from src.core.linalg import intersection_dim
from src.utils.error_handler import CodeFileFormatError, ParameterError

TRIANGLE = """\
# MBR (3, 2) : famille identité, une arête par paire de nœuds
3 2 2 2 1 3 field=gf2:1
1 0 0 | 0 1 0
1 0 0 | 0 0 1   # nœud 2
0 1 0 | 0 0 1
"""


def test_constructed_mbr_code_is_certified(mbr_53):
    code = LinearStorageCode.from_spec(mbr_53)
    report = certify(code)
    assert report.passed
    assert report.failed_checks() == []
    assert "certificate=PASS" in report.to_text()


@pytest.mark.parametrize("n,k", [(6, 3), (5, 2), (4, 3)])
def test_other_mbr_codes_are_certified(n, k):
    assert certify(LinearStorageCode.from_spec(mbr.build(n, k))).passed


def test_subspace_dimensions(mbr_53):
    code = LinearStorageCode.from_spec(mbr_53)
    assert code.subspace(1).dim == 4
    assert intersection_dim(code.subspace(1), code.subspace(3)) == 1
    assert check_corollary1(code, 1, [2, 3]) == 2
    assert check_corollary1(code, 1, []) == 0


def test_corollary1_argument_checks(mbr_53):
    code = LinearStorageCode.from_spec(mbr_53)
    with pytest.raises(ParameterError):
        check_corollary1(code, 1, [2, 3, 4])
    with pytest.raises(ParameterError):
        check_corollary1(code, 1, [1, 2])
    with pytest.raises(ParameterError):
        check_corollary1(code, 1, [2, 2])


def test_lemma2_single_helper_set(mbr_53):
    code = LinearStorageCode.from_spec(mbr_53)
    assert check_lemma2(code, 1, [2, 3, 4, 5]).passed
    with pytest.raises(ParameterError):
        check_lemma2(code, 1, [2, 3])


def test_reconstruction_and_regeneration_predicates(mbr_53):
    code = LinearStorageCode.from_spec(mbr_53)
    assert can_reconstruct(code, [1, 2, 3])
    assert not can_reconstruct(code, [1, 2])
    assert regenerates_exactly(code, 3, [1, 2, 4, 5])
    assert not regenerates_exactly(code, 3, [1, 2, 4])


def test_mutated_codes_fail_certificate(mbr_53_gf11):
    code = LinearStorageCode.from_spec(mbr_53_gf11)
    rng = np.random.default_rng(7)
    failures = 0
    for _ in range(100):
        mutant, node, position = mutate(code, rng)
        assert mutant.nodes[node - 1][position] != code.nodes[node - 1][position]
        if not certify(mutant).passed:
            failures += 1
    assert failures >= 95


def test_structure_failure_implies_broken_code(mbr_53_gf11):
    code = LinearStorageCode.from_spec(mbr_53_gf11)
    rng = np.random.default_rng(1)
    for _ in range(10):
        mutant, _, _ = mutate(code, rng)
        if check_structure(mutant).passed:
            continue
        exact = all(regenerates_exactly(mutant, i, [j for j in mutant.node_ids if j != i])
                    for i in mutant.node_ids)
        decodable = all(can_reconstruct(mutant, subset)
                        for subset in itertools.combinations(mutant.node_ids, mutant.k))
        assert not (exact and decodable)


def test_msr_code_subspaces(msr_53):
    code = LinearStorageCode.from_spec(msr_53)
    assert code.B == 6 and code.alpha == 2
    assert check_lemma1(code).passed
    assert all(can_reconstruct(code, subset) for subset in ([1, 2, 3], [2, 4, 5], [3, 4, 5]))
    structure = check_structure(code)
    assert not structure.passed
    assert "alpha=2" in structure.failures[0]


def test_single_node_reconstruction_skips_pairwise_checks():
    report = certify(LinearStorageCode.from_spec(mbr.build(4, 1)))
    assert report.passed
    assert report.lemma2.items == []
    assert report.structure.subsets_checked == 0


def test_parse_text_description():
    code = parse_code_text(TRIANGLE)
    assert (code.n, code.k, code.d, code.alpha, code.beta, code.B) == (3, 2, 2, 2, 1, 3)
    assert code.nodes[1] == ((1, 0, 0), (0, 0, 1))
    assert certify(code).passed
    assert parse_code_text(format_code_text(code)) == code


def test_duplicated_node_fails_conditions():
    text = TRIANGLE.replace("0 1 0 | 0 0 1\n", "1 0 0 | 0 1 0\n")
    code = parse_code_text(text)
    report = certify(code)
    assert not report.passed
    assert "corollary1" in report.failed_checks()
    failing = check_all_corollary1(code).failures()
    assert any(item.actual == 2 for item in failing)


@pytest.mark.parametrize("text", [
    "",
    "# rien\n",
    "3 2 2 2 1 3\n1 0 0 | 0 1 0\n",
    "3 2 2 2 1 3 field=gf9:1\n",
    "3 2 2 2 1 3 field=gf2:1\n1 0 0 | 0 1 0\n",
    "3 2 2 2 1 3 field=gf2:1\n1 0 0 | 0 1 0\n1 0 x | 0 0 1\n0 1 0 | 0 0 1\n",
    "3 2 2 2 1 3 field=gf2:1\n1 0 0 | 0 1 0\n1 0 | 0 0 1\n0 1 0 | 0 0 1\n",
    "3 2 2 2 1 3 field=gf2:1\n1 0 0 | 0 1 0\n1 0 0 | 0 0 2\n0 1 0 | 0 0 1\n",
])
def test_parse_errors(text):
    with pytest.raises(CodeFileFormatError):
        parse_code_text(text)


def test_storage_code_validation(gf7):
    with pytest.raises(ParameterError):
        LinearStorageCode(3, 2, 2, 1, 1, 2, gf7, (((1, 0),), ((0, 1),)))
    with pytest.raises(ParameterError):
        LinearStorageCode(2, 3, 1, 1, 1, 2, gf7, (((1, 0),), ((0, 1),)))


@pytest.mark.parametrize("n,k", [(n, k) for n in range(3, 8) for k in range(1, n)])
def test_every_small_mbr_code_is_certified(n, k):
    report = certify(LinearStorageCode.from_spec(mbr.build(n, k)))
    assert report.passed, report.failed_checks()


def _is_exact_mbr(code) -> bool:
    exact = all(regenerates_exactly(code, i, [j for j in code.node_ids if j != i]) for i in code.node_ids)
    return exact and all(can_reconstruct(code, subset)
                         for subset in itertools.combinations(code.node_ids, code.k))


@pytest.mark.parametrize("spec_name", ["mbr_53_gf11", "mbr_53"])
def test_broken_mutants_never_certified(spec_name, request):
    code = LinearStorageCode.from_spec(request.getfixturevalue(spec_name))
    rng = np.random.default_rng(31)
    broken = 0
    for _ in range(120):
        mutant, _, _ = mutate(code, rng)
        if _is_exact_mbr(mutant):
            continue
        broken += 1
        assert not certify(mutant).passed
    assert broken >= 60
