"""Acceptance gate: one test per criterion, one pass/fail line each.

Every check is exact (integer arithmetic, tolerance zero).  The shared
sample family is generated once per session from seed 0.
"""

import pytest

from cellkit import acceptance

SEED = 0


@pytest.fixture(scope="module")
def family():
    return acceptance._family(SEED)


def _report(result):
    status = "PASS" if result.passed else "FAIL"
    print(f"ACCEPTANCE [{status}] {result.name}: {result.detail}")
    assert result.passed, result.detail


def test_criterion_1_em_morphism_identities():
    _report(acceptance.criterion_em_morphism_identities(SEED))


def test_criterion_2_truncation_triangle(family):
    _report(acceptance.criterion_truncation_triangle(SEED, family))


def test_criterion_3_fiber_agreement(family):
    _report(acceptance.criterion_fiber_agreement(SEED, family))


def test_criterion_4_tstructure_axioms(family):
    _report(acceptance.criterion_tstructure(SEED, family))


def test_criterion_5_noncommutation_witnesses(family):
    _report(acceptance.criterion_noncommutation(SEED, family))


def test_criterion_6_closure_suite(family):
    _report(acceptance.criterion_closure(SEED, family))


def test_criterion_7_classification_tables():
    _report(acceptance.criterion_classification_tables(SEED))


def test_criterion_8_ring_obstruction():
    _report(acceptance.criterion_ring_obstruction(SEED))


def test_criterion_9_symbolic_chain_agreement():
    _report(acceptance.criterion_chain_agreement(SEED))
