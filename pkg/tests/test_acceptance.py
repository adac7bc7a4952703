"""Acceptance gate: every criterion at its stated tolerance.

Each test prints the one-line pass/fail summary of its criterion (visible
with pytest -s or in the CLI `verify-all` output) and asserts it passed.
"""

import pytest

from jacobiweyl import acceptance


@pytest.fixture(scope="module")
def corpus():
    return acceptance.random_window_corpus()


def _check(result):
    print(result.line())
    assert result.passed, result.line()


def test_criterion_01_fundamental_system(corpus):
    _check(acceptance.criterion_1(corpus))


def test_criterion_02_transform_unitarity(corpus):
    _check(acceptance.criterion_2(corpus))


def test_criterion_03_measure_identities(corpus):
    _check(acceptance.criterion_3(corpus))


def test_criterion_04_asymptotics(corpus):
    _check(acceptance.criterion_4(corpus))


def test_criterion_05_krein_identity(corpus):
    _check(acceptance.criterion_5(corpus))


def test_criterion_06_reconstruction_round_trip():
    _check(acceptance.criterion_6())


def test_criterion_07_borg_marchenko_rates():
    _check(acceptance.criterion_7())


def test_criterion_08_de_branges_suite():
    _check(acceptance.criterion_8())


def test_criterion_09_rigidity():
    _check(acceptance.criterion_9())


def test_criterion_10_gauge_covariance():
    _check(acceptance.criterion_10())
