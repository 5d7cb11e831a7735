import pytest

from patstd import verify as verify_module
from patstd.oracle import UniverseConfig
from patstd.verify import CRITERIA, PROPERTIES, verify

SMALL = UniverseConfig(max_term_size=3, max_chain_length=2)


@pytest.fixture(scope="module")
def small_report():
    return verify(SMALL, workers=1)


def test_small_universe_has_no_failures(small_report):
    assert all(r.failed == 0 for r in small_report.results), small_report.table()
    assert small_report.terms == 388


def test_every_criterion_has_properties():
    assert {crit for _, crit, _ in PROPERTIES if crit} == set(CRITERIA)


def test_table_lists_every_property(small_report):
    table = small_report.table()
    for name, _, _ in PROPERTIES:
        assert name in table


def test_parallel_run_agrees(small_report):
    again = verify(SMALL, workers=2, chunk=50)
    assert [(r.name, r.checked, r.failed) for r in again.results] == [
        (r.name, r.checked, r.failed) for r in small_report.results
    ]


def test_detects_an_accepting_checker(monkeypatch):
    monkeypatch.setattr(verify_module, "check_standard", lambda terms: object())
    report = verify(SMALL, workers=1)
    verdicts = {r.name: r for r in report.results}
    assert verdicts["negative-standard-check"].failed == 1
    assert not report.criterion_verdicts()["8"]


def test_detects_a_missing_head_step(monkeypatch):
    monkeypatch.setattr(verify_module, "head_step", lambda m: None)
    report = verify(SMALL, workers=1)
    assert {r.name: r for r in report.results}["head-determinism"].failed > 0
    assert not report.criterion_verdicts()["3"]
