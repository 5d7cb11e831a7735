"""Acceptance run: every criterion on the default universe.

Each criterion prints one ``criterion N: PASS`` or ``criterion N: FAIL`` line.
The run fans out over all CPUs; expect several minutes on a multi-core
machine and most of an hour on a single core.

Also runnable directly: ``python3 tests/test_acceptance.py``.
"""

import os
import sys

import pytest

from patstd.oracle import DEFAULT_UNIVERSE
from patstd.verify import CRITERIA, verify


def _run():
    progress = None
    if os.environ.get("ACCEPTANCE_PROGRESS"):
        def progress(done):
            print(f"\r  {done} terms checked", end="", file=sys.stderr, flush=True)

    return verify(DEFAULT_UNIVERSE, progress=progress)


def _line(report, key: str) -> str:
    ok = report.criterion_verdicts()[key]
    return f"criterion {key}: {'PASS' if ok else 'FAIL'}  {CRITERIA[key]}"


@pytest.fixture(scope="module")
def report():
    return _run()


@pytest.mark.parametrize("key", list(CRITERIA))
def test_criterion(report, key, capsys):
    line = _line(report, key)
    with capsys.disabled():
        print("\n" + line)
        if key == list(CRITERIA)[-1]:
            print(f"({report.terms} terms, {report.seconds:.0f}s on {report.workers} worker(s))")
    failing = [r for r in report.results if r.criterion == key and not r.passed]
    assert not failing, "\n".join(f"{r.name}: {r.failed}/{r.checked} failed, e.g. {r.examples}" for r in failing)


if __name__ == "__main__":
    rep = _run()
    for k in CRITERIA:
        print(_line(rep, k))
    print(rep.table())
    sys.exit(0 if all(rep.criterion_verdicts().values()) else 1)
