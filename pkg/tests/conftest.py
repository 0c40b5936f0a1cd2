"""Run-wide certificate audit and acceptance-line reporting.

A :class:`lambekstar.ProofRecorder` is installed for the entire session:
every ``Proved`` result from any prover call in any test is re-checked by
the independent certificate checker and its free-group necessity condition
is verified.  The final autouse fixture teardown fails the run if a single
violation was recorded anywhere.
"""

from __future__ import annotations

import random

import pytest

from lambekstar import (ProofRecorder, disable_recording, enable_recording)

_RECORDER = ProofRecorder()
_CRITERION_LINES: list[str] = []


def record_criterion(number: int, passed: bool, detail: str) -> None:
    """Register one acceptance-criterion verdict for the summary block."""
    line = f"[criterion {number:2d}] {'PASS' if passed else 'FAIL'} — {detail}"
    _CRITERION_LINES.append(line)


def audit_recorder() -> ProofRecorder:
    return _RECORDER


def pytest_configure(config):
    enable_recording(_RECORDER)


def pytest_unconfigure(config):
    disable_recording()


@pytest.fixture(scope="session", autouse=True)
def _session_audit():
    yield
    assert not _RECORDER.violations, (
        f"certificate audit recorded {len(_RECORDER.violations)} violations: "
        f"{_RECORDER.violations[:3]}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    tr = terminalreporter
    if _CRITERION_LINES:
        tr.write_sep("=", "acceptance criteria")
        for line in sorted(_CRITERION_LINES):
            tr.write_line(line)
    tr.write_sep("=", "certificate audit")
    tr.write_line(
        f"proved={_RECORDER.proved} audited={_RECORDER.audited} "
        f"fg_checked={_RECORDER.fg_checked} "
        f"violations={len(_RECORDER.violations)}")


@pytest.fixture()
def rng() -> random.Random:
    """Deterministic per-test RNG."""
    return random.Random(0xC0FFEE)
