import contextlib
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"

_ACCEPTANCE: list[tuple[str, str, str]] = []


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def criterion():
    """Record one acceptance line: ``with criterion("C1 ..."): <asserts>``."""

    @contextlib.contextmanager
    def _record(name, detail=""):
        try:
            yield
        except BaseException as exc:
            _ACCEPTANCE.append(("FAIL", name, f"{type(exc).__name__}: {exc}".splitlines()[0]))
            raise
        _ACCEPTANCE.append(("PASS", name, detail))

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, detail in _ACCEPTANCE:
        line = f"[{status}] {name}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
