import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from kanon import Instance, _kernel, _search_py

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=["default", "python"])
def backend(request, monkeypatch):
    """Run a test on the selected kernel and again on the pure-Python one."""
    if request.param == "python":
        monkeypatch.setattr(_kernel, "best_partition", _search_py.best_partition)
    return request.param


@pytest.fixture
def report_criterion():
    def record(number: int, name: str, passed: bool, detail: str = ""):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] criterion {number}: {name}" + (f" ({detail})" if detail else ""))
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def instances(draw, max_n=4, max_m=6, max_value=9):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    k = draw(st.integers(1, m))
    values = draw(st.lists(st.lists(st.integers(0, max_value), min_size=m, max_size=m), min_size=n, max_size=n))
    return Instance(n=n, m=m, k=k, values=values)


@st.composite
def instance_and_partition(draw, **kw):
    inst = draw(instances(**kw))
    labels = draw(st.lists(st.integers(0, inst.m - 1), min_size=inst.m, max_size=inst.m))
    from kanon.model import SignalingScheme

    return inst, SignalingScheme.from_labels(labels)


def as_lists(inst):
    return np.asarray(inst.values).tolist()
