import numpy as np
import pytest

from ckn_channel import RngStream

_ACCEPTANCE = []


def record_criterion(number, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {detail}"
    _ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture
def gen():
    return RngStream(20240611).generator()


def random_geometry(gen, canonical=False):
    from ckn_channel import ScatteringGeometry

    ta, pa = gen.uniform(0, np.pi), gen.uniform(0, 2 * np.pi)
    if canonical:
        return ScatteringGeometry.canonical(ta, pa)
    return ScatteringGeometry(gen.uniform(0, np.pi), gen.uniform(0, 2 * np.pi), ta, pa)
