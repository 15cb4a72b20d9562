import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from szymrel.census import run_census  # noqa: E402
from szymrel.relcore import Rel  # noqa: E402


def rel(text: str) -> Rel:
    rows = text.split("/")
    return Rel(len(rows), [sum(1 << j for j, c in enumerate(r) if c == "1") for r in rows])


R1 = rel("01010/10100/01000/00001/00010")
R3 = rel("0110/1001/0001/0010")
# the two 4x4 relations of the classifying-graph example
RA = rel("0111/1011/0001/0010")
RB = rel("0110/1001/0001/0010")


def hom(text: str):
    from szymrel.relcore import Hom

    rows = text.split("/")
    m = len(rows[0])
    return Hom(len(rows), m, [sum(1 << j for j, c in enumerate(r) if c == "1") for r in rows])


# explicit witnesses of the worked example
S_EXAMPLE = hom("1001/0110/1001/0010/0001")
T_EXAMPLE = hom("10101/01010/00010/00001")


def random_rel(rng: random.Random, n: int, density=None) -> Rel:
    if density is None:
        density = rng.choice((0.1, 0.2, 0.3, 0.5, 0.7))
    rows = []
    for _ in range(n):
        row = 0
        for j in range(n):
            if rng.random() < density:
                row |= 1 << j
        rows.append(row)
    return Rel(n, rows)


@pytest.fixture(scope="session")
def census5(tmp_path_factory):
    out = tmp_path_factory.mktemp("census") / "catalog5.tsv"
    t0 = time.perf_counter()
    report = run_census(5, workers=1, catalog_out=out, progress=None)
    return report, out, time.perf_counter() - t0


@pytest.fixture(scope="session")
def catalog2(tmp_path_factory):
    out = tmp_path_factory.mktemp("census") / "catalog2.tsv"
    report = run_census(2, workers=1, catalog_out=out, progress=None)
    return report, out


# -- acceptance summary ---------------------------------------------------

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    num, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        prev = _CRITERIA.get(num, (title, True))
        _CRITERIA[num] = (title, prev[1] and rep.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, ok = _CRITERIA[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {num}: {title}")
