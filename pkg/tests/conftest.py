import pytest
from hypothesis import strategies as st

from pentoia.core import COLORS, POSITIONS, SHAPES, SymbolicPiece
from pentoia.sampling import ASSIGNMENT_STREAM, assign_holdouts, derive_rng

pieces = st.builds(
    SymbolicPiece,
    st.sampled_from(list(COLORS)),
    st.sampled_from(list(SHAPES)),
    st.sampled_from(list(POSITIONS)),
)


@pytest.fixture(scope="session")
def assignment():
    return assign_holdouts(derive_rng(1, ASSIGNMENT_STREAM))


@pytest.fixture(scope="session")
def naive_dataset(assignment):
    from pentoia.sampling import GenerationConfig, build_naive_dataset

    return build_naive_dataset(GenerationConfig(seed=1, boards=1000), assignment)


@pytest.fixture(scope="session")
def didact_dataset(assignment):
    from pentoia.sampling import GenerationConfig, build_didact_dataset

    return build_didact_dataset(GenerationConfig(seed=1, boards=4200), assignment)


@pytest.fixture(scope="session")
def holdout_sets(assignment):
    from pentoia.sampling import build_holdout_sets

    return build_holdout_sets(assignment, seed=1)


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in sorted(_ACCEPTANCE.items()):
        name = nodeid.split("::")[-1]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
