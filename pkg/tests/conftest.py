import pytest

from hornscan import (
    BeamSpec,
    DesignParams,
    DriveSpec,
    GridSpec,
    MaterialSpec,
    build_domain_pattern,
    index_contrast,
    integrate_trajectory,
)
from hornscan.bpm import simulate_scan

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def material():
    return MaterialSpec()


@pytest.fixture(scope="session")
def beam():
    return BeamSpec()


@pytest.fixture(scope="session")
def params():
    return DesignParams()


@pytest.fixture(scope="session")
def paper_dn(material):
    return index_contrast(material, DriveSpec(1e3, 150e-6))


@pytest.fixture(scope="session")
def paper_profile(params, paper_dn, material, beam):
    return integrate_trajectory(params, paper_dn, material, beam, mode="selfconsistent")


@pytest.fixture(scope="session")
def paper_pattern(paper_profile, params):
    return build_domain_pattern(paper_profile, params.n_interfaces)


@pytest.fixture(scope="session")
def paper_scan(paper_pattern, material, beam):
    """An 11-voltage sweep over +/-1 kV on the default grid, paper voltages included."""
    import time

    voltages = sorted({0.0} | {s * v for v in (200.0, 400.0, 500.0, 800.0, 1000.0) for s in (-1, 1)})
    t0 = time.perf_counter()
    res = simulate_scan(paper_pattern, material, beam, voltages, 150e-6, GridSpec())
    elapsed = time.perf_counter() - t0
    return [r for r, _ in res], elapsed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
