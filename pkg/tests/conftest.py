import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from stickmaps.geometry import SphericalPolygon
from stickmaps.knot import hexagonal_trefoil, quadrilateral, random_knot, torus_knot_polygon

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE = []


def record(criterion: str, ok: bool, detail: str = ""):
    """Remember one acceptance line; printed in the terminal summary."""
    ACCEPTANCE.append((criterion, bool(ok), detail))
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {criterion}  {detail}")


@pytest.fixture(scope="session")
def Q():
    return quadrilateral()


@pytest.fixture(scope="session")
def hextrefoil():
    return hexagonal_trefoil()


@pytest.fixture(scope="session")
def torus23():
    return torus_knot_polygon(2, 3, 60)


@pytest.fixture(scope="session")
def fixtures(Q, hextrefoil, torus23):
    return {"Q": Q, "hextrefoil": hextrefoil, "torus23": torus23}


@pytest.fixture(scope="session")
def random_knots():
    rng = np.random.default_rng(2024)
    return [random_knot(int(rng.integers(6, 25)), seed) for seed in range(100)]


@pytest.fixture
def octant():
    return SphericalPolygon(np.eye(3))


def rotation(seed):
    """A seeded random rotation matrix (det +1)."""
    q, r = np.linalg.qr(np.random.default_rng(seed).normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    return q if np.linalg.det(q) > 0 else -q
