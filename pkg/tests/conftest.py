import pytest
from hypothesis import HealthCheck, settings

from kvcalc.necklace import SurfaceAlgebra
from kvcalc.series import Alphabet, TensorSeries

settings.register_profile(
    "default", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def xy():
    """Two letters of weight 1 and their monomials at cutoff 6."""
    A = Alphabet.generic(2)
    return A, TensorSeries.letter(A, "b1", 6), TensorSeries.letter(A, "b2", 6)


@pytest.fixture(params=[(1, 0), (0, 2), (1, 1)], ids=lambda p: f"g{p[0]}n{p[1]}")
def surface(request):
    return SurfaceAlgebra(*request.param)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
