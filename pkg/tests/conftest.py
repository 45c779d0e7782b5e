import pytest
from hypothesis import settings

from travwave import _kernels_py, profile, quad

try:
    from travwave import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

# property suites are derandomized so every run sees the same examples
settings.register_profile("repro", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("repro")

BACKENDS = ["python"] + (["cython"] if _kernels_c is not None else [])

# criterion number -> (passed, detail), filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    mod = _kernels_c if request.param == "cython" else _kernels_py
    monkeypatch.setattr(quad, "kernels", mod)
    monkeypatch.setattr(profile, "kernels", mod)
    return request.param


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
