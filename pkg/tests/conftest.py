import dataclasses

import pytest

from volterra_spectral import BivariateKernel, PowerSeries, ProblemSpec


def make_spec(alpha=0.5, a=(1.0,), kernel=((1.0,),), f=(0.0,), T=1.0, **options):
    spec = ProblemSpec(alpha, PowerSeries(a), BivariateKernel(kernel), PowerSeries(f), T)
    if options:
        spec = dataclasses.replace(spec, options=dataclasses.replace(spec.options, **options))
    return spec


@pytest.fixture
def example_spec():
    """lam phi = int_0^t phi ds + phi(t/2) + 2."""
    return make_spec(f=(2.0,))


@pytest.fixture
def homogeneous_spec():
    """lam phi = int_0^t phi ds + phi(t/2)."""
    return make_spec()


@pytest.fixture
def functional_spec():
    """x(t) = x(t/2) + 2."""
    return make_spec(kernel=(), f=(2.0,))


# acceptance reporting: one line per criterion in the terminal summary

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _criteria[marker.args[0]] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(f"[{_criteria[label]}] {label}")
