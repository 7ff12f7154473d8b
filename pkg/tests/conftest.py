"""Shared fixtures: field towers per prime and the acceptance report hook."""
from __future__ import annotations

import functools

import pytest
from hypothesis import HealthCheck, settings

from asailab.corpus import prime_fields

settings.register_profile(
    "asailab", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("asailab")


@functools.lru_cache(maxsize=None)
def fields_for(p: int):
    """F, its three quadratic extensions and the quadratic extensions of each (cached)."""
    return prime_fields(p)


@pytest.fixture(scope="session")
def q3():
    return fields_for(3)


@pytest.fixture(scope="session")
def q5():
    return fields_for(5)


@pytest.fixture(scope="session")
def q7():
    return fields_for(7)


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def acceptance_log(request):
    lines = request.config.acceptance_lines

    def log(line: str):
        lines.append(line)
        print(line)
    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
