import pytest

from sp4hecke import GL2, SL2xGL1, HeckeAlgebra, make_character


@pytest.fixture(scope="session")
def algebra():
    """Session cache of strong Hecke algebras keyed by (case, p, mu)."""
    cache = {}

    def get(case=SL2xGL1, p=3, mu="trivial"):
        key = (case, p, mu)
        if key not in cache:
            cache[key] = HeckeAlgebra(make_character(case, p, mu))
        return cache[key]

    return get


@pytest.fixture(params=[SL2xGL1, GL2])
def case(request):
    return request.param


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_lines(request):
    """Lines printed again in the terminal summary, one per criterion."""
    return request.config.stash.setdefault(ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
