import pytest

from treentropy.gen import corpus, generate

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def corpus_graphs():
    """The default verification corpus: 200 simple + 50 multigraphs, seed 42."""
    return [(spec.label(), generate(spec)) for spec in corpus()]


@pytest.fixture
def acceptance_line():
    def record(name: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
