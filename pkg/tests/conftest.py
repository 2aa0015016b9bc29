import pytest

from bigjump.dist import TailModel, Variant

ACCEPTANCE_LINES = []


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def cauchy_like():
    return TailModel(1.0, 1.0, Variant.PURE)


@pytest.fixture(params=[Variant.PURE, Variant.SMOOTH], ids=lambda v: v.value)
def variant(request):
    return request.param
