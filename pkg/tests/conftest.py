import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from dirprod import Family, ProductSpace  # noqa: E402
from oracles import all_edges  # noqa: E402

_verdicts: list[tuple[str, bool, str]] = []


@pytest.fixture
def record_criterion():
    """Collect one PASS/FAIL line per acceptance criterion for the summary."""
    def record(name: str, ok: bool, detail: str = "") -> None:
        _verdicts.append((name, ok, detail))
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
    return record


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _verdicts:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())


@st.composite
def spaces(draw, max_parts=2, max_n=5, max_k=2, max_vertices=10):
    ell = draw(st.integers(1, max_parts))
    parts = []
    for _ in range(ell):
        n = draw(st.integers(1, max_n))
        parts.append((n, draw(st.integers(1, min(n, max_k)))))
    space = ProductSpace(tuple(parts))
    if space.N > max_vertices:
        space = ProductSpace(tuple(parts[:1]))
    return space


@st.composite
def families(draw, max_edges=12, **space_kw):
    space = draw(spaces(**space_kw))
    edges = all_edges(space)
    picked = draw(st.lists(st.sampled_from(edges), max_size=max_edges, unique=True))
    return Family(space, frozenset(picked))
