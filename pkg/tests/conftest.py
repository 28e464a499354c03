import pytest
from hypothesis import HealthCheck, settings

from fdrepair.fds import parse_fds
from fdrepair.relation import VInstance

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

D4_ROWS = [
    ("1", "1", "1", "1"),
    ("1", "2", "1", "2"),
    ("2", "2", "1", "1"),
    ("2", "1", "2", "2"),
]


@pytest.fixture
def d4():
    """Four tuples whose violating pairs have difference sets BD, AD and BCD."""
    inst = VInstance.from_rows("ABCD", D4_ROWS)
    return inst, parse_fds("A -> B\nC -> D\n", inst.schema)


@pytest.fixture
def d4_files(tmp_path, d4):
    data = tmp_path / "d4.csv"
    data.write_text("A,B,C,D\n" + "".join(",".join(r) + "\n" for r in D4_ROWS))
    fds = tmp_path / "d4_fds.txt"
    fds.write_text("A -> B\nC -> D\n")
    return data, fds


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(acceptance_log.LINES):
            terminalreporter.write_line(acceptance_log.LINES[number])
