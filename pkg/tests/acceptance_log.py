"""Collects acceptance verdict lines for the pytest terminal summary."""

LINES: dict[int, str] = {}


def record(number: int, line: str) -> None:
    LINES[number] = line
