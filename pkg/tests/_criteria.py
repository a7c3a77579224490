"""Shared registry for acceptance-criterion result lines.

Tests record one line per criterion before asserting, so failed criteria
still show up in the summary block that conftest prints at the end.
"""

LINES: list[str] = []


def record(num: int, name: str, ok: bool, detail: str) -> str:
    line = f"CRITERION {num:02d} {'PASS' if ok else 'FAIL'} {name}: {detail}"
    LINES.append(line)
    return line
