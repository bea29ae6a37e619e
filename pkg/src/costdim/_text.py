"""Shared helpers for the package's text file formats.

Floats are written with 17 significant digits so every value round-trips
bit-exactly; parse failures raise FileFormatError naming file, line, and
column (all 1-based).
"""

from __future__ import annotations

from .errors import FileFormatError


def fmt(value: float) -> str:
    return format(float(value), ".17g")


def parse_float(token: str, path, line: int, col: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise FileFormatError(
            f"{path}:{line}:{col}: expected a number, got {token.strip()!r}"
        ) from None


def parse_int(token: str, path, line: int, col: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise FileFormatError(
            f"{path}:{line}:{col}: expected an integer, got {token.strip()!r}"
        ) from None


def is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def read_csv_rows(path) -> list[tuple[int, list[str]]]:
    """Comma-split, whitespace-stripped rows with 1-based line numbers.

    Blank lines are skipped so trailing newlines are harmless.
    """
    rows = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            stripped = raw.strip()
            if not stripped:
                continue
            rows.append((lineno, [tok.strip() for tok in stripped.split(",")]))
    return rows
