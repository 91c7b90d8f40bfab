from collections.abc import Iterable

import colored

from zr.experiment import RatioRow

DEFAULT_ROW_COLOR = "#303030"

BOLD = colored.style("bold")
UNDERLINE = colored.style("underline")
RESET = colored.style("reset")

MIN_COL_WIDTH = 10

COLUMNS = ("seed", "dataset", "pct", "mse_L", "mse_G", "mse_UB", "rho_G", "rho_R", "rho_UB", "error")


def _cell(row: RatioRow, column: str) -> str:
    value = getattr(row, column)
    if value is None:
        return "-"
    if isinstance(value, float) and column != "pct":
        return f"{value:.6g}"
    return str(value)


class TableFormatter:
    """Formats experiment rows for terminal output.

    Column widths are computed once per call from the cell contents.
    """

    def __init__(self, *, min_column_width: int = MIN_COL_WIDTH, alternate_row_color: str) -> None:
        self._min_column_width = min_column_width
        self._use_color = alternate_row_color != "no"
        self._alternate_row_style = colored.back(alternate_row_color) if self._use_color else ""

    def _column_width(self, values: Iterable[str]) -> int:
        width = max((len(value) for value in values), default=0)
        return max(width, self._min_column_width)

    def _compute_column_sizes(self, rows: list[RatioRow]) -> list[int]:
        return [self._column_width([column, *(_cell(r, column) for r in rows)]) for column in COLUMNS]

    def header(self, rows: list[RatioRow]) -> str | None:
        """Return the formatted table header."""
        if not rows:
            return None

        widths = self._compute_column_sizes(rows)
        header = " ".join(column.ljust(width) for column, width in zip(COLUMNS, widths))
        return f"{UNDERLINE}{BOLD}{header}{RESET}" if self._use_color else header

    def rows(self, rows: list[RatioRow]) -> list[str]:
        if not rows:
            return []

        widths = self._compute_column_sizes(rows)
        lines: list[str] = []
        for index, row in enumerate(rows):
            line = " ".join(_cell(row, column).ljust(width) for column, width in zip(COLUMNS, widths))
            if self._use_color and index % 2 == 0:
                lines.append(f"{self._alternate_row_style}{line}{RESET}")
            else:
                lines.append(line)
        return lines


def print_rows(rows: list[RatioRow], alternate_row_color: str = DEFAULT_ROW_COLOR) -> None:
    """Print stored experiment rows as a table with alternating row colors."""
    if not rows:
        return

    formatter = TableFormatter(alternate_row_color=alternate_row_color)

    header = formatter.header(rows)
    if header:
        print(header)
        print()

    for line in formatter.rows(rows):
        print(line)
