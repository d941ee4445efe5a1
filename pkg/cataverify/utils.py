"""
General utility functions used across the package.
"""

from datetime import datetime, date


def datesToStrings(item: dict | tuple) -> dict | tuple:
    """
    Converts any ``datetime`` or ``date`` elements in the input ``tuple`` or
    ``dict`` to string representations.

    Used when bench history rows are printed or written to CSV.

    Args:
        item: A dict or tuple, of which some elements may be ``datetime`` or
            ``date`` objects.

    Returns:
        The same kind of container with those elements as
        ``"YYYY-MM-DD HH:MM:SS"`` or ``"YYYY-MM-DD"`` strings. Dicts are
        converted in place.
    """

    def convIfDate(v):
        if isinstance(v, datetime):
            return v.strftime("%Y-%m-%d %H:%M:%S")
        if isinstance(v, date):
            return v.strftime("%Y-%m-%d")

        return v

    if isinstance(item, tuple):
        return tuple(convIfDate(f) for f in item)

    for k, v in item.items():
        item[k] = convIfDate(v)

    return item


def fmtMs(ms: float, sep: str = " ") -> str:
    """
    Formats milliseconds as a whole number with a thousands separator, like
    ``27 790``. An empty ``sep`` gives plain digits, as used for CSV.
    """
    return f"{round(ms):,}".replace(",", sep)


def alignedTable(header: list[str], rows: list[list], right: set[int] = frozenset()) -> str:
    """
    Renders rows as a plain text table with aligned columns.

    Args:
        header: Column titles.
        rows: The rows, each with one value per column.
        right: Indexes of the columns to right align.

    Returns:
        The table, with a dashed line below the header.
    """
    cells = [[str(c) for c in header]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]

    def fmt(r):
        return "  ".join(
            c.rjust(w) if i in right else c.ljust(w)
            for i, (c, w) in enumerate(zip(r, widths))
        ).rstrip()

    lines = [fmt(cells[0]), "  ".join("-" * w for w in widths)]
    lines.extend(fmt(r) for r in cells[1:])
    return "\n".join(lines) + "\n"
