"""
File outputs: GridFunction text/CSV format, JSON and CSV reports.

GridFunction text format (UTF-8, '\\n' line ends):

    # hql-gridfunction v1
    <n> <m> <repr(L)>
    <repr(value)>            one line per node, row-major, last axis fastest

Axis 0 is x₁; node (i₁, …, i_n) sits at x_k = −L + i_k·2L/(m−1).
Only centered grids [−L, L]ⁿ can be written.
"""

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, List

import numpy as np

from models.errors import DomainError
from models.grid import Grid, GridFunction

GRIDFUNCTION_MAGIC = "# hql-gridfunction v1"


def atomic_write(path: str, text: str) -> str:
    """Write via a temporary file in the target directory, then rename"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(target.parent), prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, 'w', newline='') as f:
            f.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    return str(target)


def write_json(path: str, data: dict) -> str:
    return atomic_write(path, json.dumps(data, indent=2, sort_keys=True) + "\n")


def write_csv(path: str, header: List[str], rows: Iterable[List[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return atomic_write(path, buffer.getvalue())


def format_gridfunction(u: GridFunction) -> str:
    grid = u.grid
    if not grid.is_centered:
        raise DomainError("only centered grids [-L, L]^n can be serialized")
    lines = [GRIDFUNCTION_MAGIC, f"{grid.n} {grid.m} {grid.half_width!r}"]
    lines.extend(repr(float(v)) for v in u.values.reshape(-1))
    return "\n".join(lines) + "\n"


def parse_gridfunction(text: str) -> GridFunction:
    lines = text.splitlines()
    if len(lines) < 2 or lines[0].strip() != GRIDFUNCTION_MAGIC:
        raise DomainError("not an hql-gridfunction v1 file")
    try:
        n_str, m_str, L_str = lines[1].split()
        n, m, L = int(n_str), int(m_str), float(L_str)
        values = np.array([float(v) for v in lines[2:] if v.strip()])
    except ValueError as e:
        raise DomainError(f"malformed gridfunction file: {e}") from None
    return GridFunction(Grid.centered(n, m, L), values)


def write_gridfunction(path: str, u: GridFunction) -> str:
    return atomic_write(path, format_gridfunction(u))


def read_gridfunction(path: str) -> GridFunction:
    return parse_gridfunction(Path(path).read_text())


def write_gridfunction_csv(path: str, u: GridFunction) -> str:
    """Columns x1..xn,value in row-major node order"""
    n = u.n
    points = u.grid.points().reshape(-1, n)
    values = u.values.reshape(-1)
    header = [f"x{i + 1}" for i in range(n)] + ["value"]
    rows = ([repr(float(c)) for c in p] + [repr(float(v))] for p, v in zip(points, values))
    return write_csv(path, header, rows)
