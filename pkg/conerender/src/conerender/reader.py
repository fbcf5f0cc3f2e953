"""Ingestion of the simulator's CSV + manifest file pair.

Expected layout, as written by the `cherenkov` CLI: a first line
``#scenario=<hash> manifest=<file>``, a header row, then data rows.
Empty cells mean "this row carries no value here" and parse to NaN.
"""

import csv
import json
import os
import re
from dataclasses import dataclass

import numpy as np

_HEAD_RE = re.compile(r"#scenario=([0-9a-f]+) manifest=(\S+)$")


class RenderError(ValueError):
    """Malformed or inconsistent input; the CLI maps this to exit code 2."""


@dataclass
class Table:
    scenario_hash: str
    manifest_name: str
    header: list
    rows: list  # raw string cells, one list per data row


def read_table(path):
    with open(path, newline="") as fh:
        first = fh.readline().rstrip("\n")
        m = _HEAD_RE.match(first)
        if m is None:
            raise RenderError(
                "%s: first line is not '#scenario=<hash> manifest=<file>'"
                % path)
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header:
            raise RenderError("%s: missing header row" % path)
        rows = [row for row in reader if row]
    return Table(scenario_hash=m.group(1), manifest_name=m.group(2),
                 header=header, rows=rows)


def load_manifest(csv_path, table):
    """The run manifest referenced by the CSV's first line; must sit next
    to the CSV and agree on the scenario hash."""
    path = os.path.join(os.path.dirname(os.path.abspath(csv_path)),
                        table.manifest_name)
    if not os.path.isfile(path):
        raise RenderError("manifest %s not found next to %s"
                          % (table.manifest_name, csv_path))
    with open(path) as fh:
        manifest = json.load(fh)
    if manifest.get("scenario_hash") != table.scenario_hash:
        raise RenderError(
            "manifest %s does not match the CSV scenario hash"
            % table.manifest_name)
    return manifest


def column(table, name):
    if name not in table.header:
        raise RenderError("column %r not in table (have: %s)"
                          % (name, ", ".join(table.header)))
    idx = table.header.index(name)
    return [row[idx] for row in table.rows]


def numeric(cells):
    out = np.empty(len(cells))
    for i, cell in enumerate(cells):
        try:
            out[i] = float(cell) if cell != "" else np.nan
        except ValueError as exc:
            raise RenderError("non-numeric cell %r" % cell) from exc
    return out


def map_grid(table):
    """Rectangular x-major intensity map -> (x_perp, z, values, mask).

    values and mask have shape (x_perp.size, z.size); anything that is not
    exactly the product grid in x-major order is rejected.
    """
    xs = numeric(column(table, "x_perp"))
    zs = numeric(column(table, "z"))
    x = np.unique(xs)
    z = np.unique(zs)
    if len(table.rows) != x.size * z.size:
        raise RenderError(
            "non-rectangular grid: %d rows, expected %d x %d"
            % (len(table.rows), x.size, z.size))
    shape = (x.size, z.size)
    if not (np.array_equal(xs.reshape(shape), np.broadcast_to(x[:, None], shape))
            and np.array_equal(zs.reshape(shape), np.broadcast_to(z, shape))):
        raise RenderError("non-rectangular grid: rows are not the x-major "
                          "product of the two axes")
    values = numeric(column(table, "intensity")).reshape(shape)
    mask = numeric(column(table, "masked")).reshape(shape).astype(bool)
    return x, z, values, mask
