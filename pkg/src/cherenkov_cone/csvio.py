"""Deterministic CSV output.

Every file starts with a comment line referencing the scenario hash and
the manifest that produced it, then a header row. Cells are written with
shortest round-trip float formatting so reruns are byte-identical.
"""

import csv

from .scenario import fmt


def write_csv(path, scenario_hash, manifest_name, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write("#scenario=%s manifest=%s\n" % (scenario_hash, manifest_name))
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(cell) for cell in row])


def read_csv(path):
    """Return (scenario_hash, manifest_name, header, rows-as-strings)."""
    with open(path, "r", newline="") as fh:
        first = fh.readline().strip()
        meta = {}
        if first.startswith("#"):
            for tok in first[1:].split():
                if "=" in tok:
                    key, val = tok.split("=", 1)
                    meta[key] = val
        reader = csv.reader(fh)
        header = next(reader)
        rows = [row for row in reader]
    return meta.get("scenario", ""), meta.get("manifest", ""), header, rows
