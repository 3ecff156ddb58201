"""File formats: CSV matrices and frames, JSON sidecars, atomic writes.

Data files are plain comma-separated numbers with no header so any tool can
read them; metadata goes in JSON sidecars.  All writers go through a
temp-file-then-rename step so a failure never leaves a partial output.
"""

import json
import os

import numpy as np

from .metrics import BENCH_FIELDS
from .sensing import SparseBinaryMatrix


def _atomic(path, write_fn):
    tmp = f"{path}.tmp"
    try:
        write_fn(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def save_matrix_csv(matrix, path):
    """Write a measurement matrix as 0/1 integers, row-major, no header."""
    _atomic(path, lambda tmp: np.savetxt(tmp, matrix.entries, fmt="%d", delimiter=","))


def load_matrix_csv(path):
    """Read a measurement matrix CSV; invariants are re-checked on load."""
    entries = np.loadtxt(path, delimiter=",", ndmin=2)
    return SparseBinaryMatrix(
        rows=entries.shape[0], cols=entries.shape[1], entries=entries
    )


def save_frame_csv(data, path):
    """Write a real-valued frame, full float64 precision, no header."""
    data = np.atleast_2d(np.asarray(data, float))
    _atomic(path, lambda tmp: np.savetxt(tmp, data, fmt="%.17g", delimiter=","))


def load_frame_csv(path):
    return np.loadtxt(path, delimiter=",", ndmin=2)


def save_json(obj, path):
    def write(tmp):
        with open(tmp, "w") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True)
            fh.write("\n")

    _atomic(path, write)


def save_bench_csv(records, path):
    """Write benchmark records with the fixed header."""

    def write(tmp):
        with open(tmp, "w") as fh:
            fh.write(",".join(BENCH_FIELDS) + "\n")
            for rec in records:
                fh.write(
                    ",".join(repr(getattr(rec, name)) for name in BENCH_FIELDS) + "\n"
                )

    _atomic(path, write)


def save_long_csv(rows, path):
    """Write plot-ready long-format rows (sweep, x, metric, value)."""

    def write(tmp):
        with open(tmp, "w") as fh:
            fh.write("sweep,x,metric,value\n")
            for sweep, x, metric, value in rows:
                fh.write(f"{sweep},{x!r},{metric},{value!r}\n")

    _atomic(path, write)
