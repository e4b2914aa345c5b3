"""Writers for grid-shaped results (CSV and JSON).

Matrices are laid out with the lambda axis (dB) across the first row and the
gamma axis (dB) down the first column. Floats use the shortest representation
that parses back exactly. Non-finite values are written as the reserved
strings ``-inf``, ``inf`` and ``nan``; ``-inf`` in a dB surface marks a cell
whose linear cost is zero.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

CORNER = "gamma_db\\lambda_db"


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def jsonable(x):
    """Recursively convert numpy values; non-finite floats become reserved strings."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else fmt(x)
    return x


def dumps(doc) -> str:
    return json.dumps(jsonable(doc), indent=2, allow_nan=False) + "\n"


def matrix_csv(lambda_db, gamma_db, values) -> str:
    values = np.asarray(values)
    lines = [",".join([CORNER] + [fmt(v) for v in lambda_db])]
    for g, row in zip(gamma_db, values):
        lines.append(",".join([fmt(g)] + [fmt(v) for v in row.tolist()]))
    return "\n".join(lines) + "\n"


def read_matrix_csv(path):
    """Inverse of :func:`matrix_csv`: returns ``(lambda_db, gamma_db, values)``."""
    rows = [line.split(",") for line in Path(path).read_text(encoding="utf-8").splitlines() if line]
    lam = np.array([float(v) for v in rows[0][1:]])
    gam = np.array([float(r[0]) for r in rows[1:]])
    vals = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    return lam, gam, vals


def write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path
