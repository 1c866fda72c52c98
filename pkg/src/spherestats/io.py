"""CSV ingestion and deterministic JSON result documents.

CSV files are comma separated UTF-8 with one header row.  ``cartesian``
files have columns ``x1, ..., xq``.  ``polar`` files have either
``theta_deg`` (q = 2), ``dec, inc`` (geological declination/inclination,
q = 3) or ``lon, lat`` (q = 3).  Row numbers in error messages are file
line numbers, so the first data row is row 2.
"""

import csv
import json
import math

import numpy as np

from . import __version__
from .errors import DataError, DimensionMismatch, NormTolerance, ParseError
from .geometry import (
    INGEST_NORM_TOL,
    PolarRecord,
    cartesian_to_polar,
    polar_to_cartesian,
)
from .samples import AxisSample, DirectionSample

POLAR_HEADERS = {
    ("theta_deg",): "angle-2d",
    ("dec", "inc"): "declination-inclination-3d",
    ("lon", "lat"): "lonlat-3d",
}


def _parse_float(text, row, column):
    try:
        v = float(text)
    except ValueError:
        raise ParseError(row, column, f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise ParseError(row, column, f"non-finite value {text!r}")
    return v


def read_points(path, fmt="cartesian"):
    """Parse a CSV file into an ``(n, q)`` array of unit vectors."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ParseError(1, None, "empty file") from None
        if fmt == "cartesian":
            expected = [f"x{i}" for i in range(1, len(header) + 1)]
            if header != expected or len(header) < 2:
                raise ParseError(1, None, f"cartesian header must be x1..xq, got {header}")
            convention = None
        elif fmt == "polar":
            convention = POLAR_HEADERS.get(tuple(header))
            if convention is None:
                raise ParseError(1, None, f"polar header must be one of {list(POLAR_HEADERS)}")
        else:
            raise DataError(f"unknown format {fmt!r}")

        rows = []
        for line_no, record in enumerate(reader, start=2):
            if not record or all(not c.strip() for c in record):
                continue
            if len(record) != len(header):
                raise ParseError(line_no, None, f"expected {len(header)} fields, got {len(record)}")
            values = [_parse_float(c, line_no, h) for c, h in zip(record, header)]
            if convention is None:
                v = np.array(values)
                norm = float(np.linalg.norm(v))
                if not abs(norm - 1.0) <= INGEST_NORM_TOL:
                    raise NormTolerance(line_no, norm)
                v = v / norm
            else:
                try:
                    v = polar_to_cartesian(PolarRecord(convention, tuple(values)))
                except DataError as exc:
                    raise ParseError(line_no, None, str(exc)) from None
            rows.append(v)
    if not rows:
        raise ParseError(2, None, "no data rows")
    return np.array(rows)


def ingest(path, fmt="cartesian", kind="direction"):
    """Read a data file as a :class:`DirectionSample` or :class:`AxisSample`."""
    X = read_points(path, fmt)
    if kind == "direction":
        return DirectionSample(X)
    if kind == "axis":
        return AxisSample(X)
    raise DataError(f"kind must be 'direction' or 'axis', got {kind!r}")


def write_cartesian_csv(sample, path):
    """Write rows at full (round-trip) precision."""
    X = np.asarray(sample, dtype=float)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{i}" for i in range(1, X.shape[1] + 1)])
        for row in X:
            w.writerow([repr(float(v)) for v in row])


def default_convention(q):
    if q == 2:
        return "angle-2d"
    if q == 3:
        return "declination-inclination-3d"
    return None


def vector_report(v):
    """Cartesian coordinates at full precision plus polar angles to 4 decimals."""
    v = np.asarray(v, dtype=float)
    out = {"cartesian": [float(x) for x in v]}
    convention = default_convention(v.size)
    if convention is not None:
        rec = cartesian_to_polar(v, convention)
        names = ("theta_deg",) if convention == "angle-2d" else ("dec", "inc")
        out["polar"] = {"convention": convention}
        out["polar"].update({k: round(a, 4) for k, a in zip(names, rec.angles)})
    return out


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return None
        return v
    return obj


def result_document(command, digest, body, seed=None):
    """Assemble the report in a fixed key order."""
    doc = {"tool": "spherestats", "version": __version__, "command": command}
    if seed is not None:
        doc["seed"] = int(seed)
    doc["input"] = digest
    doc.update(body)
    return doc


def dumps(doc):
    """Serialize deterministically: insertion key order, shortest float repr."""
    return json.dumps(_clean(doc), indent=2, allow_nan=False) + "\n"


def sample_digest(sample, kind):
    X = np.asarray(sample)
    if X.ndim != 2:
        raise DimensionMismatch("expected an (n, q) sample")
    return {"n": int(X.shape[0]), "q": int(X.shape[1]), "kind": kind}
