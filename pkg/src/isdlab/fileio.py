"""Plain-text instance files and versioned CSV reports.

Instance file layout (one item per line, every line ends in a newline)::

    isd v1 <n> <k> <w>
    <row 0 of H>          n - k lines, each (n+3)//4 hex digits
    ...
    <syndrome>            (n-k+3)//4 hex digits
    <planted error>       optional, (n+3)//4 hex digits

Hex is lowercase.  Hex digit i holds coordinates 4i..4i+3 with coordinate
4i as its least significant bit, so a vector reads left to right in
coordinate order.  Parsing is strict so that serialising a parsed file
reproduces it byte for byte.
"""

import csv
import io
import math
import re

from .gf2 import BitMatrix, BitVector
from .instances import IsdInstance

INSTANCE_MAGIC = "isd v1"
TABLE_VERSION = "# isdlab-table v1"
SWEEP_VERSION = "# isdlab-sweep v1"
BENCH_VERSION = "# isdlab-lsf-bench v1"

TABLE_COLUMNS = ("model", "rate", "time", "space", "pi_p", "lam", "lambda_prime", "eps_rel",
                 "eps2_rel", "rho_r", "alpha", "beta", "gamma", "status", "certificate")
SWEEP_COLUMNS = ("model", "rate", "time", "space", "status")
BENCH_COLUMNS = ("dim", "alpha", "beta", "gamma", "filters", "list_size", "update_touched",
                 "query_touched", "mean_bucket_load", "recall", "oracle_pairs",
                 "empty_after_remove")

_HEADER = re.compile(r"isd v1 (0|[1-9][0-9]*) (0|[1-9][0-9]*) (0|[1-9][0-9]*)")
_HEX = re.compile(r"[0-9a-f]*")


class InstanceParseError(ValueError):
    """Malformed instance file."""


def format_instance(inst):
    lines = [f"{INSTANCE_MAGIC} {inst.n} {inst.k} {inst.w}"]
    lines += [BitVector(inst.n, r).to_hex() for r in inst.H.rows]
    lines.append(inst.s.to_hex())
    if inst.planted is not None:
        lines.append(inst.planted.to_hex())
    return "\n".join(lines) + "\n"


def _hex_line(line, length, what):
    if not _HEX.fullmatch(line):
        raise InstanceParseError(f"{what}: not lowercase hex: {line!r}")
    try:
        return BitVector.from_hex(line, length)
    except ValueError as exc:
        raise InstanceParseError(f"{what}: {exc}") from None


def parse_instance(text):
    """Inverse of ``format_instance``; raises ``InstanceParseError``."""
    if not text.endswith("\n"):
        raise InstanceParseError("file must end with a newline")
    lines = text[:-1].split("\n")
    m = _HEADER.fullmatch(lines[0])
    if not m:
        raise InstanceParseError(f"bad header {lines[0]!r}, expected 'isd v1 n k w'")
    n, k, w = (int(g) for g in m.groups())
    if not 0 < k < n:
        raise InstanceParseError(f"need 0 < k < n, got n={n}, k={k}")
    m_rows = n - k
    if len(lines) not in (m_rows + 2, m_rows + 3):
        raise InstanceParseError(f"expected {m_rows + 2} or {m_rows + 3} lines, got {len(lines)}")
    rows = [_hex_line(lines[1 + i], n, f"row {i}").value for i in range(m_rows)]
    s = _hex_line(lines[1 + m_rows], m_rows, "syndrome")
    planted = _hex_line(lines[2 + m_rows], n, "planted") if len(lines) == m_rows + 3 else None
    try:
        return IsdInstance(n, k, w, BitMatrix(tuple(rows), n), s, planted)
    except ValueError as exc:
        raise InstanceParseError(str(exc)) from None


def write_instance(inst, path):
    with open(path, "w", newline="\n") as fh:
        fh.write(format_instance(inst))


def read_instance(path):
    with open(path, newline="") as fh:
        return parse_instance(fh.read())


def fmt6(x):
    """Six-decimal float; non-finite values as 'inf', '-inf' or 'nan'."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.6f}"


def format_csv(version, columns, rows):
    """Version comment line, header, then rows (floats at six decimals)."""
    buf = io.StringIO()
    buf.write(version + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt6(row[c]) if isinstance(row[c], float) else row[c] for c in columns])
    return buf.getvalue()


def parse_csv(text, version):
    """Rows of a versioned CSV as dicts of strings."""
    lines = text.splitlines()
    if not lines or lines[0] != version:
        raise ValueError(f"missing version line {version!r}")
    body = [ln for ln in lines[1:] if not ln.startswith("#")]
    return list(csv.DictReader(body))
