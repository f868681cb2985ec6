"""Text formats for matrices.

Mueller file: four data lines of four whitespace-separated reals.
Jones / complex file: one line per row, entries written ``a+bi``, ``a-bi``,
``bi`` or plain reals, no spaces inside an entry.
Batch CSV: one matrix per row, 16 reals row-major, optionally preceded by an
id column. In every format blank lines and ``#`` comments are ignored.
"""
import re

import numpy as np

from .errors import InvalidInputError

_REAL = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL_RE = re.compile(rf"^[+-]?{_REAL}$")
_COMPLEX_RE = re.compile(
    rf"^(?P<re>[+-]?{_REAL})?(?:(?P<im>(?:^|[+-]){_REAL}|[+-]|^)i)?$")

FULL_PRECISION = 17
DEFAULT_PRECISION = 6


class ParseError(InvalidInputError):
    def __init__(self, message, lineno=None, source=None):
        self.lineno = lineno
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)


def parse_real(token):
    if not _REAL_RE.match(token):
        raise InvalidInputError(f"not a decimal real: {token!r}")
    return float(token)


def parse_complex(token):
    """Parse ``a``, ``a+bi``, ``a-bi``, ``bi``, ``+i``, ``-i``."""
    match = _COMPLEX_RE.match(token)
    if not token or match is None or (match["re"] is None and "i" not in token):
        raise InvalidInputError(f"not a complex entry: {token!r}")
    re_part = float(match["re"]) if match["re"] is not None else 0.0
    im_part = 0.0
    if token.endswith("i"):
        im = match["im"] or ""
        im_part = float(im + "1") if im in ("", "+", "-") else float(im)
    return complex(re_part, im_part)


def _data_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _parse_matrix(text, n, parse, source=None):
    rows = []
    for lineno, line in _data_lines(text):
        if len(rows) == n:
            raise ParseError(f"unexpected extra row (expected {n} rows)", lineno, source)
        tokens = line.split()
        if len(tokens) != n:
            raise ParseError(f"expected {n} entries, found {len(tokens)}", lineno, source)
        try:
            rows.append([parse(t) for t in tokens])
        except InvalidInputError as exc:
            raise ParseError(str(exc), lineno, source) from None
    if len(rows) != n:
        raise ParseError(f"expected {n} rows, found {len(rows)}", None, source)
    return rows


def parse_mueller(text, source=None):
    return np.array(_parse_matrix(text, 4, parse_real, source), dtype=float)


def parse_complex_matrix(text, n, source=None):
    return np.array(_parse_matrix(text, n, parse_complex, source), dtype=complex)


def parse_jones(text, source=None):
    return parse_complex_matrix(text, 2, source)


def parse_batch(text, source=None):
    """Parse a batch CSV.

    Returns
    -------
    (records, failures)
        ``records`` is a list of ``(id, 4x4 array)``; rows without an id
        column get their 1-based data-row number. ``failures`` is a list of
        :class:`ParseError` for rows that were skipped.
    """
    records = []
    failures = []
    for row_number, (lineno, line) in enumerate(_data_lines(text), start=1):
        fields = [f.strip() for f in line.split(",")]
        try:
            if len(fields) == 17:
                ident, values = fields[0], fields[1:]
                if not ident:
                    raise InvalidInputError("empty id field")
            elif len(fields) == 16:
                ident, values = str(row_number), fields
            else:
                raise InvalidInputError(f"expected 16 or 17 fields, found {len(fields)}")
            m = np.array([parse_real(v) for v in values], dtype=float).reshape(4, 4)
        except InvalidInputError as exc:
            failures.append(ParseError(str(exc), lineno, source))
            continue
        records.append((ident, m))
    return records, failures


def format_real(x, precision=DEFAULT_PRECISION):
    x = float(x) + 0.0  # drop negative zero
    return f"{x:.{precision}g}"


def format_complex(z, precision=DEFAULT_PRECISION):
    z = complex(z)
    re_part = format_real(z.real, precision)
    im_part = format_real(z.imag, precision)
    if not im_part.startswith("-"):
        im_part = "+" + im_part
    return f"{re_part}{im_part}i"


def format_real_matrix(m, precision=DEFAULT_PRECISION):
    return "".join(" ".join(format_real(x, precision) for x in row) + "\n"
                   for row in np.asarray(m, dtype=float))


def format_complex_matrix(m, precision=DEFAULT_PRECISION):
    return "".join(" ".join(format_complex(z, precision) for z in row) + "\n"
                   for row in np.asarray(m, dtype=complex))
