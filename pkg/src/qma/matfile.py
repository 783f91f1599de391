"""Text format for arity-2 matrices with Q(q) entries.

::

    dim 2 arity 2
    # row word (a b), column word (c d), coefficient
    0 0 0 0 q
    0 1 1 0 1
    0 1 0 1 q - q^-1

Indices are 0-based, the first slot is most significant, omitted entries
are zero.  Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Union

from .qfield import ParseError, parse_qrat
from .tensorspace import SparseOp

_HEADER = re.compile(r"^dim\s+(\d+)\s+arity\s+(\d+)$")


class InputError(ValueError):
    pass


def parse_matrix(text: str, source: str = "<string>") -> SparseOp:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise InputError(f"{source}: empty matrix file")
    lineno, header = lines[0]
    m = _HEADER.match(header)
    if not m:
        raise InputError(f"{source}:{lineno}: expected header 'dim N arity 2', got {header!r}")
    dim, arity = int(m.group(1)), int(m.group(2))
    if arity != 2:
        raise InputError(f"{source}:{lineno}: only arity 2 matrices are supported")
    if dim < 2:
        raise InputError(f"{source}:{lineno}: dim must be >= 2")
    entries = {}
    for lineno, line in lines[1:]:
        parts = line.split(None, 4)
        if len(parts) < 5:
            raise InputError(f"{source}:{lineno}: expected 'a b c d <coeff>'")
        try:
            a, b, c, d = (int(x) for x in parts[:4])
        except ValueError:
            raise InputError(f"{source}:{lineno}: indices must be integers") from None
        if not all(0 <= x < dim for x in (a, b, c, d)):
            raise InputError(f"{source}:{lineno}: index out of range for dim {dim}")
        key = ((a, b), (c, d))
        if key in entries:
            raise InputError(f"{source}:{lineno}: duplicate entry {a} {b} {c} {d}")
        try:
            entries[key] = parse_qrat(parts[4])
        except (ParseError, ZeroDivisionError) as exc:
            raise InputError(f"{source}:{lineno}: {exc}") from None
    return SparseOp.from_entries(dim, 2, entries)


def read_matrix(path: Union[str, Path]) -> SparseOp:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return parse_matrix(text, str(path))


def format_matrix(op: SparseOp) -> str:
    out = [f"dim {op.dim} arity {op.arity}"]
    for (rw, cw), v in op.entries.items():
        out.append(" ".join(str(x) for x in rw + cw) + f" {v}")
    return "\n".join(out) + "\n"


def write_matrix(op: SparseOp, path: Union[str, Path]) -> None:
    Path(path).write_text(format_matrix(op))
