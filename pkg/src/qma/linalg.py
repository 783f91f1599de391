"""Sparse exact Gaussian elimination over an arbitrary field.

Rows are ``dict[int, value]`` mapping column to a nonzero field element.
Values only need ``+ - * /`` and truthiness, so the same code runs over
Q(q) (:class:`qma.qfield.QRat`) and over the rationals (``Fraction``).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

Row = Dict[int, object]


def inv(x):
    """Multiplicative inverse that never falls back to float division."""
    if type(x) is int:
        return x if x in (1, -1) else Fraction(1, x)
    return 1 / x


def axpy(target: Row, factor, row: Row) -> None:
    """In place ``target -= factor * row``; zero entries are removed."""
    for c, v in row.items():
        t = target.get(c)
        if t is None:
            target[c] = -(factor * v)
        else:
            t = t - factor * v
            if t:
                target[c] = t
            else:
                del target[c]


class Echelon:
    """Incrementally built row-echelon basis.

    Each stored row is normalized so that its smallest column (the pivot)
    carries the value 1.  Rows are not inter-reduced; reduction proceeds by
    repeatedly eliminating the smallest remaining column, which is enough to
    obtain a unique normal form.
    """

    def __init__(self):
        self.pivots: Dict[int, Row] = {}

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: Row) -> Row:
        """Return the normal form of ``vec`` (its support avoids all pivots)."""
        v = dict(vec)
        rest: Row = {}
        pivots = self.pivots
        while v:
            c = min(v)
            x = v.pop(c)
            row = pivots.get(c)
            if row is None:
                rest[c] = x
                continue
            for cc, w in row.items():
                if cc == c:
                    continue
                t = v.get(cc)
                if t is None:
                    v[cc] = -(x * w)
                else:
                    t = t - x * w
                    if t:
                        v[cc] = t
                    else:
                        del v[cc]
        return rest

    def add(self, vec: Row) -> bool:
        """Insert ``vec``; returns True if it enlarged the span."""
        v = dict(vec)
        pivots = self.pivots
        while v:
            c = min(v)
            row = pivots.get(c)
            if row is None:
                x = v[c]
                r = inv(x)
                self.pivots[c] = {cc: (w * r if cc != c else 1) for cc, w in v.items()}
                return True
            axpy(v, v[c], row)
        return False

    def extend(self, rows: Iterable[Row]) -> int:
        return sum(1 for r in rows if self.add(r))

    def contains(self, vec: Row) -> bool:
        return not self.reduce(vec)

    def rows(self) -> List[Tuple[int, Row]]:
        return sorted(self.pivots.items())


def rank(rows: Iterable[Row]) -> int:
    e = Echelon()
    e.extend(rows)
    return e.rank


def solve_square(matrix: Dict[int, Row], size: int, rhs: Dict[int, Row]) -> Optional[Dict[int, Row]]:
    """Solve ``matrix @ X = rhs`` for square ``matrix`` given by rows.

    ``rhs`` is also given by rows (row index -> {col: value}).  Returns the
    rows of X or None if the matrix is singular.  Gauss-Jordan on the
    augmented system; rhs columns are offset past ``size``.
    """
    aug: List[Row] = []
    for r in range(size):
        row = dict(matrix.get(r, {}))
        for c, v in rhs.get(r, {}).items():
            row[size + c] = v
        aug.append(row)
    # forward elimination with the pivot in column j taken from the first usable row
    where: Dict[int, int] = {}
    used = [False] * size
    for j in range(size):
        p = None
        for r in range(size):
            if not used[r] and j in aug[r]:
                p = r
                break
        if p is None:
            return None
        used[p] = True
        where[j] = p
        s = inv(aug[p][j])
        aug[p] = {c: v * s for c, v in aug[p].items()}
        prow = aug[p]
        for r in range(size):
            if r != p and j in aug[r]:
                axpy(aug[r], aug[r][j], prow)
    out: Dict[int, Row] = {}
    for j in range(size):
        row = aug[where[j]]
        sol = {c - size: v for c, v in row.items() if c >= size}
        if sol:
            out[j] = sol
    return out
